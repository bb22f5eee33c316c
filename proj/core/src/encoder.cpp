#include "srli/encoder.hpp"

#include <cmath>

namespace srli {

RolePosteriors encode(const PredicateInstance& inst, const EncoderParams& params) {
    const std::uint32_t n = static_cast<std::uint32_t>(inst.args.size());
    const std::uint32_t r = params.numRoles;
    RolePosteriors post(n, r);
    std::vector<double> logits(r);

    for (std::uint32_t i = 0; i < n; ++i) {
        std::fill(logits.begin(), logits.end(), 0.0);
        for (std::uint32_t f : inst.args[i].featureIds)
            for (std::uint32_t s = 0; s < r; ++s) logits[s] += params.at(s, f);

        double mx = logits[0];
        for (std::uint32_t s = 1; s < r; ++s) mx = std::max(mx, logits[s]);
        double z = 0.0;
        for (std::uint32_t s = 0; s < r; ++s) {
            double e = std::exp(logits[s] - mx);
            post.at(i, s) = e;
            z += e;
        }
        for (std::uint32_t s = 0; s < r; ++s) post.at(i, s) /= z;
    }
    return post;
}

EncoderGrad encoder_gradient(const PredicateInstance& inst, const RolePosteriors& mu,
                             const std::vector<double>& upstream) {
    const std::uint32_t n = mu.numArgs;
    const std::uint32_t r = mu.numRoles;
    EncoderGrad grad;
    std::vector<double> dz(r);

    for (std::uint32_t i = 0; i < n; ++i) {
        const double* up = upstream.data() + static_cast<std::size_t>(i) * r;
        double dot = 0.0;
        for (std::uint32_t s = 0; s < r; ++s) dot += up[s] * mu.at(i, s);
        bool any = false;
        for (std::uint32_t s = 0; s < r; ++s) {
            dz[s] = mu.at(i, s) * (up[s] - dot);
            any = any || dz[s] != 0.0;
        }
        if (!any) continue;
        for (std::uint32_t f : inst.args[i].featureIds) {
            auto [it, inserted] = grad.try_emplace(f, r, 0.0);
            for (std::uint32_t s = 0; s < r; ++s) it->second[s] += dz[s];
        }
    }
    return grad;
}

EncoderGrad encoder_gradient(const PredicateInstance& inst, const EncoderParams& params,
                             const std::vector<double>& upstream) {
    return encoder_gradient(inst, encode(inst, params), upstream);
}

std::vector<std::uint32_t> label(const PredicateInstance& inst, const EncoderParams& params) {
    RolePosteriors post = encode(inst, params);
    std::vector<std::uint32_t> roles(post.numArgs, 0);
    for (std::uint32_t i = 0; i < post.numArgs; ++i) {
        std::uint32_t best = 0;
        for (std::uint32_t s = 1; s < post.numRoles; ++s)
            if (post.at(i, s) > post.at(i, best)) best = s;
        roles[i] = best;
    }
    return roles;
}

} // namespace srli
