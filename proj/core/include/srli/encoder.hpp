#ifndef SRLI_ENCODER_HPP
#define SRLI_ENCODER_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "srli/corpus.hpp"

namespace srli {

// Weight matrix of the log-linear labeler, roles x features row-major.
struct EncoderParams {
    std::uint32_t numRoles = 0;
    std::uint32_t numFeatures = 0;
    std::vector<double> weights;

    EncoderParams() = default;
    EncoderParams(std::uint32_t roles, std::uint32_t features)
        : numRoles(roles), numFeatures(features),
          weights(static_cast<std::size_t>(roles) * features, 0.0) {}

    double& at(std::uint32_t role, std::uint32_t feature) {
        return weights[static_cast<std::size_t>(role) * numFeatures + feature];
    }
    double at(std::uint32_t role, std::uint32_t feature) const {
        return weights[static_cast<std::size_t>(role) * numFeatures + feature];
    }
};

// Per-argument role posteriors, N x R row-major; rows sum to 1.
struct RolePosteriors {
    std::uint32_t numArgs = 0;
    std::uint32_t numRoles = 0;
    std::vector<double> mu;

    RolePosteriors() = default;
    RolePosteriors(std::uint32_t args, std::uint32_t roles)
        : numArgs(args), numRoles(roles), mu(static_cast<std::size_t>(args) * roles, 0.0) {}

    std::span<const double> row(std::uint32_t arg) const {
        return {mu.data() + static_cast<std::size_t>(arg) * numRoles, numRoles};
    }
    double& at(std::uint32_t arg, std::uint32_t role) {
        return mu[static_cast<std::size_t>(arg) * numRoles + role];
    }
    double at(std::uint32_t arg, std::uint32_t role) const {
        return mu[static_cast<std::size_t>(arg) * numRoles + role];
    }
};

// Sparse gradient over encoder weights: featureId -> one value per role.
using EncoderGrad = std::map<std::uint32_t, std::vector<double>>;

// Independent softmax over roles per argument, stabilized by max-subtraction.
RolePosteriors encode(const PredicateInstance& inst, const EncoderParams& params);

// Chain rule through the per-argument softmax. upstream is dLoss/dmu, N x R
// row-major; only columns of active features receive entries.
EncoderGrad encoder_gradient(const PredicateInstance& inst, const EncoderParams& params,
                             const std::vector<double>& upstream);
EncoderGrad encoder_gradient(const PredicateInstance& inst, const RolePosteriors& mu,
                             const std::vector<double>& upstream);

// Argmax role per argument; ties break toward the lowest role index.
std::vector<std::uint32_t> label(const PredicateInstance& inst, const EncoderParams& params);

} // namespace srli

#endif
