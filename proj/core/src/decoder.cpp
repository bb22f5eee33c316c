#include "srli/decoder.hpp"

#include <cmath>

#include "srli/errors.hpp"

namespace srli {

namespace {

// out[k] = A^T x for a row-major d x k matrix.
void apply_transposed(std::span<const double> a, std::span<const double> x, int d, int k,
                      double* out) {
    for (int c = 0; c < k; ++c) out[c] = 0.0;
    for (int r = 0; r < d; ++r) {
        double xr = x[r];
        if (xr == 0.0) continue;
        const double* row = a.data() + static_cast<std::size_t>(r) * k;
        for (int c = 0; c < k; ++c) out[c] += row[c] * xr;
    }
}

// out[d] = A y for a row-major d x k matrix.
void apply(std::span<const double> a, std::span<const double> y, int d, int k, double* out) {
    for (int r = 0; r < d; ++r) {
        const double* row = a.data() + static_cast<std::size_t>(r) * k;
        double acc = 0.0;
        for (int c = 0; c < k; ++c) acc += row[c] * y[c];
        out[r] = acc;
    }
}

// Effective projection matrices (C_shared[s] + C_pred[v][s]) for all roles.
std::vector<double> effective_mats(const DecoderParams& params, std::uint32_t predId) {
    std::vector<double> eff = params.cShared;
    if (const std::vector<double>* pred = params.pred_mats(predId))
        for (std::size_t i = 0; i < eff.size(); ++i) eff[i] += (*pred)[i];
    return eff;
}

// A_j = sum_s mu[j][s] * eff[s], a d x k matrix.
void mixed_matrix(std::span<const double> eff, std::span<const double> muRow,
                  std::size_t matSize, std::uint32_t numRoles, double* out) {
    for (std::size_t i = 0; i < matSize; ++i) out[i] = 0.0;
    for (std::uint32_t s = 0; s < numRoles; ++s) {
        double w = muRow[s];
        if (w == 0.0) continue;
        const double* mat = eff.data() + s * matSize;
        for (std::size_t i = 0; i < matSize; ++i) out[i] += w * mat[i];
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double log_sum_exp(std::span<const double> scores) {
    double mx = scores[0];
    for (double s : scores) mx = std::max(mx, s);
    double acc = 0.0;
    for (double s : scores) acc += std::exp(s - mx);
    return mx + std::log(acc);
}

} // namespace

DecoderParams::DecoderParams(std::uint32_t lemmas, std::uint32_t roles, int d, int k)
    : numLemmas(lemmas), numRoles(roles), dimD(d), dimK(k) {
    if (k <= 0 || d <= k)
        throw ConfigError("decoder dimensions require d > k > 0, got d=" + std::to_string(d) +
                          " k=" + std::to_string(k));
    u.assign(static_cast<std::size_t>(lemmas) * d, 0.0);
    cShared.assign(static_cast<std::size_t>(roles) * d * k, 0.0);
}

SoftRoleContext build_context(const DecoderParams& params, std::uint32_t predId,
                              std::span<const std::uint32_t> argLemmas,
                              const RolePosteriors& mu) {
    const int n = static_cast<int>(argLemmas.size());
    const int d = params.dimD, k = params.dimK;
    SoftRoleContext ctx;
    ctx.numArgs = n;
    ctx.dimK = k;
    ctx.perArgProjection.assign(static_cast<std::size_t>(n) * k, 0.0);
    ctx.contextSum.assign(k, 0.0);

    std::vector<double> eff = effective_mats(params, predId);
    std::vector<double> mixed(params.matrix_size());
    for (int j = 0; j < n; ++j) {
        mixed_matrix(eff, mu.row(static_cast<std::uint32_t>(j)), params.matrix_size(),
                     params.numRoles, mixed.data());
        double* proj = ctx.perArgProjection.data() + static_cast<std::size_t>(j) * k;
        apply_transposed(mixed, params.embedding(argLemmas[j]), d, k, proj);
        for (int c = 0; c < k; ++c) ctx.contextSum[c] += proj[c];
    }
    return ctx;
}

std::vector<double> project(const DecoderParams& params, std::uint32_t predId,
                            std::uint32_t role, std::uint32_t lemma) {
    std::vector<double> eff(params.shared_mat(role).begin(), params.shared_mat(role).end());
    if (const std::vector<double>* pred = params.pred_mats(predId)) {
        const double* mat = pred->data() + role * params.matrix_size();
        for (std::size_t i = 0; i < eff.size(); ++i) eff[i] += mat[i];
    }
    std::vector<double> out(params.dimK);
    apply_transposed(eff, params.embedding(lemma), params.dimD, params.dimK, out.data());
    return out;
}

std::vector<double> project(const DecoderParams& params, std::uint32_t predId,
                            std::span<const double> muRow, std::uint32_t lemma) {
    std::vector<double> eff = effective_mats(params, predId);
    std::vector<double> mixed(params.matrix_size());
    mixed_matrix(eff, muRow, params.matrix_size(), params.numRoles, mixed.data());
    std::vector<double> out(params.dimK);
    apply_transposed(mixed, params.embedding(lemma), params.dimD, params.dimK, out.data());
    return out;
}

double score_pair(std::span<const double> proj, std::span<const double> contextMinus) {
    return dot(proj, contextMinus);
}

double tuple_score(const DecoderParams& params, std::uint32_t predId,
                   std::span<const std::uint32_t> argLemmas,
                   std::span<const std::uint32_t> roles) {
    const int k = params.dimK;
    std::vector<double> sum(k, 0.0);
    double sqNorms = 0.0;
    for (std::size_t j = 0; j < argLemmas.size(); ++j) {
        std::vector<double> proj = project(params, predId, roles[j], argLemmas[j]);
        for (int c = 0; c < k; ++c) sum[c] += proj[c];
        sqNorms += dot(proj, proj);
    }
    return dot(sum, sum) - sqNorms;
}

double exact_logprob(const DecoderParams& params, std::uint32_t predId,
                     std::span<const std::uint32_t> argLemmas, const RolePosteriors& mu,
                     int position) {
    const int d = params.dimD, k = params.dimK;
    SoftRoleContext ctx = build_context(params, predId, argLemmas, mu);

    std::vector<double> ctxMinus(k);
    std::span<const double> own = ctx.projection(position);
    for (int c = 0; c < k; ++c) ctxMinus[c] = ctx.contextSum[c] - own[c];

    std::vector<double> eff = effective_mats(params, predId);
    std::vector<double> mixed(params.matrix_size());
    mixed_matrix(eff, mu.row(static_cast<std::uint32_t>(position)), params.matrix_size(),
                 params.numRoles, mixed.data());
    std::vector<double> b(d);
    apply(mixed, ctxMinus, d, k, b.data());

    std::vector<double> scores(params.numLemmas);
    for (std::uint32_t a = 0; a < params.numLemmas; ++a) scores[a] = dot(params.embedding(a), b);
    return scores[argLemmas[static_cast<std::size_t>(position)]] - log_sum_exp(scores);
}

void DecoderGrads::reset(const DecoderParams& params, int numArgs) {
    u.clear();
    cPred.clear();
    cShared.assign(params.cShared.size(), 0.0);
    mu.assign(static_cast<std::size_t>(numArgs) * params.numRoles, 0.0);
}

void DecoderGrads::add_scaled(const DecoderGrads& other, double factor) {
    for (const auto& [lemma, vec] : other.u) {
        auto [it, inserted] = u.try_emplace(lemma, vec.size(), 0.0);
        for (std::size_t i = 0; i < vec.size(); ++i) it->second[i] += factor * vec[i];
    }
    if (cShared.size() < other.cShared.size()) cShared.resize(other.cShared.size(), 0.0);
    for (std::size_t i = 0; i < other.cShared.size(); ++i) cShared[i] += factor * other.cShared[i];
    for (const auto& [pred, vec] : other.cPred) {
        auto [it, inserted] = cPred.try_emplace(pred, vec.size(), 0.0);
        for (std::size_t i = 0; i < vec.size(); ++i) it->second[i] += factor * vec[i];
    }
}

double DecoderGrads::squared_param_norm() const {
    double acc = 0.0;
    for (const auto& [lemma, vec] : u)
        for (double v : vec) acc += v * v;
    for (double v : cShared) acc += v * v;
    for (const auto& [pred, vec] : cPred)
        for (double v : vec) acc += v * v;
    return acc;
}

void DecoderGrads::scale_params(double factor) {
    for (auto& [lemma, vec] : u)
        for (double& v : vec) v *= factor;
    for (double& v : cShared) v *= factor;
    for (auto& [pred, vec] : cPred)
        for (double& v : vec) v *= factor;
}

double sampled_logprob(const DecoderParams& params, std::uint32_t predId,
                       std::span<const std::uint32_t> argLemmas, const RolePosteriors& mu,
                       int position, std::span<const std::uint32_t> negatives,
                       DecoderGrads* grads) {
    const int n = static_cast<int>(argLemmas.size());
    const int d = params.dimD, k = params.dimK;
    const std::uint32_t numRoles = params.numRoles;
    const std::size_t matSize = params.matrix_size();
    const std::uint32_t trueLemma = argLemmas[static_cast<std::size_t>(position)];

    std::vector<double> eff = effective_mats(params, predId);

    // Forward pass: per-argument mixed matrices and projections.
    std::vector<double> mixed(static_cast<std::size_t>(n) * matSize);
    std::vector<double> proj(static_cast<std::size_t>(n) * k);
    std::vector<double> ctxMinus(k, 0.0);
    for (int j = 0; j < n; ++j) {
        double* aj = mixed.data() + static_cast<std::size_t>(j) * matSize;
        mixed_matrix(eff, mu.row(static_cast<std::uint32_t>(j)), matSize, numRoles, aj);
        double* pj = proj.data() + static_cast<std::size_t>(j) * k;
        apply_transposed({aj, matSize}, params.embedding(argLemmas[j]), d, k, pj);
        if (j != position)
            for (int c = 0; c < k; ++c) ctxMinus[c] += pj[c];
    }

    const double* ai = mixed.data() + static_cast<std::size_t>(position) * matSize;
    std::vector<double> b(d);
    apply({ai, matSize}, ctxMinus, d, k, b.data());

    std::vector<std::uint32_t> candidates;
    candidates.reserve(negatives.size() + 1);
    candidates.push_back(trueLemma);
    candidates.insert(candidates.end(), negatives.begin(), negatives.end());

    std::vector<double> scores(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c)
        scores[c] = dot(params.embedding(candidates[c]), b);
    const double lse = log_sum_exp(scores);
    const double logprob = scores[0] - lse;

    if (!grads) return logprob;

    // Backward pass for d(logprob)/d(theta).
    // gamma_c = 1[c is the true lemma slot] - softmax(scores)_c
    // q = dL/db = sum_c gamma_c u_c
    std::vector<double> q(d, 0.0);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double gamma = (c == 0 ? 1.0 : 0.0) - std::exp(scores[c] - lse);
        std::span<const double> emb = params.embedding(candidates[c]);
        auto [it, inserted] = grads->u.try_emplace(candidates[c], d, 0.0);
        for (int r = 0; r < d; ++r) {
            it->second[r] += gamma * b[r];
            q[r] += gamma * emb[r];
        }
    }

    // t = dL/d(ctxMinus) = A_i^T q; every other argument's projection feeds it.
    std::vector<double> t(k);
    apply_transposed({ai, matSize}, q, d, k, t.data());

    // Per-argument adjoints G_j = dL/dA_j.
    //   G_i += q ctxMinus^T (scoring side)
    //   G_j += u_{a_j} t^T for j != i (context side), and u_{a_j} += A_j t.
    std::vector<double> gmat(static_cast<std::size_t>(n) * matSize, 0.0);
    {
        double* gi = gmat.data() + static_cast<std::size_t>(position) * matSize;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < k; ++c) gi[static_cast<std::size_t>(r) * k + c] += q[r] * ctxMinus[c];
    }
    std::vector<double> ajt(d);
    for (int j = 0; j < n; ++j) {
        if (j == position) continue;
        std::span<const double> emb = params.embedding(argLemmas[j]);
        double* gj = gmat.data() + static_cast<std::size_t>(j) * matSize;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < k; ++c) gj[static_cast<std::size_t>(r) * k + c] += emb[r] * t[c];

        const double* aj = mixed.data() + static_cast<std::size_t>(j) * matSize;
        apply({aj, matSize}, t, d, k, ajt.data());
        auto [it, inserted] = grads->u.try_emplace(argLemmas[j], d, 0.0);
        for (int r = 0; r < d; ++r) it->second[r] += ajt[r];
    }

    // A_j = sum_s mu[j][s] eff[s] distributes G_j onto the projection matrices
    // and the posteriors.
    std::vector<double>* predGrad = nullptr;
    if (params.pred_mats(predId)) {
        auto [it, inserted] = grads->cPred.try_emplace(predId, params.cShared.size(), 0.0);
        predGrad = &it->second;
    }
    for (int j = 0; j < n; ++j) {
        const double* gj = gmat.data() + static_cast<std::size_t>(j) * matSize;
        std::span<const double> muRow = mu.row(static_cast<std::uint32_t>(j));
        for (std::uint32_t s = 0; s < numRoles; ++s) {
            const double* effS = eff.data() + s * matSize;
            double muDot = 0.0;
            for (std::size_t i = 0; i < matSize; ++i) muDot += effS[i] * gj[i];
            grads->mu[static_cast<std::size_t>(j) * numRoles + s] += muDot;

            double w = muRow[s];
            if (w == 0.0) continue;
            double* sharedS = grads->cShared.data() + s * matSize;
            for (std::size_t i = 0; i < matSize; ++i) sharedS[i] += w * gj[i];
            if (predGrad) {
                double* predS = predGrad->data() + s * matSize;
                for (std::size_t i = 0; i < matSize; ++i) predS[i] += w * gj[i];
            }
        }
    }
    return logprob;
}

} // namespace srli
