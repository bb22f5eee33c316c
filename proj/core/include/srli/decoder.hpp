#ifndef SRLI_DECODER_HPP
#define SRLI_DECODER_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "srli/encoder.hpp"

namespace srli {

// Reconstruction-model parameters: argument embeddings u (|A| x d) and
// d x k projection matrices, one shared set per role plus predicate-specific
// sets for frequent predicates. A role's effective projection for predicate v
// is C_shared[r] + C_pred[v][r], the latter treated as zero when absent.
//
// The decoder deliberately sees nothing of the sentence: every entry point
// takes only (predicate id, argument lemma ids, role posteriors).
struct DecoderParams {
    std::uint32_t numLemmas = 0;
    std::uint32_t numRoles = 0;
    int dimD = 0;
    int dimK = 0;
    std::vector<double> u;                                      // numLemmas x d
    std::vector<double> cShared;                                // numRoles x d x k
    std::map<std::uint32_t, std::vector<double>> cPred;         // predId -> numRoles x d x k

    DecoderParams() = default;
    // Throws ConfigError unless d > k > 0.
    DecoderParams(std::uint32_t lemmas, std::uint32_t roles, int d, int k);

    std::span<const double> embedding(std::uint32_t lemma) const {
        return {u.data() + static_cast<std::size_t>(lemma) * dimD, static_cast<std::size_t>(dimD)};
    }
    std::span<const double> shared_mat(std::uint32_t role) const {
        std::size_t dk = static_cast<std::size_t>(dimD) * dimK;
        return {cShared.data() + role * dk, dk};
    }
    // Predicate-specific matrices or nullptr when the predicate has none.
    const std::vector<double>* pred_mats(std::uint32_t predId) const {
        auto it = cPred.find(predId);
        return it == cPred.end() ? nullptr : &it->second;
    }

    std::size_t matrix_size() const { return static_cast<std::size_t>(dimD) * dimK; }
};

// Soft-role projections of an instance's arguments: row j is
// sum_s mu[j][s] * (C_pred[v][s] + C_shared[s])^T u[a_j], a k-vector.
struct SoftRoleContext {
    int numArgs = 0;
    int dimK = 0;
    std::vector<double> perArgProjection; // N x k
    std::vector<double> contextSum;       // k, column sum of perArgProjection

    std::span<const double> projection(int arg) const {
        return {perArgProjection.data() + static_cast<std::size_t>(arg) * dimK,
                static_cast<std::size_t>(dimK)};
    }
};

SoftRoleContext build_context(const DecoderParams& params, std::uint32_t predId,
                              std::span<const std::uint32_t> argLemmas,
                              const RolePosteriors& mu);

// Hard-role projection (C_pred[v][r] + C_shared[r])^T u[a].
std::vector<double> project(const DecoderParams& params, std::uint32_t predId,
                            std::uint32_t role, std::uint32_t lemma);
// Posterior-weighted mixture over roles.
std::vector<double> project(const DecoderParams& params, std::uint32_t predId,
                            std::span<const double> muRow, std::uint32_t lemma);

// Bilinear compatibility of one argument's projection with the summed
// projections of the others.
double score_pair(std::span<const double> proj, std::span<const double> contextMinus);

// Tuple score sum_{i != j} proj_i . proj_j under hard roles, computed as
// |contextSum|^2 - sum_i |proj_i|^2.
double tuple_score(const DecoderParams& params, std::uint32_t predId,
                   std::span<const std::uint32_t> argLemmas,
                   std::span<const std::uint32_t> roles);

// Log-probability of the true lemma at `position` under the full softmax over
// all lemmas. Enumerates the whole alphabet; test-scale oracle for the
// sampled objective.
double exact_logprob(const DecoderParams& params, std::uint32_t predId,
                     std::span<const std::uint32_t> argLemmas, const RolePosteriors& mu,
                     int position);

// Gradient accumulator for the decoder side plus the posterior input.
struct DecoderGrads {
    std::map<std::uint32_t, std::vector<double>> u;     // lemma -> d
    std::vector<double> cShared;                        // numRoles x d x k
    std::map<std::uint32_t, std::vector<double>> cPred; // predId -> numRoles x d x k
    std::vector<double> mu;                             // N x R

    void reset(const DecoderParams& params, int numArgs);
    void add_scaled(const DecoderGrads& other, double factor);
    double squared_param_norm() const; // excludes mu
    void scale_params(double factor);  // excludes mu
};

// Sampled-softmax log-probability of the true lemma at `position` against the
// candidate set {true} U negatives. When grads is non-null the gradient of
// the returned value w.r.t. (u, cShared, cPred, mu) is accumulated into it.
// With negatives equal to the full lemma complement this reproduces
// exact_logprob.
double sampled_logprob(const DecoderParams& params, std::uint32_t predId,
                       std::span<const std::uint32_t> argLemmas, const RolePosteriors& mu,
                       int position, std::span<const std::uint32_t> negatives,
                       DecoderGrads* grads = nullptr);

} // namespace srli

#endif
