#ifndef SRLI_TRAINING_HPP
#define SRLI_TRAINING_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "srli/decoder.hpp"
#include "srli/rng.hpp"

namespace srli {

struct TrainConfig {
    std::uint32_t numRoles = 10;
    int dimD = 30;
    int dimK = 15;
    int negatives = 20;
    int epochs = 20;
    double learningRate = 0.1;
    double adagradEpsilon = 1e-8;
    double initScale = 0.01;
    std::uint64_t minLemmaFreq = 20;
    std::uint64_t predMinFreq = 50;
    std::uint64_t seed = 1;
    bool deterministic = false;
    double clipNorm = 5.0; // 0 disables per-instance gradient clipping
    int batchSize = 1;
    int threads = 1;

    // Throws ConfigError when a constraint is violated (d > k, n >= 1,
    // numRoles >= 2, positive rates).
    void validate() const;
};

struct ModelParams {
    EncoderParams enc;
    DecoderParams dec;
};

// Per-coordinate accumulated squared gradients.
struct AdaGradState {
    std::vector<double> encoder;
    std::vector<double> u;
    std::vector<double> cShared;
    std::map<std::uint32_t, std::vector<double>> cPred;

    static AdaGradState zeros_like(const ModelParams& params);
};

struct InstanceGrads {
    double loss = 0.0;
    EncoderGrad enc;  // dLoss/dW, sparse over active features
    DecoderGrads dec; // dLoss/d(u, cShared, cPred); dec.mu holds dLoss/dmu

    double squared_param_norm() const;
    void scale_params(double factor);
};

// Every parameter drawn i.i.d. uniform on [-initScale, +initScale], in a fixed
// order (encoder weights, u, cShared, cPred by ascending predicate id).
// Predicate-specific matrices are allocated for predicates with corpus
// frequency >= predMinFreq.
ModelParams init_params(const TrainConfig& config, const Vocabulary& vocab, Rng& rng);

// Negative-sampling distribution: unigram frequency ^ power, renormalized;
// the true lemma is excluded by rejection.
class NegativeSampler {
public:
    explicit NegativeSampler(const StringIndex& argLemmas, double power = 0.75);
    std::uint32_t sample(Rng& rng) const;
    std::uint32_t sample_excluding(Rng& rng, std::uint32_t exclude) const;
    std::vector<std::uint32_t> draw(Rng& rng, int n, std::uint32_t exclude) const;

private:
    std::vector<double> cumulative_;
};

// Joint reconstruction loss of one instance under mu = encode(instance):
//   loss = -sum_i sampled_logprob(i)
// with the mu-gradient chained through the encoder softmax into sparse
// encoder-weight gradients. negativesPerPosition pins the candidate sets;
// the rng overload draws them from the sampler. Requires N >= 2.
InstanceGrads instance_loss_and_grads(const PredicateInstance& inst, const ModelParams& params,
                                      const std::vector<std::vector<std::uint32_t>>& negativesPerPosition);
InstanceGrads instance_loss_and_grads(const PredicateInstance& inst, const ModelParams& params,
                                      const TrainConfig& config, const NegativeSampler& sampler,
                                      Rng& rng);

// theta <- theta - lr * g / (sqrt(G) + eps) with G accumulating g^2 first.
// Coordinates without gradient entries (or with exactly zero gradient) are
// untouched, accumulators included.
void adagrad_step(ModelParams& params, const InstanceGrads& grads, AdaGradState& state,
                  double learningRate, double epsilon);

struct EpochStats {
    int epoch = 0;
    double meanLoss = 0.0;
    std::uint64_t instancesSkipped = 0;
};

struct TrainResult {
    ModelParams params;
    std::vector<EpochStats> trace;
};

// Seeded epochs x shuffled passes over instances with N >= 2 (singletons are
// counted as skipped: an empty context carries no reconstruction signal).
// Negatives are redrawn at every visit from a per-visit stream, so results
// are reproducible regardless of thread count; the deterministic flag
// additionally forces serial execution. warmStart replaces the seeded
// initialization when given.
TrainResult train(const std::vector<PredicateInstance>& corpus, const Vocabulary& vocab,
                  const TrainConfig& config, const ModelParams* warmStart = nullptr);

// CSV: epoch,mean_loss,instances_skipped
void write_loss_trace(const std::vector<EpochStats>& trace, std::ostream& out);

struct ModelBundle {
    TrainConfig config;
    Vocabulary vocab;
    ModelParams params;
};

// Binary little-endian model file: magic "RFRG", format version, a
// length-prefixed JSON header, the four vocabularies, the raw parameter
// blocks and a trailing CRC32. load_model verifies magic, version, sizes and
// checksum and throws ModelIoError on any mismatch or truncation.
void save_model(const ModelBundle& model, const std::string& path);
ModelBundle load_model(const std::string& path);

} // namespace srli

#endif
