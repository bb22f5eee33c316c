#include "srli/training.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "srli/errors.hpp"

namespace srli {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;    // "init"
constexpr std::uint64_t kShuffleStream = 0x73687566; // "shuf"
constexpr std::uint64_t kNegStream = 0x6e656773;     // "negs"

void fill_uniform(std::vector<double>& v, Rng& rng, double scale) {
    for (double& x : v) x = rng.uniform(-scale, scale);
}

} // namespace

void TrainConfig::validate() const {
    if (numRoles < 2) throw ConfigError("numRoles must be >= 2");
    if (dimK <= 0 || dimD <= dimK)
        throw ConfigError("decoder dimensions require d > k > 0, got d=" + std::to_string(dimD) +
                          " k=" + std::to_string(dimK));
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (learningRate <= 0.0) throw ConfigError("learning rate must be positive");
    if (adagradEpsilon <= 0.0) throw ConfigError("adagrad epsilon must be positive");
    if (initScale < 0.0) throw ConfigError("init scale must be non-negative");
    if (clipNorm < 0.0) throw ConfigError("clip norm must be non-negative");
    if (batchSize < 1) throw ConfigError("batch size must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

AdaGradState AdaGradState::zeros_like(const ModelParams& params) {
    AdaGradState s;
    s.encoder.assign(params.enc.weights.size(), 0.0);
    s.u.assign(params.dec.u.size(), 0.0);
    s.cShared.assign(params.dec.cShared.size(), 0.0);
    for (const auto& [pred, mats] : params.dec.cPred) s.cPred.emplace(pred, std::vector<double>(mats.size(), 0.0));
    return s;
}

double InstanceGrads::squared_param_norm() const {
    double acc = dec.squared_param_norm();
    for (const auto& [feat, roleVec] : enc)
        for (double v : roleVec) acc += v * v;
    return acc;
}

void InstanceGrads::scale_params(double factor) {
    dec.scale_params(factor);
    for (auto& [feat, roleVec] : enc)
        for (double& v : roleVec) v *= factor;
}

ModelParams init_params(const TrainConfig& config, const Vocabulary& vocab, Rng& rng) {
    config.validate();
    if (vocab.features.empty()) throw ConfigError("feature vocabulary is empty");
    if (vocab.argLemmas.empty()) throw ConfigError("argument lemma vocabulary is empty");

    ModelParams params;
    params.enc = EncoderParams(config.numRoles, vocab.features.size());
    params.dec = DecoderParams(vocab.argLemmas.size(), config.numRoles, config.dimD, config.dimK);

    fill_uniform(params.enc.weights, rng, config.initScale);
    fill_uniform(params.dec.u, rng, config.initScale);
    fill_uniform(params.dec.cShared, rng, config.initScale);

    for (std::uint32_t v = 0; v < vocab.predicates.size(); ++v) {
        if (vocab.predicates.frequency(v) < config.predMinFreq) continue;
        std::vector<double> mats(params.dec.cShared.size());
        fill_uniform(mats, rng, config.initScale);
        params.dec.cPred.emplace(v, std::move(mats));
    }
    return params;
}

NegativeSampler::NegativeSampler(const StringIndex& argLemmas, double power) {
    cumulative_.resize(argLemmas.size());
    double acc = 0.0;
    for (std::uint32_t a = 0; a < argLemmas.size(); ++a) {
        acc += std::pow(static_cast<double>(argLemmas.frequency(a)), power);
        cumulative_[a] = acc;
    }
    if (acc <= 0.0) {
        // Degenerate all-zero counts: fall back to uniform.
        for (std::uint32_t a = 0; a < argLemmas.size(); ++a)
            cumulative_[a] = static_cast<double>(a + 1);
    }
}

std::uint32_t NegativeSampler::sample(Rng& rng) const {
    double x = rng.uniform01() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative_.begin());
}

std::uint32_t NegativeSampler::sample_excluding(Rng& rng, std::uint32_t exclude) const {
    for (;;) {
        std::uint32_t a = sample(rng);
        if (a != exclude) return a;
    }
}

std::vector<std::uint32_t> NegativeSampler::draw(Rng& rng, int n, std::uint32_t exclude) const {
    std::vector<std::uint32_t> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = sample_excluding(rng, exclude);
    return out;
}

InstanceGrads instance_loss_and_grads(const PredicateInstance& inst, const ModelParams& params,
                                      const std::vector<std::vector<std::uint32_t>>& negativesPerPosition) {
    const int n = static_cast<int>(inst.args.size());
    if (n < 2) throw TrainingError("instance with fewer than 2 arguments has no reconstruction signal");
    if (negativesPerPosition.size() != static_cast<std::size_t>(n))
        throw TrainingError("negatives list does not match argument count");

    std::vector<std::uint32_t> lemmas(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) lemmas[static_cast<std::size_t>(i)] = inst.args[static_cast<std::size_t>(i)].argLemmaId;

    RolePosteriors mu = encode(inst, params.enc);

    InstanceGrads out;
    out.dec.reset(params.dec, n);
    double logprobSum = 0.0;
    for (int i = 0; i < n; ++i)
        logprobSum += sampled_logprob(params.dec, inst.predicateId, lemmas, mu, i,
                                      negativesPerPosition[static_cast<std::size_t>(i)], &out.dec);
    out.loss = -logprobSum;

    // The accumulated gradients are of sum_i logprob_i; the loss negates them.
    out.dec.scale_params(-1.0);
    for (double& v : out.dec.mu) v = -v;
    out.enc = encoder_gradient(inst, mu, out.dec.mu);
    return out;
}

InstanceGrads instance_loss_and_grads(const PredicateInstance& inst, const ModelParams& params,
                                      const TrainConfig& config, const NegativeSampler& sampler,
                                      Rng& rng) {
    std::vector<std::vector<std::uint32_t>> negatives(inst.args.size());
    for (std::size_t i = 0; i < inst.args.size(); ++i)
        negatives[i] = sampler.draw(rng, config.negatives, inst.args[i].argLemmaId);
    return instance_loss_and_grads(inst, params, negatives);
}

namespace {

inline void adagrad_coord(double& theta, double& acc, double g, double lr, double eps) {
    if (g == 0.0) return;
    acc += g * g;
    theta -= lr * g / (std::sqrt(acc) + eps);
}

} // namespace

void adagrad_step(ModelParams& params, const InstanceGrads& grads, AdaGradState& state,
                  double learningRate, double epsilon) {
    for (const auto& [feat, roleVec] : grads.enc) {
        for (std::uint32_t s = 0; s < params.enc.numRoles; ++s) {
            std::size_t idx = static_cast<std::size_t>(s) * params.enc.numFeatures + feat;
            adagrad_coord(params.enc.weights[idx], state.encoder[idx], roleVec[s], learningRate,
                          epsilon);
        }
    }
    for (const auto& [lemma, vec] : grads.dec.u) {
        std::size_t base = static_cast<std::size_t>(lemma) * static_cast<std::size_t>(params.dec.dimD);
        for (std::size_t r = 0; r < vec.size(); ++r)
            adagrad_coord(params.dec.u[base + r], state.u[base + r], vec[r], learningRate, epsilon);
    }
    for (std::size_t i = 0; i < grads.dec.cShared.size(); ++i)
        adagrad_coord(params.dec.cShared[i], state.cShared[i], grads.dec.cShared[i], learningRate,
                      epsilon);
    for (const auto& [pred, vec] : grads.dec.cPred) {
        auto paramIt = params.dec.cPred.find(pred);
        if (paramIt == params.dec.cPred.end())
            throw TrainingError("gradient for unknown predicate matrix block");
        auto [stateIt, inserted] = state.cPred.try_emplace(pred, vec.size(), 0.0);
        for (std::size_t i = 0; i < vec.size(); ++i)
            adagrad_coord(paramIt->second[i], stateIt->second[i], vec[i], learningRate, epsilon);
    }
}

namespace {

void clip_instance(InstanceGrads& g, double clipNorm) {
    if (clipNorm <= 0.0) return;
    double norm = std::sqrt(g.squared_param_norm());
    if (norm > clipNorm) g.scale_params(clipNorm / norm);
}

} // namespace

TrainResult train(const std::vector<PredicateInstance>& corpus, const Vocabulary& vocab,
                  const TrainConfig& config, const ModelParams* warmStart) {
    config.validate();

    std::vector<std::uint32_t> trainable;
    std::uint64_t skipped = 0;
    for (std::uint32_t i = 0; i < corpus.size(); ++i) {
        if (corpus[i].args.size() >= 2)
            trainable.push_back(i);
        else
            ++skipped;
    }
    if (trainable.empty()) throw TrainingError("no trainable instances (all have N < 2)");

    TrainResult result;
    if (warmStart) {
        result.params = *warmStart;
    } else {
        Rng initRng(mix_seed(config.seed, kInitStream));
        result.params = init_params(config, vocab, initRng);
    }
    AdaGradState state = AdaGradState::zeros_like(result.params);
    NegativeSampler sampler(vocab.argLemmas);

    const int threads = config.deterministic ? 1 : config.threads;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<std::uint32_t> order = trainable;
        Rng shuffleRng(mix_seed(config.seed, kShuffleStream, static_cast<std::uint64_t>(epoch)));
        shuffleRng.shuffle(order);

        double lossSum = 0.0;
        std::size_t pos = 0;
        while (pos < order.size()) {
            std::size_t batchEnd = std::min(order.size(), pos + static_cast<std::size_t>(config.batchSize));
            std::size_t batchLen = batchEnd - pos;

            std::vector<InstanceGrads> batch(batchLen);
            std::string failure;

            auto computeRange = [&](std::size_t lo, std::size_t hi) {
                for (std::size_t b = lo; b < hi; ++b) {
                    const PredicateInstance& inst = corpus[order[pos + b]];
                    Rng visitRng(mix_seed(config.seed, kNegStream, static_cast<std::uint64_t>(epoch),
                                          static_cast<std::uint64_t>(pos + b)));
                    batch[b] = instance_loss_and_grads(inst, result.params, config, sampler, visitRng);
                    if (!std::isfinite(batch[b].loss)) {
                        std::ostringstream msg;
                        msg << "non-finite loss at epoch " << epoch << ", sentence "
                            << inst.sentenceId << ", predicate '" << inst.predicateLemma << "'";
                        failure = msg.str();
                        return;
                    }
                    clip_instance(batch[b], config.clipNorm);
                }
            };

            if (threads > 1 && batchLen > 1) {
                std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), batchLen);
                std::vector<std::thread> pool;
                std::size_t chunk = (batchLen + workers - 1) / workers;
                for (std::size_t w = 0; w < workers; ++w) {
                    std::size_t lo = w * chunk, hi = std::min(batchLen, lo + chunk);
                    if (lo >= hi) break;
                    pool.emplace_back(computeRange, lo, hi);
                }
                for (auto& t : pool) t.join();
            } else {
                computeRange(0, batchLen);
            }
            if (!failure.empty()) throw TrainingError(failure);

            if (batchLen == 1) {
                lossSum += batch[0].loss;
                adagrad_step(result.params, batch[0], state, config.learningRate,
                             config.adagradEpsilon);
            } else {
                // Reduce in instance order, then apply once.
                InstanceGrads total;
                total.dec.reset(result.params.dec, 0);
                for (const InstanceGrads& g : batch) {
                    lossSum += g.loss;
                    total.loss += g.loss;
                    total.dec.add_scaled(g.dec, 1.0);
                    for (const auto& [feat, roleVec] : g.enc) {
                        auto [it, inserted] = total.enc.try_emplace(feat, roleVec.size(), 0.0);
                        for (std::size_t s = 0; s < roleVec.size(); ++s) it->second[s] += roleVec[s];
                    }
                }
                adagrad_step(result.params, total, state, config.learningRate, config.adagradEpsilon);
            }
            pos = batchEnd;
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.meanLoss = lossSum / static_cast<double>(trainable.size());
        stats.instancesSkipped = skipped;
        result.trace.push_back(stats);
    }
    return result;
}

void write_loss_trace(const std::vector<EpochStats>& trace, std::ostream& out) {
    out << "epoch,mean_loss,instances_skipped\n";
    std::ostringstream line;
    line.precision(17);
    for (const EpochStats& e : trace) {
        line.str("");
        line << e.epoch << ',' << e.meanLoss << ',' << e.instancesSkipped << '\n';
        out << line.str();
    }
}

} // namespace srli
