#include <doctest.h>

#include <cmath>

#include "test_util.hpp"

using namespace srli;
using namespace srli::test;

namespace {

PredicateInstance instance_with_features(std::vector<std::vector<std::uint32_t>> featureSets) {
    PredicateInstance inst;
    inst.predicateId = 0;
    for (auto& feats : featureSets) {
        ArgumentInstance arg;
        arg.featureIds = std::move(feats);
        arg.argLemmaId = 0;
        inst.args.push_back(std::move(arg));
    }
    return inst;
}

} // namespace

TEST_SUITE("encoder") {

TEST_CASE("zero weights give uniform posteriors") {
    EncoderParams params(4, 6);
    auto inst = instance_with_features({{0, 2}, {1}, {}});
    RolePosteriors post = encode(inst, params);
    REQUIRE(post.numArgs == 3);
    for (std::uint32_t i = 0; i < post.numArgs; ++i)
        for (std::uint32_t s = 0; s < 4; ++s) CHECK(post.at(i, s) == doctest::Approx(0.25));
}

TEST_CASE("closed-form two-role softmax") {
    EncoderParams params(2, 1);
    params.at(0, 0) = 2.0;
    params.at(1, 0) = 0.0;
    auto inst = instance_with_features({{0}});
    RolePosteriors post = encode(inst, params);
    const double e2 = std::exp(2.0);
    CHECK(post.at(0, 0) == doctest::Approx(e2 / (e2 + 1.0)).epsilon(1e-12));
    CHECK(post.at(0, 1) == doctest::Approx(1.0 / (e2 + 1.0)).epsilon(1e-12));
    CHECK(post.at(0, 0) == doctest::Approx(0.8808).epsilon(1e-4));
    CHECK(post.at(0, 1) == doctest::Approx(0.1192).epsilon(1e-4));
}

TEST_CASE("adding a constant to a feature column leaves posteriors unchanged") {
    Rng rng(7);
    EncoderParams params(3, 5);
    for (double& w : params.weights) w = rng.uniform(-1, 1);
    auto inst = instance_with_features({{0, 3}, {1, 2, 4}});
    RolePosteriors before = encode(inst, params);
    for (std::uint32_t s = 0; s < 3; ++s) params.at(s, 3) += 17.5;
    RolePosteriors after = encode(inst, params);
    for (std::size_t i = 0; i < before.mu.size(); ++i)
        CHECK(before.mu[i] == doctest::Approx(after.mu[i]).epsilon(1e-12));
}

TEST_CASE("posterior rows sum to one on random instances") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::uint32_t roles = 2 + static_cast<std::uint32_t>(rng.below(5));
        EncoderParams params(roles, 8);
        for (double& w : params.weights) w = rng.uniform(-3, 3);
        std::vector<std::vector<std::uint32_t>> feats;
        int n = 1 + static_cast<int>(rng.below(4));
        for (int i = 0; i < n; ++i) {
            std::vector<std::uint32_t> f;
            for (std::uint32_t c = 0; c < 8; ++c)
                if (rng.uniform01() < 0.4) f.push_back(c);
            feats.push_back(std::move(f));
        }
        RolePosteriors post = encode(instance_with_features(std::move(feats)), params);
        for (std::uint32_t i = 0; i < post.numArgs; ++i) {
            double sum = 0.0;
            for (std::uint32_t s = 0; s < roles; ++s) {
                sum += post.at(i, s);
                CHECK(post.at(i, s) >= 0.0);
                CHECK(post.at(i, s) <= 1.0);
            }
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("zero upstream gives an empty gradient") {
    EncoderParams params(3, 4);
    auto inst = instance_with_features({{0, 1}, {2}});
    std::vector<double> upstream(2 * 3, 0.0);
    CHECK(encoder_gradient(inst, params, upstream).empty());
}

TEST_CASE("gradient touches only active features") {
    Rng rng(3);
    EncoderParams params(3, 10);
    for (double& w : params.weights) w = rng.uniform(-1, 1);
    auto inst = instance_with_features({{1, 4}, {4, 7}});
    std::vector<double> upstream(2 * 3);
    for (double& u : upstream) u = rng.uniform(-1, 1);
    EncoderGrad grad = encoder_gradient(inst, params, upstream);
    for (const auto& [feat, values] : grad)
        CHECK((feat == 1 || feat == 4 || feat == 7));
}

TEST_CASE("gradient matches central finite differences") {
    Rng rng(5);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::uint32_t roles = 3;
        std::uint32_t numFeatures = 6;
        EncoderParams params(roles, numFeatures);
        for (double& w : params.weights) w = rng.uniform(-1.5, 1.5);
        auto inst = instance_with_features({{0, 2}, {1, 2, 5}, {3}});
        std::vector<double> upstream(3 * roles);
        for (double& u : upstream) u = rng.uniform(-1, 1);

        // Scalar objective: dot(upstream, mu(W)).
        auto objective = [&]() {
            RolePosteriors post = encode(inst, params);
            double acc = 0.0;
            for (std::size_t i = 0; i < post.mu.size(); ++i) acc += upstream[i] * post.mu[i];
            return acc;
        };
        EncoderGrad grad = encoder_gradient(inst, params, upstream);
        for (std::uint32_t f = 0; f < numFeatures; ++f) {
            for (std::uint32_t s = 0; s < roles; ++s) {
                double analytic = 0.0;
                if (auto it = grad.find(f); it != grad.end()) analytic = it->second[s];
                double numeric = central_diff(params.at(s, f), 1e-5, objective);
                worst = std::max(worst, rel_err(analytic, numeric));
            }
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("labeling rules") {
    // Uniform posterior: tie broken toward role 0.
    EncoderParams zero(3, 2);
    auto inst = instance_with_features({{0}});
    CHECK(label(inst, zero) == std::vector<std::uint32_t>{0});

    // Posterior (0.1, 0.7, 0.2) picks role 1.
    EncoderParams params(3, 1);
    params.at(0, 0) = std::log(0.1);
    params.at(1, 0) = std::log(0.7);
    params.at(2, 0) = std::log(0.2);
    RolePosteriors post = encode(inst, params);
    CHECK(post.at(0, 1) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(label(inst, params) == std::vector<std::uint32_t>{1});

    // Positive rescaling of the logits preserves the argmax.
    EncoderParams scaled = params;
    for (double& w : scaled.weights) w *= 3.7;
    CHECK(label(inst, scaled) == label(inst, params));
}

TEST_CASE("labels depend only on features and weights") {
    Rng rng(23);
    EncoderParams params(4, 8);
    for (double& w : params.weights) w = rng.uniform(-2, 2);
    auto a = instance_with_features({{0, 5}, {2}});
    auto b = a;
    b.predicateId = 99;
    b.sentenceId = 1234;
    b.args[0].goldRole = "poisoned";
    CHECK(label(a, params) == label(b, params));
}

} // TEST_SUITE
