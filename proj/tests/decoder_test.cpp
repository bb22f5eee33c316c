#include <doctest.h>

#include <cmath>
#include <numeric>

#include "srli/errors.hpp"
#include "test_util.hpp"

using namespace srli;
using namespace srli::test;

namespace {

std::vector<std::uint32_t> lemmas_of(const PredicateInstance& inst) {
    std::vector<std::uint32_t> out;
    for (const auto& arg : inst.args) out.push_back(arg.argLemmaId);
    return out;
}

// All lemmas except `exclude`, the full-complement candidate set.
std::vector<std::uint32_t> complement(std::uint32_t numLemmas, std::uint32_t exclude) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < numLemmas; ++a)
        if (a != exclude) out.push_back(a);
    return out;
}

} // namespace

TEST_SUITE("decoder") {

TEST_CASE("construction rejects d <= k") {
    CHECK_THROWS_AS(DecoderParams(5, 3, 2, 2), ConfigError);
    CHECK_THROWS_AS(DecoderParams(5, 3, 2, 3), ConfigError);
    CHECK_NOTHROW(DecoderParams(5, 3, 3, 2));
}

TEST_CASE("hand matrix product: d=2, k=1, C=[[1],[2]], u=(3,4)") {
    DecoderParams params(1, 1, 2, 1);
    params.cShared = {1.0, 2.0};
    params.u = {3.0, 4.0};
    auto proj = project(params, kNoId, 0u, 0u); // no predicate matrix
    REQUIRE(proj.size() == 1);
    CHECK(proj[0] == doctest::Approx(11.0).epsilon(1e-15));
}

TEST_CASE("one-hot posterior equals hard projection") {
    Rng rng(77);
    Toy toy = make_toy(rng, true);
    for (std::uint32_t s = 0; s < toy.config.numRoles; ++s) {
        std::vector<double> onehot(toy.config.numRoles, 0.0);
        onehot[s] = 1.0;
        auto soft = project(toy.params.dec, 0, std::span<const double>(onehot), 3u);
        auto hard = project(toy.params.dec, 0, s, 3u);
        for (std::size_t c = 0; c < soft.size(); ++c)
            CHECK(soft[c] == doctest::Approx(hard[c]).epsilon(1e-12));
    }
}

TEST_CASE("zero embedding projects to zero") {
    Rng rng(9);
    Toy toy = make_toy(rng, false);
    std::fill_n(toy.params.dec.u.begin() + 2 * toy.config.dimD, toy.config.dimD, 0.0);
    auto proj = project(toy.params.dec, 0, 1u, 2u);
    for (double v : proj) CHECK(v == 0.0);
}

TEST_CASE("score_pair is a dot product") {
    std::vector<double> zero{0.0, 0.0};
    std::vector<double> a{1.0, 2.0};
    std::vector<double> b{3.0, 4.0};
    CHECK(score_pair(a, zero) == 0.0);
    CHECK(score_pair(zero, b) == 0.0);
    CHECK(score_pair(a, b) == doctest::Approx(11.0));
}

TEST_CASE("symmetric arguments score equally") {
    Rng rng(13);
    Toy toy = make_toy(rng, false, 6, 8, 3, 4, 2, 2);
    toy.inst.args[1].argLemmaId = toy.inst.args[0].argLemmaId;
    RolePosteriors mu(2, 3);
    for (std::uint32_t s = 0; s < 3; ++s) mu.at(0, s) = mu.at(1, s) = (s == 1 ? 0.8 : 0.1);
    SoftRoleContext ctx = build_context(toy.params.dec, 0, lemmas_of(toy.inst), mu);
    std::vector<double> minus0(ctx.contextSum), minus1(ctx.contextSum);
    for (int c = 0; c < ctx.dimK; ++c) {
        minus0[c] -= ctx.projection(0)[c];
        minus1[c] -= ctx.projection(1)[c];
    }
    CHECK(score_pair(ctx.projection(0), minus0) ==
          doctest::Approx(score_pair(ctx.projection(1), minus1)).epsilon(1e-12));
}

TEST_CASE("context sum equals the column sums of the projections") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        Toy toy = make_toy(rng, trial % 2 == 0, 8, 10, 3, 5, 3, 4);
        RolePosteriors mu = random_posteriors(rng, 4, 3);
        SoftRoleContext ctx = build_context(toy.params.dec, 0, lemmas_of(toy.inst), mu);
        for (int c = 0; c < ctx.dimK; ++c) {
            double col = 0.0;
            for (int j = 0; j < ctx.numArgs; ++j) col += ctx.projection(j)[c];
            CHECK(std::abs(col - ctx.contextSum[c]) < 1e-12);
        }
    }
}

TEST_CASE("tuple score trivial cases") {
    Rng rng(31);
    Toy toy = make_toy(rng, false);
    // N=1: no pairs.
    std::vector<std::uint32_t> single{2};
    std::vector<std::uint32_t> role{1};
    CHECK(tuple_score(toy.params.dec, 0, single, role) == doctest::Approx(0.0));

    // Orthogonal projections cancel: build explicit params.
    DecoderParams p(2, 2, 3, 2);
    // role 0 projects lemma 0 to (1,0); role 1 projects lemma 1 to (0,1).
    p.u = {1, 0, 0, /*lemma1*/ 0, 1, 0};
    // C[r] is d x k = 3 x 2, row-major.
    p.cShared = {1, 0, 0, 0, 0, 0, /*role1*/ 0, 0, 0, 1, 0, 0};
    std::vector<std::uint32_t> lemmas{0, 1};
    std::vector<std::uint32_t> roles{0, 1};
    auto pr0 = project(p, kNoId, 0u, 0u);
    auto pr1 = project(p, kNoId, 1u, 1u);
    CHECK(pr0 == std::vector<double>{1.0, 0.0});
    CHECK(pr1 == std::vector<double>{0.0, 1.0});
    CHECK(tuple_score(p, kNoId, lemmas, roles) == doctest::Approx(0.0));
}

TEST_CASE("tuple score matches the double-loop oracle and the norm identity") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        Toy toy = make_toy(rng, trial % 2 == 0, 7, 9, 4, 5, 3, 2 + static_cast<int>(rng.below(3)));
        std::vector<std::uint32_t> lemmas = lemmas_of(toy.inst);
        std::vector<std::uint32_t> roles;
        for (std::size_t i = 0; i < lemmas.size(); ++i)
            roles.push_back(static_cast<std::uint32_t>(rng.below(4)));

        // Independent oracle: direct sum over ordered pairs i != j.
        double expected = 0.0;
        for (std::size_t i = 0; i < lemmas.size(); ++i) {
            auto pi = project(toy.params.dec, 0, roles[i], lemmas[i]);
            for (std::size_t j = 0; j < lemmas.size(); ++j) {
                if (i == j) continue;
                auto pj = project(toy.params.dec, 0, roles[j], lemmas[j]);
                expected += std::inner_product(pi.begin(), pi.end(), pj.begin(), 0.0);
            }
        }
        double actual = tuple_score(toy.params.dec, 0, lemmas, roles);
        CHECK(std::abs(actual - expected) < 1e-9);

        // Same value via sum_i proj_i . (S - proj_i).
        double viaContext = 0.0;
        std::vector<double> sum(static_cast<std::size_t>(toy.config.dimK), 0.0);
        std::vector<std::vector<double>> projs;
        for (std::size_t i = 0; i < lemmas.size(); ++i) {
            projs.push_back(project(toy.params.dec, 0, roles[i], lemmas[i]));
            for (int c = 0; c < toy.config.dimK; ++c) sum[static_cast<std::size_t>(c)] += projs.back()[static_cast<std::size_t>(c)];
        }
        for (std::size_t i = 0; i < projs.size(); ++i) {
            std::vector<double> minus = sum;
            for (std::size_t c = 0; c < minus.size(); ++c) minus[c] -= projs[i][c];
            viaContext += score_pair(projs[i], minus);
        }
        CHECK(std::abs(actual - viaContext) < 1e-9);
    }
}

TEST_CASE("exact logprob is uniform at zero parameters") {
    DecoderParams params(5, 3, 4, 2); // all zeros
    Rng rng(1);
    RolePosteriors mu = random_posteriors(rng, 2, 3); // values irrelevant
    std::vector<std::uint32_t> lemmas{1, 3};
    CHECK(exact_logprob(params, kNoId, lemmas, mu, 0) ==
          doctest::Approx(std::log(1.0 / 5.0)).epsilon(1e-12));
}

TEST_CASE("exact logprob matches a hand softmax on a 3-lemma toy") {
    // d=2, k=1. u0=(1,0), u1=(0,1), u2=(1,1). C_role0=[[1],[0]], C_role1=[[0],[2]].
    DecoderParams params(3, 2, 2, 1);
    params.u = {1, 0, 0, 1, 1, 1};
    params.cShared = {1, 0, /*role1*/ 0, 2};
    RolePosteriors mu(2, 2);
    mu.at(0, 0) = 1.0; // arg 0 hard role 0
    mu.at(1, 1) = 1.0; // arg 1 hard role 1
    std::vector<std::uint32_t> lemmas{0, 1};

    // proj_1 = C1^T u1 = (0,2).(0,1) = 2. ctx for position 0 = 2.
    // b = A_0 ctx = C0 * 2 = (2, 0).
    // scores: u0.b = 2, u1.b = 0, u2.b = 2.
    double z = std::exp(2.0) + std::exp(0.0) + std::exp(2.0);
    double expected = 2.0 - std::log(z);
    CHECK(exact_logprob(params, kNoId, lemmas, mu, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("exact probabilities sum to one over candidate substitutions") {
    Rng rng(55);
    Toy toy = make_toy(rng, true, 6, 8, 3, 4, 2, 3);
    RolePosteriors mu = random_posteriors(rng, 3, 3);
    std::vector<std::uint32_t> lemmas = lemmas_of(toy.inst);
    for (int pos = 0; pos < 3; ++pos) {
        double total = 0.0;
        for (std::uint32_t a = 0; a < toy.params.dec.numLemmas; ++a) {
            std::vector<std::uint32_t> swapped = lemmas;
            swapped[static_cast<std::size_t>(pos)] = a;
            total += std::exp(exact_logprob(toy.params.dec, 0, swapped, mu, pos));
        }
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
}

TEST_CASE("sampled logprob is uniform over candidates at zero parameters") {
    DecoderParams params(8, 3, 4, 2);
    Rng rng(2);
    RolePosteriors mu = random_posteriors(rng, 2, 3);
    std::vector<std::uint32_t> lemmas{1, 2};
    std::vector<std::uint32_t> negs{3, 4, 5, 6, 7};
    CHECK(sampled_logprob(params, kNoId, lemmas, mu, 0, negs) ==
          doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("full-complement negatives reproduce the exact softmax") {
    Rng rng(67);
    for (int trial = 0; trial < 50; ++trial) {
        Toy toy = make_toy(rng, trial % 2 == 0, 10, 8, 3, 4, 2, 3);
        RolePosteriors mu = random_posteriors(rng, 3, 3);
        std::vector<std::uint32_t> lemmas = lemmas_of(toy.inst);
        for (int pos = 0; pos < 3; ++pos) {
            auto negs = complement(10, lemmas[static_cast<std::size_t>(pos)]);
            double sampled = sampled_logprob(toy.params.dec, 0, lemmas, mu, pos, negs);
            double exact = exact_logprob(toy.params.dec, 0, lemmas, mu, pos);
            CHECK(std::abs(sampled - exact) <= 1e-12);
        }
    }
}

TEST_CASE("gradients match central finite differences on random configurations") {
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        int d = 3 + static_cast<int>(rng.below(3));      // 3..5
        int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(3, static_cast<std::uint64_t>(d - 1))));
        std::uint32_t roles = 2 + static_cast<std::uint32_t>(rng.below(3)); // 2..4
        int n = 2 + static_cast<int>(rng.below(3));      // 2..4
        bool withPred = trial % 2 == 0;
        Toy toy = make_toy(rng, withPred, 9, 8, roles, d, k, n, 4);
        RolePosteriors mu = random_posteriors(rng, static_cast<std::uint32_t>(n), roles);
        std::vector<std::uint32_t> lemmas = lemmas_of(toy.inst);
        int pos = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const auto& negs = toy.negatives[static_cast<std::size_t>(pos)];

        DecoderGrads grads;
        grads.reset(toy.params.dec, n);
        sampled_logprob(toy.params.dec, 0, lemmas, mu, pos, negs, &grads);

        auto value = [&]() {
            return sampled_logprob(toy.params.dec, 0, lemmas, mu, pos, negs);
        };

        for (std::size_t i = 0; i < toy.params.dec.u.size(); ++i) {
            std::uint32_t lemma = static_cast<std::uint32_t>(i / static_cast<std::size_t>(d));
            double analytic = 0.0;
            if (auto it = grads.u.find(lemma); it != grads.u.end())
                analytic = it->second[i % static_cast<std::size_t>(d)];
            worst = std::max(worst, rel_err(analytic, central_diff(toy.params.dec.u[i], 1e-5, value)));
        }
        for (std::size_t i = 0; i < toy.params.dec.cShared.size(); ++i)
            worst = std::max(worst, rel_err(grads.cShared[i],
                                            central_diff(toy.params.dec.cShared[i], 1e-5, value)));
        if (withPred) {
            auto& mats = toy.params.dec.cPred.at(0);
            const auto& gmats = grads.cPred.at(0);
            for (std::size_t i = 0; i < mats.size(); ++i)
                worst = std::max(worst, rel_err(gmats[i], central_diff(mats[i], 1e-5, value)));
        } else {
            CHECK(grads.cPred.empty());
        }
        for (std::size_t i = 0; i < mu.mu.size(); ++i)
            worst = std::max(worst, rel_err(grads.mu[i], central_diff(mu.mu[i], 1e-5, value)));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("duplicate argument lemmas are handled independently") {
    Rng rng(113);
    Toy toy = make_toy(rng, false, 6, 8, 3, 4, 2, 3);
    toy.inst.args[1].argLemmaId = toy.inst.args[0].argLemmaId;
    RolePosteriors mu = random_posteriors(rng, 3, 3);
    std::vector<std::uint32_t> lemmas = lemmas_of(toy.inst);
    DecoderGrads grads;
    grads.reset(toy.params.dec, 3);
    double lp = sampled_logprob(toy.params.dec, 0, lemmas, mu, 2, toy.negatives[2], &grads);
    CHECK(std::isfinite(lp));
    // The shared lemma accumulates both argument contributions into one row.
    CHECK(grads.u.count(lemmas[0]) == 1);
}

} // TEST_SUITE
