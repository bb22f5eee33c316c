#include <doctest.h>

#include <algorithm>

#include "srli/corpus.hpp"
#include "srli/features.hpp"
#include "test_util.hpp"

using namespace srli;
using namespace srli::test;

namespace {

bool contains(const std::vector<std::string>& feats, const std::string& f) {
    return std::find(feats.begin(), feats.end(), f) != feats.end();
}

} // namespace

TEST_SUITE("features") {

TEST_CASE("argument left of predicate gets POSITION=left") {
    auto s = parse_string(kJohnRuns2008)[0];
    auto feats = extract_features(s, 2, 1);
    CHECK(contains(feats, "POSITION=left"));
}

TEST_CASE("fixture subject carries DEPREL and ARG_LEMMA") {
    auto s = parse_string(kCharged2008)[0];
    auto feats = extract_features(s, 3, 2);
    CHECK(contains(feats, "DEPREL=SBJ"));
    CHECK(contains(feats, "ARG_LEMMA=police"));
}

TEST_CASE("direct dependent has a length-1 upward path") {
    auto s = parse_string(kCharged2008)[0];
    auto feats = extract_features(s, 3, 2);
    CHECK(contains(feats, "PATH=↑SBJ"));
    CHECK(contains(feats, "PATH_LEN=1"));
}

TEST_CASE("full hand-computed template output for the fixture subject") {
    auto s = parse_string(kCharged2008)[0];
    std::vector<std::string> expected{
        "ARG_FORM=police", "ARG_LEMMA=police",     "ARG_POS=NN",
        "BIAS",            "DEPREL=SBJ",           "LEFT_POS=DT",
        "PATH=↑SBJ",       "PATH_LEN=1",           "POSITION=left",
        "POS_VOICE=left|active",                   "PRED_DEPREL=charge|SBJ",
        "PRED_LEMMA=charge", "PRED_POS=VBD",       "RIGHT_POS=DT",
        "VOICE=active",
    };
    std::sort(expected.begin(), expected.end());
    CHECK(extract_features(s, 3, 2) == expected);
}

TEST_CASE("prepositional argument is represented by its lexical head") {
    auto s = parse_string(kCharged2008)[0];
    auto feats = extract_features(s, 3, 6); // "with" node
    CHECK(contains(feats, "ARG_LEMMA=baton"));
    CHECK(contains(feats, "ARG_FORM=batons"));
    CHECK(contains(feats, "ARG_POS=NNS"));
    // Relation and path stay those of the argument node itself.
    CHECK(contains(feats, "DEPREL=ADV"));
    CHECK(contains(feats, "PATH=↑ADV"));
    CHECK(contains(feats, "LEFT_POS=NONE"));
    CHECK(contains(feats, "RIGHT_POS=NONE"));
}

TEST_CASE("voice detection") {
    auto passive = parse_string(kPassive2008)[0];
    CHECK(passive_voice(passive, 4));
    auto feats = extract_features(passive, 4, 2);
    CHECK(contains(feats, "VOICE=passive"));
    CHECK(contains(feats, "POS_VOICE=left|passive"));

    auto active = parse_string(kCharged2008)[0];
    CHECK_FALSE(passive_voice(active, 3)); // VBD, no aux

    // VBN but the dependent lemma is not be/get.
    std::string text =
        "1 having have VBG VBG _ _ _ 2 AUX _ _\n"
        "2 charged charge VBN VBN _ _ _ 0 ROOT charge.02 _\n";
    CHECK_FALSE(passive_voice(parse_string(text)[0], 2));
}

TEST_CASE("dependency path walks up and down") {
    auto s = parse_string(kCharged2008)[0];
    // batons(7) as predicate side, police(2) as argument side:
    // 2 -SBJ-> 3 <-ADV- 6 <-PMOD- 7
    CHECK(dependency_path(s, 7, 2) == "↑SBJ↓ADV↓PMOD");
    CHECK(dependency_path(s, 3, 7) == "↑PMOD↑ADV");
    CHECK(dependency_path(s, 3, 3).empty());
}

TEST_CASE("extraction is deterministic and order-free") {
    auto s = parse_string(kCharged2008)[0];
    auto a = extract_features(s, 3, 6);
    auto b = extract_features(s, 3, 6);
    CHECK(a == b);
    CHECK(std::is_sorted(a.begin(), a.end()));
}

TEST_CASE("index_features basics") {
    StringIndex vocab;
    CHECK(index_features({}, vocab, false).empty());

    auto ids = index_features({"X=1", "X=1"}, vocab, false);
    CHECK(ids == std::vector<std::uint32_t>{0}); // duplicates collapse

    SUBCASE("frozen vocabulary never grows and drops unseen strings") {
        std::uint32_t before = vocab.size();
        auto frozenIds = index_features({"X=1", "Y=2"}, vocab, true);
        CHECK(vocab.size() == before);
        CHECK(frozenIds == std::vector<std::uint32_t>{0});
    }

    SUBCASE("growing mode appends and returns sorted unique ids") {
        auto grown = index_features({"Z=3", "X=1", "Y=2"}, vocab, false);
        CHECK(std::is_sorted(grown.begin(), grown.end()));
        CHECK(grown.size() == 3);
        for (std::uint32_t id : grown) CHECK(id < vocab.size());
    }
}

TEST_CASE("every produced id is below the vocabulary size") {
    auto s = parse_string(kCharged2008)[0];
    StringIndex vocab;
    for (int arg : {2, 5, 6}) {
        auto ids = index_features(extract_features(s, 3, arg), vocab, false);
        for (std::uint32_t id : ids) CHECK(id < vocab.size());
        CHECK(std::is_sorted(ids.begin(), ids.end()));
    }
}

} // TEST_SUITE
