#include <doctest.h>

#include <sstream>

#include "srli/errors.hpp"
#include "srli/features.hpp"
#include "test_util.hpp"

using namespace srli;
using namespace srli::test;

namespace {

std::vector<InstanceDraft> drafts_of(const std::string& text,
                                     ConllFormat format = ConllFormat::Conll2008) {
    auto sentences = parse_string(text, format);
    std::vector<InstanceDraft> drafts;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        auto d = draft_instances(sentences[i], static_cast<int>(i));
        drafts.insert(drafts.end(), d.begin(), d.end());
    }
    return drafts;
}

InstanceDraft simple_draft(const std::string& pred, std::vector<std::string> lemmas) {
    InstanceDraft d;
    d.predicateLemma = pred;
    d.predTokenIndex = 1;
    for (std::size_t i = 0; i < lemmas.size(); ++i) {
        ArgumentDraft a;
        a.argNodeIndex = static_cast<int>(i) + 2;
        a.headTokenIndex = a.argNodeIndex;
        a.lemma = std::move(lemmas[i]);
        a.deprel = "X";
        a.goldRole = "A0";
        a.features = {"BIAS"};
        d.args.push_back(std::move(a));
    }
    return d;
}

} // namespace

TEST_SUITE("corpus") {

TEST_CASE("two-token fixture yields one instance with N=1") {
    auto sentences = parse_string(kJohnRuns2008);
    REQUIRE(sentences.size() == 1);
    auto drafts = drafts_of(kJohnRuns2008);
    REQUIRE(drafts.size() == 1);
    CHECK(drafts[0].predicateLemma == "run");
    CHECK(drafts[0].predTokenIndex == 2);
    REQUIRE(drafts[0].args.size() == 1);
    CHECK(drafts[0].args[0].lemma == "john");
    CHECK(drafts[0].args[0].deprel == "SBJ");
    CHECK(drafts[0].args[0].goldRole == "A0");

    Vocabulary vocab = build_vocabulary(drafts, 1);
    auto instances = instances_from_drafts(drafts, vocab, true);
    REQUIRE(instances.size() == 1);
    REQUIRE(instances[0].args.size() == 1);
    CHECK(vocab.argLemmas.text(instances[0].args[0].argLemmaId) == "john");
}

TEST_CASE("non-verb predicates are filtered out") {
    CHECK(drafts_of(kNominal2008).empty());
}

TEST_CASE("all-singleton lemmas collapse to unk under the cutoff") {
    std::vector<InstanceDraft> drafts{simple_draft("see", {"apple", "pear"}),
                                      simple_draft("see", {"plum", "fig"})};
    Vocabulary vocab = build_vocabulary(drafts, 2);
    CHECK(vocab.argLemmas.size() == 1); // just <unk>
    CHECK(vocab.argLemmas.text(vocab.unkId) == kUnkLemma);
    CHECK(vocab.argLemmas.frequency(vocab.unkId) == 4);
    auto instances = instances_from_drafts(drafts, vocab, true);
    for (const auto& inst : instances)
        for (const auto& arg : inst.args) CHECK(arg.argLemmaId == vocab.unkId);
}

TEST_CASE("frequency ordering: higher count wins the lower index") {
    std::vector<InstanceDraft> drafts;
    for (int i = 0; i < 5; ++i) drafts.push_back(simple_draft("see", {"dog"}));
    for (int i = 0; i < 3; ++i) drafts.push_back(simple_draft("see", {"cat"}));
    Vocabulary vocab = build_vocabulary(drafts, 1);
    REQUIRE(vocab.argLemmas.size() == 3);
    CHECK(*vocab.argLemmas.find("dog") < *vocab.argLemmas.find("cat"));
    CHECK(vocab.argLemmas.frequency(*vocab.argLemmas.find("dog")) == 5);
    // Ties break lexicographically.
    std::vector<InstanceDraft> tied{simple_draft("see", {"zebra", "ant"})};
    Vocabulary tiedVocab = build_vocabulary(tied, 1);
    CHECK(*tiedVocab.argLemmas.find("ant") < *tiedVocab.argLemmas.find("zebra"));
}

TEST_CASE("hand-counted vocabulary sizes over a six-instance fixture") {
    std::vector<InstanceDraft> drafts{
        simple_draft("see", {"dog", "cat"}),   simple_draft("see", {"dog", "bone"}),
        simple_draft("chase", {"dog", "cat"}), simple_draft("chase", {"cat"}),
        simple_draft("feed", {"dog"}),         simple_draft("feed", {"cat", "bone"}),
    };
    // Lemma counts: dog 4, cat 4, bone 2. Predicates: see, chase, feed.
    Vocabulary vocab = build_vocabulary(drafts, 2);
    CHECK(vocab.argLemmas.size() == 4); // <unk> + dog, cat, bone
    CHECK(vocab.predicates.size() == 3);
    CHECK(vocab.deprels.size() == 1);
    CHECK(vocab.features.size() == 1);
    CHECK(vocab.argLemmas.frequency(*vocab.argLemmas.find("bone")) == 2);
    // cat before dog on the 4-4 tie.
    CHECK(*vocab.argLemmas.find("cat") < *vocab.argLemmas.find("dog"));

    Vocabulary cut = build_vocabulary(drafts, 3);
    CHECK(cut.argLemmas.size() == 3); // bone collapsed
    CHECK(cut.argLemmas.frequency(cut.unkId) == 2);
}

TEST_CASE("prepositional argument reduces to its lexical head lemma") {
    auto drafts = drafts_of(kCharged2008);
    REQUIRE(drafts.size() == 1);
    REQUIRE(drafts[0].args.size() == 3);
    CHECK(drafts[0].args[2].lemma == "baton");
    CHECK(drafts[0].args[2].argNodeIndex == 6);
    CHECK(drafts[0].args[2].headTokenIndex == 7);
    CHECK(drafts[0].args[2].deprel == "ADV");
}

TEST_CASE("out-of-vocabulary lemma maps to unk") {
    auto drafts = drafts_of(kCharged2008);
    Vocabulary vocab = build_vocabulary(drafts, 1);
    auto unseen = drafts_of(kJohnRuns2008);
    auto instances = instances_from_drafts(unseen, vocab, true);
    REQUIRE(instances.size() == 1);
    CHECK(instances[0].args[0].argLemmaId == vocab.unkId);
    CHECK(instances[0].predicateId == kNoId); // "run" unseen
}

TEST_CASE("feature ids match an independent hand computation") {
    auto drafts = drafts_of(kCharged2008);
    Vocabulary vocab = build_vocabulary(drafts, 1);
    auto instances = instances_from_drafts(drafts, vocab, true);
    REQUIRE(instances.size() == 1);

    // Hand-derived strings for the subject argument (see features_test).
    std::vector<std::string> expected{
        "ARG_FORM=police", "ARG_LEMMA=police", "ARG_POS=NN", "BIAS", "DEPREL=SBJ",
        "LEFT_POS=DT", "PATH=↑SBJ", "PATH_LEN=1", "POSITION=left", "POS_VOICE=left|active",
        "PRED_DEPREL=charge|SBJ", "PRED_LEMMA=charge", "PRED_POS=VBD", "RIGHT_POS=DT",
        "VOICE=active",
    };
    std::vector<std::uint32_t> expectedIds;
    for (const auto& f : expected) {
        auto id = vocab.features.find(f);
        REQUIRE(id.has_value());
        expectedIds.push_back(*id);
    }
    std::sort(expectedIds.begin(), expectedIds.end());
    CHECK(instances[0].args[0].featureIds == expectedIds);
}

TEST_CASE("extraction is deterministic") {
    auto sentences = parse_string(kCharged2008);
    auto drafts = drafts_of(kCharged2008);
    Vocabulary v1 = build_vocabulary(drafts, 1);
    Vocabulary v2 = build_vocabulary(drafts, 1);
    auto a = extract_instances(sentences, v1, true);
    auto b = extract_instances(sentences, v2, true);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].predicateId == b[i].predicateId);
        REQUIRE(a[i].args.size() == b[i].args.size());
        for (std::size_t j = 0; j < a[i].args.size(); ++j) {
            CHECK(a[i].args[j].argLemmaId == b[i].args[j].argLemmaId);
            CHECK(a[i].args[j].featureIds == b[i].args[j].featureIds);
            CHECK(a[i].args[j].goldRole == b[i].args[j].goldRole);
        }
    }
}

TEST_CASE("vocabulary file round trip") {
    auto drafts = drafts_of(kCharged2008);
    Vocabulary vocab = build_vocabulary(drafts, 1);
    std::ostringstream out;
    save_vocabulary(vocab.features, "features", out);

    std::istringstream in(out.str());
    std::string kind;
    StringIndex loaded = load_vocabulary(in, &kind);
    CHECK(kind == "features");
    REQUIRE(loaded.size() == vocab.features.size());
    for (std::uint32_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded.text(i) == vocab.features.text(i));
        CHECK(loaded.frequency(i) == vocab.features.frequency(i));
        // string -> id -> string identity
        CHECK(*loaded.find(loaded.text(i)) == i);
    }
    std::istringstream garbage("no header here\n");
    CHECK_THROWS_AS(load_vocabulary(garbage), ParseError);
}

TEST_CASE("gold roles are copied through untouched") {
    auto drafts = drafts_of(kCharged2008);
    Vocabulary vocab = build_vocabulary(drafts, 1);
    auto instances = instances_from_drafts(drafts, vocab, true);
    CHECK(instances[0].args[0].goldRole == "A0");
    CHECK(instances[0].args[1].goldRole == "A1");
    CHECK(instances[0].args[2].goldRole == "AM-MNR");
}

} // TEST_SUITE
