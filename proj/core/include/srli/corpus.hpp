#ifndef SRLI_CORPUS_HPP
#define SRLI_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "srli/conll.hpp"

namespace srli {

inline constexpr std::uint32_t kNoId = 0xffffffffu;
inline constexpr const char* kUnkLemma = "<unk>";

// Bidirectional string <-> dense index map with raw frequency counts.
class StringIndex {
public:
    // Inserts s (or bumps its count) and returns its id.
    std::uint32_t intern(std::string_view s, std::uint64_t count = 1);
    std::optional<std::uint32_t> find(std::string_view s) const;
    const std::string& text(std::uint32_t id) const { return texts_[id]; }
    std::uint64_t frequency(std::uint32_t id) const { return counts_[id]; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(texts_.size()); }
    bool empty() const { return texts_.empty(); }

    // Reassigns dense ids sorted by descending frequency, ties lexicographic.
    void finalize_by_frequency();

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };
    std::vector<std::string> texts_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> map_;
};

// One line per entry: <index>\t<string>\t<count>, preceded by a header line
// naming the vocabulary kind.
void save_vocabulary(const StringIndex& v, std::string_view kind, std::ostream& out);
StringIndex load_vocabulary(std::istream& in, std::string* kind = nullptr);

struct Vocabulary {
    StringIndex argLemmas; // index 0 reserved for <unk>
    StringIndex features;
    StringIndex predicates;
    StringIndex deprels;
    std::uint32_t unkId = 0;

    std::uint32_t lemma_id_or_unk(std::string_view lemma) const {
        auto id = argLemmas.find(lemma);
        return id ? *id : unkId;
    }
};

struct ArgumentInstance {
    int headTokenIndex = 0;               // lexical head (post preposition descent)
    int argNodeIndex = 0;                 // the APRED-marked token
    std::uint32_t argLemmaId = 0;
    std::vector<std::uint32_t> featureIds; // strictly increasing
    std::uint32_t deprelId = kNoId;        // deprel of the marked token
    std::string goldRole;                  // evaluation only, never read in training
};

struct PredicateInstance {
    std::uint32_t predicateId = kNoId;
    std::string predicateLemma;
    std::vector<ArgumentInstance> args; // N >= 1
    int sentenceId = -1;
    int predTokenIndex = 0;
};

// Pre-vocabulary instance carrying strings; the unit build_vocabulary counts.
struct ArgumentDraft {
    int argNodeIndex = 0;
    int headTokenIndex = 0;
    std::string lemma;
    std::string deprel;
    std::string goldRole;
    std::vector<std::string> features; // sorted unique
};

struct InstanceDraft {
    std::string predicateLemma;
    int predTokenIndex = 0;
    int sentenceId = -1;
    std::vector<ArgumentDraft> args;
};

// Applies the verbal-predicate filter (POS starting with 'V'), reduces each
// marked argument to its lexical head and extracts features. Predicates with
// no arguments yield no draft; arguments whose lexical heads collide keep the
// leftmost argument node only.
std::vector<InstanceDraft> draft_instances(const Sentence& s, int sentenceId);

// Deterministic vocabularies: ids sorted by descending frequency, ties
// lexicographic; argument lemmas below minLemmaFreq collapse to <unk> at
// index 0.
Vocabulary build_vocabulary(const std::vector<InstanceDraft>& drafts, std::uint64_t minLemmaFreq);

// Draft -> instance conversion. With frozenFeatures=false unseen feature
// strings grow the vocabulary; with true they are dropped. Out-of-vocabulary
// lemmas map to <unk>; unknown predicates and deprels get kNoId.
std::vector<PredicateInstance> instances_from_drafts(const std::vector<InstanceDraft>& drafts,
                                                     Vocabulary& vocab, bool frozenFeatures);

std::vector<PredicateInstance> extract_instances(const std::vector<Sentence>& sentences,
                                                 Vocabulary& vocab, bool frozenFeatures);

} // namespace srli

#endif
