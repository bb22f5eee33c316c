#ifndef SRLI_FEATURES_HPP
#define SRLI_FEATURES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srli/conll.hpp"

namespace srli {

class StringIndex;

// One feature pattern. Extractors are pure functions of the sentence and the
// (predicate token, argument node token) pair; every emitted string carries
// the template name as prefix so templates cannot collide.
struct FeatureTemplate {
    std::string name;
    std::function<void(const Sentence&, int predTok, int argTok, std::vector<std::string>&)> extract;
};

// The argument-labeling inventory used by the encoder. Template 0 is a
// constant bias feature; templates 1-14:
//   predicate lemma / POS / voice, argument form / lemma / POS (at the
//   lexical head), deprel of the argument node, linear position,
//   position+voice, dependency path and its bucketed length,
//   predicate lemma + deprel, POS of the leftmost / rightmost dependent.
const std::vector<FeatureTemplate>& default_templates();

// Union of all template outputs, sorted and deduplicated.
std::vector<std::string> extract_features(const Sentence& s, int predTok, int argTok,
                                          const std::vector<FeatureTemplate>& templates =
                                              default_templates());

// Maps strings to sorted, deduplicated ids. With frozen=false unseen strings
// are appended to the vocabulary; with frozen=true they are dropped.
std::vector<std::uint32_t> index_features(const std::vector<std::string>& featureStrings,
                                          StringIndex& featureVocab, bool frozen);

// True if the predicate is a passive occurrence: past-participle POS with an
// auxiliary dependent whose lemma is "be" or "get".
bool passive_voice(const Sentence& s, int predTok);

// Dependency path from the argument node to the predicate, e.g. "[up]SBJ" with
// up/down arrows; empty string when argTok == predTok.
std::string dependency_path(const Sentence& s, int predTok, int argTok);

} // namespace srli

#endif
