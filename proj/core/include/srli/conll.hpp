#ifndef SRLI_CONLL_HPP
#define SRLI_CONLL_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace srli {

enum class ConllFormat { Conll2008, Conll2009 };
enum class SyntaxColumns { Gold, Predicted };

struct Token {
    int index = 0; // 1-based position in the sentence
    std::string form;
    std::string lemma;
    std::string pos;
    int head = 0; // 0 = root
    std::string deprel;
};

// One PRED-marked token plus the arguments read off its APRED column.
struct PredicateMark {
    int tokenIndex = 0;
    std::string sense;                              // PRED column cell
    std::vector<std::pair<int, std::string>> args;  // (argument token index, role label)
};

struct Sentence {
    std::vector<Token> tokens;
    std::vector<PredicateMark> predicates; // ordered by token index
    // Original cells per token, kept so labeled output can echo the input.
    std::vector<std::vector<std::string>> raw;
    // Cells beyond the format's fixed + APRED columns (e.g. a previously
    // appended induced-role block), aligned per token.
    std::vector<std::vector<std::string>> extraColumns;

    const Token& token(int index1) const { return tokens[static_cast<std::size_t>(index1 - 1)]; }
    // Dependents of token index1 in surface order (1-based indices).
    std::vector<int> dependents(int index1) const;
};

// Reads blank-line separated column sentences. Throws ParseError on malformed
// rows, dangling or cyclic heads, and non-contiguous token ids.
std::vector<Sentence> parse_conll(std::istream& in, ConllFormat format,
                                  SyntaxColumns syntax = SyntaxColumns::Gold);

void for_each_sentence(std::istream& in, ConllFormat format, SyntaxColumns syntax,
                       const std::function<void(Sentence&&)>& fn);

// Canonical column serialization of the consumed fields. Lemma/POS/head/deprel
// are written to both the gold and predicted slots; unconsumed columns get "_".
std::string serialize_sentence(const Sentence& s, ConllFormat format);

// Echoes the original cells and appends one column per predicate.
// roleColumns[p][t] is the cell for predicate p at token t (0-based).
std::string echo_with_columns(const Sentence& s,
                              const std::vector<std::vector<std::string>>& roleColumns);

// Number of fixed (non-APRED) columns for the format.
std::size_t fixed_column_count(ConllFormat format);

// Lexical head of the argument rooted at tokenIndex: descends from a
// preposition to its rightmost dependent so that e.g. "with batons" yields
// "batons" rather than "with".
int lexical_head(const Sentence& s, int tokenIndex);

} // namespace srli

#endif
