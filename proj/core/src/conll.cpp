#include "srli/conll.hpp"

#include <istream>
#include <sstream>

#include "srli/errors.hpp"

namespace srli {

namespace {

// 0-based column positions of the consumed fields.
struct ColumnMap {
    std::size_t form, lemma, pos, head, deprel, pred;
    std::size_t fillpred; // 2009 only; npos otherwise
    std::size_t fixed;    // count of fixed columns before the APRED block
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

ColumnMap column_map(ConllFormat format, SyntaxColumns syntax) {
    if (format == ConllFormat::Conll2008) {
        // ID FORM LEMMA GPOS PPOS SPLIT_FORM SPLIT_LEMMA PPOSS HEAD DEPREL PRED APRED..
        ColumnMap m{1, 2, 3, 8, 9, 10, kNone, 11};
        if (syntax == SyntaxColumns::Predicted) m.pos = 4;
        return m;
    }
    // ID FORM LEMMA PLEMMA POS PPOS FEAT PFEAT HEAD PHEAD DEPREL PDEPREL FILLPRED PRED APRED..
    ColumnMap m{1, 2, 4, 8, 10, 13, 12, 14};
    if (syntax == SyntaxColumns::Predicted) {
        m.lemma = 3;
        m.pos = 5;
        m.head = 9;
        m.deprel = 11;
    }
    return m;
}

std::vector<std::string> split_columns(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t i = 0, n = line.size();
    while (i < n) {
        while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < n && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) cols.emplace_back(line, start, i - start);
    }
    return cols;
}

bool is_blank(const std::string& line) {
    for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

int parse_int(const std::string& s, const char* what, long line) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("cannot parse ") + what + " '" + s + "'", line);
    }
}

void finish_sentence(std::vector<std::vector<std::string>>&& rows, long firstLine,
                     ConllFormat format, SyntaxColumns syntax, Sentence& out) {
    const ColumnMap cm = column_map(format, syntax);
    const std::size_t width = rows.front().size();
    const int n = static_cast<int>(rows.size());

    std::size_t predCount = 0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto& cells = rows[t];
        long line = firstLine + static_cast<long>(t);
        if (cells.size() != width)
            throw ParseError("inconsistent column count (" + std::to_string(cells.size()) +
                                 " vs " + std::to_string(width) + ")",
                             line);
        if (cells.size() < cm.fixed)
            throw ParseError("expected at least " + std::to_string(cm.fixed) + " columns, got " +
                                 std::to_string(cells.size()),
                             line);
        bool isPred = (format == ConllFormat::Conll2008) ? cells[cm.pred] != "_"
                                                         : cells[cm.fillpred] == "Y";
        if (isPred) ++predCount;
    }
    if (width < cm.fixed + predCount)
        throw ParseError("sentence has " + std::to_string(predCount) + " predicates but only " +
                             std::to_string(width - cm.fixed) + " argument columns",
                         firstLine);

    out.tokens.reserve(rows.size());
    out.raw.reserve(rows.size());
    std::size_t extraWidth = width - cm.fixed - predCount;
    if (extraWidth > 0) out.extraColumns.resize(rows.size());

    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto& cells = rows[t];
        long line = firstLine + static_cast<long>(t);
        Token tok;
        tok.index = parse_int(cells[0], "token id", line);
        if (tok.index != static_cast<int>(t) + 1)
            throw ParseError("token ids not contiguous from 1 (got " + cells[0] + ")", line);
        tok.form = cells[cm.form];
        tok.lemma = cells[cm.lemma];
        tok.pos = cells[cm.pos];
        tok.head = parse_int(cells[cm.head], "head", line);
        tok.deprel = cells[cm.deprel];
        if (tok.head < 0 || tok.head > n)
            throw ParseError("head " + std::to_string(tok.head) + " out of range [0, " +
                                 std::to_string(n) + "]",
                             line);
        if (tok.head == tok.index) throw ParseError("token is its own head", line);

        bool isPred = (format == ConllFormat::Conll2008) ? cells[cm.pred] != "_"
                                                         : cells[cm.fillpred] == "Y";
        if (isPred) {
            PredicateMark pm;
            pm.tokenIndex = tok.index;
            pm.sense = cells[cm.pred];
            out.predicates.push_back(std::move(pm));
        }
        if (extraWidth > 0)
            out.extraColumns[t].assign(cells.begin() + static_cast<std::ptrdiff_t>(cm.fixed + predCount),
                                       cells.end());
        out.tokens.push_back(std::move(tok));
        out.raw.push_back(cells);
    }

    // APRED columns, one per predicate in token order.
    for (std::size_t p = 0; p < predCount; ++p) {
        for (std::size_t t = 0; t < rows.size(); ++t) {
            const std::string& cell = rows[t][cm.fixed + p];
            if (cell != "_")
                out.predicates[p].args.emplace_back(static_cast<int>(t) + 1, cell);
        }
    }

    // Reject cyclic head structures: every token must reach the root.
    for (const Token& tok : out.tokens) {
        int cur = tok.head;
        int steps = 0;
        while (cur != 0) {
            cur = out.tokens[static_cast<std::size_t>(cur - 1)].head;
            if (++steps > n) throw ParseError("cyclic dependency structure", firstLine);
        }
    }
}

} // namespace

std::vector<int> Sentence::dependents(int index1) const {
    std::vector<int> out;
    for (const Token& t : tokens)
        if (t.head == index1) out.push_back(t.index);
    return out;
}

std::size_t fixed_column_count(ConllFormat format) {
    return format == ConllFormat::Conll2008 ? 11u : 14u;
}

void for_each_sentence(std::istream& in, ConllFormat format, SyntaxColumns syntax,
                       const std::function<void(Sentence&&)>& fn) {
    std::vector<std::vector<std::string>> rows;
    long lineNo = 0, firstLine = 0;
    std::string line;

    auto flush = [&]() {
        if (rows.empty()) return;
        Sentence s;
        finish_sentence(std::move(rows), firstLine, format, syntax, s);
        rows.clear();
        fn(std::move(s));
    };

    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) {
            flush();
            continue;
        }
        if (rows.empty()) firstLine = lineNo;
        rows.push_back(split_columns(line));
    }
    flush();
}

std::vector<Sentence> parse_conll(std::istream& in, ConllFormat format, SyntaxColumns syntax) {
    std::vector<Sentence> out;
    for_each_sentence(in, format, syntax, [&](Sentence&& s) { out.push_back(std::move(s)); });
    return out;
}

std::string serialize_sentence(const Sentence& s, ConllFormat format) {
    std::ostringstream os;
    const std::size_t fixed = fixed_column_count(format);
    for (const Token& tok : s.tokens) {
        std::vector<std::string> cells(fixed, "_");
        cells[0] = std::to_string(tok.index);
        cells[1] = tok.form;
        if (format == ConllFormat::Conll2008) {
            cells[2] = tok.lemma;
            cells[3] = tok.pos;
            cells[4] = tok.pos;
            cells[8] = std::to_string(tok.head);
            cells[9] = tok.deprel;
        } else {
            cells[2] = tok.lemma;
            cells[3] = tok.lemma;
            cells[4] = tok.pos;
            cells[5] = tok.pos;
            cells[8] = std::to_string(tok.head);
            cells[9] = std::to_string(tok.head);
            cells[10] = tok.deprel;
            cells[11] = tok.deprel;
            cells[12] = "_";
        }
        for (const PredicateMark& pm : s.predicates) {
            if (pm.tokenIndex == tok.index) {
                if (format == ConllFormat::Conll2009) cells[12] = "Y";
                cells[fixed - 1] = pm.sense;
            }
        }
        for (const PredicateMark& pm : s.predicates) {
            std::string cell = "_";
            for (const auto& [argIdx, role] : pm.args)
                if (argIdx == tok.index) cell = role;
            cells.push_back(std::move(cell));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) os << '\t';
            os << cells[c];
        }
        os << '\n';
    }
    return os.str();
}

std::string echo_with_columns(const Sentence& s,
                              const std::vector<std::vector<std::string>>& roleColumns) {
    std::ostringstream os;
    for (std::size_t t = 0; t < s.raw.size(); ++t) {
        const auto& cells = s.raw[t];
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) os << '\t';
            os << cells[c];
        }
        for (const auto& col : roleColumns) os << '\t' << col[t];
        os << '\n';
    }
    return os.str();
}

int lexical_head(const Sentence& s, int tokenIndex) {
    int cur = tokenIndex;
    for (int hop = 0; hop < 3; ++hop) {
        const Token& tok = s.token(cur);
        if (tok.pos != "IN" && tok.pos != "TO") break;
        std::vector<int> deps = s.dependents(cur);
        if (deps.empty()) break;
        cur = deps.back();
    }
    return cur;
}

} // namespace srli
