#include "srli/features.hpp"

#include <algorithm>

#include "srli/corpus.hpp"

namespace srli {

namespace {

std::string lower(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Chain of token indices from tok up to the virtual root 0, inclusive.
std::vector<int> ancestor_chain(const Sentence& s, int tok) {
    std::vector<int> chain{tok};
    int cur = tok;
    while (cur != 0) {
        cur = s.token(cur).head;
        chain.push_back(cur);
    }
    return chain;
}

const char* position_of(int predTok, int argTok) {
    if (argTok < predTok) return "left";
    if (argTok > predTok) return "right";
    return "self";
}

} // namespace

bool passive_voice(const Sentence& s, int predTok) {
    const Token& pred = s.token(predTok);
    if (pred.pos != "VBN") return false;
    for (int dep : s.dependents(predTok)) {
        std::string lemma = lower(s.token(dep).lemma);
        if (lemma == "be" || lemma == "get") return true;
    }
    return false;
}

std::string dependency_path(const Sentence& s, int predTok, int argTok) {
    if (predTok == argTok) return "";
    std::vector<int> up = ancestor_chain(s, argTok);
    std::vector<int> down = ancestor_chain(s, predTok);

    // Lowest common ancestor: trim the shared tail of the two chains.
    std::size_t i = up.size(), j = down.size();
    while (i > 1 && j > 1 && up[i - 2] == down[j - 2]) {
        --i;
        --j;
    }
    // up[0..i-1] ends at the LCA, down likewise.
    std::string path;
    for (std::size_t a = 0; a + 1 < i; ++a) path += "↑" + s.token(up[a]).deprel;
    for (std::size_t b = j - 1; b-- > 0;) path += "↓" + s.token(down[b]).deprel;
    return path;
}

const std::vector<FeatureTemplate>& default_templates() {
    static const std::vector<FeatureTemplate> templates = [] {
        std::vector<FeatureTemplate> t;
        auto add = [&t](std::string name, auto fn) {
            t.push_back({std::move(name), fn});
        };

        add("BIAS", [](const Sentence&, int, int, std::vector<std::string>& out) {
            out.push_back("BIAS");
        });
        add("PRED_LEMMA", [](const Sentence& s, int p, int, std::vector<std::string>& out) {
            out.push_back("PRED_LEMMA=" + s.token(p).lemma);
        });
        add("PRED_POS", [](const Sentence& s, int p, int, std::vector<std::string>& out) {
            out.push_back("PRED_POS=" + s.token(p).pos);
        });
        add("VOICE", [](const Sentence& s, int p, int, std::vector<std::string>& out) {
            out.push_back(passive_voice(s, p) ? "VOICE=passive" : "VOICE=active");
        });
        add("ARG_FORM", [](const Sentence& s, int, int a, std::vector<std::string>& out) {
            out.push_back("ARG_FORM=" + s.token(lexical_head(s, a)).form);
        });
        add("ARG_LEMMA", [](const Sentence& s, int, int a, std::vector<std::string>& out) {
            out.push_back("ARG_LEMMA=" + s.token(lexical_head(s, a)).lemma);
        });
        add("ARG_POS", [](const Sentence& s, int, int a, std::vector<std::string>& out) {
            out.push_back("ARG_POS=" + s.token(lexical_head(s, a)).pos);
        });
        add("DEPREL", [](const Sentence& s, int, int a, std::vector<std::string>& out) {
            out.push_back("DEPREL=" + s.token(a).deprel);
        });
        add("POSITION", [](const Sentence&, int p, int a, std::vector<std::string>& out) {
            out.push_back(std::string("POSITION=") + position_of(p, a));
        });
        add("POS_VOICE", [](const Sentence& s, int p, int a, std::vector<std::string>& out) {
            out.push_back(std::string("POS_VOICE=") + position_of(p, a) + "|" +
                          (passive_voice(s, p) ? "passive" : "active"));
        });
        add("PATH", [](const Sentence& s, int p, int a, std::vector<std::string>& out) {
            std::string path = dependency_path(s, p, a);
            out.push_back(path.empty() ? "PATH=self" : "PATH=" + path);
        });
        add("PATH_LEN", [](const Sentence& s, int p, int a, std::vector<std::string>& out) {
            if (p == a) {
                out.push_back("PATH_LEN=0");
                return;
            }
            std::vector<int> up = ancestor_chain(s, a);
            std::vector<int> down = ancestor_chain(s, p);
            std::size_t i = up.size(), j = down.size();
            while (i > 1 && j > 1 && up[i - 2] == down[j - 2]) {
                --i;
                --j;
            }
            std::size_t len = (i - 1) + (j - 1);
            out.push_back(len >= 4 ? "PATH_LEN=4+" : "PATH_LEN=" + std::to_string(len));
        });
        add("PRED_DEPREL", [](const Sentence& s, int p, int a, std::vector<std::string>& out) {
            out.push_back("PRED_DEPREL=" + s.token(p).lemma + "|" + s.token(a).deprel);
        });
        add("LEFT_POS", [](const Sentence& s, int, int a, std::vector<std::string>& out) {
            std::vector<int> deps = s.dependents(lexical_head(s, a));
            out.push_back(deps.empty() ? "LEFT_POS=NONE"
                                       : "LEFT_POS=" + s.token(deps.front()).pos);
        });
        add("RIGHT_POS", [](const Sentence& s, int, int a, std::vector<std::string>& out) {
            std::vector<int> deps = s.dependents(lexical_head(s, a));
            out.push_back(deps.empty() ? "RIGHT_POS=NONE"
                                       : "RIGHT_POS=" + s.token(deps.back()).pos);
        });
        return t;
    }();
    return templates;
}

std::vector<std::string> extract_features(const Sentence& s, int predTok, int argTok,
                                          const std::vector<FeatureTemplate>& templates) {
    std::vector<std::string> out;
    out.reserve(templates.size());
    for (const FeatureTemplate& t : templates) t.extract(s, predTok, argTok, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint32_t> index_features(const std::vector<std::string>& featureStrings,
                                          StringIndex& featureVocab, bool frozen) {
    std::vector<std::uint32_t> ids;
    ids.reserve(featureStrings.size());
    for (const std::string& f : featureStrings) {
        if (auto id = featureVocab.find(f)) {
            ids.push_back(*id);
        } else if (!frozen) {
            ids.push_back(featureVocab.intern(f));
        }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

} // namespace srli
