#include "srli/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "srli/errors.hpp"
#include "srli/features.hpp"

namespace srli {

std::uint32_t StringIndex::intern(std::string_view s, std::uint64_t count) {
    auto it = map_.find(s);
    if (it != map_.end()) {
        counts_[it->second] += count;
        return it->second;
    }
    std::uint32_t id = static_cast<std::uint32_t>(texts_.size());
    texts_.emplace_back(s);
    counts_.push_back(count);
    map_.emplace(texts_.back(), id);
    return id;
}

std::optional<std::uint32_t> StringIndex::find(std::string_view s) const {
    auto it = map_.find(s);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void StringIndex::finalize_by_frequency() {
    std::vector<std::uint32_t> order(texts_.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [this](std::uint32_t a, std::uint32_t b) {
        if (counts_[a] != counts_[b]) return counts_[a] > counts_[b];
        return texts_[a] < texts_[b];
    });
    std::vector<std::string> texts(texts_.size());
    std::vector<std::uint64_t> counts(counts_.size());
    for (std::uint32_t newId = 0; newId < order.size(); ++newId) {
        texts[newId] = std::move(texts_[order[newId]]);
        counts[newId] = counts_[order[newId]];
    }
    texts_ = std::move(texts);
    counts_ = std::move(counts);
    map_.clear();
    for (std::uint32_t i = 0; i < texts_.size(); ++i) map_.emplace(texts_[i], i);
}

void save_vocabulary(const StringIndex& v, std::string_view kind, std::ostream& out) {
    out << "#vocabulary\t" << kind << '\t' << v.size() << '\n';
    for (std::uint32_t i = 0; i < v.size(); ++i)
        out << i << '\t' << v.text(i) << '\t' << v.frequency(i) << '\n';
}

StringIndex load_vocabulary(std::istream& in, std::string* kind) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty vocabulary file");
    std::istringstream header(line);
    std::string tag, kindStr;
    std::uint64_t n = 0;
    if (!(header >> tag >> kindStr >> n) || tag != "#vocabulary")
        throw ParseError("missing vocabulary header");
    if (kind) *kind = kindStr;

    StringIndex v;
    long lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = line.rfind('\t');
        if (t1 == std::string::npos || t2 == t1)
            throw ParseError("expected <index>\\t<string>\\t<count>", lineNo);
        std::uint32_t idx = static_cast<std::uint32_t>(std::stoul(line.substr(0, t1)));
        std::string text = line.substr(t1 + 1, t2 - t1 - 1);
        std::uint64_t count = std::stoull(line.substr(t2 + 1));
        std::uint32_t got = v.intern(text, count);
        if (got != idx) throw ParseError("vocabulary indices not dense", lineNo);
    }
    if (v.size() != n)
        throw ParseError("vocabulary entry count " + std::to_string(v.size()) +
                         " does not match header " + std::to_string(n));
    return v;
}

std::vector<InstanceDraft> draft_instances(const Sentence& s, int sentenceId) {
    std::vector<InstanceDraft> out;
    for (const PredicateMark& pm : s.predicates) {
        const Token& pred = s.token(pm.tokenIndex);
        if (pred.pos.empty() || pred.pos[0] != 'V') continue; // verbal predicates only
        if (pm.args.empty()) continue;

        InstanceDraft draft;
        draft.predicateLemma = pred.lemma;
        draft.predTokenIndex = pm.tokenIndex;
        draft.sentenceId = sentenceId;

        std::vector<int> seenHeads;
        for (const auto& [argTok, role] : pm.args) {
            int head = lexical_head(s, argTok);
            if (std::find(seenHeads.begin(), seenHeads.end(), head) != seenHeads.end())
                continue;
            seenHeads.push_back(head);

            ArgumentDraft arg;
            arg.argNodeIndex = argTok;
            arg.headTokenIndex = head;
            arg.lemma = s.token(head).lemma;
            arg.deprel = s.token(argTok).deprel;
            arg.goldRole = role;
            arg.features = extract_features(s, pm.tokenIndex, argTok);
            draft.args.push_back(std::move(arg));
        }
        if (!draft.args.empty()) out.push_back(std::move(draft));
    }
    return out;
}

Vocabulary build_vocabulary(const std::vector<InstanceDraft>& drafts, std::uint64_t minLemmaFreq) {
    std::map<std::string, std::uint64_t> lemmaCounts;
    Vocabulary vocab;
    for (const InstanceDraft& d : drafts) {
        vocab.predicates.intern(d.predicateLemma);
        for (const ArgumentDraft& a : d.args) {
            ++lemmaCounts[a.lemma];
            vocab.deprels.intern(a.deprel);
            for (const std::string& f : a.features) vocab.features.intern(f);
        }
    }
    vocab.features.finalize_by_frequency();
    vocab.predicates.finalize_by_frequency();
    vocab.deprels.finalize_by_frequency();

    // <unk> is pinned at index 0 and absorbs everything under the cutoff.
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    std::uint64_t collapsed = 0;
    for (const auto& [lemma, count] : lemmaCounts) {
        if (count >= minLemmaFreq)
            kept.emplace_back(lemma, count);
        else
            collapsed += count;
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    vocab.unkId = vocab.argLemmas.intern(kUnkLemma, collapsed);
    for (const auto& [lemma, count] : kept) vocab.argLemmas.intern(lemma, count);
    return vocab;
}

std::vector<PredicateInstance> instances_from_drafts(const std::vector<InstanceDraft>& drafts,
                                                     Vocabulary& vocab, bool frozenFeatures) {
    std::vector<PredicateInstance> out;
    out.reserve(drafts.size());
    for (const InstanceDraft& d : drafts) {
        PredicateInstance inst;
        inst.predicateLemma = d.predicateLemma;
        inst.predTokenIndex = d.predTokenIndex;
        inst.sentenceId = d.sentenceId;
        auto predId = vocab.predicates.find(d.predicateLemma);
        inst.predicateId = predId ? *predId : kNoId;
        for (const ArgumentDraft& a : d.args) {
            ArgumentInstance arg;
            arg.argNodeIndex = a.argNodeIndex;
            arg.headTokenIndex = a.headTokenIndex;
            arg.argLemmaId = vocab.lemma_id_or_unk(a.lemma);
            auto deprelId = vocab.deprels.find(a.deprel);
            arg.deprelId = deprelId ? *deprelId : kNoId;
            arg.goldRole = a.goldRole;
            arg.featureIds = index_features(a.features, vocab.features, frozenFeatures);
            inst.args.push_back(std::move(arg));
        }
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<PredicateInstance> extract_instances(const std::vector<Sentence>& sentences,
                                                 Vocabulary& vocab, bool frozenFeatures) {
    std::vector<PredicateInstance> out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        auto drafts = draft_instances(sentences[i], static_cast<int>(i));
        auto converted = instances_from_drafts(drafts, vocab, frozenFeatures);
        for (auto& inst : converted) out.push_back(std::move(inst));
    }
    return out;
}

} // namespace srli
