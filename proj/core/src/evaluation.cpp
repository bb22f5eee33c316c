#include "srli/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "srli/errors.hpp"

namespace srli {

double harmonic_f1(double purity, double collocation) {
    if (purity + collocation == 0.0) return 0.0;
    return 2.0 * purity * collocation / (purity + collocation);
}

ClusterEvaluation evaluate_clustering(const std::vector<LabeledArgument>& args) {
    struct Counts {
        std::map<std::pair<std::uint32_t, std::string>, std::uint64_t> joint;
        std::uint64_t total = 0;
    };
    std::map<std::string, Counts> byPredicate;
    for (const LabeledArgument& a : args) {
        if (a.goldRole.empty())
            throw EvaluationError("argument of predicate '" + a.predicate + "' has no gold role");
        Counts& c = byPredicate[a.predicate];
        ++c.joint[{a.cluster, a.goldRole}];
        ++c.total;
    }

    ClusterEvaluation eval;
    std::uint64_t puSum = 0, coSum = 0, total = 0;
    for (const auto& [predicate, counts] : byPredicate) {
        std::map<std::uint32_t, std::uint64_t> clusterMax;
        std::map<std::string, std::uint64_t> goldMax;
        for (const auto& [key, n] : counts.joint) {
            const auto& [cluster, gold] = key;
            clusterMax[cluster] = std::max(clusterMax[cluster], n);
            goldMax[gold] = std::max(goldMax[gold], n);
        }
        std::uint64_t pu = 0, co = 0;
        for (const auto& [cluster, n] : clusterMax) pu += n;
        for (const auto& [gold, n] : goldMax) co += n;

        ClusterEvaluation::PredicateScores scores;
        scores.purity = 100.0 * static_cast<double>(pu) / static_cast<double>(counts.total);
        scores.collocation = 100.0 * static_cast<double>(co) / static_cast<double>(counts.total);
        scores.argCount = counts.total;
        eval.perPredicate.emplace(predicate, scores);

        puSum += pu;
        coSum += co;
        total += counts.total;
    }
    if (total == 0) throw EvaluationError("nothing to evaluate");
    eval.purity = 100.0 * static_cast<double>(puSum) / static_cast<double>(total);
    eval.collocation = 100.0 * static_cast<double>(coSum) / static_cast<double>(total);
    eval.f1 = harmonic_f1(eval.purity, eval.collocation);
    return eval;
}

std::vector<std::vector<std::uint32_t>> syntf_baseline(const std::vector<PredicateInstance>& corpus,
                                                       const StringIndex& deprels) {
    // Relation frequencies over the evaluated arguments themselves.
    std::map<std::uint32_t, std::uint64_t> freq;
    for (const PredicateInstance& inst : corpus)
        for (const ArgumentInstance& arg : inst.args)
            if (arg.deprelId != kNoId) ++freq[arg.deprelId];

    std::vector<std::pair<std::uint32_t, std::uint64_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return deprels.text(a.first) < deprels.text(b.first);
    });

    std::map<std::uint32_t, std::uint32_t> clusterOf;
    for (std::uint32_t rank = 0; rank < ranked.size() && rank < kSyntfClusters; ++rank)
        clusterOf[ranked[rank].first] = rank;

    std::vector<std::vector<std::uint32_t>> out(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        out[i].resize(corpus[i].args.size(), kSyntfClusters);
        for (std::size_t j = 0; j < corpus[i].args.size(); ++j) {
            auto it = clusterOf.find(corpus[i].args[j].deprelId);
            if (it != clusterOf.end()) out[i][j] = it->second;
        }
    }
    return out;
}

std::vector<Sentence> generate_synthetic(const SyntheticSpec& spec) {
    if (spec.numRoles < 2) throw ConfigError("synthetic spec needs at least 2 roles");
    if (spec.numPredicates < 1) throw ConfigError("synthetic spec needs at least 1 predicate");
    if (spec.lemmasPerRole < 1) throw ConfigError("synthetic spec needs at least 1 lemma per role");
    if (spec.noiseRate < 0.0 || spec.noiseRate >= 1.0)
        throw ConfigError("noiseRate must be in [0, 1)");
    if (spec.cueAccuracy < 0.0 || spec.cueAccuracy > 1.0)
        throw ConfigError("cueAccuracy must be in [0, 1]");

    Rng rng(spec.seed);
    const int maxArgs = std::min(4, spec.numRoles);

    std::vector<Sentence> out;
    out.reserve(static_cast<std::size_t>(spec.instances));
    std::vector<int> roleOrder(static_cast<std::size_t>(spec.numRoles));
    for (int r = 0; r < spec.numRoles; ++r) roleOrder[static_cast<std::size_t>(r)] = r;

    for (int i = 0; i < spec.instances; ++i) {
        int pred = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.numPredicates)));
        int numArgs = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(maxArgs - 1)));
        rng.shuffle(roleOrder);

        Sentence s;
        Token predTok;
        predTok.index = 1;
        predTok.lemma = "pred" + std::to_string(pred);
        predTok.form = predTok.lemma + "s";
        predTok.pos = "VBZ";
        predTok.head = 0;
        predTok.deprel = "ROOT";
        s.tokens.push_back(predTok);

        PredicateMark pm;
        pm.tokenIndex = 1;
        pm.sense = predTok.lemma + ".01";

        for (int a = 0; a < numArgs; ++a) {
            int role = roleOrder[static_cast<std::size_t>(a)];
            int pool = (rng.uniform01() < spec.noiseRate)
                           ? static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.numRoles)))
                           : role;
            int word = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.lemmasPerRole)));
            int cue = (rng.uniform01() < spec.cueAccuracy)
                          ? role
                          : static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.numRoles)));

            Token tok;
            tok.index = a + 2;
            tok.lemma = "w" + std::to_string(pool) + "_" + std::to_string(word);
            tok.form = tok.lemma;
            tok.pos = "NN";
            tok.head = 1;
            tok.deprel = "rel" + std::to_string(cue);
            s.tokens.push_back(tok);
            pm.args.emplace_back(tok.index, "R" + std::to_string(role));
        }
        s.predicates.push_back(std::move(pm));
        out.push_back(std::move(s));
    }
    return out;
}

ReportRow make_report_row(std::string system, double purity, double collocation) {
    ReportRow row;
    row.system = std::move(system);
    row.purity = purity;
    row.collocation = collocation;
    row.f1 = harmonic_f1(purity, collocation);
    return row;
}

ReportRow make_report_row(std::string system, const ClusterEvaluation& eval) {
    return make_report_row(std::move(system), eval.purity, eval.collocation);
}

std::string format_report_text(const std::vector<ReportRow>& rows) {
    std::size_t nameWidth = 6;
    for (const ReportRow& r : rows) nameWidth = std::max(nameWidth, r.system.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(nameWidth) + 2) << "system" << std::right
       << std::setw(7) << "PU" << std::setw(7) << "CO" << std::setw(7) << "F1" << '\n';
    os << std::fixed << std::setprecision(1);
    for (const ReportRow& r : rows)
        os << std::left << std::setw(static_cast<int>(nameWidth) + 2) << r.system << std::right
           << std::setw(7) << r.purity << std::setw(7) << r.collocation << std::setw(7) << r.f1
           << '\n';
    return os.str();
}

std::string format_report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "system,purity,collocation,f1\n";
    os << std::fixed << std::setprecision(1);
    for (const ReportRow& r : rows)
        os << r.system << ',' << r.purity << ',' << r.collocation << ',' << r.f1 << '\n';
    return os.str();
}

} // namespace srli
