#ifndef SRLI_EVALUATION_HPP
#define SRLI_EVALUATION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srli/corpus.hpp"
#include "srli/rng.hpp"

namespace srli {

// One evaluated argument: which predicate it belongs to, its gold role label
// and the induced cluster id.
struct LabeledArgument {
    std::string predicate;
    std::string goldRole;
    std::uint32_t cluster = 0;
};

struct ClusterEvaluation {
    double purity = 0.0;      // percent
    double collocation = 0.0; // percent
    double f1 = 0.0;          // percent, harmonic mean of the corpus-level PU/CO

    struct PredicateScores {
        double purity = 0.0;
        double collocation = 0.0;
        std::uint64_t argCount = 0;
    };
    std::map<std::string, PredicateScores> perPredicate;
};

double harmonic_f1(double purity, double collocation);

// Purity and collocation per predicate, micro-averaged over argument counts.
// Throws EvaluationError when an argument has an empty gold role.
ClusterEvaluation evaluate_clustering(const std::vector<LabeledArgument>& args);

// Number of dedicated SyntF clusters; relations beyond the top 20 share one
// catch-all cluster with id kSyntfClusters.
inline constexpr std::uint32_t kSyntfClusters = 20;

// Clusters arguments by the dependency relation of their argument node: one
// cluster per top-20 relation by corpus frequency (ties lexicographic), one
// catch-all. Returns one cluster id per argument, aligned with `corpus`.
std::vector<std::vector<std::uint32_t>> syntf_baseline(const std::vector<PredicateInstance>& corpus,
                                                       const StringIndex& deprels);

// Synthetic corpus: each role owns a disjoint lemma pool, instances draw 2-4
// distinct roles, each argument's lemma comes from its role's pool with
// probability 1-noiseRate (else uniform over all pools) and its dependency
// relation names the role with probability cueAccuracy (else uniform over all
// role relations).
struct SyntheticSpec {
    int numRoles = 3;
    int numPredicates = 30;
    int lemmasPerRole = 50;
    double noiseRate = 0.1;
    double cueAccuracy = 0.75;
    int instances = 1000;
    std::uint64_t seed = 1;
};

std::vector<Sentence> generate_synthetic(const SyntheticSpec& spec);

struct ReportRow {
    std::string system;
    double purity = 0.0;
    double collocation = 0.0;
    double f1 = 0.0;
};

ReportRow make_report_row(std::string system, double purity, double collocation);
ReportRow make_report_row(std::string system, const ClusterEvaluation& eval);

// One row per system, PU/CO/F1 fixed to one decimal place.
std::string format_report_text(const std::vector<ReportRow>& rows);
// CSV: system,purity,collocation,f1
std::string format_report_csv(const std::vector<ReportRow>& rows);

} // namespace srli

#endif
