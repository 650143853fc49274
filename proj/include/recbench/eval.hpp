#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recbench/cases.hpp"

namespace recbench::eval {

using ScoreVector = std::vector<float>;

// ---------------------------------------------------------------------------
// Configuration & results
// ---------------------------------------------------------------------------

struct RankingConfig {
    std::vector<int> ks = {5, 10};
    bool mask_last = false;
    // When set, cases with gt == last are left out of every aggregate
    // (their count is still reported).
    bool exclude_gt_equals_last = false;
    // Off by default and excluded from acceptance runs: HRLI needs the last
    // item to stay a candidate. When on, every prefix item is masked out.
    bool mask_history = false;
};

/// Ranks are 1-based positions in the deterministic total order
/// (higher score first, ties by ascending item index).
inline constexpr int64_t kRankMiss = INT64_MAX / 2; // item absent from a top-M list

struct RankedResult {
    int64_t rank_gt = 0;
    int64_t rank_last = 0;
    // Populated when the masking intervention ran.
    int64_t rank_gt_star = 0;
    int64_t rank_last_star = 0;
    bool gt_equals_last = false;
};

struct KMetrics {
    double hit = 0.0;
    double ndcg = 0.0;
    double hrli = 0.0;
    double hit_star = 0.0;
    double ndcg_star = 0.0;
    double hrli_star = 0.0;
    // improvement_pct(base, starred); undefined when base == 0 < starred.
    std::optional<double> improvement_hit_pct;
    std::optional<double> improvement_ndcg_pct;
};

struct MetricReport {
    std::vector<int> ks;
    std::map<int, KMetrics> per_k;
    int64_t n_eval = 0;           // cases aggregated
    int64_t n_gt_equals_last = 0; // among input cases, before any exclusion
    bool masked = false;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// 1 + |{j : s[j] > s[item]}| + |{j : s[j] == s[item] && j < item}|.
int64_t rank_of(std::span<const float> scores, ItemIndex item);

/// Copy with scores[last] replaced by the sentinel that compares below every
/// finite score. Idempotent.
ScoreVector mask_last(const ScoreVector& scores, ItemIndex last);
void mask_last_in_place(ScoreVector& scores, ItemIndex last);

inline int hit_at_k(int64_t rank, int k) { return rank <= k ? 1 : 0; }

/// Single-relevant-item NDCG (IDCG = 1): 1/log2(1+rank) inside the cutoff.
double ndcg_at_k(int64_t rank, int k);

/// rank_gt / rank_last for one score vector; when with_mask is set, also the
/// post-intervention ranks.
RankedResult rank_case(const ScoreVector& scores, const EvalCase& c, bool with_mask);

/// Order-invariant aggregation: metrics are recovered from rank histograms so
/// permuting the results changes nothing, bit for bit.
MetricReport aggregate(std::span<const RankedResult> results, const RankingConfig& config);

/// Full pipeline: score each case, rank, aggregate. Scorer failures are
/// rethrown with the offending case_id.
using ScoreFn = std::function<ScoreVector(const EvalCase&)>;
MetricReport evaluate(const ScoreFn& scorer, std::span<const EvalCase> cases,
                      const RankingConfig& config);

/// 100 * (starred - base) / base; 0 when both are 0; nullopt (error flag)
/// when base == 0 and starred > 0.
std::optional<double> improvement_pct(double base, double starred);

/// Rendering used by reports: sign always shown, two decimals, e.g. "+43.02%".
std::string format_improvement(const std::optional<double>& pct);

} // namespace recbench::eval
