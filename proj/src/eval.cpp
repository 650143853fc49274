#include "recbench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "recbench/errors.hpp"

namespace recbench::eval {

namespace {
constexpr float kSentinel = -std::numeric_limits<float>::infinity();
}

int64_t rank_of(std::span<const float> scores, ItemIndex item) {
    const float s = scores[static_cast<size_t>(item)];
    int64_t rank = 1;
    for (size_t j = 0; j < scores.size(); ++j) {
        if (scores[j] > s) {
            ++rank;
        } else if (scores[j] == s && static_cast<ItemIndex>(j) < item) {
            ++rank;
        }
    }
    return rank;
}

void mask_last_in_place(ScoreVector& scores, ItemIndex last) {
    scores[static_cast<size_t>(last)] = kSentinel;
}

ScoreVector mask_last(const ScoreVector& scores, ItemIndex last) {
    ScoreVector masked = scores;
    mask_last_in_place(masked, last);
    return masked;
}

double ndcg_at_k(int64_t rank, int k) {
    if (rank > k) return 0.0;
    return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

RankedResult rank_case(const ScoreVector& scores, const EvalCase& c, bool with_mask) {
    RankedResult r;
    r.gt_equals_last = (c.gt == c.last);
    r.rank_gt = rank_of(scores, c.gt);
    r.rank_last = rank_of(scores, c.last);
    if (with_mask) {
        ScoreVector masked = mask_last(scores, c.last);
        r.rank_gt_star = rank_of(masked, c.gt);
        r.rank_last_star = rank_of(masked, c.last);
    }
    return r;
}

namespace {

// Histogram of ranks clipped past the largest cutoff. Summing weights in
// fixed rank order makes every aggregate independent of case order.
struct RankHistogram {
    int max_k;
    std::vector<int64_t> counts; // rank r in [1, max_k] -> counts[r]; misses dropped

    explicit RankHistogram(int k) : max_k(k), counts(static_cast<size_t>(k) + 1, 0) {}

    void add(int64_t rank) {
        if (rank <= max_k) ++counts[static_cast<size_t>(rank)];
    }
    double hit_rate(int k, int64_t n) const {
        int64_t hits = 0;
        for (int r = 1; r <= k; ++r) hits += counts[static_cast<size_t>(r)];
        return n > 0 ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
    }
    double ndcg(int k, int64_t n) const {
        double sum = 0.0;
        for (int r = 1; r <= k; ++r) {
            if (counts[static_cast<size_t>(r)] == 0) continue;
            sum += static_cast<double>(counts[static_cast<size_t>(r)]) * ndcg_at_k(r, k);
        }
        return n > 0 ? sum / static_cast<double>(n) : 0.0;
    }
};

} // namespace

MetricReport aggregate(std::span<const RankedResult> results, const RankingConfig& config) {
    if (config.ks.empty()) throw UsageError("aggregate: at least one K required");
    for (const int k : config.ks) {
        if (k < 1) throw UsageError("aggregate: every K must be >= 1");
    }
    MetricReport report;
    report.ks = config.ks;
    std::sort(report.ks.begin(), report.ks.end());
    report.ks.erase(std::unique(report.ks.begin(), report.ks.end()), report.ks.end());
    report.masked = config.mask_last;

    const int max_k = report.ks.back();
    RankHistogram gt_hist(max_k), last_hist(max_k), gt_star_hist(max_k), last_star_hist(max_k);

    for (const RankedResult& r : results) {
        if (r.gt_equals_last) ++report.n_gt_equals_last;
        if (config.exclude_gt_equals_last && r.gt_equals_last) continue;
        ++report.n_eval;
        gt_hist.add(r.rank_gt);
        last_hist.add(r.rank_last);
        if (config.mask_last) {
            gt_star_hist.add(r.rank_gt_star);
            last_star_hist.add(r.rank_last_star);
        }
    }
    if (report.n_eval == 0) throw DataError("aggregate: no cases to evaluate");

    for (const int k : report.ks) {
        KMetrics m;
        m.hit = gt_hist.hit_rate(k, report.n_eval);
        m.ndcg = gt_hist.ndcg(k, report.n_eval);
        m.hrli = last_hist.hit_rate(k, report.n_eval);
        if (config.mask_last) {
            m.hit_star = gt_star_hist.hit_rate(k, report.n_eval);
            m.ndcg_star = gt_star_hist.ndcg(k, report.n_eval);
            m.hrli_star = last_star_hist.hit_rate(k, report.n_eval);
            m.improvement_hit_pct = improvement_pct(m.hit, m.hit_star);
            m.improvement_ndcg_pct = improvement_pct(m.ndcg, m.ndcg_star);
        }
        report.per_k[k] = m;
    }
    return report;
}

MetricReport evaluate(const ScoreFn& scorer, std::span<const EvalCase> cases,
                      const RankingConfig& config) {
    if (cases.empty()) throw DataError("evaluate: empty case list");
    std::vector<RankedResult> results;
    results.reserve(cases.size());
    for (const EvalCase& c : cases) {
        ScoreVector scores;
        try {
            scores = scorer(c);
        } catch (const std::exception& e) {
            throw DataError("evaluate: scorer failed on case " + std::to_string(c.case_id) +
                            ": " + e.what());
        }
        if (config.mask_history) {
            for (const ItemIndex it : c.prefix) mask_last_in_place(scores, it);
        }
        results.push_back(rank_case(scores, c, config.mask_last));
    }
    return aggregate(results, config);
}

std::optional<double> improvement_pct(double base, double starred) {
    if (base < 0.0) throw UsageError("improvement_pct: base must be >= 0");
    if (base == 0.0) {
        if (starred == 0.0) return 0.0;
        return std::nullopt; // undefined relative improvement
    }
    return 100.0 * (starred - base) / base;
}

std::string format_improvement(const std::optional<double>& pct) {
    if (!pct.has_value()) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.2f%%", *pct);
    return buf;
}

} // namespace recbench::eval
