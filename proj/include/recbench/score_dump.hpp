#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <vector>

#include "recbench/cases.hpp"
#include "recbench/eval.hpp"

namespace recbench::io {

// Model-agnostic interchange: any system able to emit per-case relevance
// scores (or a ranked top-M list) over the dense catalog can be audited for
// recency bias without shipping its parameters.

struct ScoreDumpHeader {
    enum class Mode { scores, topm };
    int catalog_size = 0;
    Mode mode = Mode::scores;
    int m = 0; // top-M list length, topm mode only
    int64_t n_cases = 0;
};

struct ScoreDumpRow {
    int64_t case_id = 0;
    ItemIndex gt = 0;
    ItemIndex last = 0;
    std::vector<float> scores;     // scores mode
    std::vector<ItemIndex> ranked; // topm mode, best first
};

struct ScoreDump {
    ScoreDumpHeader header;
    std::vector<ScoreDumpRow> rows;
};

/// Streaming writer; one append per eval case, in case order.
class ScoreDumpWriter {
public:
    ScoreDumpWriter(const std::filesystem::path& path, const ScoreDumpHeader& header);
    void append(const EvalCase& c, std::span<const float> scores);
    void finish();

private:
    std::ofstream out_;
    std::filesystem::path path_;
    ScoreDumpHeader header_;
    int64_t written_ = 0;
};

ScoreDump read_score_dump(const std::filesystem::path& path);

/// First M items of the deterministic total order (score desc, index asc);
/// agrees with rank_of: item is in the list iff its rank <= M.
std::vector<ItemIndex> top_m_items(std::span<const float> scores, int m);

/// Metric computation from a dump. For scores mode this is bit-identical to
/// evaluating the producing scorer directly. For topm mode the masked pass
/// deletes the last item from each ranked list (rank-shift identity); a GT
/// absent from the list counts as a miss. When `expected_cases` is given the
/// dump must align with it row by row (case_id, gt, last).
eval::MetricReport evaluate_dump(const ScoreDump& dump, const eval::RankingConfig& config,
                                 const std::vector<EvalCase>* expected_cases = nullptr);

} // namespace recbench::io
