#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "recbench/eval.hpp"

namespace recbench::io {

struct LabeledReport {
    std::string label; // model name shown as the column header
    eval::MetricReport report;
};

void write_report_json(const std::filesystem::path& path, const LabeledReport& report);
LabeledReport read_report_json(const std::filesystem::path& path);

enum class TableFormat { tsv, markdown, json };
TableFormat table_format_from_string(const std::string& name);

/// Comparison table: one column per model; an HRLI row per K, then per-K
/// blocks of NDCG / NDCG* / Improv., then Hit / Hit* / Improv., and the
/// audit counts. All reports must share the same ks.
std::string render_table(std::span<const LabeledReport> reports, TableFormat format);

} // namespace recbench::io
