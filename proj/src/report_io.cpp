#include "recbench/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "recbench/errors.hpp"

namespace recbench::io {

namespace fs = std::filesystem;
using eval::KMetrics;
using eval::MetricReport;
using nlohmann::ordered_json;

void write_report_json(const fs::path& path, const LabeledReport& labeled) {
    const MetricReport& r = labeled.report;
    ordered_json j;
    j["format"] = "recbench.report";
    j["version"] = 1;
    j["model"] = labeled.label;
    j["masked"] = r.masked;
    j["ks"] = r.ks;
    j["n_eval"] = r.n_eval;
    j["n_gt_equals_last"] = r.n_gt_equals_last;
    ordered_json metrics;
    for (const int k : r.ks) {
        const KMetrics& m = r.per_k.at(k);
        ordered_json mk;
        mk["hit"] = m.hit;
        mk["ndcg"] = m.ndcg;
        mk["hrli"] = m.hrli;
        if (r.masked) {
            mk["hit_star"] = m.hit_star;
            mk["ndcg_star"] = m.ndcg_star;
            mk["hrli_star"] = m.hrli_star;
            mk["improv_hit_pct"] =
                m.improvement_hit_pct ? ordered_json(*m.improvement_hit_pct) : ordered_json();
            mk["improv_ndcg_pct"] =
                m.improvement_ndcg_pct ? ordered_json(*m.improvement_ndcg_pct) : ordered_json();
        }
        metrics[std::to_string(k)] = mk;
    }
    j["metrics"] = metrics;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw DataError("write failed: " + path.string());
}

LabeledReport read_report_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError(path.string() + ": invalid JSON: " + e.what());
    }
    if (j.value("format", "") != "recbench.report") {
        throw DataError(path.string() + ": not a recbench report file");
    }
    LabeledReport labeled;
    labeled.label = j.at("model").get<std::string>();
    MetricReport& r = labeled.report;
    r.masked = j.at("masked").get<bool>();
    r.ks = j.at("ks").get<std::vector<int>>();
    r.n_eval = j.at("n_eval").get<int64_t>();
    r.n_gt_equals_last = j.at("n_gt_equals_last").get<int64_t>();
    for (const int k : r.ks) {
        const auto& mk = j.at("metrics").at(std::to_string(k));
        KMetrics m;
        m.hit = mk.at("hit").get<double>();
        m.ndcg = mk.at("ndcg").get<double>();
        m.hrli = mk.at("hrli").get<double>();
        if (r.masked) {
            m.hit_star = mk.at("hit_star").get<double>();
            m.ndcg_star = mk.at("ndcg_star").get<double>();
            m.hrli_star = mk.at("hrli_star").get<double>();
            if (!mk.at("improv_hit_pct").is_null()) {
                m.improvement_hit_pct = mk.at("improv_hit_pct").get<double>();
            }
            if (!mk.at("improv_ndcg_pct").is_null()) {
                m.improvement_ndcg_pct = mk.at("improv_ndcg_pct").get<double>();
            }
        }
        r.per_k[k] = m;
    }
    return labeled;
}

TableFormat table_format_from_string(const std::string& name) {
    if (name == "tsv") return TableFormat::tsv;
    if (name == "markdown" || name == "md") return TableFormat::markdown;
    if (name == "json") return TableFormat::json;
    throw UsageError("unknown table format '" + name + "' (expected tsv|markdown|json)");
}

namespace {

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

using Row = std::vector<std::string>;

std::string render_rows(const std::vector<Row>& rows, TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::tsv) {
        for (const Row& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i > 0) out << '\t';
                out << row[i];
            }
            out << '\n';
        }
        return out.str();
    }
    // markdown: pad columns for readability
    std::vector<size_t> widths;
    for (const Row& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    auto emit = [&](const Row& row) {
        out << '|';
        for (size_t i = 0; i < widths.size(); ++i) {
            const std::string& cell = i < row.size() ? row[i] : std::string();
            out << ' ' << cell << std::string(widths[i] - cell.size(), ' ') << " |";
        }
        out << '\n';
    };
    emit(rows[0]);
    out << '|';
    for (const size_t w : widths) out << ' ' << std::string(w, '-') << " |";
    out << '\n';
    for (size_t r = 1; r < rows.size(); ++r) emit(rows[r]);
    return out.str();
}

} // namespace

std::string render_table(std::span<const LabeledReport> reports, TableFormat format) {
    if (reports.empty()) throw UsageError("render_table: no reports");
    const std::vector<int>& ks = reports[0].report.ks;
    for (const LabeledReport& lr : reports) {
        if (lr.report.ks != ks) {
            throw DataError("render_table: reports disagree on the K cutoffs");
        }
    }

    if (format == TableFormat::json) {
        ordered_json arr = ordered_json::array();
        for (const LabeledReport& lr : reports) {
            ordered_json j;
            j["model"] = lr.label;
            j["masked"] = lr.report.masked;
            j["n_eval"] = lr.report.n_eval;
            j["n_gt_equals_last"] = lr.report.n_gt_equals_last;
            for (const int k : ks) {
                const KMetrics& m = lr.report.per_k.at(k);
                ordered_json mk;
                mk["hit"] = m.hit;
                mk["ndcg"] = m.ndcg;
                mk["hrli"] = m.hrli;
                if (lr.report.masked) {
                    mk["hit_star"] = m.hit_star;
                    mk["ndcg_star"] = m.ndcg_star;
                    mk["hrli_star"] = m.hrli_star;
                    mk["improv_hit_pct"] = m.improvement_hit_pct
                                               ? ordered_json(*m.improvement_hit_pct)
                                               : ordered_json();
                    mk["improv_ndcg_pct"] = m.improvement_ndcg_pct
                                                ? ordered_json(*m.improvement_ndcg_pct)
                                                : ordered_json();
                }
                j["metrics"][std::to_string(k)] = mk;
            }
            arr.push_back(j);
        }
        return arr.dump(2) + "\n";
    }

    std::vector<Row> rows;
    Row header{"Metric"};
    for (const LabeledReport& lr : reports) header.push_back(lr.label);
    rows.push_back(header);

    auto metric_row = [&](const std::string& name, auto getter) {
        Row row{name};
        for (const LabeledReport& lr : reports) row.push_back(getter(lr));
        rows.push_back(row);
    };

    for (const int k : ks) {
        metric_row("HRLI@" + std::to_string(k), [&](const LabeledReport& lr) {
            return fmt4(lr.report.per_k.at(k).hrli);
        });
    }
    const bool any_masked =
        std::any_of(reports.begin(), reports.end(),
                    [](const LabeledReport& lr) { return lr.report.masked; });
    auto starred_cell = [](const LabeledReport& lr, double v) {
        return lr.report.masked ? fmt4(v) : std::string("-");
    };
    for (const int k : ks) {
        const std::string ks_str = std::to_string(k);
        metric_row("NDCG@" + ks_str, [&](const LabeledReport& lr) {
            return fmt4(lr.report.per_k.at(k).ndcg);
        });
        if (any_masked) {
            metric_row("NDCG*@" + ks_str, [&](const LabeledReport& lr) {
                return starred_cell(lr, lr.report.per_k.at(k).ndcg_star);
            });
            metric_row("Improv.", [&](const LabeledReport& lr) {
                return lr.report.masked
                           ? eval::format_improvement(lr.report.per_k.at(k).improvement_ndcg_pct)
                           : std::string("-");
            });
        }
    }
    for (const int k : ks) {
        const std::string ks_str = std::to_string(k);
        metric_row("Hit@" + ks_str, [&](const LabeledReport& lr) {
            return fmt4(lr.report.per_k.at(k).hit);
        });
        if (any_masked) {
            metric_row("Hit*@" + ks_str, [&](const LabeledReport& lr) {
                return starred_cell(lr, lr.report.per_k.at(k).hit_star);
            });
            metric_row("Improv.", [&](const LabeledReport& lr) {
                return lr.report.masked
                           ? eval::format_improvement(lr.report.per_k.at(k).improvement_hit_pct)
                           : std::string("-");
            });
        }
    }
    metric_row("n_eval", [&](const LabeledReport& lr) {
        return std::to_string(lr.report.n_eval);
    });
    metric_row("n_gt_equals_last", [&](const LabeledReport& lr) {
        return std::to_string(lr.report.n_gt_equals_last);
    });
    return render_rows(rows, format);
}

} // namespace recbench::io
