#include "recbench/score_dump.hpp"

#include <algorithm>
#include <cstring>

#include <json.hpp>

#include "recbench/errors.hpp"
#include "recbench/version.hpp"

namespace recbench::io {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_u64(std::ostream& out, uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

uint64_t read_u64(std::istream& in, const fs::path& path) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw DataError(path.string() + ": truncated dump");
    }
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes[i]) << (8 * i);
    return v;
}

void write_u32(std::ostream& out, uint32_t v) {
    unsigned char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

uint32_t read_u32(std::istream& in, const fs::path& path) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw DataError(path.string() + ": truncated dump row");
    }
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[i]) << (8 * i);
    return v;
}

} // namespace

std::vector<ItemIndex> top_m_items(std::span<const float> scores, int m) {
    std::vector<ItemIndex> order(scores.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<ItemIndex>(i);
    const size_t keep = std::min(order.size(), static_cast<size_t>(m));
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(keep), order.end(),
                      [&](ItemIndex a, ItemIndex b) {
                          const float sa = scores[static_cast<size_t>(a)];
                          const float sb = scores[static_cast<size_t>(b)];
                          if (sa != sb) return sa > sb;
                          return a < b;
                      });
    order.resize(keep);
    return order;
}

ScoreDumpWriter::ScoreDumpWriter(const fs::path& path, const ScoreDumpHeader& header)
    : out_(path, std::ios::binary), path_(path), header_(header) {
    if (!out_) throw DataError("cannot open for writing: " + path.string());
    if (header.catalog_size < 1) throw UsageError("score dump: catalog_size must be >= 1");
    if (header.mode == ScoreDumpHeader::Mode::topm &&
        (header.m < 1 || header.m > header.catalog_size)) {
        throw UsageError("score dump: top-M length must be in [1, catalog_size]");
    }
    out_ << kMagicScoreDump << "\n";
    ordered_json j;
    j["catalog_size"] = header.catalog_size;
    j["mode"] = header.mode == ScoreDumpHeader::Mode::scores ? "scores" : "topm";
    j["m"] = header.m;
    j["n_cases"] = header.n_cases;
    const std::string s = j.dump();
    write_u64(out_, s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void ScoreDumpWriter::append(const EvalCase& c, std::span<const float> scores) {
    if (static_cast<int>(scores.size()) != header_.catalog_size) {
        throw DataError("score dump: score vector length mismatch on case " +
                        std::to_string(c.case_id));
    }
    write_u64(out_, static_cast<uint64_t>(c.case_id));
    write_u32(out_, static_cast<uint32_t>(c.gt));
    write_u32(out_, static_cast<uint32_t>(c.last));
    if (header_.mode == ScoreDumpHeader::Mode::scores) {
        static_assert(sizeof(float) == 4);
        out_.write(reinterpret_cast<const char*>(scores.data()),
                   static_cast<std::streamsize>(scores.size() * 4));
    } else {
        const std::vector<ItemIndex> ranked = top_m_items(scores, header_.m);
        for (const ItemIndex item : ranked) write_u32(out_, static_cast<uint32_t>(item));
    }
    ++written_;
}

void ScoreDumpWriter::finish() {
    if (written_ != header_.n_cases) {
        throw DataError("score dump: wrote " + std::to_string(written_) + " rows, header says " +
                        std::to_string(header_.n_cases));
    }
    out_.flush();
    if (!out_) throw DataError("write failed: " + path_.string());
    out_.close();
}

ScoreDump read_score_dump(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path.string());
    std::string magic;
    if (!std::getline(in, magic) || magic != kMagicScoreDump) {
        throw DataError(path.string() + ": not a recbench score dump (bad magic line)");
    }
    const uint64_t header_len = read_u64(in, path);
    std::string header_str(header_len, '\0');
    if (!in.read(header_str.data(), static_cast<std::streamsize>(header_len))) {
        throw DataError(path.string() + ": truncated dump header");
    }
    ordered_json j;
    try {
        j = ordered_json::parse(header_str);
    } catch (const std::exception& e) {
        throw DataError(path.string() + ": invalid dump header JSON: " + e.what());
    }
    ScoreDump dump;
    dump.header.catalog_size = j.at("catalog_size").get<int>();
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "scores") {
        dump.header.mode = ScoreDumpHeader::Mode::scores;
    } else if (mode == "topm") {
        dump.header.mode = ScoreDumpHeader::Mode::topm;
    } else {
        throw DataError(path.string() + ": unknown dump mode '" + mode + "'");
    }
    dump.header.m = j.at("m").get<int>();
    dump.header.n_cases = j.at("n_cases").get<int64_t>();

    for (int64_t row_idx = 0; row_idx < dump.header.n_cases; ++row_idx) {
        ScoreDumpRow row;
        row.case_id = static_cast<int64_t>(read_u64(in, path));
        row.gt = static_cast<ItemIndex>(read_u32(in, path));
        row.last = static_cast<ItemIndex>(read_u32(in, path));
        if (row.gt < 0 || row.gt >= dump.header.catalog_size || row.last < 0 ||
            row.last >= dump.header.catalog_size) {
            throw DataError(path.string() + ": row " + std::to_string(row_idx) +
                            " has gt/last outside the catalog");
        }
        if (dump.header.mode == ScoreDumpHeader::Mode::scores) {
            row.scores.resize(static_cast<size_t>(dump.header.catalog_size));
            if (!in.read(reinterpret_cast<char*>(row.scores.data()),
                         static_cast<std::streamsize>(row.scores.size() * 4))) {
                throw DataError(path.string() + ": truncated scores at row " +
                                std::to_string(row_idx));
            }
        } else {
            row.ranked.resize(static_cast<size_t>(dump.header.m));
            for (ItemIndex& item : row.ranked) {
                item = static_cast<ItemIndex>(read_u32(in, path));
            }
        }
        dump.rows.push_back(std::move(row));
    }
    return dump;
}

namespace {

int64_t position_in_list(const std::vector<ItemIndex>& ranked, ItemIndex item) {
    for (size_t i = 0; i < ranked.size(); ++i) {
        if (ranked[i] == item) return static_cast<int64_t>(i) + 1;
    }
    return eval::kRankMiss;
}

/// Position after deleting `removed` from the list; items behind it move up.
int64_t position_after_delete(const std::vector<ItemIndex>& ranked, ItemIndex item,
                              ItemIndex removed) {
    int64_t pos = 0;
    for (const ItemIndex candidate : ranked) {
        if (candidate == removed) continue;
        ++pos;
        if (candidate == item) return pos;
    }
    return eval::kRankMiss;
}

} // namespace

eval::MetricReport evaluate_dump(const ScoreDump& dump, const eval::RankingConfig& config,
                                 const std::vector<EvalCase>* expected_cases) {
    if (dump.rows.empty()) throw DataError("evaluate_dump: empty dump");
    if (config.mask_history && dump.header.mode == ScoreDumpHeader::Mode::topm) {
        throw UsageError("evaluate_dump: history masking is not possible on top-M dumps");
    }
    if (config.mask_history && expected_cases == nullptr) {
        throw UsageError("evaluate_dump: history masking needs dataset prefixes");
    }
    int max_k = 1;
    for (const int k : config.ks) max_k = std::max(max_k, k);
    if (dump.header.mode == ScoreDumpHeader::Mode::topm && dump.header.m < max_k + 1) {
        throw UsageError("evaluate_dump: top-M dump needs M >= max(K)+1, have M=" +
                         std::to_string(dump.header.m) + " for K=" + std::to_string(max_k));
    }
    if (expected_cases != nullptr) {
        if (expected_cases->size() != dump.rows.size()) {
            throw DataError("evaluate_dump: dump has " + std::to_string(dump.rows.size()) +
                            " rows but the dataset split has " +
                            std::to_string(expected_cases->size()) + " cases");
        }
        for (size_t i = 0; i < dump.rows.size(); ++i) {
            const EvalCase& c = (*expected_cases)[i];
            const ScoreDumpRow& r = dump.rows[i];
            if (c.case_id != r.case_id || c.gt != r.gt || c.last != r.last) {
                throw DataError("evaluate_dump: dump row " + std::to_string(i) +
                                " does not match the dataset case");
            }
        }
    }

    std::vector<eval::RankedResult> results;
    results.reserve(dump.rows.size());
    for (const ScoreDumpRow& row : dump.rows) {
        eval::RankedResult r;
        r.gt_equals_last = row.gt == row.last;
        if (dump.header.mode == ScoreDumpHeader::Mode::scores) {
            eval::ScoreVector scores = row.scores;
            if (config.mask_history && expected_cases != nullptr) {
                const EvalCase& c = (*expected_cases)[results.size()];
                for (const ItemIndex item : c.prefix) eval::mask_last_in_place(scores, item);
            }
            EvalCase shim;
            shim.case_id = row.case_id;
            shim.gt = row.gt;
            shim.last = row.last;
            r = eval::rank_case(scores, shim, config.mask_last);
        } else {
            r.rank_gt = position_in_list(row.ranked, row.gt);
            r.rank_last = position_in_list(row.ranked, row.last);
            if (config.mask_last) {
                r.rank_gt_star = row.gt == row.last
                                     ? eval::kRankMiss
                                     : position_after_delete(row.ranked, row.gt, row.last);
                r.rank_last_star = eval::kRankMiss;
            }
        }
        results.push_back(r);
    }
    return eval::aggregate(results, config);
}

} // namespace recbench::io
