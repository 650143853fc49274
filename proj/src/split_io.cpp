#include "recbench/split_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "recbench/errors.hpp"
#include "recbench/version.hpp"

namespace recbench::io {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path.string());
    return in;
}

void expect_magic(std::istream& in, const std::string& magic, const fs::path& path) {
    std::string line;
    if (!std::getline(in, line) || line != magic) {
        throw DataError(path.string() + ": missing or wrong magic header (expected '" + magic +
                        "')");
    }
}

int64_t parse_int(std::string_view field, const fs::path& path, size_t line_no) {
    int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw DataError(path.string() + " line " + std::to_string(line_no) +
                        ": expected integer, got '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

void write_cases_file(const fs::path& path, const std::vector<EvalCase>& cases) {
    std::ofstream out = open_out(path);
    out << kMagicCases << "\n";
    for (const EvalCase& c : cases) {
        out << c.case_id << '\t';
        for (size_t i = 0; i < c.prefix.size(); ++i) {
            if (i > 0) out << ',';
            out << c.prefix[i];
        }
        out << '\t' << c.gt << '\t' << c.last << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

std::vector<EvalCase> read_cases_file(const fs::path& path) {
    std::ifstream in = open_in(path);
    expect_magic(in, kMagicCases, path);
    std::vector<EvalCase> cases;
    std::string line;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        EvalCase c;
        size_t start = 0;
        std::vector<std::string_view> cols;
        const std::string_view view(line);
        while (cols.size() < 4) {
            const size_t tab = view.find('\t', start);
            if (tab == std::string_view::npos) {
                cols.push_back(view.substr(start));
                break;
            }
            cols.push_back(view.substr(start, tab - start));
            start = tab + 1;
        }
        if (cols.size() != 4) {
            throw DataError(path.string() + " line " + std::to_string(line_no) +
                            ": expected 4 tab-separated fields");
        }
        c.case_id = parse_int(cols[0], path, line_no);
        size_t item_start = 0;
        const std::string_view prefix_field = cols[1];
        while (item_start <= prefix_field.size() && !prefix_field.empty()) {
            const size_t comma = prefix_field.find(',', item_start);
            const std::string_view tok =
                comma == std::string_view::npos
                    ? prefix_field.substr(item_start)
                    : prefix_field.substr(item_start, comma - item_start);
            c.prefix.push_back(static_cast<ItemIndex>(parse_int(tok, path, line_no)));
            if (comma == std::string_view::npos) break;
            item_start = comma + 1;
        }
        c.gt = static_cast<ItemIndex>(parse_int(cols[2], path, line_no));
        c.last = static_cast<ItemIndex>(parse_int(cols[3], path, line_no));
        if (c.prefix.empty()) {
            throw DataError(path.string() + " line " + std::to_string(line_no) +
                            ": empty prefix");
        }
        if (c.prefix.back() != c.last) {
            throw DataError(path.string() + " line " + std::to_string(line_no) +
                            ": last does not match the final prefix element");
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

void write_split_dir(const fs::path& dir, const corpus::SplitDataset& split,
                     const corpus::Catalog& catalog, const corpus::DatasetStats& stats) {
    fs::create_directories(dir);
    write_cases_file(dir / "train.tsv", split.train_cases);
    write_cases_file(dir / "valid.tsv", split.valid_cases);
    write_cases_file(dir / "test.tsv", split.test_cases);

    {
        std::ofstream out = open_out(dir / "catalog.tsv");
        out << kMagicCatalog << "\n";
        for (size_t i = 0; i < catalog.items.size(); ++i) {
            out << "item\t" << catalog.items[i] << '\t' << i << '\n';
        }
        for (size_t u = 0; u < catalog.users.size(); ++u) {
            out << "user\t" << catalog.users[u] << '\t' << u << '\n';
        }
        if (!out) throw DataError("write failed: " + (dir / "catalog.tsv").string());
    }

    {
        ordered_json j;
        j["format"] = "recbench.stats";
        j["version"] = 1;
        j["n_users"] = stats.n_users;
        j["n_items"] = stats.n_items;
        j["n_interactions"] = stats.n_interactions;
        j["avg_length"] = stats.avg_length;
        j["sparsity_pct"] = stats.sparsity;
        char display[32];
        std::snprintf(display, sizeof(display), "%.2f", stats.sparsity);
        j["sparsity_display"] = display;
        std::snprintf(display, sizeof(display), "%.2f", stats.avg_length);
        j["avg_length_display"] = display;
        j["max_len"] = split.max_len;
        std::ofstream out = open_out(dir / "stats.json");
        out << j.dump(2) << "\n";
    }
}

LoadedDataset read_split_dir(const fs::path& dir) {
    LoadedDataset ds;
    ds.split.train_cases = read_cases_file(dir / "train.tsv");
    ds.split.valid_cases = read_cases_file(dir / "valid.tsv");
    ds.split.test_cases = read_cases_file(dir / "test.tsv");

    {
        const fs::path path = dir / "catalog.tsv";
        std::ifstream in = open_in(path);
        expect_magic(in, kMagicCatalog, path);
        std::string line;
        size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const size_t tab1 = line.find('\t');
            const size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                          : line.find('\t', tab1 + 1);
            if (tab2 == std::string::npos) {
                throw DataError(path.string() + " line " + std::to_string(line_no) +
                                ": expected 3 fields");
            }
            const std::string kind = line.substr(0, tab1);
            const std::string ext = line.substr(tab1 + 1, tab2 - tab1 - 1);
            const int64_t idx = parse_int(line.substr(tab2 + 1), path, line_no);
            if (kind == "item") {
                if (static_cast<size_t>(idx) != ds.catalog.items.size()) {
                    throw DataError(path.string() + ": item indices out of order at line " +
                                    std::to_string(line_no));
                }
                ds.catalog.items.push_back(ext);
                ds.catalog.item_to_index[ext] = static_cast<ItemIndex>(idx);
            } else if (kind == "user") {
                if (static_cast<size_t>(idx) != ds.catalog.users.size()) {
                    throw DataError(path.string() + ": user indices out of order at line " +
                                    std::to_string(line_no));
                }
                ds.catalog.users.push_back(ext);
                ds.catalog.user_to_index[ext] = static_cast<int32_t>(idx);
            } else {
                throw DataError(path.string() + " line " + std::to_string(line_no) +
                                ": unknown row kind '" + kind + "'");
            }
        }
    }

    {
        const fs::path path = dir / "stats.json";
        std::ifstream in = open_in(path);
        ordered_json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw DataError(path.string() + ": invalid JSON: " + e.what());
        }
        if (j.value("format", "") != "recbench.stats") {
            throw DataError(path.string() + ": not a recbench stats file");
        }
        ds.stats.n_users = j.at("n_users").get<int64_t>();
        ds.stats.n_items = j.at("n_items").get<int64_t>();
        ds.stats.n_interactions = j.at("n_interactions").get<int64_t>();
        ds.stats.avg_length = j.at("avg_length").get<double>();
        ds.stats.sparsity = j.at("sparsity_pct").get<double>();
        ds.split.max_len = j.at("max_len").get<int>();
    }

    // Every case index must resolve inside the catalog before anything ranks.
    const auto n_items = static_cast<ItemIndex>(ds.catalog.items.size());
    auto check_cases = [&](const std::vector<EvalCase>& cases, const char* name) {
        for (const EvalCase& c : cases) {
            bool ok = c.gt >= 0 && c.gt < n_items;
            for (const ItemIndex item : c.prefix) ok = ok && item >= 0 && item < n_items;
            if (!ok) {
                throw DataError(dir.string() + "/" + name + ": case " +
                                std::to_string(c.case_id) + " has item indices outside the " +
                                std::to_string(n_items) + "-item catalog");
            }
        }
    };
    check_cases(ds.split.train_cases, "train.tsv");
    check_cases(ds.split.valid_cases, "valid.tsv");
    check_cases(ds.split.test_cases, "test.tsv");
    return ds;
}

} // namespace recbench::io
