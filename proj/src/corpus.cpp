#include "recbench/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "recbench/errors.hpp"

namespace recbench::corpus {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, std::string_view delimiter) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        const size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + delimiter.size();
    }
    return fields;
}

int64_t parse_timestamp(std::string_view field, size_t line_no) {
    int64_t value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": non-integer timestamp '" +
                        std::string(field) + "'");
    }
    return value;
}

std::string triple_key(const Interaction& rec) {
    // \x1f cannot appear in ids read from a delimited line.
    return rec.user + '\x1f' + rec.item + '\x1f' + std::to_string(rec.timestamp);
}

} // namespace

InteractionLog ingest(std::istream& source, const IngestOptions& options) {
    if (options.delimiter.empty()) throw UsageError("ingest: delimiter must be nonempty");
    InteractionLog log;
    std::string line;
    size_t line_no = 0;
    const int max_col = std::max({options.user_col, options.item_col, options.time_col});
    bool skip_header = options.has_header;

    std::unordered_set<std::string> seen;

    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skip_header) {
            skip_header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_fields(line, options.delimiter);
        if (static_cast<int>(fields.size()) <= max_col) {
            throw DataError("line " + std::to_string(line_no) + ": expected at least " +
                            std::to_string(max_col + 1) + " fields, got " +
                            std::to_string(fields.size()));
        }
        Interaction rec;
        rec.user = std::string(fields[static_cast<size_t>(options.user_col)]);
        rec.item = std::string(fields[static_cast<size_t>(options.item_col)]);
        rec.timestamp = parse_timestamp(fields[static_cast<size_t>(options.time_col)], line_no);
        if (rec.user.empty() || rec.item.empty()) {
            throw DataError("line " + std::to_string(line_no) + ": empty user or item id");
        }
        if (seen.insert(triple_key(rec)).second) {
            log.push_back(std::move(rec));
        }
    }
    return log;
}

InteractionLog k_core_filter(const InteractionLog& log, int min_count, bool single_pass) {
    if (min_count < 1) throw UsageError("k_core_filter: min_count must be >= 1");
    InteractionLog current = log;
    for (;;) {
        std::unordered_map<std::string, int> user_counts;
        std::unordered_map<std::string, int> item_counts;
        for (const auto& rec : current) {
            ++user_counts[rec.user];
            ++item_counts[rec.item];
        }
        InteractionLog next;
        next.reserve(current.size());
        for (auto& rec : current) {
            if (user_counts[rec.user] >= min_count && item_counts[rec.item] >= min_count) {
                next.push_back(std::move(rec));
            }
        }
        const bool changed = next.size() != current.size();
        current = std::move(next);
        if (!changed || single_pass) break;
    }
    return current;
}

SessionsResult build_sessions(const InteractionLog& log) {
    // First pass: count interactions per user to know who survives.
    std::unordered_map<std::string, int> user_counts;
    for (const auto& rec : log) ++user_counts[rec.user];

    SessionsResult result;
    Catalog& catalog = result.catalog;

    struct Entry {
        int64_t timestamp;
        size_t file_order;
        ItemIndex item;
    };
    std::vector<std::vector<Entry>> per_user;

    for (size_t pos = 0; pos < log.size(); ++pos) {
        const auto& rec = log[pos];
        if (user_counts[rec.user] < 3) continue;

        auto [user_it, user_inserted] =
            catalog.user_to_index.try_emplace(rec.user, static_cast<int32_t>(catalog.users.size()));
        if (user_inserted) {
            catalog.users.push_back(rec.user);
            per_user.emplace_back();
        }
        auto [item_it, item_inserted] =
            catalog.item_to_index.try_emplace(rec.item, static_cast<ItemIndex>(catalog.items.size()));
        if (item_inserted) catalog.items.push_back(rec.item);

        per_user[static_cast<size_t>(user_it->second)].push_back(
            Entry{rec.timestamp, pos, item_it->second});
    }

    result.store.sessions.resize(per_user.size());
    for (size_t u = 0; u < per_user.size(); ++u) {
        auto& entries = per_user[u];
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
            return a.file_order < b.file_order;
        });
        auto& session = result.store.sessions[u];
        session.reserve(entries.size());
        for (const auto& e : entries) session.push_back(e.item);
    }
    return result;
}

namespace {

EvalCase make_case(int64_t case_id, const std::vector<ItemIndex>& session,
                   size_t gt_pos, int max_len) {
    EvalCase c;
    c.case_id = case_id;
    const size_t prefix_len = gt_pos; // items [0, gt_pos)
    const size_t keep = std::min(prefix_len, static_cast<size_t>(max_len));
    c.prefix.assign(session.begin() + static_cast<long>(prefix_len - keep),
                    session.begin() + static_cast<long>(prefix_len));
    c.gt = session[gt_pos];
    c.last = c.prefix.back();
    return c;
}

} // namespace

SplitDataset split_leave_one_out(const SessionStore& store, int max_len) {
    if (max_len < 1) throw UsageError("split_leave_one_out: max_len must be >= 1");
    SplitDataset split;
    split.max_len = max_len;
    int64_t train_id = 0, valid_id = 0, test_id = 0;
    for (const auto& session : store.sessions) {
        const size_t n = session.size();
        if (n < 3) continue; // build_sessions already dropped these
        split.test_cases.push_back(make_case(test_id++, session, n - 1, max_len));
        split.valid_cases.push_back(make_case(valid_id++, session, n - 2, max_len));
        // Targets i_k for k in [2, max(2, n-2)], 1-based; a length-3 session
        // still contributes its single (i1 -> i2) pair.
        const size_t k_hi = std::max<size_t>(2, n - 2);
        for (size_t k = 2; k <= k_hi; ++k) {
            split.train_cases.push_back(make_case(train_id++, session, k - 1, max_len));
        }
    }
    return split;
}

DatasetStats stats(const InteractionLog& log, const Catalog& catalog) {
    if (log.empty()) throw DataError("stats: empty interaction log");
    DatasetStats s;
    s.n_users = static_cast<int64_t>(catalog.n_users());
    s.n_items = static_cast<int64_t>(catalog.n_items());
    for (const auto& rec : log) {
        if (catalog.user_to_index.contains(rec.user)) ++s.n_interactions;
    }
    if (s.n_users > 0) {
        s.avg_length = static_cast<double>(s.n_interactions) / static_cast<double>(s.n_users);
        s.sparsity = 100.0 * (1.0 - static_cast<double>(s.n_interactions) /
                                        (static_cast<double>(s.n_users) *
                                         static_cast<double>(s.n_items)));
        // Repeat consumption can push raw density past 1; keep the percentage
        // inside [0, 100].
        s.sparsity = std::clamp(s.sparsity, 0.0, 100.0);
    }
    return s;
}

} // namespace recbench::corpus
