#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "recbench/cases.hpp"

namespace recbench::corpus {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct Interaction {
    std::string user;
    std::string item;
    int64_t timestamp = 0;
};

using InteractionLog = std::vector<Interaction>;

/// Bijections external id <-> dense index, assigned by first appearance in
/// file order of the retained log. Dense indices are contiguous from 0.
struct Catalog {
    std::vector<std::string> items; // index -> external id
    std::vector<std::string> users;
    std::unordered_map<std::string, ItemIndex> item_to_index;
    std::unordered_map<std::string, int32_t> user_to_index;

    size_t n_items() const { return items.size(); }
    size_t n_users() const { return users.size(); }
};

/// Per-user chronological item-index sequences. Sessions are parallel to
/// Catalog user indices; every session has length >= 3.
struct SessionStore {
    std::vector<std::vector<ItemIndex>> sessions; // [user index] -> items
};

struct SplitDataset {
    std::vector<EvalCase> train_cases;
    std::vector<EvalCase> valid_cases;
    std::vector<EvalCase> test_cases;
    int max_len = 50;
};

struct DatasetStats {
    int64_t n_users = 0;
    int64_t n_items = 0;
    int64_t n_interactions = 0;
    double avg_length = 0.0;   // interactions / users
    double sparsity = 0.0;     // percent, 100 * (1 - inters / (users * items))
};

struct IngestOptions {
    std::string delimiter = "\t"; // may be multi-character, e.g. "::"
    bool has_header = false;
    // 0-based positions of the user, item and timestamp fields in each row.
    int user_col = 0;
    int item_col = 1;
    int time_col = 2;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Parses TSV/CSV rows into interactions. Exact duplicate (user, item,
/// timestamp) triples are dropped, keeping the first occurrence; everything
/// else stays in file order. Throws DataError with the 1-based line number
/// on malformed rows or non-integer timestamps.
InteractionLog ingest(std::istream& source, const IngestOptions& options = {});

/// Iterated k-core: repeatedly removes interactions of users or items with
/// fewer than min_count interactions until none remain. The result is the
/// unique maximal subset closed under the threshold, in original file order.
/// single_pass does exactly one removal round over the initial counts.
InteractionLog k_core_filter(const InteractionLog& log, int min_count = 5,
                             bool single_pass = false);

/// Orders each user's items by timestamp (ties keep file order) and drops
/// users with fewer than 3 interactions. Catalog indices are assigned by
/// first appearance, in file order, over retained users only.
struct SessionsResult {
    SessionStore store;
    Catalog catalog;
};
SessionsResult build_sessions(const InteractionLog& log);

/// Leave-one-out: per session i1..in, test gt = in (prefix = rest), valid
/// gt = i(n-1), train gt = ik for k in [2, max(2, n-2)]. Prefixes keep their
/// most recent max_len items; `last` is the final element of the truncated
/// prefix. Case ids are sequential per split in user-index order.
SplitDataset split_leave_one_out(const SessionStore& store, int max_len = 50);

/// Counts restricted to users retained in the catalog. avg_length is
/// interactions / users; sparsity is a percentage (full precision here,
/// round only for display).
DatasetStats stats(const InteractionLog& log, const Catalog& catalog);

} // namespace recbench::corpus
