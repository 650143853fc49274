#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "recbench/corpus.hpp"
#include "recbench/errors.hpp"
#include "recbench/rng.hpp"
#include "recbench/split_io.hpp"

#include "oracles.hpp"

using namespace recbench;
using namespace recbench::corpus;

namespace {

InteractionLog ingest_text(const std::string& text, IngestOptions options = {}) {
    std::istringstream in(text);
    return ingest(in, options);
}

} // namespace

TEST_CASE("ingest: three well-formed rows") {
    const auto log = ingest_text("u1\tm1\t10\nu2\tm2\t20\nu1\tm2\t30\n");
    REQUIRE(log.size() == 3);
    CHECK(log[0].user == "u1");
    CHECK(log[2].timestamp == 30);
}

TEST_CASE("ingest: exact duplicate triple removed, order preserved") {
    const auto log = ingest_text("u1\tm1\t10\nu2\tm2\t20\nu1\tm1\t10\n");
    REQUIRE(log.size() == 2);
    CHECK(log[0].item == "m1");
    CHECK(log[1].item == "m2");
}

TEST_CASE("ingest: repeated user-item pair at different timestamps is kept") {
    const auto log = ingest_text("u1\tm1\t10\nu1\tm1\t11\n");
    CHECK(log.size() == 2);
}

TEST_CASE("ingest: non-integer timestamp reports the line number") {
    CHECK_THROWS_WITH_AS(ingest_text("u1\tm1\t10\nu1\tm1\tabc\n"), doctest::Contains("line 2"),
                         DataError);
}

TEST_CASE("ingest: short row reports the line number") {
    CHECK_THROWS_WITH_AS(ingest_text("u1\tm1\n"), doctest::Contains("line 1"), DataError);
}

TEST_CASE("ingest: csv with header and custom columns") {
    IngestOptions opts;
    opts.delimiter = ",";
    opts.has_header = true;
    opts.user_col = 1;
    opts.item_col = 0;
    opts.time_col = 2;
    const auto log = ingest_text("item,user,ts\nm9,u1,5\n", opts);
    REQUIRE(log.size() == 1);
    CHECK(log[0].user == "u1");
    CHECK(log[0].item == "m9");
}

TEST_CASE("ingest: multi-character delimiter with an extra ignored column") {
    IngestOptions opts;
    opts.delimiter = "::";
    opts.time_col = 3; // user::item::rating::timestamp
    const auto log = ingest_text("7::1193::5::978300760\n7::661::3::978302109\n", opts);
    REQUIRE(log.size() == 2);
    CHECK(log[0].user == "7");
    CHECK(log[0].item == "1193");
    CHECK(log[0].timestamp == 978300760);
}

namespace {

InteractionLog dense_log(int n_users, int n_items, int per_user) {
    // every user consumes items round-robin; counts are balanced
    InteractionLog log;
    for (int u = 0; u < n_users; ++u) {
        for (int k = 0; k < per_user; ++k) {
            log.push_back({"u" + std::to_string(u), "i" + std::to_string((u + k) % n_items),
                           static_cast<int64_t>(k)});
        }
    }
    return log;
}

bool logs_equal(const InteractionLog& a, const InteractionLog& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].user != b[i].user || a[i].item != b[i].item ||
            a[i].timestamp != b[i].timestamp) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("k-core: already satisfying log is unchanged") {
    const auto log = dense_log(6, 6, 6);
    CHECK(logs_equal(k_core_filter(log, 5), log));
}

TEST_CASE("k-core: min_count 1 is a no-op") {
    const auto log = dense_log(3, 7, 4);
    CHECK(logs_equal(k_core_filter(log, 1), log));
}

TEST_CASE("k-core: cascading chain matches the repeated-removal oracle") {
    // u0..u4 share items; u5 hangs on item i9 which only it consumes, so
    // dropping i9 drops u5 below threshold, cascading into i0..i4 counts.
    InteractionLog log;
    for (int u = 0; u < 5; ++u) {
        for (int k = 0; k < 5; ++k) {
            log.push_back({"u" + std::to_string(u), "i" + std::to_string(k),
                           static_cast<int64_t>(k)});
        }
    }
    for (int k = 0; k < 4; ++k) {
        log.push_back({"u5", "i9", static_cast<int64_t>(k)});
    }
    log.push_back({"u5", "i0", 99});
    const auto ours = k_core_filter(log, 5);
    const auto expected = oracles::k_core(log, 5);
    CHECK(logs_equal(ours, expected));
    CHECK(ours.size() < log.size());
}

TEST_CASE("k-core: randomized fixtures match the oracle and are idempotent") {
    Rng rng(123);
    for (int trial = 0; trial < 30; ++trial) {
        InteractionLog log;
        const int rows = 20 + static_cast<int>(rng.next_below(180));
        for (int i = 0; i < rows; ++i) {
            log.push_back({"u" + std::to_string(rng.next_below(12)),
                           "i" + std::to_string(rng.next_below(15)),
                           static_cast<int64_t>(i)});
        }
        const int k = 2 + static_cast<int>(rng.next_below(4));
        const auto ours = k_core_filter(log, k);
        CHECK(logs_equal(ours, oracles::k_core(log, k)));
        CHECK(logs_equal(k_core_filter(ours, k), ours)); // idempotent
    }
}

TEST_CASE("k-core: empty result is returned, not thrown") {
    InteractionLog log{{"u1", "i1", 1}, {"u2", "i2", 2}};
    CHECK(k_core_filter(log, 5).empty());
}

TEST_CASE("k-core: single pass differs from fixpoint on cascades") {
    InteractionLog log;
    for (int u = 0; u < 5; ++u) {
        for (int k = 0; k < 5; ++k) {
            log.push_back({"u" + std::to_string(u), "i" + std::to_string(k),
                           static_cast<int64_t>(k)});
        }
    }
    for (int k = 0; k < 4; ++k) log.push_back({"u5", "i9", static_cast<int64_t>(k)});
    log.push_back({"u5", "i0", 99});
    const auto one_pass = k_core_filter(log, 5, true);
    const auto fixpoint = k_core_filter(log, 5, false);
    CHECK(one_pass.size() >= fixpoint.size());
}

TEST_CASE("build_sessions: orders by timestamp") {
    InteractionLog log{{"u1", "a", 3}, {"u1", "b", 1}, {"u1", "c", 2}};
    const auto result = build_sessions(log);
    REQUIRE(result.store.sessions.size() == 1);
    const auto& session = result.store.sessions[0];
    REQUIRE(session.size() == 3);
    CHECK(result.catalog.items[static_cast<size_t>(session[0])] == "b");
    CHECK(result.catalog.items[static_cast<size_t>(session[1])] == "c");
    CHECK(result.catalog.items[static_cast<size_t>(session[2])] == "a");
}

TEST_CASE("build_sessions: user with two interactions is dropped") {
    InteractionLog log{{"u1", "a", 1}, {"u1", "b", 2},
                       {"u2", "a", 1}, {"u2", "b", 2}, {"u2", "c", 3}};
    const auto result = build_sessions(log);
    CHECK(result.store.sessions.size() == 1);
    CHECK(result.catalog.users[0] == "u2");
}

TEST_CASE("build_sessions: equal timestamps keep file order") {
    InteractionLog log{{"u1", "x", 5}, {"u1", "y", 5}, {"u1", "z", 5}};
    const auto result = build_sessions(log);
    const auto& session = result.store.sessions[0];
    CHECK(result.catalog.items[static_cast<size_t>(session[0])] == "x");
    CHECK(result.catalog.items[static_cast<size_t>(session[1])] == "y");
    CHECK(result.catalog.items[static_cast<size_t>(session[2])] == "z");
}

TEST_CASE("build_sessions: dropped users leave no trace in the catalog") {
    InteractionLog log{{"u1", "only", 1}, {"u2", "a", 1}, {"u2", "b", 2}, {"u2", "c", 3}};
    const auto result = build_sessions(log);
    CHECK(!result.catalog.user_to_index.contains("u1"));
    CHECK(!result.catalog.item_to_index.contains("only"));
}

namespace {

SessionStore store_of(std::vector<std::vector<ItemIndex>> sessions) {
    SessionStore s;
    s.sessions = std::move(sessions);
    return s;
}

} // namespace

TEST_CASE("split: length-4 session produces the canonical three cases") {
    // session [a=0, b=1, c=2, d=3]
    const auto split = split_leave_one_out(store_of({{0, 1, 2, 3}}), 50);
    REQUIRE(split.test_cases.size() == 1);
    REQUIRE(split.valid_cases.size() == 1);
    REQUIRE(split.train_cases.size() == 1);
    const auto& test = split.test_cases[0];
    CHECK(test.prefix == std::vector<ItemIndex>{0, 1, 2});
    CHECK(test.gt == 3);
    CHECK(test.last == 2);
    const auto& valid = split.valid_cases[0];
    CHECK(valid.prefix == std::vector<ItemIndex>{0, 1});
    CHECK(valid.gt == 2);
    CHECK(valid.last == 1);
    const auto& train = split.train_cases[0];
    CHECK(train.prefix == std::vector<ItemIndex>{0});
    CHECK(train.gt == 1);
    CHECK(train.last == 0);
}

TEST_CASE("split: length-3 session still yields one train case") {
    const auto split = split_leave_one_out(store_of({{0, 1, 2}}), 50);
    REQUIRE(split.train_cases.size() == 1);
    CHECK(split.train_cases[0].prefix == std::vector<ItemIndex>{0});
    CHECK(split.train_cases[0].gt == 1);
}

TEST_CASE("split: long session truncates to the most recent max_len items") {
    std::vector<ItemIndex> session(60);
    for (int i = 0; i < 60; ++i) session[static_cast<size_t>(i)] = i;
    const auto split = split_leave_one_out(store_of({session}), 50);
    const auto& test = split.test_cases[0];
    REQUIRE(test.prefix.size() == 50);
    CHECK(test.prefix.front() == 9); // most recent 50 of the first 59
    CHECK(test.prefix.back() == 58);
    CHECK(test.gt == 59);
    CHECK(test.last == 58);
}

TEST_CASE("split: max_len below 1 is rejected") {
    CHECK_THROWS_AS(split_leave_one_out(store_of({{0, 1, 2}}), 0), UsageError);
}

TEST_CASE("split: last always equals the final prefix element") {
    Rng rng(9);
    std::vector<std::vector<ItemIndex>> sessions;
    for (int s = 0; s < 20; ++s) {
        std::vector<ItemIndex> session(3 + rng.next_below(60));
        for (auto& item : session) item = static_cast<ItemIndex>(rng.next_below(40));
        sessions.push_back(std::move(session));
    }
    const auto split = split_leave_one_out(store_of(std::move(sessions)), 50);
    for (const auto* cases : {&split.train_cases, &split.valid_cases, &split.test_cases}) {
        for (const EvalCase& c : *cases) {
            REQUIRE(!c.prefix.empty());
            CHECK(c.last == c.prefix.back());
            CHECK(c.prefix.size() <= 50);
        }
    }
}

TEST_CASE("split: per-session case counts add up") {
    // session of length n contributes max(1, n-3) train cases
    const auto split = split_leave_one_out(store_of({{0, 1, 2},
                                                     {3, 4, 5, 6},
                                                     {0, 2, 4, 6, 1, 3, 5}}),
                                           50);
    CHECK(split.test_cases.size() == 3);
    CHECK(split.valid_cases.size() == 3);
    CHECK(split.train_cases.size() == 1 + 1 + 4);
}

TEST_CASE("stats: degenerate one-user one-item one-interaction log") {
    InteractionLog log{{"u1", "i1", 1}};
    Catalog catalog;
    catalog.items = {"i1"};
    catalog.users = {"u1"};
    catalog.item_to_index["i1"] = 0;
    catalog.user_to_index["u1"] = 0;
    const auto s = stats(log, catalog);
    CHECK(s.n_users == 1);
    CHECK(s.n_items == 1);
    CHECK(s.n_interactions == 1);
    CHECK(s.avg_length == doctest::Approx(1.0));
    CHECK(s.sparsity == doctest::Approx(0.0));
}

TEST_CASE("stats: sparsity stays within [0, 100] despite repeat consumption") {
    InteractionLog log{{"u1", "i1", 1}, {"u1", "i1", 2}, {"u1", "i1", 3}};
    const auto sessions = build_sessions(log);
    const auto s = stats(log, sessions.catalog);
    CHECK(s.n_interactions == 3);
    CHECK(s.sparsity == doctest::Approx(0.0)); // raw density > 1 is clamped
}

TEST_CASE("stats: single interaction per cell") {
    InteractionLog log{{"u1", "a", 1}, {"u1", "b", 2}, {"u1", "c", 3},
                       {"u2", "a", 1}, {"u2", "b", 2}, {"u2", "c", 3}};
    const auto sessions = build_sessions(log);
    const auto s = stats(log, sessions.catalog);
    CHECK(s.n_users == 2);
    CHECK(s.n_items == 3);
    CHECK(s.n_interactions == 6);
    CHECK(s.avg_length == doctest::Approx(3.0));
    CHECK(s.sparsity == doctest::Approx(0.0));
}

TEST_CASE("stats: interactions restricted to retained users") {
    InteractionLog log{{"u1", "a", 1}, {"u1", "b", 2}, {"u1", "c", 3}, {"dropped", "a", 9}};
    const auto sessions = build_sessions(log);
    const auto s = stats(log, sessions.catalog);
    CHECK(s.n_users == 1);
    CHECK(s.n_interactions == 3);
}

TEST_CASE("stats: session lengths sum to retained interactions") {
    Rng rng(31);
    InteractionLog log;
    for (int i = 0; i < 400; ++i) {
        log.push_back({"u" + std::to_string(rng.next_below(20)),
                       "i" + std::to_string(rng.next_below(25)), static_cast<int64_t>(i)});
    }
    const auto filtered = k_core_filter(log, 3);
    const auto sessions = build_sessions(filtered);
    const auto s = stats(filtered, sessions.catalog);
    int64_t total = 0;
    for (const auto& session : sessions.store.sessions) {
        total += static_cast<int64_t>(session.size());
    }
    CHECK(total == s.n_interactions);
}

TEST_CASE("stats: empty log rejected") {
    Catalog catalog;
    CHECK_THROWS_AS(stats({}, catalog), DataError);
}

TEST_CASE("split dir round-trips through disk") {
    Rng rng(17);
    InteractionLog log;
    for (int i = 0; i < 300; ++i) {
        log.push_back({"user-" + std::to_string(rng.next_below(15)),
                       "item:" + std::to_string(rng.next_below(20)), static_cast<int64_t>(i)});
    }
    const auto filtered = k_core_filter(log, 3);
    const auto sessions = build_sessions(filtered);
    const auto split = split_leave_one_out(sessions.store, 50);
    const auto s = stats(filtered, sessions.catalog);

    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "recbench_test_split";
    std::filesystem::remove_all(dir);
    io::write_split_dir(dir, split, sessions.catalog, s);
    const io::LoadedDataset loaded = io::read_split_dir(dir);

    CHECK(loaded.catalog.items == sessions.catalog.items);
    CHECK(loaded.catalog.users == sessions.catalog.users);
    // catalog round-trip: encode -> decode is the identity for every id
    for (const auto& [ext, idx] : sessions.catalog.item_to_index) {
        CHECK(loaded.catalog.item_to_index.at(ext) == idx);
        CHECK(loaded.catalog.items[static_cast<size_t>(idx)] == ext);
    }
    REQUIRE(loaded.split.train_cases.size() == split.train_cases.size());
    for (size_t i = 0; i < split.train_cases.size(); ++i) {
        CHECK(loaded.split.train_cases[i].prefix == split.train_cases[i].prefix);
        CHECK(loaded.split.train_cases[i].gt == split.train_cases[i].gt);
    }
    CHECK(loaded.stats.n_interactions == s.n_interactions);
    CHECK(loaded.split.max_len == 50);
    std::filesystem::remove_all(dir);
}

TEST_CASE("split dir: case indices outside the catalog are rejected") {
    InteractionLog log;
    for (int i = 0; i < 30; ++i) {
        log.push_back({"u" + std::to_string(i % 3), "i" + std::to_string(i % 5),
                       static_cast<int64_t>(i)});
    }
    const auto sessions = build_sessions(log);
    const auto split = split_leave_one_out(sessions.store, 50);
    const auto s = stats(log, sessions.catalog);
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "recbench_bad_split";
    std::filesystem::remove_all(dir);

    corpus::SplitDataset corrupted = split;
    corrupted.test_cases[0].gt = 999; // not in the 5-item catalog
    io::write_split_dir(dir, corrupted, sessions.catalog, s);
    CHECK_THROWS_WITH_AS(io::read_split_dir(dir), doctest::Contains("outside"), DataError);
    std::filesystem::remove_all(dir);
}
