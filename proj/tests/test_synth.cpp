#include <doctest.h>

#include <map>

#include "recbench/corpus.hpp"
#include "recbench/errors.hpp"
#include "recbench/synth.hpp"

using namespace recbench;
using namespace recbench::synth;

TEST_CASE("synth: p_repeat 1 repeats a single item per session") {
    SynthConfig config;
    config.n_users = 50;
    config.n_items = 30;
    config.p_repeat = 1.0;
    const auto log = generate(config);
    std::map<std::string, std::string> item_of_user;
    for (const auto& rec : log) {
        auto [it, inserted] = item_of_user.try_emplace(rec.user, rec.item);
        CHECK(it->second == rec.item);
    }
    CHECK(item_of_user.size() == 50);
}

TEST_CASE("synth: p_repeat 0 never repeats consecutively") {
    SynthConfig config;
    config.n_users = 200;
    config.n_items = 20;
    config.p_repeat = 0.0;
    const auto log = generate(config);
    std::map<std::string, std::string> prev;
    for (const auto& rec : log) {
        auto it = prev.find(rec.user);
        if (it != prev.end()) CHECK(it->second != rec.item);
        prev[rec.user] = rec.item;
    }
}

TEST_CASE("synth: empirical repeat frequency tracks p_repeat") {
    SynthConfig config;
    config.n_users = 12000;
    config.n_items = 100;
    config.session_len_min = 8;
    config.session_len_max = 12;
    config.p_repeat = 0.5;
    config.seed = 9;
    const auto log = generate(config);
    int64_t transitions = 0, repeats = 0;
    std::map<std::string, std::string> prev;
    for (const auto& rec : log) {
        auto it = prev.find(rec.user);
        if (it != prev.end()) {
            ++transitions;
            if (it->second == rec.item) ++repeats;
        }
        prev[rec.user] = rec.item;
    }
    REQUIRE(transitions > 100000);
    const double freq = static_cast<double>(repeats) / static_cast<double>(transitions);
    CHECK(freq == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("synth: deterministic in (config, seed)") {
    SynthConfig config;
    config.n_users = 100;
    config.n_items = 50;
    config.p_repeat = 0.3;
    config.seed = 77;
    const auto a = generate(config);
    const auto b = generate(config);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].user == b[i].user);
        CHECK(a[i].item == b[i].item);
        CHECK(a[i].timestamp == b[i].timestamp);
    }
    config.seed = 78;
    const auto c = generate(config);
    bool differ = c.size() != a.size();
    for (size_t i = 0; !differ && i < a.size(); ++i) differ = a[i].item != c[i].item;
    CHECK(differ);
}

TEST_CASE("synth: timestamps strictly increase within each user") {
    SynthConfig config;
    config.n_users = 80;
    config.n_items = 40;
    config.p_repeat = 0.2;
    const auto log = generate(config);
    std::map<std::string, int64_t> last_ts;
    for (const auto& rec : log) {
        auto it = last_ts.find(rec.user);
        if (it != last_ts.end()) CHECK(rec.timestamp > it->second);
        last_ts[rec.user] = rec.timestamp;
    }
}

TEST_CASE("synth: zipf skew concentrates mass on low item indices") {
    SynthConfig config;
    config.n_users = 2000;
    config.n_items = 50;
    config.p_repeat = 0.0;
    config.zipf_s = 1.2;
    const auto log = generate(config);
    int64_t head = 0;
    for (const auto& rec : log) {
        if (rec.item == "i0" || rec.item == "i1" || rec.item == "i2") ++head;
    }
    // top-3 of 50 items should hold far more than the uniform 6% share
    CHECK(static_cast<double>(head) / static_cast<double>(log.size()) > 0.2);
}

TEST_CASE("synth: generated logs survive the corpus pipeline") {
    SynthConfig config;
    config.n_users = 300;
    config.n_items = 60;
    config.session_len_min = 5;
    config.session_len_max = 9;
    config.p_repeat = 0.3;
    const auto log = generate(config);
    const auto filtered = corpus::k_core_filter(log, 5);
    REQUIRE(!filtered.empty());
    const auto sessions = corpus::build_sessions(filtered);
    const auto split = corpus::split_leave_one_out(sessions.store, 50);
    CHECK(split.test_cases.size() == sessions.store.sessions.size());
    for (const auto& session : sessions.store.sessions) CHECK(session.size() >= 3);
    const auto stats = corpus::stats(filtered, sessions.catalog);
    int64_t total = 0;
    for (const auto& s : sessions.store.sessions) total += static_cast<int64_t>(s.size());
    CHECK(total == stats.n_interactions);
}

TEST_CASE("synth: invalid configs are rejected") {
    SynthConfig config;
    config.session_len_min = 2;
    CHECK_THROWS_AS(generate(config), UsageError);
    config.session_len_min = 5;
    config.p_repeat = 1.5;
    CHECK_THROWS_AS(generate(config), UsageError);
}
