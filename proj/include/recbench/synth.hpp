#pragma once

#include <cstdint>

#include "recbench/corpus.hpp"

namespace recbench::synth {

/// Controls the injected recency structure: with probability p_repeat the
/// next item is exactly the previous one, otherwise a fresh Zipf draw
/// (resampled so it differs from the previous item).
struct SynthConfig {
    int n_users = 1000;
    int n_items = 200;
    int session_len_min = 5;  // >= 3
    int session_len_max = 15;
    double p_repeat = 0.0;    // [0, 1]
    double zipf_s = 1.0;      // >= 0; 0 is uniform
    uint64_t seed = 2024;

    void validate() const;
};

/// Deterministic in (config, seed); per-user sub-streams derived from the
/// seed make the output independent of generation order. Timestamps are
/// strictly increasing integers within each user. External ids are
/// "u<index>" / "i<index>".
corpus::InteractionLog generate(const SynthConfig& config);

} // namespace recbench::synth
