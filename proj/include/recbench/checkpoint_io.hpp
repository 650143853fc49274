#pragma once

#include <filesystem>

#include "recbench/scorer.hpp"

namespace recbench::io {

/// Versioned binary container:
///   line 1: magic ("#recbench-checkpoint v1")
///   8-byte little-endian header length, JSON header (spec, seed,
///   catalog_size, max_len, best_valid_hit, epochs_run, tensor directory),
///   then raw little-endian tensor payloads in directory order
///   (f32 or i32, row-major).
void write_checkpoint(const std::filesystem::path& path, const models::ScorerCheckpoint& ckpt);
models::ScorerCheckpoint read_checkpoint(const std::filesystem::path& path);

} // namespace recbench::io
