#pragma once

namespace recbench {

inline constexpr const char* kToolVersion = "0.1.0";

// First line of every TSV/binary artifact this tool writes.
inline constexpr const char* kMagicCases      = "#recbench-cases v1";
inline constexpr const char* kMagicCatalog    = "#recbench-catalog v1";
inline constexpr const char* kMagicCheckpoint = "#recbench-checkpoint v1";
inline constexpr const char* kMagicScoreDump  = "#recbench-scoredump v1";

} // namespace recbench
