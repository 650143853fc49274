#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "recbench/corpus.hpp"

namespace recbench::io {

/// On-disk layout of a prepared dataset directory:
///   train.tsv / valid.tsv / test.tsv   case_id, comma-joined prefix, gt, last
///   catalog.tsv                        kind (item|user), external id, index
///   stats.json                         DatasetStats + catalog/max_len meta
/// TSV files start with a versioned magic line.

void write_split_dir(const std::filesystem::path& dir, const corpus::SplitDataset& split,
                     const corpus::Catalog& catalog, const corpus::DatasetStats& stats);

struct LoadedDataset {
    corpus::SplitDataset split;
    corpus::Catalog catalog;
    corpus::DatasetStats stats;
};

LoadedDataset read_split_dir(const std::filesystem::path& dir);

std::vector<EvalCase> read_cases_file(const std::filesystem::path& path);
void write_cases_file(const std::filesystem::path& path, const std::vector<EvalCase>& cases);

} // namespace recbench::io
