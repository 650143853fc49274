#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recbench/attn.hpp"
#include "recbench/cases.hpp"
#include "recbench/corpus.hpp"
#include "recbench/gru.hpp"

namespace recbench::models {

// ---------------------------------------------------------------------------
// Specs and checkpoints
// ---------------------------------------------------------------------------

enum class ScorerKind { pop, markov, gru_mini, attn_mini };

std::string to_string(ScorerKind kind);
ScorerKind scorer_kind_from_string(const std::string& name);

struct ScorerSpec {
    ScorerKind kind = ScorerKind::pop;
    int embed_dim = 64;
    int hidden_dim = 64;
    int n_heads = 1;        // attn only
    double dropout = 0.2;   // [0, 1)
    double markov_alpha = 0.01;

    void validate() const;
};

struct TrainConfig {
    double lr = 1e-3;
    int batch_size = 256;
    int max_epochs = 200;
    int patience = 10;
    uint64_t seed = 2024;
    int eval_k_for_stopping = 10;

    void validate() const;
};

struct NamedTensor {
    enum class DType { f32, i32 };
    std::string name;
    int rows = 0;
    int cols = 1;
    DType dtype = DType::f32;
    std::vector<float> f32;
    std::vector<int32_t> i32;

    size_t count() const { return static_cast<size_t>(rows) * static_cast<size_t>(cols); }
};

struct ScorerCheckpoint {
    ScorerSpec spec;
    int catalog_size = 0;
    int max_len = 50;
    uint64_t seed = 0;
    double best_valid_hit = 0.0;
    int epochs_run = 0;
    std::vector<NamedTensor> tensors;

    const NamedTensor* find(std::string_view name) const;
    void validate() const; // shapes consistent with spec/catalog, values finite
};

// ---------------------------------------------------------------------------
// Fits
// ---------------------------------------------------------------------------

/// Popularity baseline: score of an item is its global count among train GTs,
/// identical for every prefix.
ScorerCheckpoint fit_pop(std::span<const EvalCase> train_cases, int catalog_size, int max_len);

/// First-order Markov with additive smoothing over consecutive pairs in train
/// prefixes + GT: score(prefix -> j) = (C[last][j] + a) / (sum_k C[last][k] + a*|I|).
ScorerCheckpoint fit_markov(std::span<const EvalCase> train_cases, double alpha,
                            int catalog_size, int max_len);

// ---------------------------------------------------------------------------
// Training (gru_mini / attn_mini)
// ---------------------------------------------------------------------------

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double valid_hit = 0.0;
    bool improved = false;
};
using EpochLogFn = std::function<void(const EpochLog&)>;

/// Mini-batch full-softmax CE with Adam; after each epoch Hit@eval_k on the
/// validation split; keeps the best-epoch parameters and stops after
/// `patience` epochs without a new best. Single-threaded, deterministic in
/// (spec, split, config). Throws NumericError with the epoch on divergence.
ScorerCheckpoint train(const ScorerSpec& spec, const corpus::SplitDataset& split,
                       const TrainConfig& config, int catalog_size,
                       const EpochLogFn& log = nullptr);

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

/// Immutable runtime built from a checkpoint. score() truncates the prefix to
/// its most recent max_len items, dispatches to the kind's forward pass with
/// dropout off, and returns finite scores over the full catalog.
class Scorer {
public:
    explicit Scorer(ScorerCheckpoint checkpoint);

    std::vector<float> score(std::span<const ItemIndex> prefix) const;
    const ScorerCheckpoint& checkpoint() const { return ckpt_; }

private:
    ScorerCheckpoint ckpt_;
    std::vector<float> pop_scores_;
    // CSR transition counts for markov
    std::vector<int32_t> row_ptr_;
    std::vector<int32_t> col_idx_;
    std::vector<float> counts_;
    std::vector<float> row_sum_;
    std::unique_ptr<GruNet<float>> gru_;
    std::unique_ptr<AttnNet<float>> attn_;
};

} // namespace recbench::models
