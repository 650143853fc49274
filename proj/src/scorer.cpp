#include "recbench/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "recbench/errors.hpp"
#include "recbench/eval.hpp"
#include "recbench/numerics.hpp"
#include "recbench/rng.hpp"

namespace recbench::models {

std::string to_string(ScorerKind kind) {
    switch (kind) {
        case ScorerKind::pop: return "pop";
        case ScorerKind::markov: return "markov";
        case ScorerKind::gru_mini: return "gru";
        case ScorerKind::attn_mini: return "attn";
    }
    return "unknown";
}

ScorerKind scorer_kind_from_string(const std::string& name) {
    if (name == "pop") return ScorerKind::pop;
    if (name == "markov") return ScorerKind::markov;
    if (name == "gru" || name == "gru_mini") return ScorerKind::gru_mini;
    if (name == "attn" || name == "attn_mini") return ScorerKind::attn_mini;
    throw UsageError("unknown model kind '" + name + "' (expected pop|markov|gru|attn)");
}

void ScorerSpec::validate() const {
    if (embed_dim < 1 || hidden_dim < 1 || n_heads < 1) {
        throw UsageError("scorer spec: dimensions must be >= 1");
    }
    if (embed_dim % n_heads != 0) {
        throw UsageError("scorer spec: embed_dim must be divisible by n_heads");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
        throw UsageError("scorer spec: dropout must be in [0, 1)");
    }
    if (markov_alpha <= 0.0) throw UsageError("scorer spec: markov_alpha must be > 0");
}

void TrainConfig::validate() const {
    if (patience < 1) throw UsageError("train config: patience must be >= 1");
    if (batch_size < 1) throw UsageError("train config: batch_size must be >= 1");
    if (max_epochs < 1) throw UsageError("train config: max_epochs must be >= 1");
    if (eval_k_for_stopping < 1) throw UsageError("train config: eval K must be >= 1");
    if (!(lr > 0.0)) throw UsageError("train config: lr must be > 0");
}

const NamedTensor* ScorerCheckpoint::find(std::string_view name) const {
    for (const NamedTensor& t : tensors) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

void ScorerCheckpoint::validate() const {
    spec.validate();
    if (catalog_size < 1) throw DataError("checkpoint: catalog_size must be >= 1");
    if (max_len < 1) throw DataError("checkpoint: max_len must be >= 1");
    for (const NamedTensor& t : tensors) {
        const size_t expected = t.count();
        const size_t actual = t.dtype == NamedTensor::DType::f32 ? t.f32.size() : t.i32.size();
        if (expected != actual) {
            throw DataError("checkpoint: tensor '" + t.name + "' shape/value mismatch");
        }
        for (const float v : t.f32) {
            if (!std::isfinite(v)) {
                throw DataError("checkpoint: non-finite value in tensor '" + t.name + "'");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Pop / Markov
// ---------------------------------------------------------------------------

ScorerCheckpoint fit_pop(std::span<const EvalCase> train_cases, int catalog_size, int max_len) {
    if (train_cases.empty()) throw DataError("fit_pop: empty train set");
    ScorerCheckpoint ckpt;
    ckpt.spec.kind = ScorerKind::pop;
    ckpt.catalog_size = catalog_size;
    ckpt.max_len = max_len;

    NamedTensor counts;
    counts.name = "gt_counts";
    counts.rows = catalog_size;
    counts.f32.assign(static_cast<size_t>(catalog_size), 0.0f);
    for (const EvalCase& c : train_cases) {
        counts.f32[static_cast<size_t>(c.gt)] += 1.0f;
    }
    ckpt.tensors.push_back(std::move(counts));
    return ckpt;
}

ScorerCheckpoint fit_markov(std::span<const EvalCase> train_cases, double alpha,
                            int catalog_size, int max_len) {
    if (train_cases.empty()) throw DataError("fit_markov: empty train set");
    if (alpha <= 0.0) throw UsageError("fit_markov: alpha must be > 0");

    // Sorted maps keep the CSR serialization order deterministic.
    std::vector<std::map<ItemIndex, int64_t>> rows(static_cast<size_t>(catalog_size));
    auto count_pair = [&](ItemIndex prev, ItemIndex next) {
        ++rows[static_cast<size_t>(prev)][next];
    };
    for (const EvalCase& c : train_cases) {
        for (size_t i = 0; i + 1 < c.prefix.size(); ++i) count_pair(c.prefix[i], c.prefix[i + 1]);
        count_pair(c.prefix.back(), c.gt);
    }

    ScorerCheckpoint ckpt;
    ckpt.spec.kind = ScorerKind::markov;
    ckpt.spec.markov_alpha = alpha;
    ckpt.catalog_size = catalog_size;
    ckpt.max_len = max_len;

    NamedTensor row_ptr, col_idx, counts;
    row_ptr.name = "transition_row_ptr";
    row_ptr.dtype = NamedTensor::DType::i32;
    col_idx.name = "transition_col_idx";
    col_idx.dtype = NamedTensor::DType::i32;
    counts.name = "transition_counts";

    row_ptr.i32.reserve(static_cast<size_t>(catalog_size) + 1);
    row_ptr.i32.push_back(0);
    for (const auto& row : rows) {
        for (const auto& [col, count] : row) {
            col_idx.i32.push_back(col);
            counts.f32.push_back(static_cast<float>(count));
        }
        row_ptr.i32.push_back(static_cast<int32_t>(col_idx.i32.size()));
    }
    row_ptr.rows = catalog_size + 1;
    col_idx.rows = static_cast<int>(col_idx.i32.size());
    counts.rows = static_cast<int>(counts.f32.size());

    ckpt.tensors.push_back(std::move(row_ptr));
    ckpt.tensors.push_back(std::move(col_idx));
    ckpt.tensors.push_back(std::move(counts));
    return ckpt;
}

// ---------------------------------------------------------------------------
// Neural net <-> checkpoint plumbing
// ---------------------------------------------------------------------------

namespace {

std::vector<NamedTensor> tensors_from_store(const ParamStore<float>& store) {
    std::vector<NamedTensor> out;
    for (const TensorInfo& info : store.layout()) {
        NamedTensor t;
        t.name = info.name;
        t.rows = info.rows;
        t.cols = info.cols;
        const auto view = store.values;
        t.f32.assign(view.begin() + static_cast<long>(info.offset),
                     view.begin() + static_cast<long>(info.offset + info.size()));
        out.push_back(std::move(t));
    }
    return out;
}

template <typename Net>
void load_store(Net& net, const ScorerCheckpoint& ckpt) {
    for (const TensorInfo& info : net.params.layout()) {
        const NamedTensor* t = ckpt.find(info.name);
        if (t == nullptr) {
            throw DataError("checkpoint: missing tensor '" + info.name + "'");
        }
        if (t->rows != info.rows || t->cols != info.cols ||
            t->dtype != NamedTensor::DType::f32) {
            throw DataError("checkpoint: tensor '" + info.name + "' has unexpected shape/type");
        }
        std::copy(t->f32.begin(), t->f32.end(),
                  net.params.values.begin() + static_cast<long>(info.offset));
    }
}

std::unique_ptr<GruNet<float>> make_gru(const ScorerSpec& spec, int catalog_size) {
    return std::make_unique<GruNet<float>>(catalog_size, spec.embed_dim, spec.hidden_dim);
}

std::unique_ptr<AttnNet<float>> make_attn(const ScorerSpec& spec, int catalog_size, int max_len) {
    return std::make_unique<AttnNet<float>>(catalog_size, spec.embed_dim, spec.hidden_dim,
                                            spec.n_heads, max_len);
}

} // namespace

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

namespace {

template <typename Net>
ScorerCheckpoint train_net(Net& net, const ScorerSpec& spec, const corpus::SplitDataset& split,
                           const TrainConfig& config, int catalog_size, const EpochLogFn& log) {
    Rng rng(config.seed);
    net.init_params(rng);

    ParamStore<float> grads = net.params.zeros_like();
    AdamState<float> adam(net.params.size(), static_cast<float>(config.lr));

    std::vector<size_t> order(split.train_cases.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<float> best_params = net.params.values;
    double best_hit = -1.0;
    int since_best = 0;
    int epochs_run = 0;

    eval::RankingConfig valid_cfg;
    valid_cfg.ks = {config.eval_k_for_stopping};
    auto valid_scorer = [&](const EvalCase& c) { return net.forward(c.prefix); };

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        // Fisher-Yates reshuffle per epoch.
        for (size_t i = order.size(); i > 1; --i) {
            const size_t j = rng.next_below(i);
            std::swap(order[i - 1], order[j]);
        }

        double epoch_loss = 0.0;
        size_t batch_start = 0;
        while (batch_start < order.size()) {
            const size_t batch_end =
                std::min(order.size(), batch_start + static_cast<size_t>(config.batch_size));
            grads.zero();
            double batch_loss = 0.0;
            for (size_t i = batch_start; i < batch_end; ++i) {
                const EvalCase& c = split.train_cases[order[i]];
                batch_loss += static_cast<double>(
                    net.loss_and_grad(c.prefix, c.gt, grads, &rng, spec.dropout));
            }
            if (!std::isfinite(batch_loss)) {
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch));
            }
            const float inv_batch = 1.0f / static_cast<float>(batch_end - batch_start);
            for (float& g : grads.values) g *= inv_batch;
            try {
                adam_step<float>(net.params.values, grads.values, adam);
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch) +
                                   ")");
            }
            epoch_loss += batch_loss;
            batch_start = batch_end;
        }
        epoch_loss /= static_cast<double>(order.size());
        epochs_run = epoch;

        const eval::MetricReport valid_report =
            eval::evaluate(valid_scorer, split.valid_cases, valid_cfg);
        const double hit = valid_report.per_k.at(config.eval_k_for_stopping).hit;

        const bool improved = hit > best_hit;
        if (improved) {
            best_hit = hit;
            best_params = net.params.values;
            since_best = 0;
        } else {
            ++since_best;
        }
        if (log) log(EpochLog{epoch, epoch_loss, hit, improved});
        if (since_best >= config.patience) break;
    }

    net.params.values = best_params;

    ScorerCheckpoint ckpt;
    ckpt.spec = spec;
    ckpt.catalog_size = catalog_size;
    ckpt.max_len = split.max_len;
    ckpt.seed = config.seed;
    ckpt.best_valid_hit = best_hit;
    ckpt.epochs_run = epochs_run;
    ckpt.tensors = tensors_from_store(net.params);
    return ckpt;
}

} // namespace

ScorerCheckpoint train(const ScorerSpec& spec, const corpus::SplitDataset& split,
                       const TrainConfig& config, int catalog_size, const EpochLogFn& log) {
    spec.validate();
    config.validate();
    if (split.train_cases.empty() || split.valid_cases.empty()) {
        throw DataError("train: train and valid splits must be nonempty");
    }
    switch (spec.kind) {
        case ScorerKind::gru_mini: {
            GruNet<float> net(catalog_size, spec.embed_dim, spec.hidden_dim);
            return train_net(net, spec, split, config, catalog_size, log);
        }
        case ScorerKind::attn_mini: {
            AttnNet<float> net(catalog_size, spec.embed_dim, spec.hidden_dim, spec.n_heads,
                               split.max_len);
            return train_net(net, spec, split, config, catalog_size, log);
        }
        case ScorerKind::pop:
        case ScorerKind::markov: {
            ScorerCheckpoint ckpt =
                spec.kind == ScorerKind::pop
                    ? fit_pop(split.train_cases, catalog_size, split.max_len)
                    : fit_markov(split.train_cases, spec.markov_alpha, catalog_size,
                                 split.max_len);
            ckpt.seed = config.seed;
            // one validation pass so the checkpoint carries a comparable score
            const Scorer scorer(ckpt);
            eval::RankingConfig valid_cfg;
            valid_cfg.ks = {config.eval_k_for_stopping};
            const eval::MetricReport report = eval::evaluate(
                [&](const EvalCase& c) { return scorer.score(c.prefix); }, split.valid_cases,
                valid_cfg);
            ckpt.best_valid_hit = report.per_k.at(config.eval_k_for_stopping).hit;
            return ckpt;
        }
    }
    throw UsageError("train: unknown scorer kind");
}

// ---------------------------------------------------------------------------
// Scorer
// ---------------------------------------------------------------------------

Scorer::Scorer(ScorerCheckpoint checkpoint) : ckpt_(std::move(checkpoint)) {
    ckpt_.validate();
    switch (ckpt_.spec.kind) {
        case ScorerKind::pop: {
            const NamedTensor* counts = ckpt_.find("gt_counts");
            if (counts == nullptr || counts->rows != ckpt_.catalog_size) {
                throw DataError("pop checkpoint: missing or misshapen gt_counts");
            }
            pop_scores_ = counts->f32;
            break;
        }
        case ScorerKind::markov: {
            const NamedTensor* rp = ckpt_.find("transition_row_ptr");
            const NamedTensor* ci = ckpt_.find("transition_col_idx");
            const NamedTensor* cn = ckpt_.find("transition_counts");
            if (rp == nullptr || ci == nullptr || cn == nullptr ||
                rp->rows != ckpt_.catalog_size + 1 || ci->i32.size() != cn->f32.size()) {
                throw DataError("markov checkpoint: missing or inconsistent CSR tensors");
            }
            row_ptr_ = rp->i32;
            col_idx_ = ci->i32;
            counts_ = cn->f32;
            row_sum_.assign(static_cast<size_t>(ckpt_.catalog_size), 0.0f);
            for (int r = 0; r < ckpt_.catalog_size; ++r) {
                float sum = 0.0f;
                for (int32_t p = row_ptr_[static_cast<size_t>(r)];
                     p < row_ptr_[static_cast<size_t>(r) + 1]; ++p) {
                    sum += counts_[static_cast<size_t>(p)];
                }
                row_sum_[static_cast<size_t>(r)] = sum;
            }
            break;
        }
        case ScorerKind::gru_mini: {
            gru_ = make_gru(ckpt_.spec, ckpt_.catalog_size);
            load_store(*gru_, ckpt_);
            break;
        }
        case ScorerKind::attn_mini: {
            attn_ = make_attn(ckpt_.spec, ckpt_.catalog_size, ckpt_.max_len);
            load_store(*attn_, ckpt_);
            break;
        }
    }
}

std::vector<float> Scorer::score(std::span<const ItemIndex> prefix) const {
    if (prefix.empty()) throw DataError("score: empty prefix");
    // Most recent max_len items; scoring never sees anything older.
    if (static_cast<int>(prefix.size()) > ckpt_.max_len) {
        prefix = prefix.subspan(prefix.size() - static_cast<size_t>(ckpt_.max_len));
    }
    for (const ItemIndex item : prefix) {
        if (item < 0 || item >= ckpt_.catalog_size) {
            throw DataError("score: item index " + std::to_string(item) +
                            " outside catalog of size " + std::to_string(ckpt_.catalog_size));
        }
    }
    switch (ckpt_.spec.kind) {
        case ScorerKind::pop: return pop_scores_;
        case ScorerKind::markov: {
            const size_t n = static_cast<size_t>(ckpt_.catalog_size);
            const size_t last = static_cast<size_t>(prefix.back());
            const double alpha = ckpt_.spec.markov_alpha;
            const double denom = static_cast<double>(row_sum_[last]) +
                                 alpha * static_cast<double>(ckpt_.catalog_size);
            std::vector<float> scores(n, static_cast<float>(alpha / denom));
            for (int32_t p = row_ptr_[last]; p < row_ptr_[last + 1]; ++p) {
                scores[static_cast<size_t>(col_idx_[static_cast<size_t>(p)])] =
                    static_cast<float>((static_cast<double>(counts_[static_cast<size_t>(p)]) + alpha) / denom);
            }
            return scores;
        }
        case ScorerKind::gru_mini: return gru_->forward(prefix);
        case ScorerKind::attn_mini: return attn_->forward(prefix);
    }
    throw UsageError("score: unknown scorer kind");
}

} // namespace recbench::models
