#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "recbench/cases.hpp"
#include "recbench/errors.hpp"
#include "recbench/linalg.hpp"
#include "recbench/numerics.hpp"
#include "recbench/params.hpp"

namespace recbench::models {

// One-block causal self-attention next-item scorer (tied item embeddings,
// learned positional embeddings, post-norm residual wiring):
//
//   x_t   = drop(E[i_t] + P[pos_t])
//   q,k,v = affine maps of x; per-head scaled dot-product over j <= t
//   a_t   = LN1(x_t + drop(Wo . attn_out + bo))
//   out_t = LN2(a_t + drop(W2 relu(W1 a_t + b1) + b2))
//   logits = E . out_n
//
// Positions are recency-indexed (pos_t = n-1-t, so index 0 is always the
// most recent element). This is the right-aligned convention: the final
// element carries the same positional embedding at every prefix length.
//
// The block is causal, so position t is a function of items [0, t] only; the
// loss reads just the final position and the fast paths exploit that.
template <typename T>
class AttnNet {
public:
    AttnNet(int catalog_size, int embed_dim, int ffn_dim, int n_heads, int max_len)
        : catalog_size_(catalog_size), embed_(embed_dim), ffn_(ffn_dim), heads_(n_heads),
          max_len_(max_len) {
        if (catalog_size < 1 || embed_dim < 1 || ffn_dim < 1 || n_heads < 1 || max_len < 1) {
            throw UsageError("AttnNet: dimensions must be >= 1");
        }
        if (embed_dim % n_heads != 0) {
            throw UsageError("AttnNet: embed_dim must be divisible by n_heads");
        }
        head_dim_ = embed_dim / n_heads;
        t_embed_ = params.add("item_embedding", catalog_size, embed_dim);
        t_pos_ = params.add("position_embedding", max_len, embed_dim);
        t_wq_ = params.add("attn.W_q", embed_dim, embed_dim);
        t_wk_ = params.add("attn.W_k", embed_dim, embed_dim);
        t_wv_ = params.add("attn.W_v", embed_dim, embed_dim);
        t_wo_ = params.add("attn.W_o", embed_dim, embed_dim);
        t_bq_ = params.add("attn.b_q", embed_dim);
        t_bk_ = params.add("attn.b_k", embed_dim);
        t_bv_ = params.add("attn.b_v", embed_dim);
        t_bo_ = params.add("attn.b_o", embed_dim);
        t_w1_ = params.add("ffn.W_1", ffn_dim, embed_dim);
        t_b1_ = params.add("ffn.b_1", ffn_dim);
        t_w2_ = params.add("ffn.W_2", embed_dim, ffn_dim);
        t_b2_ = params.add("ffn.b_2", embed_dim);
        t_ln1_g_ = params.add("ln1.gain", embed_dim);
        t_ln1_b_ = params.add("ln1.bias", embed_dim);
        t_ln2_g_ = params.add("ln2.gain", embed_dim);
        t_ln2_b_ = params.add("ln2.bias", embed_dim);
    }

    void init_params(Rng& rng) {
        fill_gaussian(params.view(t_embed_), rng, 0.05);
        fill_gaussian(params.view(t_pos_), rng, 0.05);
        const double std = 1.0 / std::sqrt(static_cast<double>(embed_));
        for (const size_t t : {t_wq_, t_wk_, t_wv_, t_wo_, t_w1_}) {
            fill_gaussian(params.view(t), rng, std);
        }
        fill_gaussian(params.view(t_w2_), rng, 1.0 / std::sqrt(static_cast<double>(ffn_)));
        std::fill(params.view(t_ln1_g_).begin(), params.view(t_ln1_g_).end(), T(1));
        std::fill(params.view(t_ln2_g_).begin(), params.view(t_ln2_g_).end(), T(1));
    }

    int catalog_size() const { return catalog_size_; }
    int max_len() const { return max_len_; }

    /// Inference logits, dropout off.
    std::vector<T> forward(std::span<const ItemIndex> prefix) const {
        Cache cache;
        run_forward(prefix, cache, nullptr, 0.0);
        return logits_from_rep(cache.out.data());
    }

    /// Block outputs at every position plus per-head attention rows
    /// (n*n row-major, zeros above the diagonal). Test/diagnostic path:
    /// the full O(n^2) block rather than the last-row shortcut.
    struct Trace {
        std::vector<std::vector<T>> outputs;
        std::vector<std::vector<T>> attention; // one matrix per head
    };
    Trace forward_trace(std::span<const ItemIndex> prefix) const {
        check_prefix(prefix);
        const size_t n = prefix.size();
        const size_t d = static_cast<size_t>(embed_);
        Trace trace;
        trace.outputs.resize(n);
        trace.attention.assign(static_cast<size_t>(heads_), std::vector<T>(n * n, T(0)));

        std::vector<T> x(n * d), q(n * d, T(0)), k(n * d, T(0)), v(n * d, T(0));
        std::span<const T> embed = params.view(t_embed_);
        std::span<const T> pos = params.view(t_pos_);
        for (size_t t = 0; t < n; ++t) {
            const T* e_row = embed.data() + static_cast<size_t>(prefix[t]) * d;
            const T* p_row = pos.data() + (n - 1 - t) * d;
            T* x_row = x.data() + t * d;
            for (size_t i = 0; i < d; ++i) x_row[i] = e_row[i] + p_row[i];
            std::copy_n(params.view(t_bq_).data(), d, q.data() + t * d);
            std::copy_n(params.view(t_bk_).data(), d, k.data() + t * d);
            std::copy_n(params.view(t_bv_).data(), d, v.data() + t * d);
            linalg::matvec_acc<T>(params.view(t_wq_), embed_, embed_, x_row, q.data() + t * d);
            linalg::matvec_acc<T>(params.view(t_wk_), embed_, embed_, x_row, k.data() + t * d);
            linalg::matvec_acc<T>(params.view(t_wv_), embed_, embed_, x_row, v.data() + t * d);
        }

        const T inv_sqrt = T(1) / std::sqrt(static_cast<T>(head_dim_));
        for (size_t t = 0; t < n; ++t) {
            std::vector<T> ctx(d, T(0));
            for (int h = 0; h < heads_; ++h) {
                const size_t off = static_cast<size_t>(h) * static_cast<size_t>(head_dim_);
                std::vector<T> row(t + 1);
                T max_score = std::numeric_limits<T>::lowest();
                for (size_t j = 0; j <= t; ++j) {
                    row[j] = inv_sqrt * linalg::dot<T>(head_dim_, q.data() + t * d + off,
                                                       k.data() + j * d + off);
                    max_score = std::max(max_score, row[j]);
                }
                T sum = T(0);
                for (size_t j = 0; j <= t; ++j) {
                    row[j] = std::exp(row[j] - max_score);
                    sum += row[j];
                }
                for (size_t j = 0; j <= t; ++j) {
                    row[j] /= sum;
                    trace.attention[static_cast<size_t>(h)][t * n + j] = row[j];
                    linalg::axpy<T>(head_dim_, row[j], v.data() + j * d + off, ctx.data() + off);
                }
            }
            std::vector<T> o(d, T(0));
            std::copy_n(params.view(t_bo_).data(), d, o.data());
            linalg::matvec_acc<T>(params.view(t_wo_), embed_, embed_, ctx.data(), o.data());
            std::vector<T> a_in(d), a(d, T(0)), xhat(d, T(0));
            for (size_t i = 0; i < d; ++i) a_in[i] = x[t * d + i] + o[i];
            ln_forward(a_in, params.view(t_ln1_g_), params.view(t_ln1_b_), a, xhat);
            std::vector<T> f1(static_cast<size_t>(ffn_), T(0));
            std::copy_n(params.view(t_b1_).data(), static_cast<size_t>(ffn_), f1.data());
            linalg::matvec_acc<T>(params.view(t_w1_), ffn_, embed_, a.data(), f1.data());
            for (T& val : f1) val = std::max(T(0), val);
            std::vector<T> o_in(d, T(0));
            std::copy_n(params.view(t_b2_).data(), d, o_in.data());
            linalg::matvec_acc<T>(params.view(t_w2_), embed_, ffn_, f1.data(), o_in.data());
            for (size_t i = 0; i < d; ++i) o_in[i] += a[i];
            std::vector<T> out(d, T(0));
            ln_forward(o_in, params.view(t_ln2_g_), params.view(t_ln2_b_), out, xhat);
            trace.outputs[t] = out;
        }
        return trace;
    }

    T loss_and_grad(std::span<const ItemIndex> prefix, ItemIndex gt,
                    ParamStore<T>& grads, Rng* dropout_rng = nullptr,
                    double dropout_p = 0.0) const {
        if (gt < 0 || gt >= catalog_size_) throw DataError("AttnNet: gt index out of range");
        Cache c;
        run_forward(prefix, c, dropout_rng, dropout_p);

        std::vector<T> logits = logits_from_rep(c.out.data());
        std::vector<T> dlogits(logits.size());
        const T loss = softmax_cross_entropy<T>(logits, static_cast<size_t>(gt), dlogits);

        const size_t d = static_cast<size_t>(embed_);
        const size_t n = c.n;
        const size_t last = n - 1;

        std::span<T> d_embed = grads.view(t_embed_);
        std::vector<T> dout(d, T(0));
        linalg::matvec_transpose_acc<T>(params.view(t_embed_), catalog_size_, embed_,
                                        dlogits.data(), dout.data());
        linalg::outer_acc<T>(d_embed, catalog_size_, embed_, dlogits.data(), c.out.data());

        // LN2
        std::vector<T> do_in(d);
        ln_backward(dout, params.view(t_ln2_g_), c.xhat2, c.inv_std2, do_in,
                    grads.view(t_ln2_g_), grads.view(t_ln2_b_));

        // FFN (+ residual into a)
        std::vector<T> da = do_in;
        std::vector<T> df2(d);
        for (size_t i = 0; i < d; ++i) {
            df2[i] = c.use_dropout ? do_in[i] * c.mask_ffn[i] : do_in[i];
        }
        linalg::outer_acc<T>(grads.view(t_w2_), embed_, ffn_, df2.data(), c.f1.data());
        linalg::axpy<T>(embed_, T(1), df2.data(), grads.view(t_b2_).data());
        std::vector<T> df1(static_cast<size_t>(ffn_), T(0));
        linalg::matvec_transpose_acc<T>(params.view(t_w2_), embed_, ffn_, df2.data(), df1.data());
        for (int i = 0; i < ffn_; ++i) {
            if (c.f1_pre[static_cast<size_t>(i)] <= T(0)) df1[static_cast<size_t>(i)] = T(0);
        }
        linalg::outer_acc<T>(grads.view(t_w1_), ffn_, embed_, df1.data(), c.a.data());
        linalg::axpy<T>(ffn_, T(1), df1.data(), grads.view(t_b1_).data());
        linalg::matvec_transpose_acc<T>(params.view(t_w1_), ffn_, embed_, df1.data(), da.data());

        // LN1
        std::vector<T> da_in(d);
        ln_backward(da, params.view(t_ln1_g_), c.xhat1, c.inv_std1, da_in,
                    grads.view(t_ln1_g_), grads.view(t_ln1_b_));

        // Residual splits into the block input and the attention output.
        std::vector<T> dx_last = da_in;
        std::vector<T> do_attn(d);
        for (size_t i = 0; i < d; ++i) {
            do_attn[i] = c.use_dropout ? da_in[i] * c.mask_attn[i] : da_in[i];
        }
        linalg::outer_acc<T>(grads.view(t_wo_), embed_, embed_, do_attn.data(), c.ctx.data());
        linalg::axpy<T>(embed_, T(1), do_attn.data(), grads.view(t_bo_).data());
        std::vector<T> dctx(d, T(0));
        linalg::matvec_transpose_acc<T>(params.view(t_wo_), embed_, embed_, do_attn.data(),
                                        dctx.data());

        // Attention row at the final position, per head.
        const T inv_sqrt = T(1) / std::sqrt(static_cast<T>(head_dim_));
        std::vector<T> dq(d, T(0)), dk(n * d, T(0)), dv(n * d, T(0));
        std::vector<T> d_attn_row(n), d_scores(n);
        for (int h = 0; h < heads_; ++h) {
            const size_t off = static_cast<size_t>(h) * static_cast<size_t>(head_dim_);
            const T* attn_row = c.attn.data() + static_cast<size_t>(h) * n;
            const T* dctx_h = dctx.data() + off;
            for (size_t j = 0; j < n; ++j) {
                d_attn_row[j] = linalg::dot<T>(head_dim_, dctx_h, c.v.data() + j * d + off);
                linalg::axpy<T>(head_dim_, attn_row[j], dctx_h, dv.data() + j * d + off);
            }
            T weighted = T(0);
            for (size_t j = 0; j < n; ++j) weighted += d_attn_row[j] * attn_row[j];
            for (size_t j = 0; j < n; ++j) {
                d_scores[j] = attn_row[j] * (d_attn_row[j] - weighted);
            }
            for (size_t j = 0; j < n; ++j) {
                linalg::axpy<T>(head_dim_, d_scores[j] * inv_sqrt, c.k.data() + j * d + off,
                                dq.data() + off);
                linalg::axpy<T>(head_dim_, d_scores[j] * inv_sqrt, c.q.data() + off,
                                dk.data() + j * d + off);
            }
        }

        // Affine projections back to the block inputs.
        std::vector<T> dx(n * d, T(0));
        linalg::outer_acc<T>(grads.view(t_wq_), embed_, embed_, dq.data(),
                             c.x.data() + last * d);
        linalg::axpy<T>(embed_, T(1), dq.data(), grads.view(t_bq_).data());
        linalg::matvec_transpose_acc<T>(params.view(t_wq_), embed_, embed_, dq.data(),
                                        dx.data() + last * d);
        for (size_t j = 0; j < n; ++j) {
            const T* dk_j = dk.data() + j * d;
            const T* dv_j = dv.data() + j * d;
            linalg::outer_acc<T>(grads.view(t_wk_), embed_, embed_, dk_j, c.x.data() + j * d);
            linalg::axpy<T>(embed_, T(1), dk_j, grads.view(t_bk_).data());
            linalg::matvec_transpose_acc<T>(params.view(t_wk_), embed_, embed_, dk_j,
                                            dx.data() + j * d);
            linalg::outer_acc<T>(grads.view(t_wv_), embed_, embed_, dv_j, c.x.data() + j * d);
            linalg::axpy<T>(embed_, T(1), dv_j, grads.view(t_bv_).data());
            linalg::matvec_transpose_acc<T>(params.view(t_wv_), embed_, embed_, dv_j,
                                            dx.data() + j * d);
        }
        linalg::axpy<T>(embed_, T(1), dx_last.data(), dx.data() + last * d);

        // Into item + position embeddings, through the input dropout.
        std::span<T> d_pos = grads.view(t_pos_);
        for (size_t j = 0; j < n; ++j) {
            T* de_row = d_embed.data() + static_cast<size_t>(prefix[j]) * d;
            T* dp_row = d_pos.data() + (n - 1 - j) * d;
            const T* dx_j = dx.data() + j * d;
            if (c.use_dropout) {
                const T* m = c.mask_x.data() + j * d;
                for (size_t i = 0; i < d; ++i) {
                    const T g = dx_j[i] * m[i];
                    de_row[i] += g;
                    dp_row[i] += g;
                }
            } else {
                for (size_t i = 0; i < d; ++i) {
                    de_row[i] += dx_j[i];
                    dp_row[i] += dx_j[i];
                }
            }
        }
        return loss;
    }

    ParamStore<T> params;

private:
    struct Cache {
        size_t n = 0;
        bool use_dropout = false;
        std::vector<T> x;      // n x d, post-dropout block input
        std::vector<T> mask_x; // n x d
        std::vector<T> q;      // d, final position
        std::vector<T> k, v;   // n x d
        std::vector<T> attn;   // heads x n, softmax row of final position
        std::vector<T> ctx;    // d, concatenated head outputs
        std::vector<T> mask_attn, mask_ffn; // d
        std::vector<T> a_in, a, xhat1;      // d
        std::vector<T> f1_pre, f1;          // ffn
        std::vector<T> o_in, out, xhat2;    // d
        T inv_std1 = T(0), inv_std2 = T(0);
    };

    static constexpr T kLnEps = T(1e-5);

    void check_prefix(std::span<const ItemIndex> prefix) const {
        if (prefix.empty()) throw DataError("AttnNet: empty prefix");
        if (static_cast<int>(prefix.size()) > max_len_) {
            throw DataError("AttnNet: prefix length " + std::to_string(prefix.size()) +
                            " exceeds positional table of length " + std::to_string(max_len_));
        }
        for (const ItemIndex item : prefix) {
            if (item < 0 || item >= catalog_size_) {
                throw DataError("AttnNet: item index " + std::to_string(item) +
                                " outside catalog of size " + std::to_string(catalog_size_));
            }
        }
    }

    void run_forward(std::span<const ItemIndex> prefix, Cache& c, Rng* dropout_rng,
                     double dropout_p) const {
        check_prefix(prefix);
        const size_t n = prefix.size();
        const size_t d = static_cast<size_t>(embed_);
        c.n = n;
        c.use_dropout = dropout_rng != nullptr && dropout_p > 0.0;
        const T inv_keep = static_cast<T>(1.0 / (1.0 - dropout_p));

        std::span<const T> embed = params.view(t_embed_);
        std::span<const T> pos = params.view(t_pos_);
        c.x.assign(n * d, T(0));
        if (c.use_dropout) c.mask_x.assign(n * d, T(0));
        for (size_t t = 0; t < n; ++t) {
            const T* e_row = embed.data() + static_cast<size_t>(prefix[t]) * d;
            const T* p_row = pos.data() + (n - 1 - t) * d; // recency-indexed
            T* x_row = c.x.data() + t * d;
            for (size_t i = 0; i < d; ++i) x_row[i] = e_row[i] + p_row[i];
            if (c.use_dropout) {
                T* m = c.mask_x.data() + t * d;
                for (size_t i = 0; i < d; ++i) {
                    m[i] = dropout_rng->next_bernoulli(dropout_p) ? T(0) : inv_keep;
                    x_row[i] *= m[i];
                }
            }
        }

        // K, V everywhere; Q only at the final position.
        c.k.assign(n * d, T(0));
        c.v.assign(n * d, T(0));
        for (size_t t = 0; t < n; ++t) {
            T* k_row = c.k.data() + t * d;
            T* v_row = c.v.data() + t * d;
            std::copy_n(params.view(t_bk_).data(), d, k_row);
            std::copy_n(params.view(t_bv_).data(), d, v_row);
            linalg::matvec_acc<T>(params.view(t_wk_), embed_, embed_, c.x.data() + t * d, k_row);
            linalg::matvec_acc<T>(params.view(t_wv_), embed_, embed_, c.x.data() + t * d, v_row);
        }
        const size_t last = n - 1;
        c.q.assign(d, T(0));
        std::copy_n(params.view(t_bq_).data(), d, c.q.data());
        linalg::matvec_acc<T>(params.view(t_wq_), embed_, embed_, c.x.data() + last * d,
                              c.q.data());

        const T inv_sqrt = T(1) / std::sqrt(static_cast<T>(head_dim_));
        c.attn.assign(static_cast<size_t>(heads_) * n, T(0));
        c.ctx.assign(d, T(0));
        for (int h = 0; h < heads_; ++h) {
            const size_t off = static_cast<size_t>(h) * static_cast<size_t>(head_dim_);
            T* row = c.attn.data() + static_cast<size_t>(h) * n;
            T max_score = std::numeric_limits<T>::lowest();
            for (size_t j = 0; j < n; ++j) {
                row[j] = inv_sqrt * linalg::dot<T>(head_dim_, c.q.data() + off,
                                                   c.k.data() + j * d + off);
                max_score = std::max(max_score, row[j]);
            }
            T sum = T(0);
            for (size_t j = 0; j < n; ++j) {
                row[j] = std::exp(row[j] - max_score);
                sum += row[j];
            }
            const T inv_sum = T(1) / sum;
            for (size_t j = 0; j < n; ++j) {
                row[j] *= inv_sum;
                linalg::axpy<T>(head_dim_, row[j], c.v.data() + j * d + off, c.ctx.data() + off);
            }
        }

        std::vector<T> o(d, T(0));
        std::copy_n(params.view(t_bo_).data(), d, o.data());
        linalg::matvec_acc<T>(params.view(t_wo_), embed_, embed_, c.ctx.data(), o.data());
        if (c.use_dropout) {
            c.mask_attn.assign(d, T(0));
            for (size_t i = 0; i < d; ++i) {
                c.mask_attn[i] = dropout_rng->next_bernoulli(dropout_p) ? T(0) : inv_keep;
                o[i] *= c.mask_attn[i];
            }
        }
        c.a_in.assign(d, T(0));
        for (size_t i = 0; i < d; ++i) c.a_in[i] = c.x[last * d + i] + o[i];
        c.a.assign(d, T(0));
        c.xhat1.assign(d, T(0));
        c.inv_std1 = ln_forward(c.a_in, params.view(t_ln1_g_), params.view(t_ln1_b_), c.a, c.xhat1);

        c.f1_pre.assign(static_cast<size_t>(ffn_), T(0));
        std::copy_n(params.view(t_b1_).data(), static_cast<size_t>(ffn_), c.f1_pre.data());
        linalg::matvec_acc<T>(params.view(t_w1_), ffn_, embed_, c.a.data(), c.f1_pre.data());
        c.f1.assign(static_cast<size_t>(ffn_), T(0));
        for (int i = 0; i < ffn_; ++i) {
            c.f1[static_cast<size_t>(i)] = std::max(T(0), c.f1_pre[static_cast<size_t>(i)]);
        }
        std::vector<T> f2(d, T(0));
        std::copy_n(params.view(t_b2_).data(), d, f2.data());
        linalg::matvec_acc<T>(params.view(t_w2_), embed_, ffn_, c.f1.data(), f2.data());
        if (c.use_dropout) {
            c.mask_ffn.assign(d, T(0));
            for (size_t i = 0; i < d; ++i) {
                c.mask_ffn[i] = dropout_rng->next_bernoulli(dropout_p) ? T(0) : inv_keep;
                f2[i] *= c.mask_ffn[i];
            }
        }
        c.o_in.assign(d, T(0));
        for (size_t i = 0; i < d; ++i) c.o_in[i] = c.a[i] + f2[i];
        c.out.assign(d, T(0));
        c.xhat2.assign(d, T(0));
        c.inv_std2 =
            ln_forward(c.o_in, params.view(t_ln2_g_), params.view(t_ln2_b_), c.out, c.xhat2);
    }

    T ln_forward(const std::vector<T>& x, std::span<const T> gain, std::span<const T> bias,
                 std::vector<T>& y, std::vector<T>& xhat) const {
        const size_t d = x.size();
        T mean = T(0);
        for (const T v : x) mean += v;
        mean /= static_cast<T>(d);
        T var = T(0);
        for (const T v : x) var += (v - mean) * (v - mean);
        var /= static_cast<T>(d);
        const T inv_std = T(1) / std::sqrt(var + kLnEps);
        for (size_t i = 0; i < d; ++i) {
            xhat[i] = (x[i] - mean) * inv_std;
            y[i] = gain[i] * xhat[i] + bias[i];
        }
        return inv_std;
    }

    void ln_backward(const std::vector<T>& dy, std::span<const T> gain,
                     const std::vector<T>& xhat, T inv_std, std::vector<T>& dx,
                     std::span<T> dgain, std::span<T> dbias) const {
        const size_t d = dy.size();
        T m1 = T(0), m2 = T(0);
        for (size_t i = 0; i < d; ++i) {
            const T dxhat = dy[i] * gain[i];
            m1 += dxhat;
            m2 += dxhat * xhat[i];
            dgain[i] += dy[i] * xhat[i];
            dbias[i] += dy[i];
        }
        m1 /= static_cast<T>(d);
        m2 /= static_cast<T>(d);
        for (size_t i = 0; i < d; ++i) {
            const T dxhat = dy[i] * gain[i];
            dx[i] = inv_std * (dxhat - m1 - xhat[i] * m2);
        }
    }

    std::vector<T> logits_from_rep(const T* rep) const {
        std::vector<T> logits(static_cast<size_t>(catalog_size_), T(0));
        std::span<const T> embed = params.view(t_embed_);
        for (int j = 0; j < catalog_size_; ++j) {
            logits[static_cast<size_t>(j)] = linalg::dot<T>(
                embed_, embed.data() + static_cast<size_t>(j) * static_cast<size_t>(embed_), rep);
        }
        return logits;
    }

    int catalog_size_;
    int embed_;
    int ffn_;
    int heads_;
    int max_len_;
    int head_dim_;
    size_t t_embed_ = 0, t_pos_ = 0, t_wq_ = 0, t_wk_ = 0, t_wv_ = 0, t_wo_ = 0, t_bq_ = 0,
           t_bk_ = 0, t_bv_ = 0, t_bo_ = 0, t_w1_ = 0, t_b1_ = 0, t_w2_ = 0, t_b2_ = 0,
           t_ln1_g_ = 0, t_ln1_b_ = 0, t_ln2_g_ = 0, t_ln2_b_ = 0;
};

} // namespace recbench::models
