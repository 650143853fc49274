#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "recbench/cases.hpp"
#include "recbench/errors.hpp"
#include "recbench/linalg.hpp"
#include "recbench/numerics.hpp"
#include "recbench/params.hpp"

namespace recbench::models {

// Single-layer GRU next-item scorer with tied input/output item embeddings.
//
//   x_t = drop(E[i_t])
//   z_t = sigmoid(b_z + W_z x_t + U_z h_{t-1})        update gate
//   r_t = sigmoid(b_r + W_r x_t + U_r h_{t-1})        reset gate
//   n_t = tanh  (b_n + W_n x_t + U_n (r_t * h_{t-1})) candidate
//   h_t = (1 - z_t) * n_t + z_t * h_{t-1}
//   logits = E . rep,  rep = h_n (projected when hidden_dim != embed_dim)
template <typename T>
class GruNet {
public:
    GruNet(int catalog_size, int embed_dim, int hidden_dim)
        : catalog_size_(catalog_size), embed_(embed_dim), hidden_(hidden_dim) {
        if (catalog_size < 1 || embed_dim < 1 || hidden_dim < 1) {
            throw UsageError("GruNet: dimensions must be >= 1");
        }
        t_embed_ = params.add("item_embedding", catalog_size, embed_dim);
        t_wz_ = params.add("gru.W_z", hidden_dim, embed_dim);
        t_wr_ = params.add("gru.W_r", hidden_dim, embed_dim);
        t_wn_ = params.add("gru.W_n", hidden_dim, embed_dim);
        t_uz_ = params.add("gru.U_z", hidden_dim, hidden_dim);
        t_ur_ = params.add("gru.U_r", hidden_dim, hidden_dim);
        t_un_ = params.add("gru.U_n", hidden_dim, hidden_dim);
        t_bz_ = params.add("gru.b_z", hidden_dim);
        t_br_ = params.add("gru.b_r", hidden_dim);
        t_bn_ = params.add("gru.b_n", hidden_dim);
        if (hidden_dim != embed_dim) {
            t_proj_ = params.add("output_projection", embed_dim, hidden_dim);
        }
    }

    void init_params(Rng& rng) {
        fill_gaussian(params.view(t_embed_), rng, 0.05);
        const double w_std = 1.0 / std::sqrt(static_cast<double>(embed_));
        const double u_std = 1.0 / std::sqrt(static_cast<double>(hidden_));
        for (const size_t t : {t_wz_, t_wr_, t_wn_}) fill_gaussian(params.view(t), rng, w_std);
        for (const size_t t : {t_uz_, t_ur_, t_un_}) fill_gaussian(params.view(t), rng, u_std);
        if (hidden_ != embed_) fill_gaussian(params.view(t_proj_), rng, u_std);
        // biases stay zero
    }

    int catalog_size() const { return catalog_size_; }
    int embed_dim() const { return embed_; }
    int hidden_dim() const { return hidden_; }

    /// Inference logits over the whole catalog, dropout off.
    std::vector<T> forward(std::span<const ItemIndex> prefix) const {
        check_prefix(prefix);
        std::vector<T> h(static_cast<size_t>(hidden_), T(0));
        std::vector<T> z(h.size()), r(h.size()), n(h.size()), rh(h.size());
        for (const ItemIndex item : prefix) {
            const T* x = embedding_row(item);
            step(x, h.data(), z.data(), r.data(), n.data(), rh.data());
            for (int i = 0; i < hidden_; ++i) {
                h[static_cast<size_t>(i)] = (T(1) - z[static_cast<size_t>(i)]) * n[static_cast<size_t>(i)] +
                                            z[static_cast<size_t>(i)] * h[static_cast<size_t>(i)];
            }
        }
        return logits_from_rep(representation(h).data());
    }

    /// Training path: forward with (optional) embedding dropout, softmax CE
    /// against gt, backward through time; gradients accumulate into `grads`.
    T loss_and_grad(std::span<const ItemIndex> prefix, ItemIndex gt,
                    ParamStore<T>& grads, Rng* dropout_rng = nullptr,
                    double dropout_p = 0.0) const {
        check_prefix(prefix);
        if (gt < 0 || gt >= catalog_size_) throw DataError("GruNet: gt index out of range");
        const size_t n_steps = prefix.size();
        const size_t hd = static_cast<size_t>(hidden_);
        const size_t ed = static_cast<size_t>(embed_);

        // Per-step activations for BPTT.
        std::vector<T> xs(n_steps * ed), masks;
        std::vector<T> h_prev(n_steps * hd), zs(n_steps * hd), rs(n_steps * hd),
            ns(n_steps * hd), rhs(n_steps * hd);
        const bool use_dropout = dropout_rng != nullptr && dropout_p > 0.0;
        if (use_dropout) masks.assign(n_steps * ed, T(0));
        const T inv_keep = static_cast<T>(1.0 / (1.0 - dropout_p));

        std::vector<T> h(hd, T(0));
        for (size_t t = 0; t < n_steps; ++t) {
            const T* e_row = embedding_row(prefix[t]);
            T* x = xs.data() + t * ed;
            if (use_dropout) {
                T* m = masks.data() + t * ed;
                for (size_t i = 0; i < ed; ++i) {
                    m[i] = dropout_rng->next_bernoulli(dropout_p) ? T(0) : inv_keep;
                    x[i] = e_row[i] * m[i];
                }
            } else {
                std::copy(e_row, e_row + ed, x);
            }
            std::copy(h.begin(), h.end(), h_prev.begin() + static_cast<long>(t * hd));
            step(x, h.data(), zs.data() + t * hd, rs.data() + t * hd, ns.data() + t * hd,
                 rhs.data() + t * hd);
            const T* z = zs.data() + t * hd;
            const T* nn = ns.data() + t * hd;
            for (size_t i = 0; i < hd; ++i) h[i] = (T(1) - z[i]) * nn[i] + z[i] * h[i];
        }

        const std::vector<T> rep = representation(h);
        std::vector<T> logits = logits_from_rep(rep.data());
        std::vector<T> dlogits(logits.size());
        const T loss = softmax_cross_entropy<T>(logits, static_cast<size_t>(gt), dlogits);

        // ---- backward ----
        std::span<T> d_embed = grads.view(t_embed_);
        std::vector<T> drep(ed, T(0));
        linalg::matvec_transpose_acc<T>(params.view(t_embed_), catalog_size_, embed_,
                                        dlogits.data(), drep.data());
        linalg::outer_acc<T>(d_embed, catalog_size_, embed_, dlogits.data(), rep.data());

        std::vector<T> dh(hd, T(0));
        if (hidden_ != embed_) {
            linalg::outer_acc<T>(grads.view(t_proj_), embed_, hidden_, drep.data(), h.data());
            linalg::matvec_transpose_acc<T>(params.view(t_proj_), embed_, hidden_, drep.data(),
                                            dh.data());
        } else {
            std::copy(drep.begin(), drep.end(), dh.begin());
        }

        std::vector<T> dh_prev(hd), daz(hd), dar(hd), dan(hd), drh(hd), dx(ed);
        for (size_t t = n_steps; t-- > 0;) {
            const T* hp = h_prev.data() + t * hd;
            const T* z = zs.data() + t * hd;
            const T* r = rs.data() + t * hd;
            const T* nn = ns.data() + t * hd;
            const T* rh = rhs.data() + t * hd;
            const T* x = xs.data() + t * ed;

            for (size_t i = 0; i < hd; ++i) {
                const T dz = dh[i] * (hp[i] - nn[i]);
                const T dn = dh[i] * (T(1) - z[i]);
                dh_prev[i] = dh[i] * z[i];
                dan[i] = dn * (T(1) - nn[i] * nn[i]);
                daz[i] = dz * z[i] * (T(1) - z[i]);
            }
            // candidate path
            linalg::axpy<T>(hidden_, T(1), dan.data(), grads.view(t_bn_).data());
            linalg::outer_acc<T>(grads.view(t_wn_), hidden_, embed_, dan.data(), x);
            linalg::outer_acc<T>(grads.view(t_un_), hidden_, hidden_, dan.data(), rh);
            std::fill(drh.begin(), drh.end(), T(0));
            linalg::matvec_transpose_acc<T>(params.view(t_un_), hidden_, hidden_, dan.data(),
                                            drh.data());
            for (size_t i = 0; i < hd; ++i) {
                const T dr = drh[i] * hp[i];
                dh_prev[i] += drh[i] * r[i];
                dar[i] = dr * r[i] * (T(1) - r[i]);
            }
            // reset path
            linalg::axpy<T>(hidden_, T(1), dar.data(), grads.view(t_br_).data());
            linalg::outer_acc<T>(grads.view(t_wr_), hidden_, embed_, dar.data(), x);
            linalg::outer_acc<T>(grads.view(t_ur_), hidden_, hidden_, dar.data(), hp);
            linalg::matvec_transpose_acc<T>(params.view(t_ur_), hidden_, hidden_, dar.data(),
                                            dh_prev.data());
            // update path
            linalg::axpy<T>(hidden_, T(1), daz.data(), grads.view(t_bz_).data());
            linalg::outer_acc<T>(grads.view(t_wz_), hidden_, embed_, daz.data(), x);
            linalg::outer_acc<T>(grads.view(t_uz_), hidden_, hidden_, daz.data(), hp);
            linalg::matvec_transpose_acc<T>(params.view(t_uz_), hidden_, hidden_, daz.data(),
                                            dh_prev.data());
            // input path
            std::fill(dx.begin(), dx.end(), T(0));
            linalg::matvec_transpose_acc<T>(params.view(t_wz_), hidden_, embed_, daz.data(), dx.data());
            linalg::matvec_transpose_acc<T>(params.view(t_wr_), hidden_, embed_, dar.data(), dx.data());
            linalg::matvec_transpose_acc<T>(params.view(t_wn_), hidden_, embed_, dan.data(), dx.data());
            T* de_row = d_embed.data() + static_cast<size_t>(prefix[t]) * ed;
            if (use_dropout) {
                const T* m = masks.data() + t * ed;
                for (size_t i = 0; i < ed; ++i) de_row[i] += dx[i] * m[i];
            } else {
                linalg::axpy<T>(embed_, T(1), dx.data(), de_row);
            }
            std::swap(dh, dh_prev);
        }
        return loss;
    }

    ParamStore<T> params;

private:
    void check_prefix(std::span<const ItemIndex> prefix) const {
        if (prefix.empty()) throw DataError("GruNet: empty prefix");
        for (const ItemIndex item : prefix) {
            if (item < 0 || item >= catalog_size_) {
                throw DataError("GruNet: item index " + std::to_string(item) +
                                " outside catalog of size " + std::to_string(catalog_size_));
            }
        }
    }

    const T* embedding_row(ItemIndex item) const {
        return params.view(t_embed_).data() + static_cast<size_t>(item) * static_cast<size_t>(embed_);
    }

    /// Gate pre-activations + nonlinearities for one step; h is h_{t-1} on entry.
    void step(const T* x, const T* h, T* z, T* r, T* n, T* rh) const {
        const size_t hd = static_cast<size_t>(hidden_);
        std::copy_n(params.view(t_bz_).data(), hd, z);
        std::copy_n(params.view(t_br_).data(), hd, r);
        linalg::matvec_acc<T>(params.view(t_wz_), hidden_, embed_, x, z);
        linalg::matvec_acc<T>(params.view(t_uz_), hidden_, hidden_, h, z);
        linalg::matvec_acc<T>(params.view(t_wr_), hidden_, embed_, x, r);
        linalg::matvec_acc<T>(params.view(t_ur_), hidden_, hidden_, h, r);
        for (size_t i = 0; i < hd; ++i) {
            z[i] = sigmoid(z[i]);
            r[i] = sigmoid(r[i]);
            rh[i] = r[i] * h[i];
        }
        std::copy_n(params.view(t_bn_).data(), hd, n);
        linalg::matvec_acc<T>(params.view(t_wn_), hidden_, embed_, x, n);
        linalg::matvec_acc<T>(params.view(t_un_), hidden_, hidden_, rh, n);
        for (size_t i = 0; i < hd; ++i) n[i] = std::tanh(n[i]);
    }

    std::vector<T> representation(const std::vector<T>& h) const {
        if (hidden_ == embed_) return h;
        std::vector<T> rep(static_cast<size_t>(embed_), T(0));
        linalg::matvec_acc<T>(params.view(t_proj_), embed_, hidden_, h.data(), rep.data());
        return rep;
    }

    std::vector<T> logits_from_rep(const T* rep) const {
        std::vector<T> logits(static_cast<size_t>(catalog_size_), T(0));
        std::span<const T> embed = params.view(t_embed_);
        for (int j = 0; j < catalog_size_; ++j) {
            logits[static_cast<size_t>(j)] =
                linalg::dot<T>(embed_, embed.data() + static_cast<size_t>(j) * static_cast<size_t>(embed_), rep);
        }
        return logits;
    }

    static T sigmoid(T v) { return T(1) / (T(1) + std::exp(-v)); }

    int catalog_size_;
    int embed_;
    int hidden_;
    size_t t_embed_ = 0, t_wz_ = 0, t_wr_ = 0, t_wn_ = 0, t_uz_ = 0, t_ur_ = 0, t_un_ = 0,
           t_bz_ = 0, t_br_ = 0, t_bn_ = 0, t_proj_ = 0;
};

} // namespace recbench::models
