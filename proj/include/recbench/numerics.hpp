#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "recbench/errors.hpp"

namespace recbench {

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

template <typename T>
struct AdamState {
    std::vector<T> m;
    std::vector<T> v;
    long t = 0;
    T beta1 = T(0.9);
    T beta2 = T(0.999);
    T eps = T(1e-8);
    T lr = T(1e-3);

    explicit AdamState(size_t n_params, T learning_rate = T(1e-3))
        : m(n_params, T(0)), v(n_params, T(0)), lr(learning_rate) {}
};

/// One bias-corrected Adam update, in place. Throws NumericError naming the
/// offending flat parameter index on a non-finite gradient.
template <typename T>
void adam_step(std::span<T> params, std::span<const T> grads, AdamState<T>& state) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw NumericError("adam_step: parameter/gradient/state size mismatch");
    }
    state.t += 1;
    const T b1t = static_cast<T>(std::pow(static_cast<double>(state.beta1), static_cast<double>(state.t)));
    const T b2t = static_cast<T>(std::pow(static_cast<double>(state.beta2), static_cast<double>(state.t)));
    for (size_t i = 0; i < params.size(); ++i) {
        const T g = grads[i];
        if (!std::isfinite(static_cast<double>(g))) {
            throw NumericError("adam_step: non-finite gradient at parameter index " + std::to_string(i));
        }
        state.m[i] = state.beta1 * state.m[i] + (T(1) - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (T(1) - state.beta2) * g * g;
        const T m_hat = state.m[i] / (T(1) - b1t);
        const T v_hat = state.v[i] / (T(1) - b2t);
        params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

// ---------------------------------------------------------------------------
// Full-catalog softmax cross-entropy
// ---------------------------------------------------------------------------

/// loss = logsumexp(logits) - logits[target], max-subtracted for stability.
/// dlogits = softmax(logits) - onehot(target), written into `dlogits`.
template <typename T>
T softmax_cross_entropy(std::span<const T> logits, size_t target, std::span<T> dlogits) {
    if (logits.empty()) throw NumericError("softmax_cross_entropy: empty logits");
    if (target >= logits.size()) throw NumericError("softmax_cross_entropy: target out of range");
    if (dlogits.size() != logits.size()) {
        throw NumericError("softmax_cross_entropy: dlogits size mismatch");
    }
    T max_logit = logits[0];
    for (const T v : logits) max_logit = std::max(max_logit, v);
    T sum_exp = T(0);
    for (size_t j = 0; j < logits.size(); ++j) {
        dlogits[j] = std::exp(logits[j] - max_logit);
        sum_exp += dlogits[j];
    }
    const T inv_sum = T(1) / sum_exp;
    for (size_t j = 0; j < logits.size(); ++j) dlogits[j] *= inv_sum;
    const T loss = std::log(sum_exp) + max_logit - logits[target];
    dlogits[target] -= T(1);
    return loss;
}

// ---------------------------------------------------------------------------
// Finite-difference gradient checking (64-bit only)
// ---------------------------------------------------------------------------

struct GradCheckReport {
    double max_relative_error = 0.0;
    std::string worst_parameter;
    double eps = 1e-5;
};

using ScalarFn = std::function<double(std::span<const double>)>;
using ParamNameFn = std::function<std::string(size_t)>;

/// Central-difference gradient of f at params (2 evaluations per coordinate).
inline std::vector<double> numeric_gradient(const ScalarFn& f,
                                            std::span<const double> params,
                                            double eps = 1e-5) {
    std::vector<double> work(params.begin(), params.end());
    std::vector<double> grad(params.size(), 0.0);
    for (size_t i = 0; i < params.size(); ++i) {
        const double saved = work[i];
        work[i] = saved + eps;
        const double f_plus = f(work);
        work[i] = saved - eps;
        const double f_minus = f(work);
        work[i] = saved;
        if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
            throw NumericError("finite_diff_check: non-finite objective at perturbed parameter " +
                               std::to_string(i));
        }
        grad[i] = (f_plus - f_minus) / (2.0 * eps);
    }
    return grad;
}

/// Compares an analytic gradient against central differences.
/// relative error per coordinate: |a - n| / max(1e-12, |a| + |n|).
inline GradCheckReport finite_diff_check(const ScalarFn& f,
                                         std::span<const double> params,
                                         std::span<const double> analytic_grad,
                                         double eps = 1e-5,
                                         const ParamNameFn& param_name = nullptr) {
    if (analytic_grad.size() != params.size()) {
        throw NumericError("finite_diff_check: analytic gradient size mismatch");
    }
    const std::vector<double> numeric = numeric_gradient(f, params, eps);
    GradCheckReport report;
    report.eps = eps;
    size_t worst = 0;
    for (size_t i = 0; i < params.size(); ++i) {
        const double a = analytic_grad[i];
        const double n = numeric[i];
        const double rel = std::abs(a - n) / std::max(1e-12, std::abs(a) + std::abs(n));
        if (rel > report.max_relative_error) {
            report.max_relative_error = rel;
            worst = i;
        }
    }
    report.worst_parameter = param_name ? param_name(worst) : ("param[" + std::to_string(worst) + "]");
    return report;
}

} // namespace recbench
