#include "recbench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "recbench/errors.hpp"
#include "recbench/rng.hpp"

namespace recbench::synth {

void SynthConfig::validate() const {
    if (n_users < 1) throw UsageError("synth: n_users must be >= 1");
    if (n_items < 2) throw UsageError("synth: n_items must be >= 2");
    if (session_len_min < 3) throw UsageError("synth: session_len_min must be >= 3");
    if (session_len_max < session_len_min) {
        throw UsageError("synth: session_len_max must be >= session_len_min");
    }
    if (p_repeat < 0.0 || p_repeat > 1.0) throw UsageError("synth: p_repeat must be in [0, 1]");
    if (zipf_s < 0.0) throw UsageError("synth: zipf_s must be >= 0");
}

namespace {

/// CDF over item ranks, p(rank r) proportional to 1/(r+1)^s.
std::vector<double> zipf_cdf(int n_items, double s) {
    std::vector<double> cdf(static_cast<size_t>(n_items));
    double total = 0.0;
    for (int r = 0; r < n_items; ++r) {
        total += 1.0 / std::pow(static_cast<double>(r + 1), s);
        cdf[static_cast<size_t>(r)] = total;
    }
    for (double& v : cdf) v /= total;
    cdf.back() = 1.0; // guard against accumulated rounding
    return cdf;
}

int zipf_draw(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.next_uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(it - cdf.begin());
}

} // namespace

corpus::InteractionLog generate(const SynthConfig& config) {
    config.validate();
    const std::vector<double> cdf = zipf_cdf(config.n_items, config.zipf_s);

    corpus::InteractionLog log;
    const int span = config.session_len_max - config.session_len_min + 1;
    for (int u = 0; u < config.n_users; ++u) {
        Rng rng(Rng::mix(config.seed, static_cast<uint64_t>(u)));
        const int len =
            config.session_len_min + static_cast<int>(rng.next_below(static_cast<uint64_t>(span)));
        const std::string user = "u" + std::to_string(u);
        int prev = -1;
        for (int t = 0; t < len; ++t) {
            int item;
            if (prev >= 0 && rng.next_bernoulli(config.p_repeat)) {
                item = prev;
            } else {
                item = zipf_draw(cdf, rng);
                while (item == prev) item = zipf_draw(cdf, rng);
            }
            log.push_back({user, "i" + std::to_string(item), t});
            prev = item;
        }
    }
    return log;
}

} // namespace recbench::synth
