#include "splitcount/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace splitcount {

void validate(const SplitConfig& cfg) {
    if (cfg.sample_size < 100) throw ConfigError("sample_size must be at least 100");
    if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
    if (cfg.max_iterations < 1) throw ConfigError("max_iterations must be positive");
    if (cfg.boost_sample_size > 0 && cfg.boost_sample_size < cfg.sample_size)
        throw ConfigError("boost_sample_size must be >= sample_size");
    if (cfg.chain_thinning < 1) throw ConfigError("chain_thinning must be positive");
    if (cfg.threads < 0) throw ConfigError("threads must be nonnegative");
}

int select_threshold(std::span<const int> scores, int previous, double rho, int m) {
    if (scores.empty()) throw std::invalid_argument("select_threshold: no scores");
    const std::size_t n = scores.size();

    // ceil(N*rho)-th largest. The epsilon absorbs cases like 0.4*5 landing
    // one ulp above the exact integer.
    const double target = rho * static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::ceil(target - 1e-12 * std::max(1.0, target)));
    k = std::clamp<std::size_t>(k, 1, n);

    std::vector<int> order(scores.begin(), scores.end());
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(),
                     std::greater<int>());
    const int quantile = order[k - 1];

    int threshold = std::min(quantile, m);
    if (threshold <= previous) {
        // Stagnation: jump to the nearest achievable level above `previous`.
        int next_value = std::numeric_limits<int>::max();
        for (int s : scores)
            if (s > previous && s < next_value) next_value = s;
        if (next_value == std::numeric_limits<int>::max())
            throw StagnationFailure("no sample scores above the current level " +
                                    std::to_string(previous));
        threshold = std::min(next_value, m);
    }
    return threshold;
}

}  // namespace splitcount
