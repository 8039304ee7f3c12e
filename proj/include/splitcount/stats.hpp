#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace splitcount {

inline double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Sample standard deviation with n-1 denominator.
inline double sample_std(std::span<const double> xs) {
    const double mu = mean(xs);
    double s2 = 0.0;
    for (double x : xs) s2 += (x - mu) * (x - mu);
    return std::sqrt(s2 / static_cast<double>(xs.size() - 1));
}

/// ln C(n, k); -inf outside the support.
inline double log_binomial(double n, double k) {
    if (k < 0.0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace splitcount
