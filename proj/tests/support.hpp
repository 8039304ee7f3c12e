#pragma once

// Shared helpers for the test suites: chi-square uniformity checks,
// seeded instance generators, and brute-force enumerations used as
// independent oracles.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitcount/graph_model.hpp"
#include "splitcount/rng.hpp"
#include "splitcount/sat_model.hpp"
#include "splitcount/table_model.hpp"

namespace testsupport {

// Regularized incomplete gamma functions (series + continued fraction).
inline double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p domain");
    if (x == 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // continued fraction for Q, return 1-Q
    double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi_square_pvalue(double stat, int dof) {
    return 1.0 - gamma_p(dof / 2.0, stat / 2.0);
}

/// Chi-square uniformity p-value for observed counts over equally likely cells.
inline double uniformity_pvalue(const std::vector<std::uint64_t>& counts) {
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    const double expect = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expect;
        stat += d * d / expect;
    }
    return chi_square_pvalue(stat, static_cast<int>(counts.size()) - 1);
}

/// Seeded random 3-SAT instance: each clause has three distinct variables
/// with uniform polarities (tautology-free by construction).
inline splitcount::CnfInstance random_3sat(int n_vars, int n_clauses, std::uint64_t seed) {
    splitcount::RngStream rng(splitcount::mix64(seed ^ 0x35a7ULL));
    splitcount::CnfInstance inst;
    inst.n_vars = n_vars;
    for (int c = 0; c < n_clauses; ++c) {
        int v1, v2, v3;
        v1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_vars))) + 1;
        do {
            v2 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_vars))) + 1;
        } while (v2 == v1);
        do {
            v3 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_vars))) + 1;
        } while (v3 == v1 || v3 == v2);
        auto lit = [&](int v) { return rng.coin() ? v : -v; };
        inst.clauses.push_back({lit(v1), lit(v2), lit(v3)});
    }
    inst.reindex();
    return inst;
}

/// All SAT assignments with score >= threshold, as canonical keys.
inline std::vector<std::string> enumerate_sat_level(const splitcount::SatModel& model,
                                                    int threshold) {
    const int n = model.instance().n_vars;
    std::vector<std::string> keys;
    for (std::uint64_t x = 0; x < (1ull << n); ++x) {
        splitcount::SatModel::State s(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = (x >> j) & 1u;
        if (model.score(s) >= threshold) keys.push_back(model.canonical_key(s));
    }
    return keys;
}

/// All k-subsets of edge slots with score >= threshold, as canonical keys.
inline std::vector<std::string> enumerate_graph_level(const splitcount::GraphModel& model,
                                                      int threshold) {
    const int m = model.instance().n_slots;
    const int k = model.instance().edge_target;
    std::vector<std::string> keys;
    std::vector<int> comb(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(m), 0);
        for (int idx : comb) bits[static_cast<std::size_t>(idx)] = 1;
        auto st = model.state_from_bits(std::move(bits));
        if (model.score(st) >= threshold) keys.push_back(model.canonical_key(st));
        // next combination
        int i = k - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
    return keys;
}

/// All branch-space tables with score >= threshold, as canonical keys.
inline std::vector<std::string> enumerate_table_level(const splitcount::TableModel& model,
                                                      int threshold) {
    const int rows = model.internal_rows();
    const int cols = model.internal_cols();
    std::vector<std::string> keys;
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(rows) * cols, 0);

    // enforced-margin targets in internal orientation
    std::vector<int> targets(static_cast<std::size_t>(cols));
    const auto& inst = model.instance();
    if (model.column_branch())
        targets.assign(inst.col_sums.begin(), inst.col_sums.end());
    else
        targets.assign(inst.row_sums.begin(), inst.row_sums.end());

    // recursive enumeration over columns
    auto rec = [&](auto&& self, int j) -> void {
        if (j == cols) {
            auto st = model.state_from_bits(bits);
            if (model.score(st) >= threshold) keys.push_back(model.canonical_key(st));
            return;
        }
        const int cj = targets[static_cast<std::size_t>(j)];
        std::vector<int> pick(static_cast<std::size_t>(cj));
        for (int i = 0; i < cj; ++i) pick[static_cast<std::size_t>(i)] = i;
        if (cj == 0) {
            self(self, j + 1);
            return;
        }
        while (true) {
            for (int p : pick) bits[static_cast<std::size_t>(p) * cols + j] = 1;
            self(self, j + 1);
            for (int p : pick) bits[static_cast<std::size_t>(p) * cols + j] = 0;
            int i = cj - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == rows - cj + i) --i;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
            for (int jj = i + 1; jj < cj; ++jj)
                pick[static_cast<std::size_t>(jj)] = pick[static_cast<std::size_t>(jj - 1)] + 1;
        }
    };
    rec(rec, 0);
    return keys;
}

/// Serialize an instance back to DIMACS text.
inline std::string to_dimacs(const splitcount::CnfInstance& inst) {
    std::string out = "p cnf " + std::to_string(inst.n_vars) + " " +
                      std::to_string(inst.clauses.size()) + "\n";
    for (const auto& clause : inst.clauses) {
        for (int lit : clause) out += std::to_string(lit) + " ";
        out += "0\n";
    }
    return out;
}

/// Exact binomial coefficient in 64 bits.
inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace testsupport
