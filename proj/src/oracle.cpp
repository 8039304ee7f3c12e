#include "splitcount/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "splitcount/errors.hpp"

namespace splitcount {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw BudgetExceeded("oracle: count exceeds 64 bits");
    return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw BudgetExceeded("oracle: count exceeds 64 bits");
    return r;
}

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n-k+i) / i stays integral at every step
        r = checked_mul(r, n - k + i) / i;
    }
    return r;
}

}  // namespace

std::uint64_t exact_count_sat(const CnfInstance& inst, OracleBudget budget) {
    const int n = inst.n_vars;
    if (n >= 63 || (1ull << n) > budget.max_configurations)
        throw BudgetExceeded("sat oracle: 2^" + std::to_string(n) + " configurations over budget");
    const std::uint64_t total = 1ull << n;

    std::uint64_t count = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : count)
#endif
    for (long long xi = 0; xi < static_cast<long long>(total); ++xi) {
        const auto x = static_cast<std::uint64_t>(xi);
        bool all = true;
        for (const auto& clause : inst.clauses) {
            bool sat = false;
            for (int lit : clause) {
                const int var = std::abs(lit) - 1;
                const bool val = (x >> var) & 1u;
                if (val == (lit > 0)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all) ++count;
    }
    return count;
}

namespace {

struct GraphCounter {
    int n = 0;
    std::uint64_t nodes = 0;
    std::uint64_t node_budget = 0;
    std::vector<int> residual;
    std::vector<int> picked;  // scratch for neighbor choices

    std::uint64_t count() {
        bump();
        // first vertex with residual degree; all its edges must be assigned now
        int v = -1;
        for (int i = 0; i < n; ++i) {
            if (residual[static_cast<std::size_t>(i)] > 0) {
                v = i;
                break;
            }
        }
        if (v < 0) return 1;

        std::vector<int> others;
        for (int u = v + 1; u < n; ++u)
            if (residual[static_cast<std::size_t>(u)] > 0) others.push_back(u);
        const int need = residual[static_cast<std::size_t>(v)];
        if (static_cast<int>(others.size()) < need) return 0;

        residual[static_cast<std::size_t>(v)] = 0;
        const std::uint64_t total = choose(others, 0, need);
        residual[static_cast<std::size_t>(v)] = need;
        return total;
    }

private:
    void bump() {
        if (++nodes > node_budget) throw BudgetExceeded("graph oracle: search budget exhausted");
    }

    std::uint64_t choose(const std::vector<int>& others, std::size_t from, int need) {
        if (need == 0) return count();
        if (others.size() - from < static_cast<std::size_t>(need)) return 0;
        bump();
        std::uint64_t total = 0;
        for (std::size_t i = from; i + static_cast<std::size_t>(need) <= others.size(); ++i) {
            const int u = others[i];
            --residual[static_cast<std::size_t>(u)];
            total = checked_add(total, choose(others, i + 1, need - 1));
            ++residual[static_cast<std::size_t>(u)];
        }
        return total;
    }
};

}  // namespace

std::uint64_t exact_count_graphs(const DegreeInstance& inst, OracleBudget budget) {
    // Vertices earlier than the current one always have residual zero, so
    // neighbor choices among later vertices enumerate each edge set once.
    GraphCounter gc;
    gc.n = inst.n_vertices;
    gc.node_budget = budget.max_configurations;
    gc.residual = inst.degrees;
    return gc.count();
}

namespace {

struct TableCounter {
    int rows = 0;
    std::vector<int> col_target;
    std::vector<long long> suffix;  // remaining column capacity from column j on
    std::uint64_t nodes = 0;
    std::uint64_t node_budget = 0;
    std::map<std::string, std::uint64_t> memo;

    std::uint64_t count(int j, std::vector<int>& residual) {
        if (++nodes > node_budget) throw BudgetExceeded("table oracle: search budget exhausted");
        const int n_cols = static_cast<int>(col_target.size());
        if (j == n_cols)
            return std::all_of(residual.begin(), residual.end(), [](int r) { return r == 0; }) ? 1 : 0;

        long long rsum = 0;
        for (int r : residual) {
            if (r < 0) return 0;
            // a row can take at most one 1 per remaining column
            if (r > n_cols - j) return 0;
            rsum += r;
        }
        if (rsum != suffix[static_cast<std::size_t>(j)]) return 0;

        // memo key: column index + sorted residual multiset
        std::string key;
        key.reserve(residual.size() + 4);
        key.push_back(static_cast<char>(j));
        {
            std::vector<int> sorted = residual;
            std::sort(sorted.begin(), sorted.end());
            for (int r : sorted) key.push_back(static_cast<char>(r));
        }
        if (auto it = memo.find(key); it != memo.end()) return it->second;

        // group rows by residual value; rows with equal residuals are
        // interchangeable, so pick multiplicities per value
        std::map<int, int> groups;
        for (int r : residual)
            if (r > 0) ++groups[r];
        std::vector<std::pair<int, int>> value_count(groups.begin(), groups.end());

        std::vector<int> take(value_count.size(), 0);
        const std::uint64_t total =
            enumerate(j, residual, value_count, take, 0, col_target[static_cast<std::size_t>(j)]);
        memo.emplace(std::move(key), total);
        return total;
    }

private:
    std::uint64_t enumerate(int j, std::vector<int>& residual,
                            const std::vector<std::pair<int, int>>& value_count,
                            std::vector<int>& take, std::size_t g, int left) {
        if (g == value_count.size()) {
            if (left != 0) return 0;
            // apply: decrement `take[g]` rows of each value group
            std::uint64_t ways = 1;
            std::vector<std::size_t> touched;
            for (std::size_t gi = 0; gi < value_count.size(); ++gi) {
                const auto [value, avail] = value_count[gi];
                const int t = take[gi];
                if (t == 0) continue;
                ways = checked_mul(ways, binomial_u64(static_cast<std::uint64_t>(avail),
                                                      static_cast<std::uint64_t>(t)));
                int done = 0;
                for (std::size_t i = 0; i < residual.size() && done < t; ++i) {
                    if (residual[i] == value) {
                        --residual[i];
                        touched.push_back(i);
                        ++done;
                    }
                }
            }
            const std::uint64_t sub = count(j + 1, residual);
            for (std::size_t i : touched) ++residual[i];
            return checked_mul(ways, sub);
        }
        std::uint64_t total = 0;
        const int avail = value_count[g].second;
        for (int t = 0; t <= std::min(avail, left); ++t) {
            take[g] = t;
            total = checked_add(total, enumerate(j, residual, value_count, take, g + 1, left - t));
        }
        take[g] = 0;
        return total;
    }
};

}  // namespace

std::uint64_t exact_count_tables(const TableInstance& inst, OracleBudget budget) {
    // Count in the column-branch orientation regardless of the sampling
    // branch; the count is a property of the margins alone.
    TableCounter tc;
    tc.rows = inst.n_rows();
    tc.col_target = inst.col_sums;
    tc.node_budget = budget.max_configurations;
    tc.suffix.assign(inst.col_sums.size() + 1, 0);
    for (std::size_t j = inst.col_sums.size(); j-- > 0;)
        tc.suffix[j] = tc.suffix[j + 1] + inst.col_sums[j];
    std::vector<int> residual = inst.row_sums;
    return tc.count(0, residual);
}

}  // namespace splitcount
