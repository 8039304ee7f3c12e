#pragma once

#include <cstdint>

#include "splitcount/graph_model.hpp"
#include "splitcount/sat_model.hpp"
#include "splitcount/table_model.hpp"

namespace splitcount {

struct OracleBudget {
    std::uint64_t max_configurations = 1ull << 26;
};

/// Exact |X*| by enumerating all 2^n assignments.
/// Throws BudgetExceeded when 2^n exceeds the budget.
std::uint64_t exact_count_sat(const CnfInstance& inst, OracleBudget budget = {});

/// Exact number of labeled simple graphs realizing the degree sequence.
/// Recursive per-vertex neighbor assignment with residual-degree pruning;
/// the budget caps visited search nodes.
std::uint64_t exact_count_graphs(const DegreeInstance& inst, OracleBudget budget = {});

/// Exact number of binary contingency tables with the given margins.
/// Column-by-column enumeration over residual row sums with memoization on
/// the residual multiset; the budget caps visited subproblems.
std::uint64_t exact_count_tables(const TableInstance& inst, OracleBudget budget = {});

}  // namespace splitcount
