#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "splitcount/model.hpp"
#include "splitcount/rng.hpp"

namespace splitcount {

/// A CNF formula: clauses over variables 1..n_vars as signed indices.
/// Invariants: no empty clause, no tautological clause (x and -x together),
/// every index in range. Same-polarity duplicate literals are collapsed at
/// parse time; duplicate clauses are kept as written.
struct CnfInstance {
    int n_vars = 0;
    std::vector<std::vector<int>> clauses;

    // var (0-based) -> packed occurrence list: (clause_id << 1) | positive.
    std::vector<std::vector<std::uint32_t>> occurrence;

    int n_clauses() const { return static_cast<int>(clauses.size()); }

    /// Rebuild the occurrence index from clauses.
    void reindex();
};

/// Parse DIMACS CNF: 'c' comment lines, a 'p cnf <vars> <clauses>' header,
/// then zero-terminated clauses. Throws ParseError on malformed input,
/// header/body mismatch, out-of-range literals, empty or tautological
/// clauses, and on formulas with no variables or no clauses.
CnfInstance parse_dimacs(std::istream& in);
CnfInstance parse_dimacs(const std::string& text);

/// The m x n inequality system A x >= b equivalent to the formula:
/// a_ij = +1 if x_j occurs in clause i, -1 if negated, 0 otherwise, and
/// b_i = 1 - (number of negated literals in clause i).
struct LinearEncoding {
    int rows = 0;
    int cols = 0;
    std::vector<std::int8_t> a;  // row-major
    std::vector<int> b;

    std::int8_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    bool satisfied(const std::vector<std::uint8_t>& x) const;
};

LinearEncoding encode_linear(const CnfInstance& inst);

/// Number of satisfied clauses.
int sat_score(const CnfInstance& inst, const std::vector<std::uint8_t>& x);

class SatModel {
public:
    using State = std::vector<std::uint8_t>;  // assignment, one byte per variable

    explicit SatModel(CnfInstance inst);

    int max_score() const { return m_; }
    int score_lower_bound() const { return 0; }
    double log_space_size() const { return log_space_; }
    std::string descriptor() const;

    State sample_uniform(RngStream& rng) const;
    int score(const State& s) const { return sat_score(inst_, s); }

    /// Systematic-scan single-site sweep. For each variable in index order,
    /// the value is resampled uniformly among those keeping the score at or
    /// above the threshold; the current value always qualifies. Returns the
    /// score after the sweep.
    int gibbs_sweep(State& s, int threshold, RngStream& rng) const;

    std::string canonical_key(const State& s) const { return pack_bits(s); }
    State state_from_key(const std::string& key) const {
        return unpack_bits(key, static_cast<std::size_t>(inst_.n_vars));
    }

    const CnfInstance& instance() const { return inst_; }

private:
    CnfInstance inst_;
    int m_ = 0;
    double log_space_ = 0.0;
};

static_assert(CountingModel<SatModel>);

}  // namespace splitcount
