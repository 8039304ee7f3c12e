#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "splitcount/model.hpp"
#include "splitcount/rng.hpp"

namespace splitcount {

enum class TableBranch { Auto, Row, Column };

/// Margins of a binary contingency table. One margin (the branch) is kept
/// exact by construction; the score measures deviation on the other.
struct TableInstance {
    std::vector<int> row_sums;
    std::vector<int> col_sums;
    TableBranch branch = TableBranch::Auto;

    int n_rows() const { return static_cast<int>(row_sums.size()); }
    int n_cols() const { return static_cast<int>(col_sums.size()); }

    /// Throws InfeasibleMargins on empty margins, negative or oversized
    /// entries, or mismatched totals.
    static TableInstance from_margins(std::vector<int> rows, std::vector<int> cols,
                                      TableBranch branch = TableBranch::Auto);

    /// JSON object with integer arrays "r" and "c" and an optional
    /// "branch": "row" | "column" | "auto".
    static TableInstance from_json(std::istream& in);
    static TableInstance from_json(const std::string& text);
};

/// Internal orientation: the enforced margin is always the columns. For a
/// row branch the matrix is stored transposed.
struct TableState {
    std::vector<std::uint8_t> bits;  // row-major, internal orientation
    std::vector<int> row_fill;       // maintained sums of the free margin

    bool operator==(const TableState&) const = default;
};

class TableModel {
public:
    using State = TableState;

    explicit TableModel(TableInstance inst);

    int max_score() const { return 0; }
    int score_lower_bound() const { return lower_bound_; }
    double log_space_size() const { return log_space_; }
    std::string descriptor() const;

    /// True when the model enforces column sums of the original matrix.
    bool column_branch() const { return !transposed_; }

    State sample_uniform(RngStream& rng) const;

    /// -sum_i |fill_i - target_i| over the free margin.
    int score(const State& s) const;

    /// Within-column 1-relocation sweep: for each column in order, c_j
    /// single-entry moves, each clearing a uniformly random current 1 and
    /// re-placing it uniformly among the column's empty cells (plus its own)
    /// whose choice keeps the score at or above the threshold. The enforced
    /// margin never changes and the uniform distribution on the level set is
    /// stationary.
    int gibbs_sweep(State& s, int threshold, RngStream& rng) const;

    std::string canonical_key(const State& s) const { return pack_bits(s.bits); }
    State state_from_key(const std::string& key) const;

    /// Build a state from internal-orientation row-major bits.
    State state_from_bits(std::vector<std::uint8_t> bits) const;

    /// The matrix in the original row-major orientation.
    std::vector<std::uint8_t> external_bits(const State& s) const;

    const TableInstance& instance() const { return inst_; }
    int internal_rows() const { return rows_; }
    int internal_cols() const { return cols_; }

private:
    TableInstance inst_;
    bool transposed_ = false;
    int rows_ = 0;                  // internal
    int cols_ = 0;                  // internal (enforced margin)
    std::vector<int> col_target_;   // enforced exactly
    std::vector<int> row_target_;   // scored
    int lower_bound_ = 0;
    double log_space_ = 0.0;
};

static_assert(CountingModel<TableModel>);

}  // namespace splitcount
