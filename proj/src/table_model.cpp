#include "splitcount/table_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "splitcount/errors.hpp"
#include "splitcount/stats.hpp"

namespace splitcount {

TableInstance TableInstance::from_margins(std::vector<int> rows, std::vector<int> cols,
                                          TableBranch branch) {
    if (rows.empty() || cols.empty()) throw InfeasibleMargins("empty margin vector");
    const int m = static_cast<int>(rows.size());
    const int n = static_cast<int>(cols.size());
    long long rsum = 0, csum = 0;
    for (int r : rows) {
        if (r < 0 || r > n) throw InfeasibleMargins("row sum out of [0, n]");
        rsum += r;
    }
    for (int c : cols) {
        if (c < 0 || c > m) throw InfeasibleMargins("column sum out of [0, m]");
        csum += c;
    }
    if (rsum != csum) throw InfeasibleMargins("row and column totals differ");
    TableInstance inst;
    inst.row_sums = std::move(rows);
    inst.col_sums = std::move(cols);
    inst.branch = branch;
    return inst;
}

TableInstance TableInstance::from_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("table spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("r") || !j.contains("c"))
        throw ParseError("table spec: expected object with arrays \"r\" and \"c\"");
    std::vector<int> r, c;
    try {
        r = j.at("r").get<std::vector<int>>();
        c = j.at("c").get<std::vector<int>>();
    } catch (const std::exception&) {
        throw ParseError("table spec: \"r\" and \"c\" must be integer arrays");
    }
    TableBranch branch = TableBranch::Auto;
    if (j.contains("branch")) {
        const std::string b = j.at("branch").get<std::string>();
        if (b == "row")
            branch = TableBranch::Row;
        else if (b == "column")
            branch = TableBranch::Column;
        else if (b == "auto")
            branch = TableBranch::Auto;
        else
            throw ParseError("table spec: branch must be \"row\", \"column\" or \"auto\"");
    }
    return from_margins(std::move(r), std::move(c), branch);
}

TableInstance TableInstance::from_json(const std::string& text) {
    std::istringstream in(text);
    return from_json(in);
}

TableModel::TableModel(TableInstance inst) : inst_(std::move(inst)) {
    const int m = inst_.n_rows();
    const int n = inst_.n_cols();

    TableBranch branch = inst_.branch;
    if (branch == TableBranch::Auto) {
        // Pick the branch with the smaller configuration space.
        double col_log = 0.0, row_log = 0.0;
        for (int c : inst_.col_sums) col_log += log_binomial(m, c);
        for (int r : inst_.row_sums) row_log += log_binomial(n, r);
        branch = col_log <= row_log ? TableBranch::Column : TableBranch::Row;
    }
    transposed_ = branch == TableBranch::Row;

    if (!transposed_) {
        rows_ = m;
        cols_ = n;
        col_target_ = inst_.col_sums;
        row_target_ = inst_.row_sums;
    } else {
        rows_ = n;
        cols_ = m;
        col_target_ = inst_.row_sums;
        row_target_ = inst_.col_sums;
    }

    long long target_total = std::accumulate(row_target_.begin(), row_target_.end(), 0LL);
    lower_bound_ = static_cast<int>(-2 * target_total);
    log_space_ = 0.0;
    for (int c : col_target_) log_space_ += log_binomial(rows_, c);
}

std::string TableModel::descriptor() const {
    return "table " + std::to_string(inst_.n_rows()) + "x" + std::to_string(inst_.n_cols()) +
           (column_branch() ? " branch=column" : " branch=row");
}

TableModel::State TableModel::sample_uniform(RngStream& rng) const {
    static thread_local std::vector<std::uint32_t> perm;
    State st;
    st.bits.assign(static_cast<std::size_t>(rows_) * cols_, 0);
    st.row_fill.assign(static_cast<std::size_t>(rows_), 0);
    perm.resize(static_cast<std::size_t>(rows_));
    for (int j = 0; j < cols_; ++j) {
        const int cj = col_target_[static_cast<std::size_t>(j)];
        for (int i = 0; i < rows_; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
        for (int t = 0; t < cj; ++t) {
            const auto u = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(rows_ - t)));
            std::swap(perm[static_cast<std::size_t>(t)], perm[static_cast<std::size_t>(u)]);
            const std::uint32_t i = perm[static_cast<std::size_t>(t)];
            st.bits[static_cast<std::size_t>(i) * cols_ + j] = 1;
            ++st.row_fill[i];
        }
    }
    return st;
}

int TableModel::score(const State& s) const {
    int dev = 0;
    for (int i = 0; i < rows_; ++i)
        dev += std::abs(s.row_fill[static_cast<std::size_t>(i)] - row_target_[static_cast<std::size_t>(i)]);
    return -dev;
}

int TableModel::gibbs_sweep(State& st, int threshold, RngStream& rng) const {
    static thread_local std::vector<std::uint32_t> ones;
    static thread_local std::vector<std::uint32_t> candidates;

    int score = this->score(st);
    for (int j = 0; j < cols_; ++j) {
        ones.clear();
        for (int i = 0; i < rows_; ++i)
            if (st.bits[static_cast<std::size_t>(i) * cols_ + j]) ones.push_back(static_cast<std::uint32_t>(i));

        // c_j single-entry relocations within the column, each picking a
        // uniformly random current 1. Symmetric on the level set, so the
        // uniform distribution is invariant.
        const std::size_t cj = ones.size();
        for (std::size_t step = 0; step < cj; ++step) {
            const std::size_t pos = static_cast<std::size_t>(rng.below(cj));
            const std::uint32_t i1 = ones[pos];
            // clear the 1
            int removed_score = score;
            removed_score += std::abs(st.row_fill[i1] - row_target_[i1]) -
                             std::abs(st.row_fill[i1] - 1 - row_target_[i1]);
            --st.row_fill[i1];
            st.bits[static_cast<std::size_t>(i1) * cols_ + j] = 0;

            candidates.clear();
            for (int i = 0; i < rows_; ++i) {
                if (st.bits[static_cast<std::size_t>(i) * cols_ + j]) continue;
                const int g = std::abs(st.row_fill[static_cast<std::size_t>(i)] - row_target_[static_cast<std::size_t>(i)]) -
                              std::abs(st.row_fill[static_cast<std::size_t>(i)] + 1 - row_target_[static_cast<std::size_t>(i)]);
                if (removed_score + g >= threshold) candidates.push_back(static_cast<std::uint32_t>(i));
            }
            const std::uint32_t pick = candidates[rng.below(candidates.size())];
            st.bits[static_cast<std::size_t>(pick) * cols_ + j] = 1;
            score = removed_score +
                    std::abs(st.row_fill[pick] - row_target_[pick]) -
                    std::abs(st.row_fill[pick] + 1 - row_target_[pick]);
            ++st.row_fill[pick];
            ones[pos] = pick;
        }
    }
    return score;
}

TableModel::State TableModel::state_from_key(const std::string& key) const {
    return state_from_bits(unpack_bits(key, static_cast<std::size_t>(rows_) * cols_));
}

TableModel::State TableModel::state_from_bits(std::vector<std::uint8_t> bits) const {
    State st;
    st.bits = std::move(bits);
    st.row_fill.assign(static_cast<std::size_t>(rows_), 0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (st.bits[static_cast<std::size_t>(i) * cols_ + j]) ++st.row_fill[static_cast<std::size_t>(i)];
    return st;
}

std::vector<std::uint8_t> TableModel::external_bits(const State& s) const {
    if (!transposed_) return s.bits;
    const int m = inst_.n_rows();
    const int n = inst_.n_cols();
    std::vector<std::uint8_t> out(static_cast<std::size_t>(m) * n, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            out[static_cast<std::size_t>(i) * n + j] = s.bits[static_cast<std::size_t>(j) * cols_ + i];
    return out;
}

}  // namespace splitcount
