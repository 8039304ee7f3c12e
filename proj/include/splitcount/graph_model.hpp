#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splitcount/model.hpp"
#include "splitcount/rng.hpp"

namespace splitcount {

/// Prescribed degree sequence over the complete graph K_n. Edge slots are
/// the unordered pairs in lexicographic order; a state chooses exactly
/// k = (sum d_i)/2 of them.
struct DegreeInstance {
    std::vector<int> degrees;
    int n_vertices = 0;
    int n_slots = 0;     // n(n-1)/2
    int edge_target = 0; // k
    std::vector<std::pair<std::uint16_t, std::uint16_t>> slot_pair;

    /// Validates: nonempty, 0 <= d_i <= n-1, even degree sum, k <= slots.
    /// Throws InfeasibleDegrees otherwise.
    static DegreeInstance from_degrees(std::vector<int> degrees);
};

/// One line of whitespace-separated nonnegative integers.
DegreeInstance parse_degree_file(std::istream& in);

/// Erdos-Gallai test. A false result is reported as a warning by callers,
/// not an error: the sampler runs on any feasible slot space.
bool is_graphical(std::span<const int> degrees);

struct EdgeState {
    std::vector<std::uint8_t> chosen;  // slot bitmap, size n_slots
    std::vector<int> degree;           // maintained per vertex

    bool operator==(const EdgeState&) const = default;
};

class GraphModel {
public:
    using State = EdgeState;

    explicit GraphModel(DegreeInstance inst);

    /// Solutions sit at score 0; all other states are negative.
    int max_score() const { return 0; }
    int score_lower_bound() const { return lower_bound_; }
    double log_space_size() const { return log_space_; }
    std::string descriptor() const;

    State sample_uniform(RngStream& rng) const;

    /// -sum_i |deg(v_i) - d_i|, read from the maintained degree vector.
    int score(const State& s) const;

    /// Edge-relocation sweep: k single-edge moves, each removing a uniformly
    /// random current edge and re-placing it uniformly among the vacated
    /// slot plus every unchosen slot whose insertion keeps the score at or
    /// above the threshold. Edge count is invariant and the uniform
    /// distribution on the level set is stationary.
    int gibbs_sweep(State& s, int threshold, RngStream& rng) const;

    std::string canonical_key(const State& s) const { return pack_bits(s.chosen); }
    State state_from_key(const std::string& key) const;

    /// Build a state from a slot bitmap, recomputing degrees.
    State state_from_bits(std::vector<std::uint8_t> chosen) const;

    const DegreeInstance& instance() const { return inst_; }

private:
    DegreeInstance inst_;
    int lower_bound_ = 0;
    double log_space_ = 0.0;
};

static_assert(CountingModel<GraphModel>);

}  // namespace splitcount
