#include "splitcount/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numeric>

#include "splitcount/errors.hpp"
#include "splitcount/stats.hpp"

namespace splitcount {

DegreeInstance DegreeInstance::from_degrees(std::vector<int> degrees) {
    if (degrees.empty()) throw InfeasibleDegrees("degree sequence is empty");
    const int n = static_cast<int>(degrees.size());
    long long sum = 0;
    for (int d : degrees) {
        if (d < 0) throw InfeasibleDegrees("negative degree");
        if (d > n - 1) throw InfeasibleDegrees("degree exceeds n-1");
        sum += d;
    }
    if (sum % 2 != 0) throw InfeasibleDegrees("odd degree sum");

    DegreeInstance inst;
    inst.degrees = std::move(degrees);
    inst.n_vertices = n;
    inst.n_slots = n * (n - 1) / 2;
    inst.edge_target = static_cast<int>(sum / 2);
    if (inst.edge_target > inst.n_slots)
        throw InfeasibleDegrees("edge target exceeds slot count");
    inst.slot_pair.reserve(static_cast<std::size_t>(inst.n_slots));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            inst.slot_pair.emplace_back(static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j));
    return inst;
}

DegreeInstance parse_degree_file(std::istream& in) {
    std::vector<int> degrees;
    long long v = 0;
    while (in >> v) {
        if (v < 0 || v > 65535) throw ParseError("degree file: value out of range");
        degrees.push_back(static_cast<int>(v));
    }
    if (!in.eof()) throw ParseError("degree file: expected whitespace-separated integers");
    if (degrees.empty()) throw ParseError("degree file: no values");
    try {
        return DegreeInstance::from_degrees(std::move(degrees));
    } catch (const InfeasibleDegrees& e) {
        throw ParseError(std::string("degree file: ") + e.what());
    }
}

bool is_graphical(std::span<const int> degrees) {
    std::vector<int> d(degrees.begin(), degrees.end());
    std::sort(d.begin(), d.end(), std::greater<int>());
    const int n = static_cast<int>(d.size());
    long long sum = std::accumulate(d.begin(), d.end(), 0LL);
    if (sum % 2 != 0) return false;
    long long lhs = 0;
    for (int k = 1; k <= n; ++k) {
        lhs += d[static_cast<std::size_t>(k - 1)];
        long long rhs = static_cast<long long>(k) * (k - 1);
        for (int i = k; i < n; ++i) rhs += std::min(d[static_cast<std::size_t>(i)], k);
        if (lhs > rhs) return false;
    }
    return true;
}

GraphModel::GraphModel(DegreeInstance inst) : inst_(std::move(inst)) {
    long long sum = std::accumulate(inst_.degrees.begin(), inst_.degrees.end(), 0LL);
    lower_bound_ = static_cast<int>(-2 * sum);
    log_space_ = log_binomial(inst_.n_slots, inst_.edge_target);
}

std::string GraphModel::descriptor() const {
    return "graph n=" + std::to_string(inst_.n_vertices) +
           " slots=" + std::to_string(inst_.n_slots) +
           " edges=" + std::to_string(inst_.edge_target);
}

GraphModel::State GraphModel::sample_uniform(RngStream& rng) const {
    // First k places of a uniform random permutation of the slots.
    static thread_local std::vector<std::uint32_t> perm;
    const int m = inst_.n_slots;
    const int k = inst_.edge_target;
    perm.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);

    State st;
    st.chosen.assign(static_cast<std::size_t>(m), 0);
    st.degree.assign(static_cast<std::size_t>(inst_.n_vertices), 0);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - i)));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        const std::uint32_t slot = perm[static_cast<std::size_t>(i)];
        st.chosen[slot] = 1;
        const auto [a, b] = inst_.slot_pair[slot];
        ++st.degree[a];
        ++st.degree[b];
    }
    return st;
}

int GraphModel::score(const State& s) const {
    int dev = 0;
    for (int i = 0; i < inst_.n_vertices; ++i)
        dev += std::abs(s.degree[static_cast<std::size_t>(i)] - inst_.degrees[static_cast<std::size_t>(i)]);
    return -dev;
}

int GraphModel::gibbs_sweep(State& st, int threshold, RngStream& rng) const {
    static thread_local std::vector<std::uint32_t> edges;
    static thread_local std::vector<int> gain;
    static thread_local std::vector<std::uint32_t> candidates;

    const int m = inst_.n_slots;
    const int n = inst_.n_vertices;
    edges.clear();
    for (int s = 0; s < m; ++s)
        if (st.chosen[static_cast<std::size_t>(s)]) edges.push_back(static_cast<std::uint32_t>(s));

    int score = this->score(st);
    gain.resize(static_cast<std::size_t>(n));

    // k single-edge relocations, each picking a uniformly random current
    // edge. The move is symmetric on the level set (the admissible slots
    // depend only on the remaining k-1 edges), so uniformity is invariant.
    const std::size_t k = edges.size();
    for (std::size_t step = 0; step < k; ++step) {
        const std::size_t pos = static_cast<std::size_t>(rng.below(k));
        const std::uint32_t slot = edges[pos];
        const auto [a, b] = inst_.slot_pair[slot];
        // remove the edge
        int removed_score = score;
        removed_score += std::abs(st.degree[a] - inst_.degrees[a]) -
                         std::abs(st.degree[a] - 1 - inst_.degrees[a]);
        removed_score += std::abs(st.degree[b] - inst_.degrees[b]) -
                         std::abs(st.degree[b] - 1 - inst_.degrees[b]);
        --st.degree[a];
        --st.degree[b];
        st.chosen[slot] = 0;

        // per-vertex score change if its degree were incremented
        for (int v = 0; v < n; ++v)
            gain[static_cast<std::size_t>(v)] =
                std::abs(st.degree[static_cast<std::size_t>(v)] - inst_.degrees[static_cast<std::size_t>(v)]) -
                std::abs(st.degree[static_cast<std::size_t>(v)] + 1 - inst_.degrees[static_cast<std::size_t>(v)]);

        candidates.clear();
        for (int s2 = 0; s2 < m; ++s2) {
            if (st.chosen[static_cast<std::size_t>(s2)]) continue;
            const auto [u, v] = inst_.slot_pair[static_cast<std::size_t>(s2)];
            if (removed_score + gain[u] + gain[v] >= threshold)
                candidates.push_back(static_cast<std::uint32_t>(s2));
        }
        // The vacated slot restores the pre-removal score, so the candidate
        // list is never empty while the precondition holds.
        const std::uint32_t pick = candidates[rng.below(candidates.size())];
        const auto [u, v] = inst_.slot_pair[pick];
        st.chosen[pick] = 1;
        ++st.degree[u];
        ++st.degree[v];
        score = removed_score + gain[u] + gain[v];
        edges[pos] = pick;
    }
    return score;
}

GraphModel::State GraphModel::state_from_key(const std::string& key) const {
    return state_from_bits(unpack_bits(key, static_cast<std::size_t>(inst_.n_slots)));
}

GraphModel::State GraphModel::state_from_bits(std::vector<std::uint8_t> chosen) const {
    State st;
    st.chosen = std::move(chosen);
    st.degree.assign(static_cast<std::size_t>(inst_.n_vertices), 0);
    for (int s = 0; s < inst_.n_slots; ++s) {
        if (!st.chosen[static_cast<std::size_t>(s)]) continue;
        const auto [a, b] = inst_.slot_pair[static_cast<std::size_t>(s)];
        ++st.degree[a];
        ++st.degree[b];
    }
    return st;
}

}  // namespace splitcount
