#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include "splitcount/rng.hpp"

namespace splitcount {

/// Contract every counting model satisfies. A model owns an immutable
/// instance description and exposes:
///   - the score range: integer scores up to max_score(), with the solution
///     set exactly {s : score(s) == max_score()},
///   - uniform sampling over its configuration space X0,
///   - a Gibbs sweep leaving the uniform distribution on a level set
///     {s : score(s) >= threshold} invariant,
///   - a canonical byte key identifying each state for deduplication.
///
/// Models are safe to share across threads; states are value types confined
/// to one chain at a time. gibbs_sweep mutates in place and returns the
/// post-sweep score.
template <typename M>
concept CountingModel = requires(const M& m, typename M::State& s, const typename M::State& cs,
                                 RngStream& rng, int threshold, const std::string& key) {
    typename M::State;
    { m.max_score() } -> std::convertible_to<int>;
    { m.score_lower_bound() } -> std::convertible_to<int>;
    { m.log_space_size() } -> std::convertible_to<double>;
    { m.descriptor() } -> std::convertible_to<std::string>;
    { m.sample_uniform(rng) } -> std::same_as<typename M::State>;
    { m.score(cs) } -> std::convertible_to<int>;
    { m.gibbs_sweep(s, threshold, rng) } -> std::convertible_to<int>;
    { m.canonical_key(cs) } -> std::convertible_to<std::string>;
    { m.state_from_key(key) } -> std::same_as<typename M::State>;
};

/// Pack a 0/1 vector into bytes, LSB-first. The packed form is the canonical
/// key for all bit-vector shaped states.
inline std::string pack_bits(const std::vector<std::uint8_t>& bits) {
    std::string out((bits.size() + 7) / 8, '\0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i >> 3] |= static_cast<char>(1u << (i & 7));
    return out;
}

inline std::vector<std::uint8_t> unpack_bits(const std::string& key, std::size_t n_bits) {
    std::vector<std::uint8_t> bits(n_bits, 0);
    for (std::size_t i = 0; i < n_bits; ++i)
        bits[i] = (static_cast<unsigned char>(key[i >> 3]) >> (i & 7)) & 1u;
    return bits;
}

}  // namespace splitcount
