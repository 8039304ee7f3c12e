#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "splitcount/errors.hpp"
#include "splitcount/model.hpp"
#include "splitcount/rng.hpp"

namespace splitcount {

/// Kernel execution path. Serial is the reference implementation; Parallel
/// runs chains and sampling under OpenMP. Both produce identical results:
/// every chain draws from its own derived stream and writes to its own slots.
enum class ExecMode { Serial, Parallel };

struct SplitConfig {
    std::size_t sample_size = 10000;  // N, at least 100
    double rho = 0.1;                 // splitting control parameter, in (0,1)
    std::uint64_t seed = 1;
    std::size_t max_iterations = 1000;
    std::size_t boost_sample_size = 0;  // 0 disables; otherwise >= sample_size
    int boost_trigger = 2;              // boost once m - threshold <= trigger
    int chain_thinning = 1;             // sweeps per recorded point
    ExecMode exec = ExecMode::Parallel;
    int threads = 0;  // 0 = library default
};

/// Throws ConfigError when a field is out of contract.
void validate(const SplitConfig& cfg);

/// Per-level record of one splitting iteration.
struct IterationTrace {
    int t = 0;
    int m_upper = 0;            // best score seen in the level's sample set
    int m_lower = 0;            // accepted threshold
    std::size_t n_elites = 0;   // N_t
    std::size_t n_screened = 0; // distinct elites
    double c_hat = 0.0;         // N_t / N
    double log_estimate_so_far = 0.0;  // ln(|X0| * prod c_hat)
};

template <typename M>
struct RunResult {
    double log_estimate = 0.0;
    int iterations = 0;
    std::vector<IterationTrace> traces;
    std::vector<typename M::State> final_states;  // distinct, all at max score
    double wall_time_s = 0.0;
};

/// Threshold for the next level: the ceil(N*rho)-th largest score, clamped
/// at m. If that does not improve on `previous`, the smallest score value
/// strictly above `previous` is used instead; if none exists the run cannot
/// progress and StagnationFailure is thrown.
int select_threshold(std::span<const int> scores, int previous, double rho, int m);

template <typename State>
struct EliteSet {
    std::vector<State> states;
    std::vector<int> scores;
};

/// Order-stable subset of samples scoring at or above the threshold.
template <typename State>
std::vector<State> extract_elites(const std::vector<State>& samples,
                                  const std::vector<int>& scores, int threshold) {
    std::vector<State> out;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (scores[i] >= threshold) out.push_back(samples[i]);
    return out;
}

namespace detail {

template <CountingModel M>
EliteSet<typename M::State> take_elites(const std::vector<typename M::State>& samples,
                                        const std::vector<int>& scores, int threshold) {
    EliteSet<typename M::State> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (scores[i] >= threshold) {
            out.states.push_back(samples[i]);
            out.scores.push_back(scores[i]);
        }
    }
    return out;
}

template <CountingModel M>
EliteSet<typename M::State> screen_elites(const M& model, const EliteSet<typename M::State>& elites) {
    EliteSet<typename M::State> out;
    std::unordered_set<std::string> seen;
    seen.reserve(elites.states.size() * 2);
    for (std::size_t i = 0; i < elites.states.size(); ++i) {
        if (seen.insert(model.canonical_key(elites.states[i])).second) {
            out.states.push_back(elites.states[i]);
            out.scores.push_back(elites.scores[i]);
        }
    }
    return out;
}

inline int resolve_threads(int requested) {
#ifdef _OPENMP
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

}  // namespace detail

/// Duplicate removal by canonical key, first occurrence kept.
template <CountingModel M>
std::vector<typename M::State> screen(const M& model, const std::vector<typename M::State>& elites) {
    std::vector<typename M::State> out;
    std::unordered_set<std::string> seen;
    seen.reserve(elites.size() * 2);
    for (const auto& s : elites)
        if (seen.insert(model.canonical_key(s)).second) out.push_back(s);
    return out;
}

/// Draw N uniform samples from X0 with their scores. Sample i always comes
/// from stream (seed, initial, i), so the result is independent of exec mode.
template <CountingModel M>
void sample_population(const M& model, std::size_t n, std::uint64_t seed, ExecMode exec,
                       int threads, std::vector<typename M::State>& states,
                       std::vector<int>& scores) {
    states.assign(n, typename M::State{});
    scores.assign(n, 0);
    const auto body = [&](std::size_t i) {
        RngStream rng = RngStream::derive(seed, {kStreamInitialSample, 0, i});
        states[i] = model.sample_uniform(rng);
        scores[i] = model.score(states[i]);
    };
#ifdef _OPENMP
    if (exec == ExecMode::Parallel) {
        const int nt = detail::resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
        for (long long i = 0; i < static_cast<long long>(n); ++i) body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)threads;
#endif
    (void)exec;
    for (std::size_t i = 0; i < n; ++i) body(i);
}

namespace detail {

/// Rebuild a population of `n` states at `threshold` from screened elites.
/// Chain i contributes b = floor(n/S) recorded states (its seed plus b-1
/// sweep outputs); n - S*b chains picked without replacement contribute one
/// extra sweep state. Outputs are merged in chain-index order.
template <CountingModel M>
void repopulate_scored(const M& model, const EliteSet<typename M::State>& screened, int threshold,
                       std::size_t n, std::uint64_t seed, std::uint64_t iteration, int thinning,
                       ExecMode exec, int threads, std::vector<typename M::State>& out_states,
                       std::vector<int>& out_scores) {
    const std::size_t chains = screened.states.size();
    assert(chains > 0 && chains <= n);
    const std::size_t b = n / chains;
    const std::size_t extras = n - b * chains;

    std::vector<std::uint8_t> extended(chains, 0);
    {
        RngStream ctrl = RngStream::derive(seed, {kStreamIterControl, iteration});
        std::vector<std::uint32_t> idx(chains);
        std::iota(idx.begin(), idx.end(), 0u);
        for (std::size_t e = 0; e < extras; ++e) {
            const std::size_t j = e + static_cast<std::size_t>(ctrl.below(chains - e));
            std::swap(idx[e], idx[j]);
            extended[idx[e]] = 1;
        }
    }
    std::vector<std::size_t> offset(chains + 1, 0);
    for (std::size_t i = 0; i < chains; ++i) offset[i + 1] = offset[i] + b + extended[i];
    assert(offset[chains] == n);

    out_states.assign(n, typename M::State{});
    out_scores.assign(n, 0);

    const auto chain_body = [&](std::size_t i) {
        RngStream rng = RngStream::derive(seed, {kStreamChain, iteration, i});
        typename M::State cur = screened.states[i];
        int sc = screened.scores[i];
        const std::size_t o = offset[i];
        out_states[o] = cur;
        out_scores[o] = sc;
        const std::size_t records = b + extended[i];
        for (std::size_t r = 1; r < records; ++r) {
            for (int k = 0; k < thinning; ++k) sc = model.gibbs_sweep(cur, threshold, rng);
            out_states[o + r] = cur;
            out_scores[o + r] = sc;
        }
    };
#ifdef _OPENMP
    if (exec == ExecMode::Parallel) {
        const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
        for (long long i = 0; i < static_cast<long long>(chains); ++i)
            chain_body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)threads;
#endif
    (void)exec;
    for (std::size_t i = 0; i < chains; ++i) chain_body(i);
}

}  // namespace detail

/// Chain-restart step as a standalone operation; scores are recomputed for
/// the seeds. The engine uses the score-carrying variant internally.
template <CountingModel M>
std::vector<typename M::State> repopulate(const M& model,
                                          const std::vector<typename M::State>& screened,
                                          int threshold, std::size_t n, std::uint64_t seed,
                                          std::uint64_t iteration = 1, int thinning = 1,
                                          ExecMode exec = ExecMode::Serial, int threads = 0) {
    EliteSet<typename M::State> in;
    in.states = screened;
    in.scores.reserve(screened.size());
    for (const auto& s : screened) in.scores.push_back(model.score(s));
    std::vector<typename M::State> states;
    std::vector<int> scores;
    detail::repopulate_scored(model, in, threshold, n, seed, iteration, thinning, exec, threads,
                              states, scores);
    return states;
}

/// Adaptive splitting run. Deterministic given (instance, cfg) including the
/// seed, for either exec mode and any thread count.
///
/// Throws StagnationFailure when a level admits no strictly increasing
/// threshold, and IterationLimitExceeded when max_iterations is reached
/// before the target level.
template <CountingModel M>
RunResult<M> run_splitting(const M& model, const SplitConfig& cfg) {
    validate(cfg);
    const auto t_start = std::chrono::steady_clock::now();
    const int m = model.max_score();

    RunResult<M> res;
    std::vector<typename M::State> population;
    std::vector<int> scores;
    sample_population(model, cfg.sample_size, cfg.seed, cfg.exec, cfg.threads, population, scores);

    double log_estimate = model.log_space_size();
    int previous = model.score_lower_bound() - 1;
    bool boosted = false;

    for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
        const int threshold = select_threshold(scores, previous, cfg.rho, m);
        auto elites = detail::take_elites<M>(population, scores, threshold);
        const double c_hat =
            static_cast<double>(elites.states.size()) / static_cast<double>(population.size());
        log_estimate += std::log(c_hat);
        auto screened = detail::screen_elites(model, elites);
        const int m_upper = *std::max_element(scores.begin(), scores.end());

        res.traces.push_back({static_cast<int>(t), m_upper, threshold, elites.states.size(),
                              screened.states.size(), c_hat, log_estimate});

        if (threshold == m) {
            res.final_states = std::move(screened.states);
            res.iterations = static_cast<int>(t);
            res.log_estimate = log_estimate;
            res.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
            return res;
        }

        previous = threshold;
        if (cfg.boost_sample_size > 0 && m - threshold <= cfg.boost_trigger) boosted = true;
        const std::size_t n_next = boosted ? cfg.boost_sample_size : cfg.sample_size;
        detail::repopulate_scored(model, screened, threshold, n_next, cfg.seed, t,
                                  cfg.chain_thinning, cfg.exec, cfg.threads, population, scores);
    }
    throw IterationLimitExceeded("splitting: no target-level threshold within " +
                                 std::to_string(cfg.max_iterations) + " iterations (" +
                                 model.descriptor() + ")");
}

}  // namespace splitcount
