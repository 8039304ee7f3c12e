#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "splitcount/engine.hpp"
#include "splitcount/model.hpp"
#include "splitcount/sat_model.hpp"

namespace splitcount {

/// Two-draw population estimate. zero_overlap marks the degenerate case
/// R = 0: the naive estimate becomes +inf and the caller should enlarge the
/// batches or escalate to the extended procedure.
struct CapRecapResult {
    std::size_t n1 = 0;       // distinct states in draw 1
    std::size_t n2 = 0;       // distinct states in draw 2
    std::size_t overlap = 0;  // R
    double naive_estimate = 0.0;
    double chapman_estimate = 0.0;
    double chapman_variance_estimate = 0.0;
    bool zero_overlap = false;
};

/// Estimators from already-deduplicated counts.
CapRecapResult cap_recap_counts(std::size_t n1, std::size_t n2, std::size_t overlap);

/// Deduplicates each batch by canonical key, intersects, and applies the
/// naive and Chapman estimators.
template <CountingModel M>
CapRecapResult cap_recap(const M& model, const std::vector<typename M::State>& batch1,
                         const std::vector<typename M::State>& batch2) {
    std::unordered_set<std::string> k1, k2;
    k1.reserve(batch1.size() * 2);
    k2.reserve(batch2.size() * 2);
    for (const auto& s : batch1) k1.insert(model.canonical_key(s));
    for (const auto& s : batch2) k2.insert(model.canonical_key(s));
    std::size_t overlap = 0;
    for (const auto& k : k2)
        if (k1.count(k)) ++overlap;
    return cap_recap_counts(k1.size(), k2.size(), overlap);
}

struct BatchConfig {
    std::size_t n1 = 5000;  // raw draw sizes, before deduplication
    std::size_t n2 = 5000;
    int chain_sweeps = 5;  // sweeps between a seed and its recorded sample
    std::uint64_t seed = 1;
    ExecMode exec = ExecMode::Parallel;
    int threads = 0;
};

/// Two independent top-level draws. Every sample runs its own chain: a seed
/// picked from final_states with replacement, advanced chain_sweeps sweeps
/// at the top threshold. The two batches use disjoint derived streams.
template <CountingModel M>
std::pair<std::vector<typename M::State>, std::vector<typename M::State>> draw_final_batches(
    const M& model, const std::vector<typename M::State>& final_states, const BatchConfig& cfg) {
    std::pair<std::vector<typename M::State>, std::vector<typename M::State>> out;
    const int m = model.max_score();
    for (int which = 0; which < 2; ++which) {
        auto& batch = which == 0 ? out.first : out.second;
        const std::size_t want = which == 0 ? cfg.n1 : cfg.n2;
        batch.assign(want, typename M::State{});
        const auto body = [&](std::size_t i) {
            RngStream rng = RngStream::derive(cfg.seed,
                                              {kStreamCapBatch, static_cast<std::uint64_t>(which), i});
            typename M::State s = final_states[rng.below(final_states.size())];
            for (int k = 0; k < cfg.chain_sweeps; ++k) model.gibbs_sweep(s, m, rng);
            batch[i] = std::move(s);
        };
#ifdef _OPENMP
        if (cfg.exec == ExecMode::Parallel) {
            const int nt = detail::resolve_threads(cfg.threads);
#pragma omp parallel for schedule(static) num_threads(nt)
            for (long long i = 0; i < static_cast<long long>(want); ++i)
                body(static_cast<std::size_t>(i));
            continue;
        }
#endif
        for (std::size_t i = 0; i < want; ++i) body(i);
    }
    return out;
}

/// Sample standard deviation (n-1 denominator) over the sample mean.
/// Throws DegenerateInput when the mean is zero and std::invalid_argument
/// for fewer than two values.
double relative_error(std::span<const double> estimates);

struct EcapConfig {
    double window_low = 1e-3;   // target window for c_hat at the extended level
    double window_high = 1e-2;
    int max_aux = 64;           // cap on auxiliary clauses
    int max_retries = 16;       // per-clause reseeding attempts on overshoot
    std::size_t pool_size = 50000;  // uniform top-level samples used for c_hat
    int pool_chain_sweeps = 5;
    std::size_t n1 = 5000;  // inner capture-recapture draws
    std::size_t n2 = 5000;
    int chain_sweeps = 5;
    double regime_threshold = 1e6;  // product estimate must exceed this
    std::uint64_t seed = 1;
    ExecMode exec = ExecMode::Parallel;
    int threads = 0;
};

struct EcapResult {
    int tau = 0;               // auxiliary clauses appended
    double c_hat_aux = 0.0;    // accepted fraction at the extended level
    CapRecapResult inner;      // capture-recapture at the extended level
    double log_estimate = 0.0; // ln(inner Chapman) - ln(c_hat_aux)
    std::vector<std::array<int, 3>> aux_clauses;
};

/// Backward estimation for solution sets too large for plain
/// capture-recapture. Seeded random 3-clauses over the instance's variables
/// are appended until the surviving fraction of a uniform top-level pool
/// falls inside [window_low, window_high]; plain capture-recapture then runs
/// at the extended level and the estimate is scaled back by 1/c_hat.
///
/// Throws ConfigError when the run's product estimate does not exceed
/// regime_threshold, WindowOvershoot when a clause undershoots the window
/// floor max_retries times, and AuxLimitExceeded past max_aux clauses.
EcapResult extended_cap_recap(const SatModel& model, const RunResult<SatModel>& run,
                              const EcapConfig& cfg);

}  // namespace splitcount
