#include "splitcount/caprecap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "splitcount/errors.hpp"
#include "splitcount/stats.hpp"

namespace splitcount {

CapRecapResult cap_recap_counts(std::size_t n1, std::size_t n2, std::size_t overlap) {
    CapRecapResult r;
    r.n1 = n1;
    r.n2 = n2;
    r.overlap = overlap;
    const auto d1 = static_cast<double>(n1);
    const auto d2 = static_cast<double>(n2);
    const auto dr = static_cast<double>(overlap);
    r.zero_overlap = overlap == 0;
    r.naive_estimate = r.zero_overlap ? std::numeric_limits<double>::infinity() : d1 * d2 / dr;
    r.chapman_estimate = (d1 + 1.0) * (d2 + 1.0) / (dr + 1.0) - 1.0;
    r.chapman_variance_estimate =
        (d1 + 1.0) * (d2 + 1.0) * (d1 - dr) * (d2 - dr) / ((dr + 1.0) * (dr + 1.0) * (dr + 2.0));
    return r;
}

double relative_error(std::span<const double> estimates) {
    if (estimates.size() < 2)
        throw std::invalid_argument("relative_error: need at least two estimates");
    const double mu = mean(estimates);
    if (mu == 0.0) throw DegenerateInput("relative_error: zero mean");
    return sample_std(estimates) / mu;
}

namespace {

std::array<int, 3> random_aux_clause(int n_vars, RngStream& rng) {
    // three distinct variables, uniform polarities
    std::array<int, 3> vars{};
    for (int i = 0; i < 3; ++i) {
        int v;
        bool fresh;
        do {
            v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_vars))) + 1;
            fresh = true;
            for (int j = 0; j < i; ++j)
                if (vars[static_cast<std::size_t>(j)] == v) fresh = false;
        } while (!fresh);
        vars[static_cast<std::size_t>(i)] = v;
    }
    std::array<int, 3> lits{};
    for (int i = 0; i < 3; ++i)
        lits[static_cast<std::size_t>(i)] = rng.coin() ? vars[static_cast<std::size_t>(i)]
                                                       : -vars[static_cast<std::size_t>(i)];
    return lits;
}

bool clause_satisfied(const std::array<int, 3>& lits, const SatModel::State& x) {
    for (int lit : lits) {
        const bool want = lit > 0;
        if (x[static_cast<std::size_t>(std::abs(lit) - 1)] == static_cast<std::uint8_t>(want))
            return true;
    }
    return false;
}

}  // namespace

EcapResult extended_cap_recap(const SatModel& model, const RunResult<SatModel>& run,
                              const EcapConfig& cfg) {
    if (!(run.log_estimate > std::log(cfg.regime_threshold)))
        throw ConfigError("extended cap-recap: product estimate does not exceed the regime "
                          "threshold; use the classic estimator");
    if (run.final_states.empty())
        throw std::invalid_argument("extended cap-recap: run has no final states");
    if (!(cfg.window_low > 0.0 && cfg.window_low <= cfg.window_high))
        throw ConfigError("extended cap-recap: invalid acceptance window");
    if (cfg.pool_size < 100)
        throw ConfigError("extended cap-recap: pool_size must be at least 100");

    // Uniform pool at the top level; each pool entry runs its own chain.
    std::vector<SatModel::State> pool(cfg.pool_size);
    const int m = model.max_score();
    {
        const auto body = [&](std::size_t i) {
            RngStream rng = RngStream::derive(cfg.seed, {kStreamEcapPool, i});
            SatModel::State s = run.final_states[rng.below(run.final_states.size())];
            for (int k = 0; k < cfg.pool_chain_sweeps; ++k) model.gibbs_sweep(s, m, rng);
            pool[i] = std::move(s);
        };
#ifdef _OPENMP
        if (cfg.exec == ExecMode::Parallel) {
            const int nt = detail::resolve_threads(cfg.threads);
#pragma omp parallel for schedule(static) num_threads(nt)
            for (long long i = 0; i < static_cast<long long>(cfg.pool_size); ++i)
                body(static_cast<std::size_t>(i));
        } else {
            for (std::size_t i = 0; i < cfg.pool_size; ++i) body(i);
        }
#else
        for (std::size_t i = 0; i < cfg.pool_size; ++i) body(i);
#endif
    }

    EcapResult res;
    std::vector<std::uint8_t> alive(pool.size(), 1);
    std::size_t live = pool.size();
    double c_hat = 1.0;

    while (c_hat > cfg.window_high) {
        if (res.tau >= cfg.max_aux)
            throw AuxLimitExceeded("extended cap-recap: " + std::to_string(cfg.max_aux) +
                                   " auxiliary clauses without entering the window");
        bool accepted = false;
        for (int attempt = 0; attempt < cfg.max_retries && !accepted; ++attempt) {
            RngStream rng = RngStream::derive(
                cfg.seed, {kStreamEcapAux, static_cast<std::uint64_t>(res.tau),
                           static_cast<std::uint64_t>(attempt)});
            const auto clause = random_aux_clause(model.instance().n_vars, rng);
            std::size_t next_live = 0;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (alive[i] && clause_satisfied(clause, pool[i])) ++next_live;
            const double next_c = static_cast<double>(next_live) / static_cast<double>(pool.size());
            if (next_c < cfg.window_low) continue;  // overshoot, reseed the clause
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (alive[i] && !clause_satisfied(clause, pool[i])) alive[i] = 0;
            live = next_live;
            c_hat = next_c;
            res.aux_clauses.push_back(clause);
            ++res.tau;
            accepted = true;
        }
        if (!accepted)
            throw WindowOvershoot("extended cap-recap: every candidate clause at tau=" +
                                  std::to_string(res.tau) + " fell below the window floor");
    }
    res.c_hat_aux = c_hat;

    // Extended instance: original clauses plus the accepted auxiliaries.
    CnfInstance ext = model.instance();
    for (const auto& lits : res.aux_clauses)
        ext.clauses.emplace_back(lits.begin(), lits.end());
    ext.reindex();
    SatModel ext_model(std::move(ext));

    std::vector<SatModel::State> seeds;
    seeds.reserve(live);
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (alive[i]) seeds.push_back(pool[i]);

    BatchConfig inner_cfg;
    inner_cfg.n1 = cfg.n1;
    inner_cfg.n2 = cfg.n2;
    inner_cfg.chain_sweeps = cfg.chain_sweeps;
    inner_cfg.seed = mix64(cfg.seed ^ kStreamEcapInner);
    inner_cfg.exec = cfg.exec;
    inner_cfg.threads = cfg.threads;
    const auto [b1, b2] = draw_final_batches(ext_model, seeds, inner_cfg);
    res.inner = cap_recap(ext_model, b1, b2);
    res.log_estimate = std::log(res.inner.chapman_estimate) - std::log(res.c_hat_aux);
    return res;
}

}  // namespace splitcount
