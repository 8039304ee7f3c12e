// Acceptance suite: one line per criterion, [PASS]/[FAIL]/[SKIP], nonzero
// exit when anything fails. Criterion 3 is a long soak (about an hour) and
// runs only with SPLITCOUNT_ACCEPT_LONG=1 or an explicit "3" argument.
//
// Usage: acceptance [criterion ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "splitcount/caprecap.hpp"
#include "splitcount/engine.hpp"
#include "splitcount/graph_model.hpp"
#include "splitcount/oracle.hpp"
#include "splitcount/sat_model.hpp"
#include "splitcount/stats.hpp"
#include "splitcount/table_model.hpp"

#include "support.hpp"

using namespace splitcount;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void skip(int criterion, const std::string& detail) {
    std::printf("[SKIP] criterion %d: %s\n", criterion, detail.c_str());
    std::fflush(stdout);
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> split_estimates(auto& model, std::size_t n, double rho, int runs,
                                    std::uint64_t seed0, std::vector<int>* iterations = nullptr,
                                    int thinning = 1) {
    std::vector<double> estimates;
    for (int r = 0; r < runs; ++r) {
        SplitConfig cfg;
        cfg.sample_size = n;
        cfg.rho = rho;
        cfg.seed = seed0 + static_cast<std::uint64_t>(r);
        cfg.chain_thinning = thinning;
        const auto res = run_splitting(model, cfg);
        estimates.push_back(std::exp(res.log_estimate));
        if (iterations) iterations->push_back(res.iterations);
    }
    return estimates;
}

// ---- criterion 1: small-graph exactness ------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    GraphModel model(DegreeInstance::from_degrees({5, 6, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}));
    const double exact = 7392.0;
    // two sweeps per recorded chain point: halves the within-chain
    // autocorrelation that otherwise dominates the cross-run spread
    const auto est = split_estimates(model, 50000, 0.5, 10, 101, nullptr, 2);
    const double mu = mean(est);
    const double re = sample_std(est) / mu;
    const double dev = std::abs(mu - exact) / exact;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "small-graph exactness: mean=%.1f (exact 7392, dev %.2f%%), RE=%.4f "
                  "(thinning=2), %.0fs",
                  mu, 100.0 * dev, re, elapsed_s(t0));
    report(1, dev <= 0.05 && re <= 0.06, buf);
}

// ---- criterion 2: contingency Model 1 --------------------------------------

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<int> two(12, 2);
    TableModel model(TableInstance::from_margins(two, two));
    const double exact = 2.19595474100772e16;
    std::vector<int> iters;
    const auto est = split_estimates(model, 50000, 0.5, 10, 210, &iters);
    const double mu = mean(est);
    const double re = sample_std(est) / mu;
    const double dev = std::abs(mu - exact) / exact;
    std::sort(iters.begin(), iters.end());
    const int t_median = iters[iters.size() / 2];
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "contingency model 1: mean=%.3e (exact 2.196e16, dev %.2f%%), RE=%.4f, "
                  "median T=%d, %.0fs",
                  mu, 100.0 * dev, re, t_median, elapsed_s(t0));
    report(2, dev <= 0.15 && re <= 0.12 && t_median >= 6 && t_median <= 9, buf);
}

// ---- criterion 3: Darwin finch table (long) ---------------------------------

void criterion_3(bool enabled) {
    if (!enabled) {
        skip(3, "finch table soak (~1h); enable with SPLITCOUNT_ACCEPT_LONG=1 or 'acceptance 3'");
        return;
    }
    const auto t0 = std::chrono::steady_clock::now();
    TableModel model(TableInstance::from_json(
        R"({"r":[14,13,14,10,12,2,10,1,10,11,6,2],
            "c":[3,3,10,9,9,7,8,9,7,8,2,9,3,6,8,2,2]})"));
    const double exact = 6.71491061375676e16;
    const auto est = split_estimates(model, 200000, 0.5, 10, 301);
    const double mu = mean(est);
    const double dev = std::abs(mu - exact) / exact;
    const double re = sample_std(est) / mu;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "finch table: mean=%.3e (exact 6.715e16, dev %.2f%%), RE=%.4f, %.0fs", mu,
                  100.0 * dev, re, elapsed_s(t0));
    report(3, dev <= 0.20, buf);
}

// ---- criterion 4: oracle equivalence sweep ----------------------------------

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    // deterministic scan over a seeded family until 20 satisfiable instances
    struct Fixture {
        CnfInstance inst;
        double exact;
    };
    std::vector<Fixture> fixtures;
    for (std::uint64_t i = 0; fixtures.size() < 20 && i < 400; ++i) {
        const int n = 10 + static_cast<int>(i * 3 % 7);
        const int m = 20 + static_cast<int>(i * 7 % 41);
        auto inst = testsupport::random_3sat(n, m, 9000 + i);
        const auto count = exact_count_sat(inst);
        if (count >= 1) fixtures.push_back({std::move(inst), static_cast<double>(count)});
    }
    int hits = 0;
    for (std::size_t f = 0; f < fixtures.size(); ++f) {
        SatModel model(fixtures[f].inst);
        const auto est =
            split_estimates(model, 2000, 0.5, 10, 4000 + 37 * static_cast<std::uint64_t>(f));
        const double mu = mean(est);
        const double sem = sample_std(est) / std::sqrt(10.0);
        if (std::abs(mu - fixtures[f].exact) <= 3.0 * sem) ++hits;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "oracle equivalence: %d/%zu instances within 3 s.e. of the exact count, %.0fs",
                  hits, fixtures.size(), elapsed_s(t0));
    report(4, fixtures.size() == 20 && hits >= 18, buf);
}

// ---- criterion 5: Chapman urn calibration -----------------------------------

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr std::uint64_t kPopulation = 100000;
    constexpr std::size_t kDraw = 5000;
    constexpr int kReps = 1000;

    RngStream rng(515);
    std::vector<std::uint32_t> stamp(kPopulation, 0);
    std::uint32_t epoch = 0;
    std::vector<double> chapman, var_formula;
    for (int rep = 0; rep < kReps; ++rep) {
        std::size_t overlap = 0;
        ++epoch;
        for (std::size_t i = 0; i < kDraw; ++i) {
            std::uint64_t v;
            do {
                v = rng.below(kPopulation);
            } while (stamp[v] == epoch);
            stamp[v] = epoch;
        }
        ++epoch;
        for (std::size_t i = 0; i < kDraw; ++i) {
            std::uint64_t v;
            do {
                v = rng.below(kPopulation);
            } while (stamp[v] == epoch);
            if (stamp[v] == epoch - 1) ++overlap;
            stamp[v] = epoch;
        }
        const auto r = cap_recap_counts(kDraw, kDraw, overlap);
        chapman.push_back(r.chapman_estimate);
        var_formula.push_back(r.chapman_variance_estimate);
    }
    const double m = static_cast<double>(kPopulation);
    const double bias = std::abs(mean(chapman) - m) / m;
    const double empirical = std::pow(sample_std(chapman), 2);
    const double formula = mean(var_formula);
    const double ratio = formula / empirical;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "chapman calibration: |bias|=%.4f%%, var-formula/empirical=%.2f, %.0fs",
                  100.0 * bias, ratio, elapsed_s(t0));
    report(5, bias <= 0.02 && ratio >= 0.5 && ratio <= 2.0, buf);
}

// ---- criterion 6: capture-recapture variance dominance ----------------------

void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    // deterministic seed scan for an oracle count in [1e4, 1e5]
    CnfInstance inst;
    double exact = 0;
    for (std::uint64_t seed = 600;; ++seed) {
        inst = testsupport::random_3sat(17, 18, seed);
        const auto count = exact_count_sat(inst);
        if (count >= 10000 && count <= 100000) {
            exact = static_cast<double>(count);
            break;
        }
    }
    SatModel model(inst);

    std::vector<double> split_est, cap_est;
    for (int r = 0; r < 10; ++r) {
        SplitConfig cfg;
        cfg.sample_size = 5000;
        cfg.rho = 0.5;
        cfg.seed = 6600 + static_cast<std::uint64_t>(r);
        const auto res = run_splitting(model, cfg);
        split_est.push_back(std::exp(res.log_estimate));

        // matched effort: the two draws together mirror one level's samples
        BatchConfig bc;
        bc.n1 = 5000;
        bc.n2 = 5000;
        bc.chain_sweeps = 2;
        bc.seed = cfg.seed;
        const auto [b1, b2] = draw_final_batches(model, res.final_states, bc);
        cap_est.push_back(cap_recap(model, b1, b2).chapman_estimate);
    }
    const double var_split = std::pow(sample_std(split_est), 2);
    const double var_cap = std::pow(sample_std(cap_est), 2);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "variance dominance (oracle count %.0f): var(cap)=%.3e <= var(split)=%.3e, "
                  "means %.0f / %.0f, %.0fs",
                  exact, var_cap, var_split, mean(cap_est), mean(split_est), elapsed_s(t0));
    report(6, var_cap <= var_split, buf);
}

// ---- criterion 7: extended capture-recapture --------------------------------

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    // seeded instance with a large solution set; oracle still enumerable
    CnfInstance inst;
    double exact = 0;
    for (std::uint64_t seed = 700;; ++seed) {
        inst = testsupport::random_3sat(24, 18, seed);
        const auto count = exact_count_sat(inst);
        if (count >= 1200000 && count <= 8000000) {
            exact = static_cast<double>(count);
            break;
        }
    }
    SatModel model(inst);

    SplitConfig cfg;
    cfg.sample_size = 5000;
    cfg.rho = 0.1;
    cfg.seed = 7100;
    const auto run = run_splitting(model, cfg);

    EcapConfig ec;
    ec.seed = 7200;
    ec.pool_size = 50000;
    ec.n1 = 20000;
    ec.n2 = 20000;
    const auto res = extended_cap_recap(model, run, ec);

    const double identity_gap = std::abs(
        res.log_estimate - (std::log(res.inner.chapman_estimate) - std::log(res.c_hat_aux)));
    const double estimate = std::exp(res.log_estimate);
    const double dev = std::abs(estimate - exact) / exact;
    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "extended cap-recap: identity gap=%.1e, tau=%d, c_hat=%.4g, estimate=%.3e vs "
                  "oracle %.3e (dev %.1f%%), %.0fs",
                  identity_gap, res.tau, res.c_hat_aux, estimate, exact, 100.0 * dev,
                  elapsed_s(t0));
    report(7, identity_gap == 0.0 && dev <= 0.25, buf);
}

// ---- criterion 8: determinism through the cli --------------------------------

void criterion_8() {
#if !defined(SPLITCOUNT_CLI_BIN) || !defined(SPLITCOUNT_DATA_DIR)
    report(8, false, "determinism: cli path not configured");
#else
    const auto t0 = std::chrono::steady_clock::now();
    const std::string base = std::string(SPLITCOUNT_CLI_BIN) + " count graph --degrees " +
                             SPLITCOUNT_DATA_DIR +
                             "/graph_tiny.deg --samples 2000 --rho 0.5 --runs 3 --seed 42 "
                             "--format json --report ";
    auto slurp = [](const std::string& path) {
        std::string text;
        if (FILE* f = std::fopen(path.c_str(), "rb")) {
            char buf[4096];
            std::size_t got;
            while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, got);
            std::fclose(f);
        }
        return text;
    };
    bool ok = true;
    std::string reference;
    int invocation = 0;
    for (const char* threads : {" --threads 1", " --threads 1", " --threads 1", " --threads 4",
                                " --threads 4", " --threads 4"}) {
        const std::string path = "/tmp/sc_accept8_" + std::to_string(invocation++) + ".json";
        const std::string cmd = base + path + threads + " > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) ok = false;
        const auto text = slurp(path);
        if (reference.empty())
            reference = text;
        else if (text != reference)
            ok = false;
        if (text.empty()) ok = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "determinism: 6 invocations (3x threads=1, 3x threads=4) byte-identical, %.0fs",
                  elapsed_s(t0));
    report(8, ok, buf);
#endif
}

// ---- criterion 9: kernel stationarity ----------------------------------------

template <CountingModel M>
bool stationary_at(const M& model, const std::vector<std::string>& level, int threshold,
                   std::uint64_t seed, double* pvalue) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < level.size(); ++i) index[level[i]] = i;
    const std::size_t draws = std::max<std::size_t>(5000, 25 * level.size());
    std::vector<std::uint64_t> counts(level.size(), 0);
    RngStream rng(seed);
    for (std::size_t d = 0; d < draws; ++d) {
        auto state = model.state_from_key(level[rng.below(level.size())]);
        model.gibbs_sweep(state, threshold, rng);
        const auto it = index.find(model.canonical_key(state));
        if (it == index.end()) return false;  // left the level set
        ++counts[it->second];
    }
    *pvalue = testsupport::uniformity_pvalue(counts);
    return *pvalue > 0.01;
}

void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    bool all_ok = true;
    std::string detail;

    // sat: seeded 10-variable instance, three mid-to-top levels
    {
        const auto inst = testsupport::random_3sat(10, 20, 905);
        SatModel model(inst);
        int best = 0;
        for (std::uint64_t x = 0; x < 1024; ++x) {
            SatModel::State s(10);
            for (int j = 0; j < 10; ++j) s[static_cast<std::size_t>(j)] = (x >> j) & 1u;
            best = std::max(best, model.score(s));
        }
        int checked = 0;
        for (int threshold : {best - 6, best - 3, best - 1}) {
            const auto level = testsupport::enumerate_sat_level(model, threshold);
            if (level.size() < 8 || level.size() > 4096) continue;
            double p = 0;
            const bool ok = stationary_at(model, level, threshold, 91 + threshold, &p);
            all_ok = all_ok && ok;
            ++checked;
            detail += " sat@" + std::to_string(threshold) + " p=" + std::to_string(p).substr(0, 5);
        }
        all_ok = all_ok && checked == 3;
    }
    // graph: the five-vertex example at three levels including the top
    {
        GraphModel model(DegreeInstance::from_degrees({2, 2, 2, 1, 3}));
        for (int threshold : {-6, -2, 0}) {
            const auto level = testsupport::enumerate_graph_level(model, threshold);
            double p = 0;
            const bool ok = stationary_at(model, level, threshold, 92, &p);
            all_ok = all_ok && ok;
            detail += " graph@" + std::to_string(threshold) + " p=" + std::to_string(p).substr(0, 5);
        }
    }
    // table: three-by-three permutation margins at three levels
    {
        TableModel model(TableInstance::from_margins({1, 1, 1}, {1, 1, 1}));
        for (int threshold : {-4, -2, 0}) {
            const auto level = testsupport::enumerate_table_level(model, threshold);
            double p = 0;
            const bool ok = stationary_at(model, level, threshold, 93, &p);
            all_ok = all_ok && ok;
            detail += " table@" + std::to_string(threshold) + " p=" + std::to_string(p).substr(0, 5);
        }
    }
    char buf[512];
    std::snprintf(buf, sizeof(buf), "kernel stationarity:%s, %.0fs", detail.c_str(),
                  elapsed_s(t0));
    report(9, all_ok, buf);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    const bool all = selected.empty();
    const char* long_env = std::getenv("SPLITCOUNT_ACCEPT_LONG");
    const bool long_enabled = (long_env && std::strcmp(long_env, "1") == 0) || selected.count(3);

    auto want = [&](int c) { return all || selected.count(c); };

    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3) || all) criterion_3(long_enabled);
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) criterion_9();

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all executed criteria passed\n");
    return 0;
}
