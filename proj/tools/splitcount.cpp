// splitcount: approximate counting of large solution sets (3-SAT models,
// degree-sequence graph realizations, binary contingency tables) with the
// adaptive splitting method and capture-recapture estimators.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splitcount/caprecap.hpp"
#include "splitcount/engine.hpp"
#include "splitcount/errors.hpp"
#include "splitcount/graph_model.hpp"
#include "splitcount/oracle.hpp"
#include "splitcount/report.hpp"
#include "splitcount/sat_model.hpp"
#include "splitcount/table_model.hpp"

namespace {

using namespace splitcount;

int log_level() {
    static const int level = [] {
        const char* v = std::getenv("SPLITCOUNT_LOG");
        return v ? std::atoi(v) : 0;
    }();
    return level;
}

struct CommonOpts {
    std::size_t samples = 10000;
    double rho = 0.1;
    int runs = 1;
    std::uint64_t seed = 1;
    std::string estimator = "split";
    std::string trace_path;
    std::string format = "csv";
    std::string report_path;
    int threads = 0;
    std::size_t max_iterations = 1000;
    std::size_t boost_samples = 0;
    int boost_trigger = 2;
    int chain_thinning = 1;
    bool serial = false;
    bool oracle = false;
    bool timings = false;

    std::size_t cap_n1 = 5000;
    std::size_t cap_n2 = 5000;
    int cap_chain_sweeps = 5;

    double ecap_window_low = 1e-3;
    double ecap_window_high = 1e-2;
    int ecap_max_aux = 64;
    int ecap_trigger = 1;
    std::size_t ecap_pool = 50000;
    double ecap_regime = 1e6;
};

void add_common_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--samples", o.samples, "sample size N per iteration (>= 100)");
    cmd->add_option("--rho", o.rho, "splitting control parameter in (0,1)");
    cmd->add_option("--runs", o.runs, "independent runs, seeded seed+run_index")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("--estimator", o.estimator, "split | caprecap | ecap")
        ->check(CLI::IsMember({"split", "caprecap", "ecap"}));
    cmd->add_option("--trace", o.trace_path, "write per-iteration traces to this path");
    cmd->add_option("--format", o.format, "trace/report file format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--report", o.report_path, "write the run report to this path");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all)");
    cmd->add_option("--max-iterations", o.max_iterations, "iteration cap T_max");
    cmd->add_option("--boost-samples", o.boost_samples, "enlarged N near the top level");
    cmd->add_option("--boost-trigger", o.boost_trigger,
                    "boost once m - threshold <= this many levels");
    cmd->add_option("--chain-thinning", o.chain_thinning, "sweeps per recorded chain point");
    cmd->add_flag("--serial", o.serial, "run the serial reference kernels");
    cmd->add_flag("--oracle", o.oracle, "cross-check against the exhaustive oracle if feasible");
    cmd->add_flag("--timings", o.timings, "include wall times in report/trace files");

    cmd->add_option("--cap-n1", o.cap_n1, "capture-recapture first draw size");
    cmd->add_option("--cap-n2", o.cap_n2, "capture-recapture second draw size");
    cmd->add_option("--cap-chain-sweeps", o.cap_chain_sweeps, "sweeps per drawn sample");

    cmd->add_option("--ecap-window-low", o.ecap_window_low, "extended window floor");
    cmd->add_option("--ecap-window-high", o.ecap_window_high, "extended window ceiling");
    cmd->add_option("--ecap-max-aux", o.ecap_max_aux, "auxiliary clause cap");
    cmd->add_option("--ecap-trigger", o.ecap_trigger,
                    "levels-from-top at which ecap warm-up switches to the boosted N");
    cmd->add_option("--ecap-pool", o.ecap_pool, "top-level pool size for the window estimate");
    cmd->add_option("--ecap-regime", o.ecap_regime,
                    "product-estimate threshold above which ecap applies");
}

SplitConfig engine_config(const CommonOpts& o, std::uint64_t run_seed) {
    SplitConfig cfg;
    cfg.sample_size = o.samples;
    cfg.rho = o.rho;
    cfg.seed = run_seed;
    cfg.max_iterations = o.max_iterations;
    cfg.boost_sample_size = o.boost_samples;
    cfg.boost_trigger = o.estimator == "ecap" ? o.ecap_trigger : o.boost_trigger;
    cfg.chain_thinning = o.chain_thinning;
    cfg.exec = o.serial ? ExecMode::Serial : ExecMode::Parallel;
    cfg.threads = o.threads;
    return cfg;
}

std::vector<std::pair<std::string, std::string>> config_echo(const CommonOpts& o,
                                                             const std::string& instance) {
    // Everything needed to reproduce the report. Thread count and exec mode
    // are omitted: results are identical for every schedule by construction.
    std::vector<std::pair<std::string, std::string>> echo;
    echo.emplace_back("instance", instance);
    echo.emplace_back("samples", std::to_string(o.samples));
    echo.emplace_back("rho", format_double(o.rho));
    echo.emplace_back("runs", std::to_string(o.runs));
    echo.emplace_back("seed", std::to_string(o.seed));
    echo.emplace_back("estimator", o.estimator);
    echo.emplace_back("max_iterations", std::to_string(o.max_iterations));
    echo.emplace_back("boost_samples", std::to_string(o.boost_samples));
    echo.emplace_back("boost_trigger", std::to_string(o.boost_trigger));
    echo.emplace_back("chain_thinning", std::to_string(o.chain_thinning));
    if (o.estimator == "caprecap" || o.estimator == "ecap") {
        echo.emplace_back("cap_n1", std::to_string(o.cap_n1));
        echo.emplace_back("cap_n2", std::to_string(o.cap_n2));
        echo.emplace_back("cap_chain_sweeps", std::to_string(o.cap_chain_sweeps));
    }
    if (o.estimator == "ecap") {
        echo.emplace_back("ecap_window_low", format_double(o.ecap_window_low));
        echo.emplace_back("ecap_window_high", format_double(o.ecap_window_high));
        echo.emplace_back("ecap_max_aux", std::to_string(o.ecap_max_aux));
        echo.emplace_back("ecap_trigger", std::to_string(o.ecap_trigger));
        echo.emplace_back("ecap_pool", std::to_string(o.ecap_pool));
        echo.emplace_back("ecap_regime", format_double(o.ecap_regime));
    }
    return echo;
}

std::string trace_file_name(const std::string& base, int run, int runs) {
    if (runs == 1) return base;
    const auto dot = base.find_last_of('.');
    if (dot == std::string::npos || dot == 0)
        return base + ".run" + std::to_string(run);
    return base.substr(0, dot) + ".run" + std::to_string(run) + base.substr(dot);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void print_trace_table(const std::vector<IterationTrace>& traces) {
    std::printf("   t |  estimate |    N_t | N_t(s) | m*_t | m_*t |     c_hat\n");
    for (const auto& tr : traces) {
        std::printf("%4d | %9s | %6zu | %6zu | %4d | %4d | %9.4g\n", tr.t,
                    format_sci3_from_log(tr.log_estimate_so_far).c_str(), tr.n_elites,
                    tr.n_screened, tr.m_upper, tr.m_lower, tr.c_hat);
    }
}

template <CountingModel M>
std::optional<double> oracle_count_of(const M& model);

template <>
std::optional<double> oracle_count_of(const SatModel& model) {
    return static_cast<double>(exact_count_sat(model.instance()));
}
template <>
std::optional<double> oracle_count_of(const GraphModel& model) {
    return static_cast<double>(exact_count_graphs(model.instance()));
}
template <>
std::optional<double> oracle_count_of(const TableModel& model) {
    return static_cast<double>(exact_count_tables(model.instance()));
}

template <CountingModel M>
double apply_recapture(const M& model, const RunResult<M>& result, const CommonOpts& o,
                       std::uint64_t run_seed, RunRow& row);

template <CountingModel M>
int run_count(const M& model, const CommonOpts& o, const std::string& command,
              const std::string& instance_path) {
    RunReport report;
    report.command = command;
    report.instance_path = instance_path;
    report.instance_descriptor = model.descriptor();
    report.config = config_echo(o, instance_path);

    if (o.oracle) {
        try {
            report.oracle_count = oracle_count_of(model);
        } catch (const BudgetExceeded& e) {
            std::fprintf(stderr, "warning: oracle skipped: %s\n", e.what());
        }
    }

    std::printf("# %s %s (%s)\n", command.c_str(), instance_path.c_str(),
                report.instance_descriptor.c_str());
    std::printf("# samples=%zu rho=%s runs=%d seed=%llu estimator=%s threads=%d%s\n", o.samples,
                format_double(o.rho).c_str(), o.runs,
                static_cast<unsigned long long>(o.seed), o.estimator.c_str(), o.threads,
                o.serial ? " serial" : "");
    std::printf("Run | its | estimate  | CPU(s)\n");

    int exit_code = 0;
    for (int run = 1; run <= o.runs; ++run) {
        const std::uint64_t run_seed = o.seed + static_cast<std::uint64_t>(run - 1);
        const auto t0 = std::chrono::steady_clock::now();
        RunRow row;
        row.run_index = run;
        try {
            const auto result = run_splitting(model, engine_config(o, run_seed));
            row.iterations = result.iterations;
            row.log_estimate = result.log_estimate;

            if (o.estimator == "caprecap" || o.estimator == "ecap") {
                row.log_estimate = apply_recapture(model, result, o, run_seed, row);
            }
            report.traces.push_back(result.traces);
            if (!o.trace_path.empty()) {
                const auto name = trace_file_name(o.trace_path, run, o.runs);
                write_file(name, o.format == "json" ? emit_trace_json(result.traces)
                                                    : emit_trace_csv(result.traces));
                print_trace_table(result.traces);
            } else if (log_level() >= 2) {
                print_trace_table(result.traces);
            }
        } catch (const StagnationFailure& e) {
            row.note = std::string("stagnation: ") + e.what();
            row.usable = false;
            exit_code = 1;
        } catch (const IterationLimitExceeded& e) {
            row.note = std::string("iteration-limit: ") + e.what();
            row.usable = false;
            exit_code = 1;
        }
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (row.usable) {
            std::printf("%3d | %3d | %9s | %.3f\n", run, row.iterations,
                        format_sci3_from_log(row.log_estimate).c_str(), row.wall_time_s);
        } else {
            std::printf("%3d |   - |    failed | %.3f  (%s)\n", run, row.wall_time_s,
                        row.note.c_str());
        }
        if (log_level() >= 1)
            std::fprintf(stderr, "[splitcount] run %d done in %.3fs\n", run, row.wall_time_s);
        report.rows.push_back(std::move(row));
    }

    const double mean = report.mean_estimate();
    if (!std::isnan(mean)) {
        double mean_its = 0;
        int used = 0;
        for (const auto& r : report.rows)
            if (r.usable) {
                mean_its += r.iterations;
                ++used;
            }
        std::printf("Avg | %3.0f | %9s |\n", mean_its / used,
                    format_sci3_from_log(std::log(mean)).c_str());
        const double re = report.re();
        if (!std::isnan(re)) std::printf("RE %s\n", format_sci3_from_log(std::log(re)).c_str());
    }
    if (report.oracle_count) {
        const double exact = *report.oracle_count;
        std::printf("oracle %s", format_sci3_from_log(std::log(exact)).c_str());
        if (!std::isnan(mean))
            std::printf("  deviation %+.3f%%", 100.0 * (mean - exact) / exact);
        std::printf("\n");
    }

    if (!o.report_path.empty()) {
        write_file(o.report_path, o.format == "json" ? emit_report_json(report, o.timings)
                                                     : emit_report_csv(report, o.timings));
    }
    return exit_code;
}

/// Replaces the product estimate with the selected recapture estimate.
/// Returns the new log estimate; annotates the row on soft errors.
template <CountingModel M>
double apply_recapture(const M& model, const RunResult<M>& result, const CommonOpts& o,
                       std::uint64_t run_seed, RunRow& row) {
    if (o.estimator == "ecap") {
        if constexpr (std::is_same_v<M, SatModel>) {
            if (result.log_estimate > std::log(o.ecap_regime)) {
                EcapConfig ec;
                ec.window_low = o.ecap_window_low;
                ec.window_high = o.ecap_window_high;
                ec.max_aux = o.ecap_max_aux;
                ec.pool_size = o.ecap_pool;
                ec.pool_chain_sweeps = o.cap_chain_sweeps;
                ec.n1 = o.cap_n1;
                ec.n2 = o.cap_n2;
                ec.chain_sweeps = o.cap_chain_sweeps;
                ec.regime_threshold = o.ecap_regime;
                ec.seed = run_seed;
                ec.exec = o.serial ? ExecMode::Serial : ExecMode::Parallel;
                ec.threads = o.threads;
                const auto ecap = extended_cap_recap(model, result, ec);
                row.note = "ecap tau=" + std::to_string(ecap.tau) +
                           " c_hat=" + format_double(ecap.c_hat_aux);
                if (ecap.inner.zero_overlap) {
                    row.note += "; zero-overlap at the extended level, enlarge --cap-n1/n2";
                    row.usable = false;
                }
                return ecap.log_estimate;
            }
            row.note = "product estimate below --ecap-regime; classic cap-recap used";
            // fall through to the classic path
        }
    }
    BatchConfig bc;
    bc.n1 = o.cap_n1;
    bc.n2 = o.cap_n2;
    bc.chain_sweeps = o.cap_chain_sweeps;
    bc.seed = run_seed;
    bc.exec = o.serial ? ExecMode::Serial : ExecMode::Parallel;
    bc.threads = o.threads;
    const auto [b1, b2] = draw_final_batches(model, result.final_states, bc);
    const auto cap = cap_recap(model, b1, b2);
    if (cap.zero_overlap) {
        row.note = "zero-overlap: naive estimate infinite; enlarge --cap-n1/n2 or use ecap";
        row.usable = false;
        return std::log(cap.chapman_estimate);
    }
    if (row.note.empty())
        row.note = "cap-recap n1=" + std::to_string(cap.n1) + " n2=" + std::to_string(cap.n2) +
                   " R=" + std::to_string(cap.overlap);
    return std::log(cap.chapman_estimate);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"splitcount: approximate counting via adaptive splitting"};
    app.require_subcommand(1);

    auto* count = app.add_subcommand("count", "estimate the solution-set size of an instance");
    count->require_subcommand(1);

    CommonOpts opts;
    std::string cnf_path, degrees_path, spec_path;

    auto* sat = count->add_subcommand("sat", "#3-SAT from a DIMACS CNF file");
    sat->add_option("--cnf", cnf_path, "DIMACS CNF file")->required();
    add_common_options(sat, opts);

    auto* graph = count->add_subcommand("graph", "labeled graphs with a prescribed degree sequence");
    graph->add_option("--degrees", degrees_path, "whitespace-separated degree file")->required();
    add_common_options(graph, opts);

    auto* table = count->add_subcommand("table", "binary contingency tables with fixed margins");
    table->add_option("--spec", spec_path, "JSON file with margins r, c and optional branch")
        ->required();
    add_common_options(table, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        validate(engine_config(opts, opts.seed));
        if (opts.estimator == "ecap" && !sat->parsed())
            throw ConfigError("--estimator ecap applies to the sat subcommand only");

        if (sat->parsed()) {
            std::ifstream in(cnf_path);
            if (!in) throw ParseError("cannot open " + cnf_path);
            SatModel model(parse_dimacs(in));
            return run_count(model, opts, "count sat", cnf_path);
        }
        if (graph->parsed()) {
            std::ifstream in(degrees_path);
            if (!in) throw ParseError("cannot open " + degrees_path);
            GraphModel model(parse_degree_file(in));
            if (!is_graphical(model.instance().degrees))
                std::fprintf(stderr,
                             "warning: degree sequence is not graphical; the target level may be "
                             "unreachable\n");
            return run_count(model, opts, "count graph", degrees_path);
        }
        std::ifstream in(spec_path);
        if (!in) throw ParseError("cannot open " + spec_path);
        TableModel model(TableInstance::from_json(in));
        return run_count(model, opts, "count table", spec_path);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\nrun with --help for usage\n", e.what());
        return 2;
    } catch (const InfeasibleDegrees& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InfeasibleMargins& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
