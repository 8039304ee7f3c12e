#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "splitcount/report.hpp"

#include "support.hpp"

using namespace splitcount;

namespace {

std::vector<IterationTrace> sample_traces() {
    std::vector<IterationTrace> traces;
    double log_est = 12.0 * std::log(10.0);
    for (int t = 1; t <= 33; ++t) {
        IterationTrace tr;
        tr.t = t;
        tr.m_upper = 480 + t;
        tr.m_lower = 460 + t;
        tr.n_elites = static_cast<std::size_t>(3000 - 17 * t);
        tr.n_screened = tr.n_elites - static_cast<std::size_t>(t % 3);
        tr.c_hat = static_cast<double>(tr.n_elites) / 25000.0;
        log_est += std::log(tr.c_hat);
        tr.log_estimate_so_far = log_est;
        traces.push_back(tr);
    }
    return traces;
}

}  // namespace

TEST_CASE("sci3 formatting") {
    CHECK(format_sci3_from_log(std::log(7312.2)) == "7.31E+03");
    CHECK(format_sci3_from_log(std::log(1.44e6)) == "1.44E+06");
    CHECK(format_sci3_from_log(std::log(6.00e-3)) == "6.00E-03");
    CHECK(format_sci3_from_log(std::log(9.9999e5)) == "1.00E+06");  // carry
    CHECK(format_sci3_from_log(-std::numeric_limits<double>::infinity()) == "0.00E+00");
}

TEST_CASE("trace csv round-trips byte-identically") {
    const auto traces = sample_traces();
    const auto csv = emit_trace_csv(traces);
    const auto parsed = parse_trace_csv(csv);
    REQUIRE(parsed.size() == traces.size());
    CHECK(emit_trace_csv(parsed) == csv);

    // header and column order are pinned
    CHECK(csv.rfind("t,log10_estimate,N_t,N_t_screened,m_upper,m_lower,c_hat\n", 0) == 0);
}

TEST_CASE("trace csv log10 column is non-increasing") {
    const auto traces = sample_traces();
    for (std::size_t i = 1; i < traces.size(); ++i)
        CHECK(traces[i].log_estimate_so_far <= traces[i - 1].log_estimate_so_far);
}

TEST_CASE("single-row trace emits one data line") {
    std::vector<IterationTrace> traces(1);
    traces[0] = {1, 0, 0, 10, 10, 1.0, 0.0};
    const auto csv = emit_trace_csv(traces);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 2);  // header + one row
}

TEST_CASE("trace json mirrors the csv field names") {
    const auto traces = sample_traces();
    const auto json = emit_trace_json(traces);
    for (const char* field : {"\"t\"", "\"log10_estimate\"", "\"N_t\"", "\"N_t_screened\"",
                              "\"m_upper\"", "\"m_lower\"", "\"c_hat\""})
        CHECK(json.find(field) != std::string::npos);
}

TEST_CASE("report aggregates recompute from rows and timings stay opt-in") {
    RunReport report;
    report.command = "count sat";
    report.instance_path = "x.cnf";
    report.config = {{"samples", "1000"}, {"seed", "7"}};
    for (int i = 1; i <= 3; ++i) {
        RunRow row;
        row.run_index = i;
        row.iterations = 5;
        row.log_estimate = std::log(100.0 * i);
        row.wall_time_s = 0.25 * i;
        report.rows.push_back(row);
    }
    CHECK(report.mean_estimate() == doctest::Approx(200.0).epsilon(1e-12));
    CHECK(report.re() == doctest::Approx(100.0 / 200.0).epsilon(1e-12));

    const auto bare = emit_report_json(report, false);
    CHECK(bare.find("cpu_s") == std::string::npos);
    const auto timed = emit_report_json(report, true);
    CHECK(timed.find("cpu_s") != std::string::npos);

    const auto csv = emit_report_csv(report, false);
    // config echo first, then the header row
    CHECK(csv.rfind("# command: count sat\n", 0) == 0);
    CHECK(csv.find("# seed=7\n") != std::string::npos);
    CHECK(csv.find("run,iterations,log10_estimate,estimate,note\n") != std::string::npos);
}

TEST_CASE("parse rejects malformed trace csv") {
    CHECK_THROWS(parse_trace_csv("nonsense\n"));
    CHECK_THROWS(parse_trace_csv("t,log10_estimate,N_t,N_t_screened,m_upper,m_lower,c_hat\n1,2,3\n"));
}
