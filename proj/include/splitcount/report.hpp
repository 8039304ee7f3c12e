#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "splitcount/engine.hpp"

namespace splitcount {

enum class SinkFormat { Csv, Json };

/// One row of the per-run table.
struct RunRow {
    int run_index = 0;   // 1-based
    int iterations = 0;
    double log_estimate = 0.0;  // natural log
    double wall_time_s = 0.0;
    std::string note;    // soft-error or estimator remark, empty otherwise
    bool usable = true;  // participates in the aggregate
};

/// Everything a report needs to be reproduced: the echoed configuration is
/// the full flag set including the seed.
struct RunReport {
    std::string command;   // e.g. "count graph"
    std::string instance_path;
    std::string instance_descriptor;
    std::vector<std::pair<std::string, std::string>> config;  // ordered flag echo
    std::vector<RunRow> rows;
    std::vector<std::vector<IterationTrace>> traces;  // one vector per run

    std::optional<double> oracle_count;  // exact count when cross-checked

    double mean_estimate() const;    // over usable rows
    double re() const;               // relative error over usable rows; nan if < 2 rows
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Scientific notation with three significant digits, from a natural log.
/// Matches the table rendering style of the run summaries.
std::string format_sci3_from_log(double log_value);

/// CSV with exactly these columns:
/// t,log10_estimate,N_t,N_t_screened,m_upper,m_lower,c_hat
std::string emit_trace_csv(const std::vector<IterationTrace>& traces);
std::vector<IterationTrace> parse_trace_csv(const std::string& text);

/// JSON array mirroring the CSV field names.
std::string emit_trace_json(const std::vector<IterationTrace>& traces);

/// Machine-readable report. Timing fields are included only when
/// with_timings is set, keeping default output byte-identical across
/// repeated invocations.
std::string emit_report_json(const RunReport& report, bool with_timings);
std::string emit_report_csv(const RunReport& report, bool with_timings);

}  // namespace splitcount
