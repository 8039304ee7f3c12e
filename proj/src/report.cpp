#include "splitcount/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "splitcount/errors.hpp"
#include "splitcount/stats.hpp"

namespace splitcount {

double RunReport::mean_estimate() const {
    std::vector<double> xs;
    for (const auto& r : rows)
        if (r.usable) xs.push_back(std::exp(r.log_estimate));
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    return mean(xs);
}

double RunReport::re() const {
    std::vector<double> xs;
    for (const auto& r : rows)
        if (r.usable) xs.push_back(std::exp(r.log_estimate));
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    return sample_std(xs) / mean(xs);
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_sci3_from_log(double log_value) {
    if (std::isinf(log_value)) return log_value > 0 ? "inf" : "0.00E+00";
    const double log10v = log_value / std::log(10.0);
    auto exp10 = static_cast<long long>(std::floor(log10v));
    double mant = std::pow(10.0, log10v - static_cast<double>(exp10));
    // rounding to two decimals may carry the mantissa to 10.00
    mant = std::round(mant * 100.0) / 100.0;
    if (mant >= 10.0) {
        mant /= 10.0;
        ++exp10;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2fE%+03lld", mant, exp10);
    return buf;
}

static constexpr const char* kTraceHeader = "t,log10_estimate,N_t,N_t_screened,m_upper,m_lower,c_hat";

std::string emit_trace_csv(const std::vector<IterationTrace>& traces) {
    std::string out(kTraceHeader);
    out.push_back('\n');
    for (const auto& tr : traces) {
        out += std::to_string(tr.t);
        out.push_back(',');
        out += format_double(tr.log_estimate_so_far / std::log(10.0));
        out.push_back(',');
        out += std::to_string(tr.n_elites);
        out.push_back(',');
        out += std::to_string(tr.n_screened);
        out.push_back(',');
        out += std::to_string(tr.m_upper);
        out.push_back(',');
        out += std::to_string(tr.m_lower);
        out.push_back(',');
        out += format_double(tr.c_hat);
        out.push_back('\n');
    }
    return out;
}

std::vector<IterationTrace> parse_trace_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw ParseError("trace csv: bad or missing header");
    std::vector<IterationTrace> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw ParseError("trace csv: expected 7 columns");
        IterationTrace tr;
        tr.t = std::stoi(cells[0]);
        tr.log_estimate_so_far = std::stod(cells[1]) * std::log(10.0);
        tr.n_elites = std::stoull(cells[2]);
        tr.n_screened = std::stoull(cells[3]);
        tr.m_upper = std::stoi(cells[4]);
        tr.m_lower = std::stoi(cells[5]);
        tr.c_hat = std::stod(cells[6]);
        out.push_back(tr);
    }
    return out;
}

namespace {

nlohmann::ordered_json trace_to_json(const IterationTrace& tr) {
    nlohmann::ordered_json j;
    j["t"] = tr.t;
    j["log10_estimate"] = tr.log_estimate_so_far / std::log(10.0);
    j["N_t"] = tr.n_elites;
    j["N_t_screened"] = tr.n_screened;
    j["m_upper"] = tr.m_upper;
    j["m_lower"] = tr.m_lower;
    j["c_hat"] = tr.c_hat;
    return j;
}

}  // namespace

std::string emit_trace_json(const std::vector<IterationTrace>& traces) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& tr : traces) arr.push_back(trace_to_json(tr));
    return arr.dump(2) + "\n";
}

std::string emit_report_json(const RunReport& report, bool with_timings) {
    nlohmann::ordered_json j;
    j["command"] = report.command;
    j["instance"] = report.instance_path;
    j["descriptor"] = report.instance_descriptor;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : report.config) cfg[k] = v;
    j["config"] = cfg;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["run"] = r.run_index;
        row["iterations"] = r.iterations;
        row["log10_estimate"] = r.log_estimate / std::log(10.0);
        row["estimate"] = std::exp(r.log_estimate);
        if (!r.note.empty()) row["note"] = r.note;
        if (with_timings) row["cpu_s"] = r.wall_time_s;
        rows.push_back(row);
    }
    j["runs"] = rows;

    nlohmann::ordered_json agg;
    agg["runs_used"] = [&] {
        std::size_t n = 0;
        for (const auto& r : report.rows)
            if (r.usable) ++n;
        return n;
    }();
    agg["mean_estimate"] = report.mean_estimate();
    const double re = report.re();
    if (std::isnan(re))
        agg["relative_error"] = nullptr;
    else
        agg["relative_error"] = re;
    if (report.oracle_count) {
        nlohmann::ordered_json oracle;
        oracle["exact_count"] = *report.oracle_count;
        const double dev = report.mean_estimate() - *report.oracle_count;
        oracle["abs_deviation"] = std::abs(dev);
        oracle["rel_deviation"] = dev / *report.oracle_count;
        agg["oracle"] = oracle;
    }
    j["aggregate"] = agg;

    nlohmann::ordered_json traces = nlohmann::ordered_json::array();
    for (const auto& run_traces : report.traces) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& tr : run_traces) arr.push_back(trace_to_json(tr));
        traces.push_back(arr);
    }
    j["traces"] = traces;
    return j.dump(2) + "\n";
}

std::string emit_report_csv(const RunReport& report, bool with_timings) {
    std::string out;
    out += "# command: " + report.command + "\n";
    out += "# descriptor: " + report.instance_descriptor + "\n";
    for (const auto& [k, v] : report.config) out += "# " + k + "=" + v + "\n";
    out += "run,iterations,log10_estimate,estimate,note";
    if (with_timings) out += ",cpu_s";
    out.push_back('\n');
    for (const auto& r : report.rows) {
        out += std::to_string(r.run_index);
        out.push_back(',');
        out += std::to_string(r.iterations);
        out.push_back(',');
        out += format_double(r.log_estimate / std::log(10.0));
        out.push_back(',');
        out += format_double(std::exp(r.log_estimate));
        out.push_back(',');
        out += r.note;
        if (with_timings) {
            out.push_back(',');
            out += format_double(r.wall_time_s);
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace splitcount
