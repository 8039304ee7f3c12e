#include "splitcount/sat_model.hpp"

#include <cmath>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "splitcount/errors.hpp"

namespace splitcount {

void CnfInstance::reindex() {
    occurrence.assign(static_cast<std::size_t>(n_vars), {});
    for (std::size_t cid = 0; cid < clauses.size(); ++cid) {
        for (int lit : clauses[cid]) {
            const int var = std::abs(lit) - 1;
            occurrence[static_cast<std::size_t>(var)].push_back(
                (static_cast<std::uint32_t>(cid) << 1) | (lit > 0 ? 1u : 0u));
        }
    }
}

namespace {

bool parse_int(const std::string& tok, long long& out) {
    if (tok.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(tok, &pos);
    } catch (...) {
        return false;
    }
    return pos == tok.size();
}

}  // namespace

CnfInstance parse_dimacs(std::istream& in) {
    CnfInstance inst;
    long long want_clauses = -1;
    bool header_seen = false;
    std::vector<int> clause;
    std::unordered_set<int> lits_seen;

    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank line
        if (tok == "c") continue;
        if (tok.size() > 1 && tok[0] == 'c') continue;  // 'c...' comment without space
        if (!header_seen) {
            if (tok != "p") throw ParseError("dimacs: expected 'p cnf' header, got '" + tok + "'");
            std::string fmt;
            long long n = 0, m = 0;
            if (!(ls >> fmt >> n >> m) || fmt != "cnf")
                throw ParseError("dimacs: malformed 'p cnf <vars> <clauses>' header");
            std::string extra;
            if (ls >> extra) throw ParseError("dimacs: trailing tokens in header");
            if (n < 1 || n > 1000000) throw ParseError("dimacs: variable count out of range");
            if (m < 1) throw ParseError("dimacs: clause count must be positive");
            inst.n_vars = static_cast<int>(n);
            want_clauses = m;
            header_seen = true;
            continue;
        }
        // clause body tokens
        do {
            long long lit = 0;
            if (!parse_int(tok, lit)) throw ParseError("dimacs: bad token '" + tok + "'");
            if (lit == 0) {
                if (clause.empty()) throw ParseError("dimacs: empty clause");
                if (static_cast<long long>(inst.clauses.size()) == want_clauses)
                    throw ParseError("dimacs: more clauses than the header declares");
                inst.clauses.push_back(clause);
                clause.clear();
                lits_seen.clear();
            } else {
                if (std::llabs(lit) > inst.n_vars)
                    throw ParseError("dimacs: literal out of range: " + tok);
                const int l = static_cast<int>(lit);
                if (lits_seen.count(-l))
                    throw ParseError("dimacs: tautological clause (contains both polarities)");
                if (lits_seen.insert(l).second) clause.push_back(l);
            }
        } while (ls >> tok);
    }
    if (!header_seen) throw ParseError("dimacs: missing 'p cnf' header");
    if (!clause.empty()) throw ParseError("dimacs: unterminated clause at end of input");
    if (static_cast<long long>(inst.clauses.size()) != want_clauses)
        throw ParseError("dimacs: clause count mismatch: header says " +
                         std::to_string(want_clauses) + ", found " +
                         std::to_string(inst.clauses.size()));
    inst.reindex();
    return inst;
}

CnfInstance parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

bool LinearEncoding::satisfied(const std::vector<std::uint8_t>& x) const {
    for (int i = 0; i < rows; ++i) {
        int lhs = 0;
        const std::int8_t* row = a.data() + static_cast<std::size_t>(i) * cols;
        for (int j = 0; j < cols; ++j) lhs += row[j] * static_cast<int>(x[static_cast<std::size_t>(j)]);
        if (lhs < b[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

LinearEncoding encode_linear(const CnfInstance& inst) {
    LinearEncoding enc;
    enc.rows = inst.n_clauses();
    enc.cols = inst.n_vars;
    enc.a.assign(static_cast<std::size_t>(enc.rows) * enc.cols, 0);
    enc.b.assign(static_cast<std::size_t>(enc.rows), 0);
    for (int i = 0; i < enc.rows; ++i) {
        int negated = 0;
        for (int lit : inst.clauses[static_cast<std::size_t>(i)]) {
            const int j = std::abs(lit) - 1;
            enc.a[static_cast<std::size_t>(i) * enc.cols + j] = lit > 0 ? 1 : -1;
            if (lit < 0) ++negated;
        }
        enc.b[static_cast<std::size_t>(i)] = 1 - negated;
    }
    return enc;
}

int sat_score(const CnfInstance& inst, const std::vector<std::uint8_t>& x) {
    int score = 0;
    for (const auto& clause : inst.clauses) {
        for (int lit : clause) {
            const bool want = lit > 0;
            if (x[static_cast<std::size_t>(std::abs(lit) - 1)] == static_cast<std::uint8_t>(want)) {
                ++score;
                break;
            }
        }
    }
    return score;
}

SatModel::SatModel(CnfInstance inst) : inst_(std::move(inst)) {
    m_ = inst_.n_clauses();
    log_space_ = static_cast<double>(inst_.n_vars) * std::log(2.0);
    if (inst_.occurrence.size() != static_cast<std::size_t>(inst_.n_vars)) inst_.reindex();
}

std::string SatModel::descriptor() const {
    return "sat n=" + std::to_string(inst_.n_vars) + " m=" + std::to_string(m_);
}

SatModel::State SatModel::sample_uniform(RngStream& rng) const {
    State x(static_cast<std::size_t>(inst_.n_vars));
    for (auto& v : x) v = static_cast<std::uint8_t>(rng.coin());
    return x;
}

int SatModel::gibbs_sweep(State& x, int threshold, RngStream& rng) const {
    static thread_local std::vector<int> true_lits;
    const int m = m_;
    true_lits.assign(static_cast<std::size_t>(m), 0);

    int score = 0;
    for (int cid = 0; cid < m; ++cid) {
        int tl = 0;
        for (int lit : inst_.clauses[static_cast<std::size_t>(cid)]) {
            const bool want = lit > 0;
            if (x[static_cast<std::size_t>(std::abs(lit) - 1)] == static_cast<std::uint8_t>(want)) ++tl;
        }
        true_lits[static_cast<std::size_t>(cid)] = tl;
        if (tl > 0) ++score;
    }

    const int n = inst_.n_vars;
    for (int j = 0; j < n; ++j) {
        const auto& occ = inst_.occurrence[static_cast<std::size_t>(j)];
        const std::uint8_t cur = x[static_cast<std::size_t>(j)];
        // score if x_j were flipped
        int flip_score = score;
        for (std::uint32_t packed : occ) {
            const std::uint32_t cid = packed >> 1;
            const bool lit_true_now = (packed & 1u) == cur;
            const int tl = true_lits[cid];
            if (lit_true_now) {
                if (tl == 1) --flip_score;
            } else {
                if (tl == 0) ++flip_score;
            }
        }
        // Uniform over admissible values; the current one always qualifies.
        if (flip_score >= threshold && rng.coin()) {
            x[static_cast<std::size_t>(j)] = cur ^ 1u;
            for (std::uint32_t packed : occ) {
                const std::uint32_t cid = packed >> 1;
                const bool lit_was_true = (packed & 1u) == cur;
                true_lits[cid] += lit_was_true ? -1 : 1;
            }
            score = flip_score;
        }
    }
    return score;
}

}  // namespace splitcount
