/*
   Copyright 2026 The rkpair Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// The rkpair command-line tool. run_cli is kept in a header so tests can drive it in-process.
// Exit codes: 0 true/Proven/found, 1 false/NotProven/none, 2 Indeterminate/borderline, 3 usage.

#ifndef RKPAIR_TOOLS_CLI_HPP
#define RKPAIR_TOOLS_CLI_HPP

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rkpair/boundscan.hpp"
#include "rkpair/criteria.hpp"
#include "rkpair/search.hpp"
#include "rkpair/selftest.hpp"
#include "rkpair/version.hpp"

namespace rkpair::cli {

using json = nlohmann::ordered_json;

constexpr int kExitTrue = 0, kExitFalse = 1, kExitIndeterminate = 2, kExitUsage = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int exit_code(Verdict v) {
    return v == Verdict::Proven ? kExitTrue : v == Verdict::NotProven ? kExitFalse : kExitIndeterminate;
}

inline int exit_code(TriState s) {
    return s == TriState::True ? kExitTrue : s == TriState::False ? kExitFalse : kExitIndeterminate;
}

/// "585229", "6.515e14", "8.5184e572158": a positive magnitude, possibly beyond double range.
inline LogMagnitude parse_magnitude(const std::string& s) {
    const auto e = s.find_first_of("eE");
    try {
        std::size_t used = 0;
        const double m = std::stod(s.substr(0, e), &used);
        if (used != (e == std::string::npos ? s.size() : e) || !(m > 0)) throw std::invalid_argument(s);
        long x = 0;
        if (e != std::string::npos) {
            x = std::stol(s.substr(e + 1), &used);
            if (used != s.size() - e - 1) throw std::invalid_argument(s);
        }
        return LogMagnitude::from_log10(std::log10(m) + static_cast<double>(x));
    } catch (const std::logic_error&) {
        throw UsageError("not a positive magnitude: '" + s + "'");
    }
}

/// Smallest printed value strictly above v: an integer below 10^7, else 4 significant digits.
/// The nudge keeps values that round-trip to just under an integer from printing as equal.
inline std::string upper_bound_text(const LogMagnitude& v) {
    constexpr double nudge = 1 + 1e-12;
    if (v.log10 < 7) return std::to_string(static_cast<std::uint64_t>(std::floor(v.value() * nudge)) + 1);
    long e = v.exponent();
    double m = (std::floor(v.mantissa() * 1000 * nudge) + 1) / 1000;
    if (m >= 10) {
        m /= 10;
        ++e;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3fe%ld", m, e);
    return buf;
}

inline std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
            throw UsageError("not an integer list: '" + s + "'");
        }
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

/// Runs a parser and turns a syntax error into a usage error with a caret under the position.
template <class Fn>
auto parse_text(const std::string& what, const std::string& text, Fn fn) {
    try {
        return fn(text);
    } catch (const ParseError& e) {
        throw UsageError(what + ": " + e.what() + "\n  " + text + "\n  " + std::string(e.pos, ' ') + "^");
    }
}

inline std::string rational_text(const Rational& r) { return r.get_str(); }

inline json outcome_json(const SieveOutcome& o) {
    json j{{"stage", o.stage}, {"verdict", to_string(o.verdict)}};
    if (o.has_delta || sgn(o.delta) != 0) {
        j["delta"] = rational_text(o.delta);
        j["delta_value"] = o.delta.get_d();
    }
    if (o.has_delta) {
        j["Delta"] = rational_text(o.Delta);
        j["Delta_value"] = o.Delta.get_d();
    }
    if (o.split) {
        const auto& s = *o.split;
        j["split"] = {{"i1", s.i1},
                      {"i2", s.i2},
                      {"j1", s.j1},
                      {"j2", s.j2},
                      {"ell1", s.ell1.get_str()},
                      {"ell2", s.ell2.get_str()},
                      {"g1_kept_degrees", s.g1_kept_degrees},
                      {"g2_kept_degrees", s.g2_kept_degrees}};
    }
    if (!o.note.empty()) j["note"] = o.note;
    return j;
}

inline json cell_json(const CellResult& c) {
    return {{"q", c.q},         {"n", c.n},
            {"stage", c.stage}, {"stage_index", c.stage_index},
            {"verdict", to_string(c.verdict)}, {"has_delta", c.has_delta},
            {"delta", c.delta}, {"Delta", c.Delta}};
}

inline CellResult cell_from_json(const json& j) {
    CellResult c;
    c.q = j.at("q").get<std::uint64_t>();
    c.n = j.at("n").get<std::uint64_t>();
    c.stage = j.at("stage").get<std::string>();
    c.stage_index = j.at("stage_index").get<std::size_t>();
    const auto v = j.at("verdict").get<std::string>();
    c.verdict = v == "Proven" ? Verdict::Proven : v == "NotProven" ? Verdict::NotProven : Verdict::Indeterminate;
    c.has_delta = j.at("has_delta").get<bool>();
    c.delta = j.at("delta").get<double>();
    c.Delta = j.at("Delta").get<double>();
    return c;
}

inline json profile_json(const ElemProfile& p) {
    return {{"mult_order", p.mult_order.get_str()}, {"fq_order", p.fq_order}, {"k", p.k}};
}

inline json witness_json(const FieldCtx& L, const PairWitness& w) {
    return {{"j", w.j},
            {"alpha", w.alpha},
            {"alpha_text", L.to_string(w.alpha)},
            {"image", w.image},
            {"image_text", L.to_string(w.image)},
            {"alpha_profile", profile_json(w.alpha_profile)},
            {"image_profile", profile_json(w.image_profile)},
            {"F", ratfunc_to_string(L, w.F)}};
}

inline json suite_json(const SuiteReport& r) {
    json j{{"suite", r.name}, {"checks", r.checks}, {"failures", r.failures}, {"ok", r.ok()}};
    if (!r.ok()) j["first_failure"] = r.first_failure;
    if (r.max_error > 0) j["max_error"] = r.max_error;
    return j;
}

/// Options shared by every subcommand.
struct Common {
    std::uint64_t seed = 0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool json = false, csv = false, dry_run = false;
    std::uint64_t budget = FactorOptions{}.rho_budget;
    std::uint64_t cap = 100'000'000;

    FactorOptions factor() const {
        FactorOptions f;
        f.rho_budget = budget;
        return f;
    }
};

/// What a subcommand produced: a JSON payload, an optional table, human text and the exit code.
struct Output {
    json doc = json::object();
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::ostringstream text;
    int code = kExitTrue;
};

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
    return o + "\"";
}

inline std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

/// Prints the plan and reports whether the command should stop there.
inline bool dry_run(const Common& c, const json& plan, Output& o) {
    if (!c.dry_run) return false;
    o.doc["dry_run"] = true;
    o.doc["plan"] = plan;
    o.text << "plan:\n";
    for (const auto& [k, v] : plan.items()) o.text << "  " << k << " = " << scalar_text(v) << "\n";
    o.header = {"key", "value"};
    for (const auto& [k, v] : plan.items()) o.rows.push_back({k, scalar_text(v)});
    return true;
}

// ---------------------------------------------------------------------------
// Subcommands

struct Args {
    std::uint64_t q = 0, n = 0;
    double t = 8;
    std::uint64_t p0 = 0;  // 0: by size
    bool inclusive = false;
    int constant = 36;
    // bound-sieve
    std::string qmin_text, qmax_text, p0_list, variant = "standard";
    // global-bound
    std::uint64_t start = 10009;
    bool chained = false;
    // casen7
    double qmin7 = 1e9;
    std::string cascade = "37,19,17,17,17";
    // sweep
    std::uint64_t n_lo = 12, n_hi = 1028, q_lo = 5, q_hi = 0;
    bool closed = false, all = false;
    std::string stages = "theorem:8,special:auto,total";
    std::string checkpoint;
    // search
    std::string params = "2,2,3,1", F, f1, f2;
    bool waive_upsilon = false, fq = false;
    std::uint64_t block = 4096;
    // verify-identities
    std::uint64_t limit = 2401, fc_q = 199, fc_n = 200, R_max = 200, r_max = 30;
};

inline void cmd_factor_xn1(const Common& c, const Args& a, Output& o) {
    if (dry_run(c, {{"q", a.q}, {"n", a.n}, {"seed", c.seed}}, o)) return;
    const BaseField F = BaseField::from_q(a.q, c.seed);
    const FactorList fl = factor_xn_minus_1(F, a.n, c.seed);
    json factors = json::array();
    o.header = {"factor", "degree", "multiplicity"};
    o.text << "x^" << a.n << " - 1 over F_" << a.q << ": " << fl.size() << " distinct irreducible factors\n";
    for (const auto& [f, e] : fl) {
        const std::string s = poly_to_string(F, f);
        const std::size_t d = f.size() - 1;
        factors.push_back({{"factor", s}, {"degree", d}, {"multiplicity", e}});
        o.rows.push_back({s, std::to_string(d), std::to_string(e)});
        o.text << "  (" << s << ")" << (e > 1 ? "^" + std::to_string(e) : "") << "  degree " << d << "\n";
    }
    o.doc["q"] = a.q;
    o.doc["n"] = a.n;
    o.doc["distinct"] = fl.size();
    o.doc["factors"] = factors;
}

inline void cmd_field_info(const Common& c, const Args& a, Output& o) {
    if (dry_run(c, {{"q", a.q}, {"n", a.n}, {"seed", c.seed}, {"budget", c.budget}}, o)) return;
    const FieldCtx L(BaseField::from_q(a.q, c.seed), static_cast<unsigned>(a.n), FieldOptions{c.seed, true, c.factor()});
    const auto deg = xn1_factor_degrees(a.q, a.n);
    const auto pair = number_pol_factors(a.q, a.n);
    json fact = json::array();
    std::string fact_text;
    for (const auto& [p, e] : L.group_order_fact().factors) {
        fact.push_back({p.get_str(), e});
        fact_text += (fact_text.empty() ? "" : " * ") + p.get_str() + (e > 1 ? "^" + std::to_string(e) : "");
    }
    std::string ext_text = poly_to_string(L.base(), L.ext_poly());
    std::replace(ext_text.begin(), ext_text.end(), 'x', 'y');
    o.doc["field"] = json::parse(L.to_json());
    o.doc["group_order_factors"] = fact;
    o.doc["xn1_factor_degrees"] = deg.degree_list();
    o.doc["condition_qn"] = condition_qn(a.q, a.n);
    if (pair) o.doc["w"] = {pair->first, pair->second};
    o.text << "F_" << a.q << "^" << a.n << " = F_" << a.q << "[y]/(" << ext_text << ")\n"
           << "  generator: " << L.to_string(L.generator()) << "\n"
           << "  q^n - 1 = " << L.group_order().get_str() << " = " << fact_text << "\n"
           << "  x^n - 1 factor degrees:";
    for (auto d : deg.degree_list()) o.text << " " << d;
    o.text << "\n  6 | q^n - 1 and gcd(q^3 - q, n) != 1: " << (condition_qn(a.q, a.n) ? "yes" : "no") << "\n";
    if (pair) o.text << "  (w1, w2) = (" << pair->first << ", " << pair->second << ")\n";
    o.header = {"key", "value"};
    for (const auto& [k, v] : o.doc.items()) o.rows.push_back({k, scalar_text(v)});
}

inline void cmd_check_theorem(const Common& c, const Args& a, Output& o) {
    if (dry_run(c, {{"q", a.q}, {"n", a.n}, {"t", a.t}}, o)) return;
    const auto r = test_theorem(a.q, a.n, a.t);
    o.doc["q"] = a.q;
    o.doc["n"] = a.n;
    o.doc["t"] = a.t;
    o.doc["result"] = to_string(r.result);
    o.doc["margin_log10"] = r.margin;
    o.doc["has_pair"] = r.has_pair;
    o.code = exit_code(r.result);
    o.text << "TestTheorem(q=" << a.q << ", n=" << a.n << ", t=" << a.t << "): " << to_string(r.result);
    if (r.has_pair) o.text << " (log10 margin " << r.margin << ")";
    else o.text << " (no admissible f1, f2)";
    o.text << "\n";
}

inline void print_outcome(std::ostream& os, std::uint64_t q, std::uint64_t n, const SieveOutcome& s) {
    os << s.stage << "(q=" << q << ", n=" << n << "): " << to_string(s.verdict) << "\n";
    if (s.has_delta) os << "  delta = " << s.delta.get_d() << ", Delta = " << s.Delta.get_d() << "\n";
    if (s.split)
        os << "  kept (i1, i2, j1, j2) = (" << s.split->i1 << ", " << s.split->i2 << ", " << s.split->j1 << ", "
           << s.split->j2 << ")\n";
    if (!s.note.empty()) os << "  " << s.note << "\n";
}

inline void cmd_special_sieve(const Common& c, const Args& a, Output& o) {
    const std::uint64_t p0 = a.p0 ? a.p0 : special_p0_by_size(a.q, a.n);
    const auto bound = a.inclusive ? SumFactorsBound::Inclusive : SumFactorsBound::Strict;
    if (dry_run(c, {{"q", a.q}, {"n", a.n}, {"p0", p0}, {"bound", a.inclusive ? "inclusive" : "strict"}}, o)) return;
    const auto s = special_sieve(a.q, a.n, p0, bound);
    o.doc["q"] = a.q;
    o.doc["n"] = a.n;
    o.doc["p0"] = p0;
    o.doc["bound"] = a.inclusive ? "inclusive" : "strict";
    o.doc["outcome"] = outcome_json(s);
    o.code = exit_code(s.verdict);
    print_outcome(o.text, a.q, a.n, s);
}

inline void cmd_total_sieve(const Common& c, const Args& a, Output& o) {
    if (dry_run(c, {{"q", a.q}, {"n", a.n}, {"constant", a.constant}, {"budget", c.budget}}, o)) return;
    TotalSieveOptions opt;
    opt.constant = a.constant;
    opt.factor = c.factor();
    const auto s = total_sieve(a.q, a.n, opt);
    o.doc["q"] = a.q;
    o.doc["n"] = a.n;
    o.doc["constant"] = a.constant;
    o.doc["outcome"] = outcome_json(s);
    o.code = exit_code(s.verdict);
    print_outcome(o.text, a.q, a.n, s);
}

inline void cmd_bound_sieve(const Common& c, const Args& a, Output& o) {
    const double qmin = parse_magnitude(a.qmin_text).value();
    const LogMagnitude qmax = parse_magnitude(a.qmax_text);
    const auto p0s = parse_u64_list(a.p0_list);
    const auto var = BoundSieveVariant::parse(a.variant);
    if (dry_run(c, {{"q_min", qmin}, {"q_max", qmax.str()}, {"n", a.n}, {"p0", p0s}, {"variant", var.str()}}, o)) return;
    o.header = {"step", "p0", "q_max", "q_new", "bound", "B", "worst_m", "worst_u1", "worst_u2", "triples"};
    json steps = json::array();
    LogMagnitude q = qmax;
    bool allB = true;
    for (std::size_t i = 0; i < p0s.size(); ++i) {
        const auto r = bound_sieve(qmin, q, static_cast<unsigned>(a.n), p0s[i], var);
        const std::string bound = upper_bound_text(r.q_new);
        steps.push_back({{"p0", p0s[i]},
                         {"q_max", q.str()},
                         {"q_new", r.q_new.str(7)},
                         {"bound", bound},
                         {"B", r.B},
                         {"pbar", r.pbar},
                         {"e1", r.e1},
                         {"e2", r.e2},
                         {"m_max", r.m_max},
                         {"worst", {r.worst_m, r.worst_u1, r.worst_u2}},
                         {"triples", r.triples}});
        o.rows.push_back({std::to_string(i + 1), std::to_string(p0s[i]), q.str(), r.q_new.str(7), bound,
                          r.B ? "true" : "false", std::to_string(r.worst_m), std::to_string(r.worst_u1),
                          std::to_string(r.worst_u2), std::to_string(r.triples)});
        o.text << "BoundSieve(" << a.qmin_text << ", " << q.str() << ", " << a.n << ", " << p0s[i] << ")"
               << (var.str() == "standard" ? "" : " [" + var.str() + "]") << ": q_new < " << bound
               << (r.B ? "" : "  (B = false: some triple has delta <= 0)") << "\n";
        allB = allB && r.B;
        q = parse_magnitude(bound);
    }
    o.doc["q_min"] = qmin;
    o.doc["n"] = a.n;
    o.doc["variant"] = var.str();
    o.doc["steps"] = steps;
    o.doc["B"] = allB;
    o.code = allB ? kExitTrue : kExitFalse;
}

inline void cmd_global_bound(const Common& c, const Args& a, Output& o) {
    if (a.start != 10009 && a.start != 100003) throw UsageError("--start must be 10009 or 100003");
    const auto rows = a.start == 10009 ? global_chain_10009() : global_chain_100003();
    const LogMagnitude target = a.start == 10009 ? LogMagnitude::scientific(1.66, 92) : LogMagnitude::scientific(1.29, 63);
    if (dry_run(c, {{"q0", a.start}, {"steps", rows.size()}, {"chained", a.chained}, {"target", target.str(3)}}, o))
        return;
    const auto out = run_chain(rows, a.chained, [&](std::uint64_t p0, const LogMagnitude& P) {
        return global_bound_iteration(a.start, p0, P);
    });
    o.header = {"step", "p0", "input", "output", "stated", "rel_log10_error", "ok"};
    json steps = json::array();
    bool good = out.size() == rows.size();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const LogMagnitude stated = i + 1 < rows.size() ? rows[i + 1].P : target;
        const double err = log10_relative_error(out[i].output_P, stated);
        const bool ok = out[i].ok && out[i].output_P <= stated && err <= 1e-3;
        good = good && ok;
        steps.push_back({{"p0", out[i].p0},
                         {"input", out[i].input_P.str()},
                         {"output", out[i].output_P.str()},
                         {"stated", stated.str(3)},
                         {"rel_log10_error", err},
                         {"ok", ok}});
        o.rows.push_back({std::to_string(i + 1), std::to_string(out[i].p0), out[i].input_P.str(), out[i].output_P.str(),
                          stated.str(3), std::to_string(err), ok ? "true" : "false"});
        o.text << "step " << i + 1 << ": p0 = " << out[i].p0 << ", q^n < " << out[i].input_P.str() << " -> "
               << out[i].output_P.str() << " (stated " << stated.str(3) << ")" << (ok ? "" : "  MISMATCH") << "\n";
    }
    o.doc["q0"] = a.start;
    o.doc["chained"] = a.chained;
    o.doc["steps"] = steps;
    o.code = good ? kExitTrue : kExitFalse;
}

inline void cmd_table1(const Common& c, const Args&, Output& o) {
    const auto rows = table1_rows();
    if (dry_run(c, {{"rows", rows.size()}}, o)) return;
    o.header = {"n", "N", "m", "three_Pm", "expected", "holds", "match"};
    json out = json::array();
    bool good = true;
    for (const auto& r : rows) {
        const auto w = weil_start_bound(r.n, r.N, r.m);
        const bool match = w.three_Pm.str(3) == r.expected_three_Pm.str(3);
        good = good && w.holds && match;
        out.push_back({{"n", r.n},
                       {"N", r.N},
                       {"m", r.m},
                       {"three_Pm", w.three_Pm.str(4)},
                       {"expected", r.expected_three_Pm.str(4)},
                       {"rhs_log10", w.rhs_log10},
                       {"holds", w.holds},
                       {"match", match}});
        o.rows.push_back({std::to_string(r.n), std::to_string(r.N), std::to_string(r.m), w.three_Pm.str(4),
                          r.expected_three_Pm.str(4), w.holds ? "true" : "false", match ? "true" : "false"});
        o.text << "n = " << r.n << ", N = " << r.N << ", m = " << r.m << ": 3P_m = " << w.three_Pm.str(4)
               << " (table " << r.expected_three_Pm.str(4) << "), inequality " << (w.holds ? "holds" : "FAILS")
               << (match ? "" : ", MISMATCH") << "\n";
    }
    o.doc["rows"] = out;
    o.code = good ? kExitTrue : kExitFalse;
}

inline void cmd_table2(const Common& c, const Args&, Output& o) {
    const auto rows = table2_rows();
    if (dry_run(c, {{"rows", rows.size()}, {"tolerance", 1e-3}}, o)) return;
    o.header = {"n", "p0", "input", "computed", "expected", "rel_log10_error", "ok"};
    json out = json::array();
    bool good = true;
    for (const auto& r : rows) {
        const auto st = fixed_n_bound_iteration(r.n, r.P, r.p0);
        const double err = log10_relative_error(st.output_P, r.expected);
        const bool ok = st.ok && err <= 1e-3;
        good = good && ok;
        out.push_back({{"n", r.n},
                       {"p0", r.p0},
                       {"input", r.P.str(4)},
                       {"computed", st.output_P.str(4)},
                       {"expected", r.expected.str(4)},
                       {"rel_log10_error", err},
                       {"ok", ok}});
        o.rows.push_back({std::to_string(r.n), std::to_string(r.p0), r.P.str(4), st.output_P.str(4), r.expected.str(4),
                          std::to_string(err), ok ? "true" : "false"});
        o.text << "n = " << std::setw(2) << r.n << ", p0 = " << std::setw(4) << r.p0 << ": " << r.P.str(4) << " -> "
               << st.output_P.str(4) << " (table " << r.expected.str(4) << ")" << (ok ? "" : "  MISMATCH") << "\n";
    }
    o.doc["rows"] = out;
    o.code = good ? kExitTrue : kExitFalse;
}

inline void cmd_casen7(const Common& c, const Args& a, Output& o) {
    Casen7Options opt;
    opt.threads = c.threads;
    opt.t = a.t;
    opt.cascade_p0 = parse_u64_list(a.cascade);
    opt.cascade_qmin = a.qmin7;
    if (dry_run(c, {{"census", "(2^20, 2^30)"}, {"t", opt.t}, {"cascade_p0", opt.cascade_p0}, {"q_min", opt.cascade_qmin}},
                o))
        return;
    const auto r = casen7_chain(opt);
    json casc = json::array();
    o.text << "census of primes in (2^20, 2^30): " << r.census_count << "\n"
           << "stage 1: B = " << r.B.str() << ", delta = " << r.delta1 << ", Delta = " << r.Delta1 << ", q < "
           << r.bound1.str() << "\n"
           << "stage 2: u = " << r.u << ", delta = " << r.delta2 << ", Delta = " << r.Delta2 << ", q < "
           << r.bound2.str() << "\n";
    o.header = {"step", "p0", "q_new", "bound", "B"};
    for (std::size_t i = 0; i < r.cascade.size(); ++i) {
        const auto& s = r.cascade[i];
        casc.push_back({{"p0", opt.cascade_p0[i]}, {"q_new", s.q_new.str()}, {"bound", upper_bound_text(s.q_new)}, {"B", s.B}});
        o.rows.push_back({std::to_string(i + 1), std::to_string(opt.cascade_p0[i]), s.q_new.str(),
                          upper_bound_text(s.q_new), s.B ? "true" : "false"});
        o.text << "cascade p0 = " << opt.cascade_p0[i] << ": q < " << s.q_new.str() << "\n";
    }
    o.doc["census"] = {{"count", r.census_count}, {"inverse_sum", r.census_inverse_sum}};
    o.doc["stage1"] = {{"B", r.B.str()}, {"delta", r.delta1}, {"Delta", r.Delta1}, {"bound", r.bound1.str()}};
    o.doc["stage2"] = {{"u", r.u},           {"S_u", r.S_u},         {"delta", r.delta2},
                       {"Delta", r.Delta2}, {"A_t", r.A_t.str()}, {"bound", r.bound2.str()}};
    o.doc["cascade"] = casc;
    bool allB = true;
    for (const auto& s : r.cascade) allB = allB && s.B;
    o.code = allB ? kExitTrue : kExitFalse;
}

/// "theorem:8,special:auto,total"
inline std::vector<Stage> parse_stages(const Args& a, const Common& c, std::vector<std::string>& names) {
    std::vector<Stage> out;
    std::stringstream ss(a.stages);
    std::string tok;
    const auto bound = a.inclusive ? SumFactorsBound::Inclusive : SumFactorsBound::Strict;
    while (std::getline(ss, tok, ',')) {
        const auto colon = tok.find(':');
        const std::string kind = tok.substr(0, colon), arg = colon == std::string::npos ? "" : tok.substr(colon + 1);
        if (kind == "theorem") {
            const double t = arg.empty() ? 8.0 : parse_magnitude(arg).value();
            out.push_back(Stage::theorem(t));
            std::ostringstream n;
            n << "theorem:" << t;
            names.push_back(n.str());
        } else if (kind == "special") {
            if (arg.empty() || arg == "auto") {
                out.push_back(Stage::special(special_p0_by_size, bound));
                names.push_back("special:auto");
            } else {
                const auto p0 = parse_u64_list(arg);
                if (p0.size() != 1 || !is_prime_u64(p0[0])) throw UsageError("special stage needs a prime p0: " + tok);
                out.push_back(Stage::special(p0[0], bound));
                names.push_back("special:" + arg);
            }
        } else if (kind == "total" && arg.empty()) {
            TotalSieveOptions t;
            t.constant = a.constant;
            t.factor = c.factor();
            out.push_back(Stage::total_stage(t));
            names.push_back("total");
        } else {
            throw UsageError("unknown stage '" + tok + "' (theorem:T, special:auto|P, total)");
        }
    }
    if (out.empty()) throw UsageError("no stages");
    return out;
}

inline void cmd_sweep(const Common& c, const Args& a, Output& o) {
    if (a.n_lo < 7 || a.n_hi < a.n_lo) throw UsageError("need 7 <= n-lo <= n-hi");
    std::vector<std::string> names;
    SweepConfig cfg;
    cfg.n_lo = a.n_lo;
    cfg.n_hi = a.n_hi;
    cfg.q_lo = a.q_lo;
    cfg.threads = c.threads;
    cfg.stages = parse_stages(a, c, names);
    const bool closed = a.closed;
    const std::uint64_t q_hi = a.q_hi;
    cfg.q_max = [=](std::uint64_t n) { return q_hi ? q_hi : mn_qcap(static_cast<unsigned>(n), closed); };
    for (std::uint64_t n = a.n_lo; n <= a.n_hi; ++n)
        if (cfg.q_max(n) > 100'000'000)
            throw UsageError("q range for n = " + std::to_string(n) + " exceeds 10^8; pass --q-hi");
    const auto cells = sweep_cells(cfg);
    const json plan{{"n_lo", a.n_lo},        {"n_hi", a.n_hi},
                    {"q_lo", a.q_lo},        {"q_hi", q_hi ? json(q_hi) : json(closed ? "q <= M_n" : "q < M_n")},
                    {"stages", names},       {"constant", a.constant},
                    {"sum_factors", a.inclusive ? "inclusive" : "strict"},
                    {"budget", c.budget},    {"cells", cells.size()}};
    if (dry_run(c, plan, o)) return;

    std::ofstream ckpt;
    if (!a.checkpoint.empty()) {
        bool have_plan = false;
        if (std::ifstream in(a.checkpoint); in) {
            std::string line;
            while (std::getline(in, line)) {
                const json j = json::parse(line, nullptr, false);
                if (j.is_discarded() || !j.is_object()) continue;  // a torn final line
                if (j.value("type", "") == "plan") {
                    if (j.at("plan") != plan) throw UsageError("checkpoint " + a.checkpoint + " was written for another plan");
                    have_plan = true;
                } else if (j.value("type", "") == "cell") {
                    const CellResult r = cell_from_json(j);
                    cfg.resume[{r.q, r.n}] = r;
                }
            }
        }
        ckpt.open(a.checkpoint, std::ios::app);
        if (!ckpt) throw UsageError("cannot open checkpoint " + a.checkpoint);
        if (!have_plan) ckpt << json{{"type", "plan"}, {"plan", plan}}.dump() << "\n" << std::flush;
        cfg.on_cell = [&](const CellResult& r) {
            json j{{"type", "cell"}};
            j.update(cell_json(r));
            ckpt << j.dump() << "\n" << std::flush;
        };
    }
    const std::size_t resumed = cfg.resume.size();
    const auto rep = sweep(cfg);

    o.doc["plan"] = plan;
    json stages = json::array();
    for (std::size_t k = 0; k < names.size(); ++k)
        stages.push_back({{"stage", names[k]}, {"cleared", rep.cleared_by_stage[k]}, {"remaining", rep.remaining_after[k]}});
    o.doc["stages"] = stages;
    json surv = json::array();
    for (const auto& r : rep.survivors) surv.push_back(cell_json(r));
    o.doc["survivors"] = surv;
    o.doc["indeterminate"] = rep.indeterminate.size();
    if (a.all) {
        json all = json::array();
        for (const auto& r : rep.results) all.push_back(cell_json(r));
        o.doc["cells"] = all;
    }
    o.header = {"q", "n", "stage", "verdict", "delta", "Delta"};
    for (const auto& r : a.all ? rep.results : rep.survivors) {
        std::ostringstream d, D;
        d << std::setprecision(10) << r.delta;
        D << std::setprecision(10) << r.Delta;
        o.rows.push_back({std::to_string(r.q), std::to_string(r.n), r.stage, to_string(r.verdict),
                          r.has_delta ? d.str() : "", r.has_delta ? D.str() : ""});
    }
    o.text << "cells: " << rep.cells << (resumed ? " (" + std::to_string(resumed) + " from checkpoint)" : "") << "\n";
    for (std::size_t k = 0; k < names.size(); ++k)
        o.text << "  " << names[k] << ": cleared " << rep.cleared_by_stage[k] << ", remaining " << rep.remaining_after[k]
               << "\n";
    o.text << "survivors: " << rep.survivors.size() << " (indeterminate " << rep.indeterminate.size() << ")\n";
    const std::size_t show = std::min<std::size_t>(rep.survivors.size(), 40);
    for (std::size_t i = 0; i < show; ++i)
        o.text << "  q = " << rep.survivors[i].q << ", n = " << rep.survivors[i].n << ": " << to_string(rep.survivors[i].verdict)
               << " at " << rep.survivors[i].stage << "\n";
    if (show < rep.survivors.size()) o.text << "  ... (" << rep.survivors.size() - show << " more; use --csv)\n";
    o.code = rep.survivors.empty() ? kExitTrue : rep.indeterminate.empty() ? kExitFalse : kExitIndeterminate;
}

inline void cmd_search(const Common& c, const Args& a, Output& o) {
    const auto pv = parse_u64_list(a.params);
    if (pv.size() != 4) throw UsageError("--params takes r1,k1,r2,k2");
    const PairParams P{pv[0], pv[1], pv[2], pv[3]};
    const json plan{{"q", a.q},   {"n", a.n},
                    {"params", pv}, {"F", a.F.empty() ? json("test family") : json(a.F)},
                    {"cap", c.cap}, {"upsilon", a.waive_upsilon ? "waived" : a.fq ? "over F_q" : "over F_{q^n}"}};
    const BigInt size = ipow(big(a.q), a.n);
    if (size > big(c.cap)) throw UsageError("field size " + size.get_str() + " exceeds --cap " + std::to_string(c.cap));
    if (dry_run(c, plan, o)) return;

    const FieldCtx L(BaseField::from_q(a.q, c.seed), static_cast<unsigned>(a.n), FieldOptions{c.seed, true, c.factor()});
    const Classifier C(L);
    SearchOptions so;
    so.cap = c.cap;
    so.threads = c.threads;
    so.block = a.block;
    so.check_upsilon = false;  // membership is decided below
    so.upsilon_field = a.fq ? UpsilonField::Fq : UpsilonField::Fqn;
    auto parse_div = [&](const std::string& s) {
        return parse_text("divisor", s, [&](const std::string& t) { return parse_poly(L.base(), t); });
    };
    if (!a.f1.empty()) so.f1 = parse_div(a.f1);
    if (!a.f2.empty()) so.f2 = parse_div(a.f2);

    std::vector<FamilyMember> fam;
    if (!a.F.empty()) {
        RatFunc F = parse_text("F", a.F, [&](const std::string& t) { return RatFunc::parse(L, t); });
        UpsilonResult m = in_upsilon(L, F, so.m1, so.m2, so.upsilon_field);
        if (!m.member && !a.waive_upsilon) throw UsageError("F is not admissible: " + m.reason + " (use --waive-upsilon)");
        fam.push_back({"F", std::move(F), std::move(m)});
    } else {
        fam = test_family(L, so.upsilon_field);
    }

    o.doc["field"] = json::parse(L.to_json());
    o.doc["params"] = pv;
    json entries = json::array();
    o.header = {"family", "F", "admissible", "found", "j"};
    bool all_found = true, any_searched = false;
    for (const auto& m : fam) {
        const std::string Fs = ratfunc_to_string(L, m.F);
        json e{{"family", m.name}, {"F", Fs}, {"admissible", m.membership.member}};
        if (!m.membership.member) e["reason"] = m.membership.reason;
        std::string found = "skipped", jtext;
        if (m.membership.member || a.waive_upsilon) {
            any_searched = true;
            const auto w = find_witness(C, m.F, P, so);
            if (w) {
                const auto bad = certify(C, *w);
                e["witness"] = witness_json(L, *w);
                e["certified"] = !bad.has_value();
                found = "true";
                jtext = std::to_string(w->j);
                o.text << m.name << " = " << Fs << ": alpha = gamma^" << w->j << " = " << L.to_string(w->alpha)
                       << ", F(alpha) = " << L.to_string(w->image) << (bad ? "  CERTIFICATE FAILED: " + *bad : "")
                       << "\n";
                all_found = all_found && !bad;
            } else {
                e["witness"] = nullptr;
                found = "false";
                all_found = false;
                o.text << m.name << " = " << Fs << ": no witness\n";
            }
        } else {
            o.text << m.name << " = " << Fs << ": not admissible (" << m.membership.reason << ")\n";
        }
        o.rows.push_back({m.name, Fs, m.membership.member ? "true" : "false", found, jtext});
        entries.push_back(std::move(e));
    }
    o.doc["entries"] = entries;
    o.code = any_searched && all_found ? kExitTrue : kExitFalse;
}

inline void report_suites(const std::vector<SuiteReport>& reps, Output& o) {
    json out = json::array();
    o.header = {"suite", "checks", "failures", "first_failure"};
    bool good = true;
    for (const auto& r : reps) {
        out.push_back(suite_json(r));
        o.rows.push_back({r.name, std::to_string(r.checks), std::to_string(r.failures), r.first_failure});
        o.text << r.name << ": " << r.checks << " checks, " << r.failures << " failures"
               << (r.ok() ? "" : " (first: " + r.first_failure + ")")
               << (r.max_error > 0 ? ", max error " + std::to_string(r.max_error) : "") << "\n";
        good = good && r.ok();
    }
    o.doc["suites"] = out;
    o.code = good ? kExitTrue : kExitFalse;
}

inline void cmd_verify_identities(const Common& c, const Args& a, Output& o) {
    if (dry_run(c, {{"divisor-sum", {{"R_max", a.R_max}, {"r_max", a.r_max}}},
                    {"factor-count", {{"q_max", a.fc_q}, {"n_max", a.fc_n}}},
                    {"dual_route", {{"q^n <=", a.limit}}}},
                o))
        return;
    report_suites({divisor_sum_suite(a.R_max, a.r_max), factor_count_suite(a.fc_q, a.fc_n), dual_route_suite(a.limit)}, o);
}

inline void cmd_chars_selftest(const Common& c, const Args&, Output& o) {
    if (dry_run(c, {{"fields", "3^2, 5^2, 7^2, 3^4"}, {"orthogonality", "3^2"}, {"tolerance", 1e-6}}, o)) return;
    report_suites({char_indicator_suite(), orthogonality_suite()}, o);
}

// ---------------------------------------------------------------------------

inline void write_output(const Common& c, const std::string& cmdline, const std::string& sub, Output& o, double secs,
                         std::ostream& out) {
    if (c.json) {
        json d{{"schema", kSchema}, {"version", kVersion}, {"command", sub}, {"argv", cmdline}, {"seed", c.seed}};
        d.update(o.doc);
        d["exit_code"] = o.code;
        out << d.dump(2) << "\n";
    } else if (c.csv) {
        auto line = [&](const std::vector<std::string>& v) {
            for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << csv_field(v[i]);
            out << "\n";
        };
        if (!o.header.empty()) {
            line(o.header);
            for (const auto& r : o.rows) line(r);
        }
    } else {
        out << o.text.str();
        std::ostringstream t;
        t << std::fixed << std::setprecision(3) << secs;
        out << "elapsed: " << t.str() << " s\n";
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"rkpair: pairs of r-primitive, k-normal elements in finite fields"};
    app.name("rkpair");
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common c;
    Args a;
    std::function<void(const Common&, const Args&, Output&)> run;
    std::string sub_name;

    auto add = [&](const char* name, const char* desc, auto fn) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
        s->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
        s->add_flag("--json", c.json, "Emit one JSON document");
        s->add_flag("--csv", c.csv, "Emit CSV where the output is tabular");
        s->add_flag("--dry-run", c.dry_run, "Print the resolved plan and stop");
        s->add_option("--budget", c.budget, "Pollard rho iterations per composite")->capture_default_str();
        s->add_option("--cap", c.cap, "Largest field size enumerated")->capture_default_str();
        s->callback([&, name, fn] {
            sub_name = name;
            run = fn;
        });
        return s;
    };
    auto qn = [&](CLI::App* s) {
        s->add_option("q", a.q, "Prime power q")->required();
        s->add_option("n", a.n, "Extension degree n")->required()->check(CLI::PositiveNumber);
    };

    qn(add("factor-xn1", "Factor x^n - 1 over F_q", cmd_factor_xn1));
    qn(add("field-info", "Build F_{q^n} and print its parameters", cmd_field_info));
    {
        auto* s = add("check-theorem", "Sufficient condition with the weight constant A_t", cmd_check_theorem);
        qn(s);
        s->add_option("--t", a.t, "Exponent t > 4")->capture_default_str();
    }
    {
        auto* s = add("special-sieve", "Sieve with small primes kept and large primes summed", cmd_special_sieve);
        qn(s);
        s->add_option("--p0", a.p0, "Prime threshold (default: 23, 53 or 71 by size of q^n)");
        s->add_flag("--inclusive", a.inclusive, "Count a cofactor equal to the walk prime");
    }
    {
        auto* s = add("total-sieve", "Exact sieve over all kept/sieved splits", cmd_total_sieve);
        qn(s);
        s->add_option("--constant", a.constant, "Leading constant")->check(CLI::IsMember({36, 6}))->capture_default_str();
    }
    {
        auto* s = add("bound-sieve", "Bound refinement at n = 7, 8, 9", cmd_bound_sieve);
        s->add_option("qmin", a.qmin_text, "Lower bound on q")->required();
        s->add_option("qmax", a.qmax_text, "Current upper bound on q (e.g. 4413000000 or 6.515e14)")->required();
        s->add_option("n", a.n, "n in {7, 8, 9}")->required();
        s->add_option("p0", a.p0_list, "p0, or a comma list to cascade on the printed bounds")->required();
        s->add_option("--variant", a.variant, "standard, or nine_divides, strict_m, nine_not_divides joined by '+'")
            ->capture_default_str();
    }
    {
        auto* s = add("global-bound", "The degree-free chain of upper bounds on q^n", cmd_global_bound);
        s->add_option("--start", a.start, "q0 = 10009 or 100003")->capture_default_str();
        s->add_flag("--chained", a.chained, "Feed each output into the next step");
    }
    add("table1", "Starting bounds for n = 8..11", cmd_table1);
    add("table2", "Fixed-n chain rows for n = 8..11", cmd_table2);
    {
        auto* s = add("casen7", "The n = 7 chain: census, two stages and the cascade", cmd_casen7);
        s->add_option("--t", a.t, "Exponent of the second stage")->default_val(7.12);
        s->add_option("--cascade", a.cascade, "Cascade p0 list")->capture_default_str();
        s->add_option("--q-min", a.qmin7, "Lower bound on q in the cascade")->capture_default_str();
    }
    {
        auto* s = add("sweep", "Staged criteria over a grid of (q, n)", cmd_sweep);
        s->add_option("--n-lo", a.n_lo)->capture_default_str();
        s->add_option("--n-hi", a.n_hi)->capture_default_str();
        s->add_option("--q-lo", a.q_lo)->capture_default_str();
        s->add_option("--q-hi", a.q_hi, "Fixed q bound (default: M_n)");
        s->add_flag("--closed", a.closed, "Admit q = M_n when M_n is an integer");
        s->add_option("--stages", a.stages, "theorem:T, special:auto|P, total")->capture_default_str();
        s->add_option("--constant", a.constant, "TotalSieve constant")->check(CLI::IsMember({36, 6}))->capture_default_str();
        s->add_flag("--inclusive", a.inclusive, "Inclusive sum-of-factors rule in SpecialSieve");
        s->add_option("--checkpoint", a.checkpoint, "JSON-lines file; appended to and resumed from");
        s->add_flag("--all", a.all, "List every cell, not only survivors");
    }
    {
        auto* s = add("search", "Exhaustive witness search", cmd_search);
        qn(s);
        s->add_option("--params", a.params, "r1,k1,r2,k2")->capture_default_str();
        s->add_option("--F", a.F, "Rational function (default: the test family)");
        s->add_flag("--family", "Use the test family (default when --F is absent)");
        s->add_flag("--waive-upsilon", a.waive_upsilon, "Search even when F is not admissible");
        s->add_flag("--fq", a.fq, "Decide admissibility over F_q instead of F_{q^n}");
        s->add_option("--f1", a.f1, "Fixed divisor: Ord(alpha) = (x^n - 1)/f1");
        s->add_option("--f2", a.f2, "Fixed divisor: Ord(F(alpha)) = (x^n - 1)/f2");
        s->add_option("--block", a.block, "Exponents per work unit")->capture_default_str();
    }
    {
        auto* s = add("verify-identities", "Exact identity checks over small parameters", cmd_verify_identities);
        s->add_option("--limit", a.limit, "Fields with q^n up to this")->capture_default_str();
        s->add_option("--R-max", a.R_max)->capture_default_str();
        s->add_option("--r-max", a.r_max)->capture_default_str();
        s->add_option("--factor-q-max", a.fc_q)->capture_default_str();
        s->add_option("--factor-n-max", a.fc_n)->capture_default_str();
    }
    add("chars-selftest", "Character-sum indicators against direct tests", cmd_chars_selftest);

    std::vector<const char*> argv{"rkpair"};
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : kExitUsage;
    }
    if (c.json && c.csv) {
        err << "rkpair: --json and --csv are exclusive\n";
        return kExitUsage;
    }

    std::string cmdline;
    for (const auto& s : args) cmdline += (cmdline.empty() ? "" : " ") + s;
    Output o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        run(c, a, o);
    } catch (const UsageError& e) {
        err << "rkpair " << sub_name << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "rkpair " << sub_name << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        err << "rkpair " << sub_name << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "rkpair " << sub_name << ": " << e.what() << "\n";
        return kExitIndeterminate;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_output(c, cmdline, sub_name, o, secs, out);
    return o.code;
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace rkpair::cli

#endif  // RKPAIR_TOOLS_CLI_HPP
