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

#ifndef RKPAIR_BOUNDSCAN_HPP
#define RKPAIR_BOUNDSCAN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkpair/intnt.hpp"
#include "rkpair/primes.hpp"

namespace rkpair {

struct BoundChainStep {
    std::uint64_t p0 = 0;
    LogMagnitude input_P;
    LogMagnitude output_P;
    std::size_t max_m = 0;
    std::size_t worst_m = 0;
    bool ok = true;
    std::size_t failed_m = 0;  // m with 1 - 2S <= 0 when !ok
};

namespace detail {

/// Cumulative log10 products and reciprocal sums of consecutive filtered primes >= p0,
/// extended until the product exceeds `limit_log10`.
struct PrimeRun {
    std::vector<double> log_prefix{0.0};  // log_prefix[u] = log10 of the product of the first u
    std::vector<double> inv_prefix{0.0};

    PrimeRun(std::uint64_t p0, double limit_log10, PrimeClass filter = PrimeClass::all()) {
        PrimeStream ps(p0, filter, 1u << 18);
        CompensatedSum lg, inv;
        while (log_prefix.back() <= limit_log10) {
            const auto p = static_cast<double>(ps.next());
            lg += std::log10(p);
            inv += 1.0 / p;
            log_prefix.push_back(lg.value());
            inv_prefix.push_back(inv.value());
        }
    }

    /// Largest u with log_prefix[u] <= budget.
    std::size_t max_u(double budget) const {
        auto it = std::upper_bound(log_prefix.begin(), log_prefix.end(), budget);
        return static_cast<std::size_t>(it - log_prefix.begin()) - 1;
    }
};

inline std::vector<double> primorial_prefix(std::size_t m) {
    std::vector<double> out{0.0};
    PrimeStream ps;
    CompensatedSum s;
    for (std::size_t i = 0; i < m; ++i) {
        s += std::log10(static_cast<double>(ps.next()));
        out.push_back(s.value());
    }
    return out;
}

inline std::size_t prime_pi_below(std::uint64_t x) {
    std::size_t c = 0;
    for (std::uint64_t p = 2; p < x; p = next_prime_u64(p)) ++c;
    return c;
}

/// Shared inner maximum: for m in [2, pi(p0 - 1)], u(m) from the product constraint, then
/// log10 of extra(m) * Delta(m) with Delta(m) = 2 + (2u - 1)/(1 - 2S).
template <class Extra>
BoundChainStep sieve_chain_step(std::uint64_t p0, const LogMagnitude& P, Extra extra_log10) {
    BoundChainStep st;
    st.p0 = p0;
    st.input_P = P;
    st.max_m = prime_pi_below(p0);
    if (st.max_m < 2) throw std::invalid_argument("bound iteration: p0 too small");
    const auto prim = primorial_prefix(st.max_m);
    const PrimeRun run(p0, P.log10);
    double worst = -1e300;
    for (std::size_t m = 2; m <= st.max_m; ++m) {
        const std::size_t u = run.max_u(P.log10 - prim[m]);
        const double d = 1 - 2 * run.inv_prefix[u];
        if (!(d > 0)) {
            st.ok = false;
            st.failed_m = m;
            return st;
        }
        const double Delta = 2 + (2 * static_cast<double>(u) - 1) / d;
        const double v = extra_log10(m) + std::log10(Delta);
        if (v > worst) {
            worst = v;
            st.worst_m = m;
        }
    }
    st.output_P = LogMagnitude::from_log10(worst);
    return st;
}

}  // namespace detail

/// One step of the global chain: the least X with X^(1/4 - log_q0 4) >= max_m 36 2^(2m-3) Delta(m).
inline BoundChainStep global_bound_iteration(std::uint64_t q0, std::uint64_t p0, const LogMagnitude& P) {
    const double expo = 0.25 - std::log(4.0) / std::log(static_cast<double>(q0));
    if (!(expo > 0)) throw std::invalid_argument("global_bound_iteration: need 1/4 - log_q0 4 > 0");
    const double l2 = std::log10(2.0), l36 = std::log10(36.0);
    auto st = detail::sieve_chain_step(p0, P, [&](std::size_t m) { return l36 + (2.0 * m - 3) * l2; });
    if (st.ok) st.output_P = st.output_P.root(expo);
    return st;
}

/// One step at fixed n: the least X with X^((n/2-3)/n) >= max_m 36 2^(2m) 2^(2n-3) Delta(m).
inline BoundChainStep fixed_n_bound_iteration(unsigned n, const LogMagnitude& P, std::uint64_t p0) {
    if (n <= 6) throw std::invalid_argument("fixed_n_bound_iteration: need n > 6");
    const double l2 = std::log10(2.0), l36 = std::log10(36.0);
    auto st = detail::sieve_chain_step(p0, P, [&](std::size_t m) { return l36 + (2.0 * m + 2.0 * n - 3) * l2; });
    if (st.ok) st.output_P = st.output_P.pow(n / (n / 2.0 - 3));
    return st;
}

struct ChainInput {
    std::uint64_t p0;
    LogMagnitude P;
};

/// Applies the steps with their stated inputs (row-wise), or feeds each output into the
/// next step when `chained` is set.
template <class Step>
std::vector<BoundChainStep> run_chain(const std::vector<ChainInput>& rows, bool chained, Step step) {
    std::vector<BoundChainStep> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const LogMagnitude P = (chained && i > 0) ? out.back().output_P : rows[i].P;
        out.push_back(step(rows[i].p0, P));
        if (!out.back().ok) break;
    }
    return out;
}

/// Reference chains of the global bound.
inline std::vector<ChainInput> global_chain_10009() {
    return {{89, LogMagnitude::scientific(6.18, 718)},  {41, LogMagnitude::scientific(1.15, 190)},
            {31, LogMagnitude::scientific(8.31, 118)},  {29, LogMagnitude::scientific(3.00, 100)},
            {29, LogMagnitude::scientific(5.31, 94)},   {29, LogMagnitude::scientific(9.01, 92)}};
}
inline std::vector<ChainInput> global_chain_100003() {
    return {{29, LogMagnitude::scientific(1.66, 92)},
            {23, LogMagnitude::scientific(6.42, 70)},
            {23, LogMagnitude::scientific(2.33, 65)},
            {23, LogMagnitude::scientific(4.10, 63)}};
}

struct TableRow {
    unsigned n;
    LogMagnitude P;
    std::uint64_t p0;
    LogMagnitude expected;  // reference new bound
};

/// The 21 fixed-n chain rows.
inline std::vector<TableRow> table2_rows() {
    auto S = LogMagnitude::scientific;
    return {
        {8, S(3.980, 86793), 1609, S(8.261, 1320)}, {8, S(8.261, 1320), 131, S(1.634, 230)},
        {8, S(1.634, 230), 47, S(1.294, 139)},      {8, S(1.294, 139), 37, S(7.454, 122)},
        {8, S(7.454, 122), 31, S(5.975, 119)},      {8, S(5.975, 119), 31, S(3.242, 118)},
        {9, S(1.488, 5882), 313, S(5.923, 301)},    {9, S(5.923, 301), 53, S(1.517, 115)},
        {9, S(1.517, 115), 31, S(5.204, 91)},       {9, S(5.204, 91), 29, S(3.679, 87)},
        {9, S(3.679, 87), 29, S(6.347, 86)},        {10, S(3.819, 1641), 149, S(3.891, 160)},
        {10, S(3.891, 160), 41, S(5.414, 85)},      {10, S(5.414, 85), 29, S(1.155, 75)},
        {10, S(1.155, 75), 23, S(2.874, 73)},       {10, S(2.874, 73), 23, S(8.442, 72)},
        {11, S(2.717, 803), 97, S(9.605, 115)},     {11, S(9.605, 115), 31, S(6.726, 72)},
        {11, S(6.726, 72), 23, S(6.673, 66)},       {11, S(6.673, 66), 23, S(5.224, 65)},
        {11, S(5.224, 65), 23, S(2.574, 65)},
    };
}

struct WeilStart {
    bool holds = false;
    LogMagnitude three_Pm;  // 3 times the product of the first m primes
    double rhs_log10 = 0;
    double margin = 0;
};

/// 3 P_m >= (6^(2-1/N) 2^(2n-3))^(2Nn/(Nn-4n-6N)), log space with margin 1e-6.
inline WeilStart weil_start_bound(unsigned n, double N, std::size_t m) {
    const double nn = n;
    const double den = N * nn - 4 * nn - 6 * N;
    if (!(den > 0)) throw std::invalid_argument("weil_start_bound: need Nn - 4n - 6N > 0");
    WeilStart w;
    w.three_Pm = LogMagnitude::from_value(3.0) * primorial_log(m);
    w.rhs_log10 = ((2 - 1 / N) * std::log10(6.0) + (2 * nn - 3) * std::log10(2.0)) * 2 * N * nn / den;
    w.margin = w.three_Pm.log10 - w.rhs_log10;
    w.holds = w.margin > 1e-6;
    return w;
}

struct Table1Row {
    unsigned n;
    double N;
    std::size_t m;
    LogMagnitude expected_three_Pm;
};

inline std::vector<Table1Row> table1_rows() {
    auto S = LogMagnitude::scientific;
    return {{11, 9.161, 291, S(2.717, 803)},
            {10, 10.206, 534, S(3.819, 1641)},
            {9, 12.075, 1618, S(1.488, 5882)},
            {8, 16.008, 18011, S(3.980, 86793)}};
}

struct MnBound {
    LogMagnitude value;
    std::optional<std::uint64_t> exact;  // set when an integer branch attains the minimum
};

/// min{ max(10^5+3, (1.29e63)^(1/n)), max(10009, (1.66e92)^(1/n)), (6.18e718)^(1/n) }.
inline MnBound mn_bound(unsigned n) {
    if (n == 0) throw std::invalid_argument("mn_bound: n must be positive");
    struct Branch {
        LogMagnitude v;
        std::optional<std::uint64_t> exact;
    };
    auto branch = [&](std::uint64_t floor_q, LogMagnitude P) {
        const LogMagnitude r = P.root(n), f = LogMagnitude::from_value(static_cast<double>(floor_q));
        return f >= r ? Branch{f, floor_q} : Branch{r, std::nullopt};
    };
    const Branch cand[] = {branch(100003, LogMagnitude::scientific(1.29, 63)),
                           branch(10009, LogMagnitude::scientific(1.66, 92)),
                           Branch{LogMagnitude::scientific(6.18, 718).root(n), std::nullopt}};
    const Branch* best = &cand[0];
    for (const auto& b : cand)
        if (b.v < best->v) best = &b;
    return {best->v, best->exact};
}

/// Largest prime-power candidate q admitted by M_n: q <= M_n (closed) or q < M_n (open).
inline std::uint64_t mn_qcap(unsigned n, bool closed = true) {
    const MnBound b = mn_bound(n);
    if (b.exact) return closed ? *b.exact : *b.exact - 1;
    const long double v = std::pow(10.0L, static_cast<long double>(b.value.log10));
    const auto f = static_cast<std::uint64_t>(std::floor(v));
    return f;  // a non-integer bound makes both conventions agree
}

// ---------------------------------------------------------------------------
// BoundSieve

struct BoundSieveVariant {
    bool nine_divides = false;      // n = 8: e1 = 2^3 * 3, e2 = 2^4 * 3
    bool strict_m = false;          // m <= m_max - 1
    bool nine_not_divides = false;  // weight 2^(2m - 1)

    std::string str() const {
        std::string s;
        auto add = [&](const char* t) { s += (s.empty() ? "" : "+") + std::string(t); };
        if (nine_divides) add("nine_divides");
        if (strict_m) add("strict_m");
        if (nine_not_divides) add("nine_not_divides");
        return s.empty() ? "standard" : s;
    }

    /// "standard" or names joined by '+' or ','.
    static BoundSieveVariant parse(const std::string& text) {
        BoundSieveVariant v;
        std::size_t i = 0;
        while (i <= text.size()) {
            std::size_t j = text.find_first_of("+,", i);
            if (j == std::string::npos) j = text.size();
            const std::string tok = text.substr(i, j - i);
            if (tok == "nine_divides")
                v.nine_divides = true;
            else if (tok == "strict_m")
                v.strict_m = true;
            else if (tok == "nine_not_divides")
                v.nine_not_divides = true;
            else if (tok != "standard" && !tok.empty())
                throw std::invalid_argument("unknown bound-sieve variant: " + tok);
            i = j + 1;
        }
        return v;
    }
};

struct BoundSieveResult {
    LogMagnitude q_new;
    bool B = true;
    std::size_t worst_m = 0, worst_u1 = 0, worst_u2 = 0;
    std::uint64_t pbar = 0, e1 = 0, e2 = 0;
    std::size_t m_max = 0;
    std::uint64_t triples = 0;  // size of the enumerated set
};

inline BoundSieveResult bound_sieve(double qmin, const LogMagnitude& qmax, unsigned n, std::uint64_t p0,
                                    const BoundSieveVariant& var = {}) {
    if (n != 7 && n != 8 && n != 9) throw std::invalid_argument("bound_sieve: n must be 7, 8 or 9");
    if (!is_prime_u64(p0)) throw std::invalid_argument("bound_sieve: p0 must be prime");
    BoundSieveResult res;
    // n = p^a n0 with p the largest prime of n
    std::uint64_t p = 0, a = 0;
    {
        std::uint64_t m = n;
        for (std::uint64_t s = 2; s <= m; ++s)
            if (m % s == 0) {
                p = s;
                while (m % s == 0) m /= s;
            }
        for (std::uint64_t m2 = n; m2 % p == 0; m2 /= p) ++a;
    }
    res.pbar = p % 2 ? 2 * static_cast<std::uint64_t>(std::pow(p, a)) : static_cast<std::uint64_t>(std::pow(2, a));
    switch (n) {
        case 7:
            res.e1 = 1, res.e2 = 1;
            break;
        case 8:
            res.e1 = 8, res.e2 = 16;
            break;
        default:
            res.e1 = 3, res.e2 = 9;
    }
    if (var.nine_divides) {
        if (n != 8) throw std::invalid_argument("bound_sieve: nine_divides applies to n = 8");
        res.e1 = 24, res.e2 = 48;
    }
    const PrimeClass notform = PrimeClass::not_of_form(res.pbar), form = PrimeClass::of_form(res.pbar);
    std::vector<double> small_log;  // primes below p0 not of the form, cumulative logs
    {
        double acc = 0;
        small_log.push_back(0);
        for (std::uint64_t s = 2; s < p0; s = next_prime_u64(s))
            if (notform.accepts(s)) small_log.push_back(acc += std::log10(static_cast<double>(s)));
    }
    res.m_max = small_log.size() - 1;
    const std::size_t m_hi = var.strict_m ? res.m_max - 1 : res.m_max;
    const double L1 = qmax.log10 * static_cast<double>(n / p);  // log10 of qmax^(n/p), the -1 is below resolution
    const double L2 = qmax.log10 * n;
    const detail::PrimeRun run1(p0, L1, notform), run2(2, L2, form);
    const double le1 = std::log10(static_cast<double>(res.e1)), le2 = std::log10(static_cast<double>(res.e2));
    const double slack = static_cast<double>(2 * n - 3) / qmin;
    double best = -1e300;
    for (std::size_t m = 2; m <= m_hi; ++m) {
        const double P0 = small_log[m];
        for (std::size_t u1 = 0; le1 + P0 + run1.log_prefix[u1] <= L1; ++u1) {
            const double P01 = P0 + run1.log_prefix[u1];
            for (std::size_t u2 = 0; le2 + P01 + run2.log_prefix[u2] <= L2; ++u2) {
                ++res.triples;
                const double d = 1 - 2 * (run1.inv_prefix[u1] + run2.inv_prefix[u2]) - slack;
                if (!(d > 0)) {
                    res.B = false;
                    continue;
                }
                const double Delta = 2 + (2.0 * static_cast<double>(u1 + u2) + 2.0 * n - 4) / d;
                const double w = 2.0 * m - (var.nine_not_divides ? 1 : 0);
                const double v = (std::log10(36 * Delta) + w * std::log10(2.0)) * 2 / (n - 6.0);
                if (v > best) {
                    best = v;
                    res.worst_m = m, res.worst_u1 = u1, res.worst_u2 = u2;
                }
            }
        }
    }
    res.q_new = LogMagnitude::from_log10(best);
    return res;
}

// ---------------------------------------------------------------------------
// The n = 7 chain

struct Casen7Options {
    unsigned threads = 1;
    double t = 7.12;
    std::vector<std::uint64_t> cascade_p0 = {37, 19, 17, 17, 17};
    double cascade_qmin = 1e9;
};

struct Casen7Report {
    // stage 1
    std::uint64_t census_count = 0;
    double census_inverse_sum = 0;
    LogMagnitude B;
    double delta1 = 0, Delta1 = 0;
    LogMagnitude bound1;
    // stage 2
    std::size_t u = 0;
    double S_u = 0, delta2 = 0, Delta2 = 0;
    LogMagnitude A_t;
    LogMagnitude bound2;
    // BoundSieve cascade
    std::vector<BoundSieveResult> cascade;
};

inline Casen7Report casen7_chain(const Casen7Options& opt = {}) {
    Casen7Report r;
    const std::uint64_t lo = 1ull << 20, hi = 1ull << 30;
    const PrimeCensus c = prime_census(lo, hi, opt.threads);
    r.census_count = c.count;
    r.census_inverse_sum = c.inverse_sum;
    // s <= 6 and t <= 5 extra sieving factors, q >= 10^9
    r.delta1 = 1 - 2 * c.inverse_sum - 11 / 1e9;
    r.Delta1 = 2 + (2.0 * static_cast<double>(c.count) + 6 + 5 - 1) / r.delta1;
    r.B = partial_weight_constant(30, static_cast<double>(lo));
    // W(l_i) <= B ((q^7 - 1)/r_i)^(1/30) with r_1 r_2 = 6, so q^(1/30) >= 6^(2 - 1/30) B^2 Delta
    const double c1 = (2 - 1 / 30.0) * std::log10(6.0);
    r.bound1 = (LogMagnitude::from_log10(c1) * LogMagnitude::from_value(r.Delta1) * r.B.pow(2)).pow(30);

    // primes 14j + 1 with product at most (q^7 - 1)/(q - 1) < q^6 (1 + 2/q) for q < bound1
    const detail::PrimeRun run(2, 6 * r.bound1.log10 + 1, PrimeClass::of_form(14));
    r.u = run.max_u(6 * r.bound1.log10);
    r.S_u = run.inv_prefix[r.u];
    r.delta2 = 1 - 2 * r.S_u - 11 / 1e7;
    r.Delta2 = 2 + (2.0 * static_cast<double>(r.u) + 13 - 1) / r.delta2;
    r.A_t = weight_constant(opt.t);
    // q^(1/2 - 2/t) >= 6^(2 - 1/t) A_t^2 Delta
    const double rhs = (2 - 1 / opt.t) * std::log10(6.0) + 2 * r.A_t.log10 + std::log10(r.Delta2);
    r.bound2 = LogMagnitude::from_log10(rhs / (0.5 - 2 / opt.t));

    LogMagnitude q = r.bound2;
    for (std::uint64_t p0 : opt.cascade_p0) {
        r.cascade.push_back(bound_sieve(opt.cascade_qmin, q, 7, p0));
        q = r.cascade.back().q_new;
    }
    return r;
}

}  // namespace rkpair

#endif  // RKPAIR_BOUNDSCAN_HPP
