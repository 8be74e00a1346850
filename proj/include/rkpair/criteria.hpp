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

#ifndef RKPAIR_CRITERIA_HPP
#define RKPAIR_CRITERIA_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rkpair/fqpoly.hpp"
#include "rkpair/intnt.hpp"
#include "rkpair/primes.hpp"

namespace rkpair {

enum class Verdict { Proven, NotProven, Indeterminate };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Proven:
            return "Proven";
        case Verdict::NotProven:
            return "NotProven";
        case Verdict::Indeterminate:
            return "Indeterminate";
    }
    return "?";
}

/// Kept/sieved split of the total sieve: the first i1 primes of L1, i2 of L2,
/// j1 factors of G1 and j2 of G2 are kept; the rest are sieved.
struct TotalSplit {
    std::size_t i1 = 0, i2 = 0, j1 = 0, j2 = 0;
    BigInt ell1 = 1, ell2 = 1;                 // products of the kept primes
    std::vector<std::uint64_t> g1_kept_degrees;  // degrees of the kept factors
    std::vector<std::uint64_t> g2_kept_degrees;
};

struct SieveOutcome {
    Verdict verdict = Verdict::NotProven;
    std::string stage;
    bool has_delta = false;  // delta > 0 and Delta were computed
    Rational delta = 0;
    Rational Delta = 0;
    std::optional<TotalSplit> split;
    std::string note;
};

/// q^(e/2) >= X for an integer e and a positive rational X, by squaring.
inline bool half_power_ge(const BigInt& q, long e, const Rational& X) {
    if (sgn(X) <= 0) return true;
    const BigInt num = X.get_num() * X.get_num();
    const BigInt den = X.get_den() * X.get_den();
    if (e >= 0) return ipow(q, static_cast<unsigned long>(e)) * den >= num;
    return den >= num * ipow(q, static_cast<unsigned long>(-e));
}

inline int m_constant(int m1, int m2) {
    if (m1 + m2 < 1) throw std::invalid_argument("m_constant: need m1 + m2 >= 1");
    return std::max(2 * (m1 + m2), m1 + 3 * m2 + 1);
}

/// q^(n/2 - k1 - k2) >= M r1 r2 W1 W2 Wf1 Wf2, decided exactly.
inline bool theorem_main_check(const BigInt& q, long n, const BigInt& r1, const BigInt& r2, long k1, long k2, int m1,
                               int m2, const BigInt& W1, const BigInt& W2, const BigInt& Wf1, const BigInt& Wf2) {
    const Rational rhs(BigInt(m_constant(m1, m2)) * r1 * r2 * W1 * W2 * Wf1 * Wf2);
    return half_power_ge(q, n - 2 * k1 - 2 * k2, rhs);
}

/// (w1, w2) with W((x^n - 1)/f_i) = 2^(w_i) for the canonical choice of f_1, f_2.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> number_pol_factors(std::uint64_t q, std::uint64_t n) {
    const std::uint64_t w = xn1_distinct_factors(q, n);
    if (std::gcd(q, n) > 1) return std::pair{w, w};
    if (std::gcd(q - 1, n) > 1) return std::pair{w - 1, w - 2};
    if (std::gcd(q + 1, n) > 1) return std::pair{w - 1, w - 1};
    return std::nullopt;
}

enum class TriState { True, False, Borderline };

inline const char* to_string(TriState s) {
    switch (s) {
        case TriState::True:
            return "true";
        case TriState::False:
            return "false";
        case TriState::Borderline:
            return "borderline";
    }
    return "?";
}

struct TheoremTest {
    TriState result = TriState::False;
    double margin = 0.0;  // log10(lhs) - log10(rhs)
    bool has_pair = false;
};

constexpr double kLogMargin = 1e-6;

/// q^(n/2-3) >= 6^(2-1/t) A_t^2 q^(2n/t) 2^(w1+w2) in log10 space, with A_t supplied.
inline TheoremTest test_theorem(std::uint64_t q, std::uint64_t n, double t, const LogMagnitude& A) {
    if (!(t > 4)) throw std::invalid_argument("test_theorem: t must exceed 4");
    TheoremTest out;
    const auto pair = number_pol_factors(q, n);
    if (!pair) return out;
    out.has_pair = true;
    const double lq = std::log10(static_cast<double>(q));
    const double nn = static_cast<double>(n);
    const double lhs = (nn / 2 - 3) * lq;
    const double rhs = (2 - 1 / t) * std::log10(6.0) + 2 * A.log10 + (2 * nn / t) * lq +
                       static_cast<double>(pair->first + pair->second) * std::log10(2.0);
    out.margin = lhs - rhs;
    out.result = out.margin > kLogMargin ? TriState::True : out.margin < -kLogMargin ? TriState::False : TriState::Borderline;
    return out;
}

inline TheoremTest test_theorem(std::uint64_t q, std::uint64_t n, double t) {
    return test_theorem(q, n, t, weight_constant(t));
}

struct SumFactorsResult {
    Rational S = 0;
    std::uint64_t u0 = 0;
};

/// Stopping rule of the second loop: Strict charges p while p < T / D, Inclusive while p <= T / D.
/// Strict misses a cofactor equal to the current prime; Inclusive always overestimates.
enum class SumFactorsBound { Strict, Inclusive };

/// Overestimates of the reciprocal sum and count of the primes >= p0 dividing T.
/// The first loop strips prime divisors below 1000; the second charges what is left
/// with consecutive primes, dividing T by each regardless of divisibility.
inline SumFactorsResult sum_factors(BigInt T, std::uint64_t p0, SumFactorsBound bound = SumFactorsBound::Strict) {
    SumFactorsResult r;
    std::uint64_t p = p0, p1 = p;
    while (T >= p && p < 1000) {
        if (mpz_divisible_ui_p(T.get_mpz_t(), p)) {
            mpz_divexact_ui(T.get_mpz_t(), T.get_mpz_t(), p);
            if (p == p1) {
                r.S += Rational(1, p);
                ++r.u0;
            }
            p1 = next_prime_u64(p);
        } else {
            p = next_prime_u64(p);
            p1 = p;
        }
    }
    p = p1;
    // T is now the rational T / D
    BigInt D = 1;
    auto charge = [&] {
        const BigInt pd = big(p) * D;
        return bound == SumFactorsBound::Strict ? pd < T : pd <= T;
    };
    while (charge()) {
        r.S += Rational(1, p);
        ++r.u0;
        D *= big(p);
        p = next_prime_u64(p);
    }
    r.S.canonicalize();
    return r;
}

/// Primes s with v_s(v / r) != 0, for a factored v and a small prime r.
inline std::vector<BigInt> support_of_quotient(const std::vector<std::pair<BigInt, unsigned>>& factors, unsigned long r) {
    std::vector<BigInt> out;
    bool seen = false;
    for (const auto& [p, e] : factors) {
        if (p == r) {
            seen = true;
            if (e == 1) continue;
        } else if (!seen && p > r) {
            out.emplace_back(big(r));
            seen = true;
        }
        out.push_back(p);
    }
    if (!seen) out.emplace_back(big(r));
    return out;
}

inline SieveOutcome special_sieve(std::uint64_t q, std::uint64_t n, std::uint64_t p0,
                                  SumFactorsBound bound = SumFactorsBound::Strict) {
    if (!is_prime_u64(p0)) throw std::invalid_argument("special_sieve: p0 must be prime");
    SieveOutcome out;
    out.stage = "SpecialSieve";
    const auto pair = number_pol_factors(q, n);
    if (!pair) {
        out.note = "no admissible f1, f2";
        return out;
    }
    BigInt T = ipow(big(q), n) - 1;
    std::vector<std::pair<BigInt, unsigned>> ell;
    std::uint64_t p = 2;
    while (p < p0) {
        if (mpz_divisible_ui_p(T.get_mpz_t(), p)) {
            mpz_divexact_ui(T.get_mpz_t(), T.get_mpz_t(), p);
            if (!ell.empty() && ell.back().first == p)
                ++ell.back().second;
            else
                ell.emplace_back(big(p), 1);
        } else {
            p = next_prime_u64(p);
        }
    }
    const auto wl1 = support_of_quotient(ell, 2).size();
    const auto wl2 = support_of_quotient(ell, 3).size();
    const auto sf = sum_factors(T, p0, bound);
    const Rational delta = 1 - 2 * sf.S;
    if (sgn(delta) <= 0) {
        out.delta = delta;
        out.note = "delta <= 0";
        return out;
    }
    Rational Delta = 2 + Rational(BigInt(2 * sf.u0) - 1) / delta;
    Delta.canonicalize();
    out.has_delta = true;
    out.delta = delta;
    out.Delta = Delta;
    BigInt pow2 = 1;
    mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), pair->first + pair->second + wl1 + wl2);
    const Rational rhs = 36 * Delta * Rational(pow2);
    out.verdict = half_power_ge(big(q), static_cast<long>(n) - 6, rhs) ? Verdict::Proven : Verdict::NotProven;
    return out;
}

/// The factors left in play for the two freeness conditions.
struct MonicPair {
    FactorList G1, G2;
};

/// Degrees-only variant, enough for the sieve weights.
struct MonicDegreePair {
    std::vector<std::uint64_t> G1, G2;
};

inline std::optional<MonicDegreePair> monic_factor_degrees(std::uint64_t q, std::uint64_t n) {
    const auto all = xn1_factor_degrees(q, n).degree_list();
    auto drop = [&](std::initializer_list<std::size_t> idx) {
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < all.size(); ++i)
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(all[i]);
        return out;
    };
    if (std::gcd(q, n) > 1) return MonicDegreePair{all, all};
    if (std::gcd(q - 1, n) > 1) return MonicDegreePair{drop({0, 1}), drop({0})};
    if (std::gcd(q + 1, n) > 1) return MonicDegreePair{drop({1}), drop({0})};
    return std::nullopt;
}

/// g1, g2 are the first two factors of x^n - 1 in (degree, coefficient) order.
inline std::optional<MonicPair> monic_factors(const BaseField& F, std::uint64_t n, std::uint64_t seed = 0) {
    const std::uint64_t q = F.q();
    const FactorList all = factor_xn_minus_1(F, n, seed);
    auto drop = [&](std::initializer_list<std::size_t> idx) {
        FactorList out;
        for (std::size_t i = 0; i < all.size(); ++i)
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(all[i]);
        return out;
    };
    if (std::gcd(q, n) > 1) return MonicPair{all, all};
    if (std::gcd(q - 1, n) > 1) return MonicPair{drop({0, 1}), drop({0})};
    if (std::gcd(q + 1, n) > 1) return MonicPair{drop({1}), drop({0})};
    return std::nullopt;
}

struct TotalSieveOptions {
    int constant = 36;  // 6 reproduces the literal pseudocode
    FactorOptions factor{};
};

inline SieveOutcome total_sieve(std::uint64_t q, std::uint64_t n, const TotalSieveOptions& opt = {}) {
    SieveOutcome out;
    out.stage = "TotalSieve";
    const auto G = monic_factor_degrees(q, n);
    if (!G) {
        out.note = "no admissible f1, f2";
        return out;
    }
    const BigInt Q = big(q);
    const Factorization fac = factor_qn_minus_1(Q, n, opt.factor);
    if (!fac.complete()) {
        out.verdict = Verdict::Indeterminate;
        out.note = "factoring budget exhausted";
        return out;
    }
    const auto L1 = support_of_quotient(fac.factors, 2);
    const auto L2 = support_of_quotient(fac.factors, 3);

    // suffix sums of the sieved weights
    auto suffix_primes = [](const std::vector<BigInt>& L) {
        std::vector<Rational> s(L.size() + 1, Rational(0));
        for (std::size_t i = L.size(); i-- > 0;) {
            s[i] = s[i + 1] + Rational(BigInt(1), L[i]);
            s[i].canonicalize();
        }
        return s;
    };
    auto suffix_polys = [&](const std::vector<std::uint64_t>& D) {
        std::vector<Rational> s(D.size() + 1, Rational(0));
        for (std::size_t i = D.size(); i-- > 0;) {
            s[i] = s[i + 1] + Rational(BigInt(1), ipow(Q, D[i]));
            s[i].canonicalize();
        }
        return s;
    };
    const auto sC1 = suffix_primes(L1), sC2 = suffix_primes(L2);
    const auto sK1 = suffix_polys(G->G1), sK2 = suffix_polys(G->G2);
    const std::size_t a1 = L1.size(), a2 = L2.size(), b1 = G->G1.size(), b2 = G->G2.size();
    const Rational c(opt.constant);
    const long e = static_cast<long>(n) - 6;

    for (std::size_t i1 = 0; i1 <= a1; ++i1)
        for (std::size_t i2 = 0; i2 <= a2; ++i2)
            for (std::size_t j1 = 0; j1 <= b1; ++j1)
                for (std::size_t j2 = 0; j2 <= b2; ++j2) {
                    Rational delta = 1 - (sC1[i1] + sC2[i2] + sK1[j1] + sK2[j2]);
                    if (sgn(delta) <= 0) continue;
                    const long sieved = static_cast<long>((a1 - i1) + (a2 - i2) + (b1 - j1) + (b2 - j2));
                    Rational Delta = 2 + Rational(sieved - 1) / delta;
                    BigInt pow2 = 1;
                    mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), i1 + i2 + j1 + j2);
                    if (!half_power_ge(Q, e, c * Delta * Rational(pow2))) continue;
                    delta.canonicalize();
                    Delta.canonicalize();
                    TotalSplit s{i1, i2, j1, j2, 1, 1, {}, {}};
                    for (std::size_t k = 0; k < i1; ++k) s.ell1 *= L1[k];
                    for (std::size_t k = 0; k < i2; ++k) s.ell2 *= L2[k];
                    s.g1_kept_degrees.assign(G->G1.begin(), G->G1.begin() + static_cast<long>(j1));
                    s.g2_kept_degrees.assign(G->G2.begin(), G->G2.begin() + static_cast<long>(j2));
                    out.verdict = Verdict::Proven;
                    out.has_delta = true;
                    out.delta = delta;
                    out.Delta = Delta;
                    out.split = std::move(s);
                    return out;
                }
    out.note = "no split satisfies the inequality";
    return out;
}

/// 6 | q^n - 1 and gcd(q^3 - q, n) != 1.
inline bool condition_qn(std::uint64_t q, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("condition_qn: n must be positive");
    if (detail::powmod_u64(q % 6, n, 6) != 1) return false;
    const auto qq = static_cast<unsigned __int128>(q % n);
    const auto c = static_cast<std::uint64_t>((qq * qq % n * qq % n + n - qq) % n);
    return std::gcd(c, n) != 1;
}

/// The five (a, b) pairs; b is stored as 60 b = (coefficients of q^0..q^4).
struct FactorCountPair {
    unsigned a;
    std::vector<long> b60;
};

inline const std::vector<FactorCountPair>& factor_count_pairs() {
    static const std::vector<FactorCountPair> pairs = {
        {1, {0}},
        {2, {-30, 30}},
        {3, {-40, 30, 10}},
        {4, {-45, 25, 15, 5}},
        {5, {-48, 22, 15, 8, 3}},
    };
    return pairs;
}

/// Distinct factor count of x^n - 1 against n/a + b, all five pairs; exact (scaled by 60).
inline bool factor_count_check(std::uint64_t q, std::uint64_t n) {
    const BigInt w60 = big(xn1_distinct_factors(q, n)) * 60;
    for (const auto& [a, b60] : factor_count_pairs()) {
        BigInt bound = big(n) * (60 / a);
        BigInt qp = 1;
        for (long c : b60) {
            bound += qp * c;
            qp *= big(q);
        }
        if (w60 > bound) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Staged sweep

enum class StageKind { TestTheorem, SpecialSieve, TotalSieve };

struct Stage {
    StageKind kind = StageKind::TestTheorem;
    double t = 8;                                                   // TestTheorem
    std::function<std::uint64_t(std::uint64_t, std::uint64_t)> p0;  // SpecialSieve: (q, n) -> p0
    TotalSieveOptions total{};                                      // TotalSieve
    SumFactorsBound bound = SumFactorsBound::Strict;                // SpecialSieve

    std::string name() const {
        switch (kind) {
            case StageKind::TestTheorem:
                return "TestTheorem";
            case StageKind::SpecialSieve:
                return "SpecialSieve";
            case StageKind::TotalSieve:
                return "TotalSieve";
        }
        return "?";
    }

    static Stage theorem(double t) { return Stage{StageKind::TestTheorem, t, {}, {}}; }
    static Stage special(std::uint64_t p0, SumFactorsBound b = SumFactorsBound::Strict) {
        return Stage{StageKind::SpecialSieve, 8, [p0](std::uint64_t, std::uint64_t) { return p0; }, {}, b};
    }
    static Stage special(std::function<std::uint64_t(std::uint64_t, std::uint64_t)> rule,
                         SumFactorsBound b = SumFactorsBound::Strict) {
        return Stage{StageKind::SpecialSieve, 8, std::move(rule), {}, b};
    }
    static Stage total_stage(TotalSieveOptions o = {}) { return Stage{StageKind::TotalSieve, 8, {}, o}; }
};

/// p0 = 71 above 10^100, 53 above 10^30, otherwise 23.
inline std::uint64_t special_p0_by_size(std::uint64_t q, std::uint64_t n) {
    const BigInt v = ipow(big(q), n);
    static const BigInt e100 = ipow(10, 100), e30 = ipow(10, 30);
    return v > e100 ? 71 : v > e30 ? 53 : 23;
}

struct CellResult {
    std::uint64_t q = 0, n = 0;
    std::size_t stage_index = 0;  // deciding stage, or the last one tried
    std::string stage;
    Verdict verdict = Verdict::NotProven;
    double delta = 0, Delta = 0;  // display values; the decisions used exact rationals
    bool has_delta = false;
    double elapsed_ms = 0;
};

struct SweepConfig {
    std::uint64_t n_lo = 12, n_hi = 12;
    std::uint64_t q_lo = 2;
    std::function<std::uint64_t(std::uint64_t)> q_max;  // largest q included for this n
    std::vector<Stage> stages;
    unsigned threads = 1;
    std::function<void(const CellResult&)> on_cell;            // serialized; for checkpoints
    std::map<std::pair<std::uint64_t, std::uint64_t>, CellResult> resume;  // (q, n) -> stored result
};

struct SieveReport {
    std::uint64_t cells = 0;
    std::vector<std::uint64_t> cleared_by_stage;    // Proven at stage k
    std::vector<std::uint64_t> remaining_after;     // not Proven after stage k
    std::vector<CellResult> survivors;              // not Proven after all stages
    std::vector<CellResult> indeterminate;
    std::vector<CellResult> results;                // every cell, (n, q) ascending
};

inline CellResult run_stages(std::uint64_t q, std::uint64_t n, const std::vector<Stage>& stages,
                             const std::vector<LogMagnitude>& At) {
    CellResult c;
    c.q = q;
    c.n = n;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < stages.size(); ++k) {
        const Stage& s = stages[k];
        c.stage_index = k;
        c.stage = s.name();
        c.has_delta = false;
        c.delta = c.Delta = 0;
        if (s.kind == StageKind::TestTheorem) {
            const auto r = test_theorem(q, n, s.t, At[k]);
            c.verdict = r.result == TriState::True ? Verdict::Proven
                        : r.result == TriState::Borderline ? Verdict::Indeterminate
                                                           : Verdict::NotProven;
        } else {
            const SieveOutcome o = s.kind == StageKind::SpecialSieve ? special_sieve(q, n, s.p0(q, n), s.bound)
                                                                     : total_sieve(q, n, s.total);
            c.verdict = o.verdict;
            c.has_delta = o.has_delta;
            c.delta = o.delta.get_d();
            c.Delta = o.has_delta ? o.Delta.get_d() : 0.0;
        }
        if (c.verdict == Verdict::Proven) break;
    }
    c.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

/// Cells (q, n) with condition_qn, n ascending then q ascending.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> sweep_cells(const SweepConfig& cfg) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
    for (std::uint64_t n = cfg.n_lo; n <= cfg.n_hi; ++n) {
        const std::uint64_t qmax = cfg.q_max(n);
        if (qmax < cfg.q_lo) continue;
        for_each_prime_power_below(qmax + 1, [&](std::uint64_t q) {
            if (q >= cfg.q_lo && condition_qn(q, n)) cells.emplace_back(q, n);
        });
    }
    return cells;
}

inline SieveReport sweep(const SweepConfig& cfg) {
    if (!cfg.q_max) throw std::invalid_argument("sweep: missing q bound");
    SieveReport rep;
    const auto cells = sweep_cells(cfg);
    rep.cells = cells.size();
    std::vector<LogMagnitude> At(cfg.stages.size());
    for (std::size_t k = 0; k < cfg.stages.size(); ++k)
        if (cfg.stages[k].kind == StageKind::TestTheorem) At[k] = weight_constant(cfg.stages[k].t);
    rep.results.resize(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const auto [q, n] = cells[i];
            if (auto it = cfg.resume.find({q, n}); it != cfg.resume.end()) {
                rep.results[i] = it->second;
                continue;
            }
            rep.results[i] = run_stages(q, n, cfg.stages, At);
            if (cfg.on_cell) {
                std::lock_guard<std::mutex> lock(mu);
                cfg.on_cell(rep.results[i]);
            }
        }
    };
    const unsigned nt = std::max(1u, cfg.threads);
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < nt; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    rep.cleared_by_stage.assign(cfg.stages.size(), 0);
    for (const auto& c : rep.results) {
        if (c.verdict == Verdict::Proven)
            ++rep.cleared_by_stage[c.stage_index];
        else
            rep.survivors.push_back(c);
        if (c.verdict == Verdict::Indeterminate) rep.indeterminate.push_back(c);
    }
    std::uint64_t left = rep.cells;
    for (auto k : rep.cleared_by_stage) rep.remaining_after.push_back(left -= k);
    return rep;
}

}  // namespace rkpair

#endif  // RKPAIR_CRITERIA_HPP
