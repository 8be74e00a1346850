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

#ifndef RKPAIR_INTNT_HPP
#define RKPAIR_INTNT_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rkpair/primes.hpp"

namespace rkpair {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt big(std::uint64_t v) {
    BigInt r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

inline std::uint64_t to_u64(const BigInt& v) {
    if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) throw std::overflow_error("value does not fit in 64 bits");
    std::uint64_t r = 0;
    mpz_export(&r, nullptr, 1, sizeof(r), 0, 0, v.get_mpz_t());
    return r;
}

inline bool fits_u64(const BigInt& v) { return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

inline BigInt ipow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigInt ipow(std::uint64_t base, unsigned long e) { return ipow(big(base), e); }

inline double log10_big(const BigInt& v) {
    if (sgn(v) <= 0) throw std::domain_error("log10 of non-positive integer");
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log10(mant) + static_cast<double>(exp2) * std::log10(2.0);
}

/// Strong probable-prime test (GMP: BPSW plus extra Miller-Rabin rounds).
inline bool is_probable_prime(const BigInt& n) { return mpz_probab_prime_p(n.get_mpz_t(), 64) > 0; }

/// Positive real held as its base-10 logarithm.
struct LogMagnitude {
    double log10 = 0.0;

    static LogMagnitude from_log10(double l) { return LogMagnitude{l}; }
    static LogMagnitude from_value(double v) {
        if (!(v > 0)) throw std::domain_error("LogMagnitude needs a positive value");
        return LogMagnitude{std::log10(v)};
    }
    /// mantissa * 10^exponent
    static LogMagnitude scientific(double mantissa, long exponent) {
        return LogMagnitude{std::log10(mantissa) + static_cast<double>(exponent)};
    }
    static LogMagnitude from_big(const BigInt& v) { return LogMagnitude{log10_big(v)}; }

    long exponent() const { return static_cast<long>(std::floor(log10)); }
    double mantissa() const { return std::pow(10.0, log10 - std::floor(log10)); }
    double value() const { return std::pow(10.0, log10); }  // inf when too large

    LogMagnitude operator*(const LogMagnitude& o) const { return {log10 + o.log10}; }
    LogMagnitude operator/(const LogMagnitude& o) const { return {log10 - o.log10}; }
    LogMagnitude pow(double e) const { return {log10 * e}; }
    LogMagnitude root(double e) const { return {log10 / e}; }

    auto operator<=>(const LogMagnitude& o) const { return log10 <=> o.log10; }
    bool operator==(const LogMagnitude& o) const = default;

    /// "8.2605e1320" style, `digits` significant digits.
    std::string str(int digits = 5) const {
        long e = exponent();
        double m = mantissa();
        const double scale = std::pow(10.0, digits - 1);
        m = std::round(m * scale) / scale;
        if (m >= 10.0) {
            m /= 10.0;
            ++e;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*fe%ld", digits - 1, m, e);
        return buf;
    }
};

/// Relative difference of two magnitudes measured on their log10 values.
inline double log10_relative_error(const LogMagnitude& a, const LogMagnitude& b) {
    const double den = std::max(std::fabs(b.log10), 1e-300);
    return std::fabs(a.log10 - b.log10) / den;
}

struct Factorization {
    BigInt value = 1;
    std::vector<std::pair<BigInt, unsigned>> factors;  // increasing primes
    BigInt cofactor = 1;                                 // unsplit composite part

    bool complete() const { return cofactor == 1; }
    std::size_t omega() const { return factors.size(); }

    std::vector<BigInt> primes() const {
        std::vector<BigInt> out;
        for (const auto& [p, e] : factors) out.push_back(p);
        return out;
    }

    BigInt reconstruct() const {
        BigInt r = cofactor;
        for (const auto& [p, e] : factors) r *= ipow(p, e);
        return r;
    }
};

struct FactorOptions {
    std::uint64_t rho_budget = 10'000'000;  // total Pollard rho iterations per composite
    std::uint32_t trial_limit = 1'000'000;
    unsigned ecm_curves = 600;               // elliptic curves tried per composite beyond 64 bits
};

namespace detail {

inline const std::vector<std::uint32_t>& trial_primes(std::uint32_t limit) {
    static const std::vector<std::uint32_t> table = primes_up_to(1'000'000);
    (void)limit;
    return table;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// Brent's rho on 64-bit values; 0 if nothing found within `budget` steps.
inline std::uint64_t rho_u64(std::uint64_t n, std::uint64_t c, std::uint64_t& budget) {
    if ((n & 1) == 0) return 2;
    auto f = [&](std::uint64_t x) { return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * x + c) % n); };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    const std::uint64_t m = 128;
    while (g == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) y = f(y);
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            const std::uint64_t lim = std::min(m, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                y = f(y);
                q = mulmod_u64(q, x > y ? x - y : y - x, n);
            }
            g = gcd_u64(q, n);
            k += lim;
            if (budget <= lim) return 0;
            budget -= lim;
        }
        r <<= 1;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd_u64(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

inline BigInt rho_big(const BigInt& n, unsigned long c, std::uint64_t& budget) {
    BigInt y = 2, x = 2, g = 1, q = 1, ys = 2, t;
    std::uint64_t r = 1;
    const std::uint64_t m = 128;
    auto step = [&](BigInt& v) {
        v = v * v + c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) step(y);
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            const std::uint64_t lim = std::min(m, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                step(y);
                t = x - y;
                q *= t;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += lim;
            if (budget <= lim) return 0;
            budget -= lim;
        }
        r <<= 1;
    }
    if (g == n) {
        do {
            step(ys);
            t = x - ys;
            mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g == n ? BigInt(0) : g;
}

// Pollard p-1, stage one only.
inline BigInt pminus1(const BigInt& n, std::uint32_t bound) {
    BigInt a = 2, g;
    for (std::uint32_t p : trial_primes(bound)) {
        if (p > bound) break;
        std::uint64_t pk = p;
        while (pk * p <= bound) pk *= p;
        mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), pk, n.get_mpz_t());
    }
    BigInt am1 = a - 1;
    mpz_gcd(g.get_mpz_t(), am1.get_mpz_t(), n.get_mpz_t());
    if (g == 1 || g == n) return 0;
    return g;
}

// Montgomery-curve ECM with a baby-step giant-step second stage.
class Ecm {
   public:
    explicit Ecm(const BigInt& n) : n_(n) {}

    /// One curve with Suyama parameter sigma; a nontrivial factor or 0.
    BigInt curve(const BigInt& sigma, std::uint32_t B1, std::uint64_t B2) {
        BigInt u = sigma * sigma - 5, v = 4 * sigma;
        reduce(u);
        reduce(v);
        BigInt x = u * u * u, z = v * v * v;
        reduce(x);
        reduce(z);
        BigInt num = v - u;
        num = num * num * num * (3 * u + v);
        BigInt den = 16 * x * v;
        reduce(num);
        reduce(den);
        BigInt g;
        mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), n_.get_mpz_t());
        if (g != 1) return g == n_ ? BigInt(0) : g;
        mpz_invert(den.get_mpz_t(), den.get_mpz_t(), n_.get_mpz_t());
        a24_ = num * den;
        reduce(a24_);

        Pt P{x, z};
        for (std::uint32_t p : trial_primes(B1)) {
            if (p > B1) break;
            std::uint64_t pk = p;
            while (pk * p <= B1) pk *= p;
            P = ladder(P, pk);
        }
        if (auto f = check(P.z)) return f;
        return stage2(P, B1, B2);
    }

   private:
    struct Pt {
        BigInt x, z;
    };

    void reduce(BigInt& v) const { mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n_.get_mpz_t()); }

    BigInt check(const BigInt& z) const {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), z.get_mpz_t(), n_.get_mpz_t());
        return (g == 1 || g == n_) ? BigInt(0) : g;
    }

    Pt dbl(const Pt& P) {
        BigInt s = P.x + P.z, d = P.x - P.z;
        s *= s;
        d *= d;
        reduce(s);
        reduce(d);
        BigInt t = s - d;  // 4xz
        Pt R{s * d, 0};
        reduce(R.x);
        BigInt w = d + a24_ * t;
        reduce(w);
        R.z = t * w;
        reduce(R.z);
        return R;
    }

    // P + Q given D = P - Q
    Pt add(const Pt& P, const Pt& Q, const Pt& D) {
        BigInt a = (P.x - P.z) * (Q.x + Q.z), b = (P.x + P.z) * (Q.x - Q.z);
        reduce(a);
        reduce(b);
        BigInt s = a + b, t = a - b;
        s *= s;
        t *= t;
        reduce(s);
        reduce(t);
        Pt R{D.z * s, D.x * t};
        reduce(R.x);
        reduce(R.z);
        return R;
    }

    Pt ladder(const Pt& P, std::uint64_t k) {
        if (k == 1) return P;
        Pt R0 = P, R1 = dbl(P);
        for (int i = 62 - __builtin_clzll(k); i >= 0; --i) {
            if ((k >> i) & 1) {
                R0 = add(R1, R0, P);
                R1 = dbl(R1);
            } else {
                R1 = add(R1, R0, P);
                R0 = dbl(R0);
            }
        }
        return R0;
    }

    BigInt stage2(const Pt& Q, std::uint32_t B1, std::uint64_t B2) {
        constexpr std::uint64_t D = 2310;
        // baby steps [j]Q for odd j < D/2
        std::vector<Pt> baby(D / 2);
        const Pt Q2 = dbl(Q);
        baby[1] = Q;
        baby[3] = add(Q2, Q, Q);
        for (std::uint64_t j = 5; j < D / 2; j += 2) baby[j] = add(baby[j - 2], Q2, baby[j - 4]);
        std::vector<std::uint64_t> js;
        for (std::uint64_t j = 1; j < D / 2; j += 2)
            if (std::gcd(j, D) == 1) js.push_back(j);
        const Pt GD = ladder(Q, D);
        std::uint64_t m = std::max<std::uint64_t>(1, B1 / D);
        Pt prev = m == 1 ? Q : ladder(Q, (m - 1) * D);  // not read while m = 1
        Pt cur = ladder(Q, m * D);
        BigInt acc = 1, t;
        std::size_t steps = 0;
        for (; m * D <= B2 + D; ++m) {
            for (std::uint64_t j : js) {
                const std::uint64_t lo = m * D - j, hi = m * D + j;
                const bool use = (lo > B1 && lo <= B2 && is_prime_u64(lo)) || (hi > B1 && hi <= B2 && is_prime_u64(hi));
                if (!use) continue;
                t = cur.x * baby[j].z - baby[j].x * cur.z;
                acc *= t;
                reduce(acc);
            }
            if (++steps % 64 == 0)
                if (auto f = check(acc)) return f;
            Pt nxt = m == 1 ? dbl(GD) : add(cur, GD, prev);
            prev = cur;
            cur = nxt;
        }
        return check(acc);
    }

    BigInt n_;
    BigInt a24_;
};

/// Runs ECM with growing bounds until a factor appears or `curves` are spent.
inline BigInt ecm_factor(const BigInt& n, unsigned curves, std::uint64_t seed = 0) {
    struct Level {
        std::uint32_t B1;
        unsigned count;
    };
    static constexpr Level levels[] = {{2000, 25}, {11000, 90}, {50000, 300}, {250000, 700}, {1000000, 1800}};
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    Ecm e(n);
    unsigned used = 0;
    for (const auto& lv : levels) {
        for (unsigned c = 0; c < lv.count; ++c) {
            if (used++ >= curves) return 0;
            const BigInt sigma = big(6 + rng() % 0xFFFFFFFFull);
            const BigInt f = e.curve(sigma, lv.B1, 100ull * lv.B1);
            if (f != 0) return f;
        }
    }
    return 0;
}

// Splits n (no prime factor below the trial limit) into primes where possible.
inline void split_composite(const BigInt& n, std::uint64_t& budget, std::map<BigInt, unsigned>& primes,
                            BigInt& cofactor, unsigned ecm_curves = 600) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++primes[n];
        return;
    }
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = mpz_sizeinbase(n.get_mpz_t(), 2); k >= 2; --k) {
            BigInt root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) {
                std::map<BigInt, unsigned> sub;
                BigInt subco = 1;
                split_composite(root, budget, sub, subco, ecm_curves);
                for (auto& [p, e] : sub) primes[p] += e * static_cast<unsigned>(k);
                cofactor *= ipow(subco, k);
                return;
            }
        }
    }
    BigInt d = 0;
    if (fits_u64(n)) {
        const std::uint64_t v = to_u64(n);
        for (std::uint64_t c = 1; c < 64 && d == 0 && budget > 0; ++c) {
            const std::uint64_t f = rho_u64(v, c, budget);
            if (f) d = big(f);
        }
    } else {
        d = pminus1(n, 100'000);
        // a short rho pass catches small factors; ECM handles the rest
        std::uint64_t quick = std::min<std::uint64_t>(budget, 200'000);
        budget -= quick;
        for (unsigned long c = 1; c < 4 && d == 0 && quick > 0; ++c) d = rho_big(n, c, quick);
        if (d == 0) d = ecm_factor(n, ecm_curves);
        for (unsigned long c = 4; c < 64 && d == 0 && budget > 0; ++c) d = rho_big(n, c, budget);
    }
    if (d == 0) {
        cofactor *= n;
        return;
    }
    split_composite(d, budget, primes, cofactor, ecm_curves);
    split_composite(BigInt(n / d), budget, primes, cofactor, ecm_curves);
}

inline void factor_into(BigInt n, const FactorOptions& opt, std::map<BigInt, unsigned>& primes, BigInt& cofactor) {
    for (std::uint32_t p : trial_primes(opt.trial_limit)) {
        if (p > opt.trial_limit) break;
        if (BigInt(p) * p > n) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            unsigned e = 0;
            do {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(n.get_mpz_t(), p));
            primes[BigInt(p)] += e;
        }
    }
    std::uint64_t budget = opt.rho_budget;
    split_composite(n, budget, primes, cofactor, opt.ecm_curves);
}

inline Factorization assemble(const BigInt& value, const std::map<BigInt, unsigned>& primes, const BigInt& cofactor) {
    Factorization f;
    f.value = value;
    f.cofactor = cofactor;
    for (const auto& [p, e] : primes) f.factors.emplace_back(p, e);
    return f;
}

}  // namespace detail

/// Trial division, probable-prime testing, Pollard p-1, rho and ECM within the budgets.
inline Factorization factor_integer(const BigInt& n, const FactorOptions& opt = {}) {
    if (n < 1) throw std::domain_error("factor_integer: n must be positive");
    std::map<BigInt, unsigned> primes;
    BigInt cofactor = 1;
    detail::factor_into(n, opt, primes, cofactor);
    return detail::assemble(n, primes, cofactor);
}

inline Factorization factor_integer(std::uint64_t n, const FactorOptions& opt = {}) { return factor_integer(big(n), opt); }

inline std::vector<std::uint64_t> divisors_u64(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        if (d != n / d) out.push_back(n / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline int mobius_u64(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

/// Value of the d-th cyclotomic polynomial at x.
inline BigInt cyclotomic_value(std::uint64_t d, const BigInt& x) {
    BigInt num = 1, den = 1;
    for (std::uint64_t e : divisors_u64(d)) {
        const int mu = mobius_u64(d / e);
        if (mu == 0) continue;
        BigInt term = ipow(x, e) - 1;
        (mu > 0 ? num : den) *= term;
    }
    return BigInt(num / den);
}

/// Factors q^n - 1 after splitting it into the values Phi_d(q), d | n.
inline Factorization factor_qn_minus_1(const BigInt& q, unsigned long n, const FactorOptions& opt = {}) {
    const BigInt value = ipow(q, n) - 1;
    if (value < 1) throw std::domain_error("factor_qn_minus_1: q^n - 1 must be positive");
    std::map<BigInt, unsigned> primes;
    BigInt cofactor = 1;
    for (std::uint64_t d : divisors_u64(n)) detail::factor_into(cyclotomic_value(d, q), opt, primes, cofactor);
    return detail::assemble(value, primes, cofactor);
}

inline void require_complete(const Factorization& f, const char* what) {
    if (!f.complete()) throw std::domain_error(std::string(what) + ": factorization is incomplete");
}

inline BigInt euler_phi(const Factorization& f) {
    require_complete(f, "euler_phi");
    BigInt r = 1;
    for (const auto& [p, e] : f.factors) r *= ipow(p, e - 1) * (p - 1);
    return r;
}

inline int mobius(const Factorization& f) {
    require_complete(f, "mobius");
    for (const auto& [p, e] : f.factors)
        if (e > 1) return 0;
    return f.factors.size() % 2 ? -1 : 1;
}

/// Number of square-free divisors.
inline BigInt big_W(const Factorization& f) {
    require_complete(f, "big_W");
    BigInt r = 1;
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), f.factors.size());
    return r;
}

inline std::uint64_t euler_phi_u64(std::uint64_t n) {
    std::uint64_t r = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

inline unsigned omega_u64(std::uint64_t n) {
    unsigned w = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        ++w;
        while (n % p == 0) n /= p;
    }
    return w + (n > 1 ? 1 : 0);
}

/// a / gcd(a, b)
inline std::uint64_t rel_part(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) throw std::domain_error("rel_part: arguments must be positive");
    return a / std::gcd(a, b);
}

/// Both sides of sum_{d|R} |mu(d_(r))|/phi(d_(r)) * phi(d) = gcd(R,r) * W(gcd(R, R_(r))).
inline std::pair<BigInt, BigInt> divisor_sum_identity(std::uint64_t R, std::uint64_t r) {
    Rational lhs = 0;
    for (std::uint64_t d : divisors_u64(R)) {
        const std::uint64_t dr = rel_part(d, r);
        if (mobius_u64(dr) == 0) continue;
        lhs += Rational(big(euler_phi_u64(d)), big(euler_phi_u64(dr)));
    }
    lhs.canonicalize();
    if (lhs.get_den() != 1) throw std::logic_error("divisor_sum_identity: left side not integral");
    const std::uint64_t g = std::gcd(R, r);
    BigInt rhs = big(g);
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), omega_u64(std::gcd(R, rel_part(R, r))));
    return {lhs.get_num(), rhs};
}

/// log10 of the product of the first m primes.
inline LogMagnitude primorial_log(std::size_t m) {
    PrimeStream ps;
    CompensatedSum s;
    for (std::size_t i = 0; i < m; ++i) s += std::log10(static_cast<double>(ps.next()));
    return LogMagnitude::from_log10(s.value());
}

struct PrimeProducts {
    LogMagnitude product;
    double inverse_sum = 0.0;
};

/// Product and reciprocal sum of the first u primes >= p0 accepted by the class filter.
inline PrimeProducts prime_products(std::uint64_t p0, std::size_t u, PrimeClass filter = PrimeClass::all()) {
    PrimeStream ps(p0, filter);
    CompensatedSum lg, inv;
    for (std::size_t i = 0; i < u; ++i) {
        const auto p = static_cast<double>(ps.next());
        lg += std::log10(p);
        inv += 1.0 / p;
    }
    return {LogMagnitude::from_log10(lg.value()), inv.value()};
}

/// prod_{p < plimit} 2 / p^(1/t), accumulated as a sum of logs.
inline LogMagnitude partial_weight_constant(double t, double plimit) {
    if (!(t > 0)) throw std::domain_error("partial_weight_constant: t must be positive");
    PrimeStream ps(2, PrimeClass::all(), 1u << 18);
    CompensatedSum s;
    const double l2 = std::log10(2.0);
    for (;;) {
        const auto p = static_cast<double>(ps.next());
        if (!(p < plimit)) break;
        s += l2 - std::log10(p) / t;
    }
    return LogMagnitude::from_log10(s.value());
}

/// The constant A_t bounding W(M) <= A_t * M^(1/t): primes below 2^t.
inline LogMagnitude weight_constant(double t) { return partial_weight_constant(t, std::pow(2.0, t)); }

}  // namespace rkpair

#endif  // RKPAIR_INTNT_HPP
