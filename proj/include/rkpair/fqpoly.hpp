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

#ifndef RKPAIR_FQPOLY_HPP
#define RKPAIR_FQPOLY_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rkpair/ffield.hpp"
#include "rkpair/poly.hpp"

namespace rkpair {

using FactorList = std::vector<std::pair<FqPoly, unsigned>>;

/// Multiplicative order of q modulo e (requires gcd(q, e) = 1).
inline std::uint64_t mult_order_mod(std::uint64_t q, std::uint64_t e) {
    if (e == 1) return 1;
    if (std::gcd(q % e, e) != 1) throw std::domain_error("mult_order_mod: q and e not coprime");
    const std::uint64_t phi = euler_phi_u64(e);
    std::uint64_t ord = phi;
    std::uint64_t rest = phi;
    for (std::uint64_t s = 2; s * s <= rest || rest > 1; ++s) {
        if (s * s > rest) s = rest;
        if (rest % s) continue;
        while (rest % s == 0) rest /= s;
        while (ord % s == 0 && detail::powmod_u64(q % e, ord / s, e) == 1) ord /= s;
    }
    return ord;
}

/// Degree structure of x^n - 1 over F_q, from q-cyclotomic cosets only.
struct XnDegrees {
    std::uint64_t n0 = 1;            // n = p^a * n0
    std::uint64_t multiplicity = 1;  // p^a
    std::map<std::uint64_t, std::uint64_t> count_by_degree;

    std::uint64_t distinct() const {
        std::uint64_t w = 0;
        for (const auto& [d, c] : count_by_degree) w += c;
        return w;
    }
    /// Degrees of the distinct factors, ascending.
    std::vector<std::uint64_t> degree_list() const {
        std::vector<std::uint64_t> out;
        for (const auto& [d, c] : count_by_degree) out.insert(out.end(), c, d);
        return out;
    }
};

inline XnDegrees xn1_factor_degrees(std::uint64_t q, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("xn1_factor_degrees: n must be positive");
    const auto [p, m] = prime_power_decompose(q);
    if (p == 0) throw std::invalid_argument("xn1_factor_degrees: q must be a prime power");
    XnDegrees out;
    out.n0 = n;
    while (out.n0 % p == 0) {
        out.n0 /= p;
        out.multiplicity *= p;
    }
    for (std::uint64_t e : divisors_u64(out.n0)) {
        const std::uint64_t d = mult_order_mod(q, e);
        out.count_by_degree[d] += euler_phi_u64(e) / d;
    }
    return out;
}

/// Number of distinct monic irreducible factors of x^n - 1 over F_q.
inline std::uint64_t xn1_distinct_factors(std::uint64_t q, std::uint64_t n) { return xn1_factor_degrees(q, n).distinct(); }

/// The e-th cyclotomic polynomial over F_q (p not dividing e).
inline FqPoly cyclotomic_poly(const BaseField& F, std::uint64_t e) {
    PolyRing<BaseField> R(F);
    FqPoly num = R.one(), den = R.one();
    for (std::uint64_t d : divisors_u64(e)) {
        const int mu = mobius_u64(e / d);
        if (mu == 0) continue;
        (mu > 0 ? num : den) = R.mul(mu > 0 ? num : den, R.xn_minus_1(d));
    }
    return R.exact_div(num, den);
}

namespace detail {

// One monic irreducible factor of f, all of whose factors have degree d.
inline FqPoly one_equal_degree_factor(const PolyRing<BaseField>& R, FqPoly f, unsigned d, std::mt19937_64& rng) {
    f = R.monic(f);
    while (R.deg(f) > static_cast<int>(d)) {
        for (;;) {
            FqPoly a = R.random_poly(static_cast<std::size_t>(R.deg(f)), rng);
            if (R.deg(a) < 1) continue;
            FqPoly b;
            if (R.field().characteristic() != 2) {
                BigInt e = ipow(R.field().order(), d);
                e = (e - 1) / 2;
                b = R.sub(R.powmod(a, e, f), R.one());
            } else {
                const unsigned long steps = static_cast<unsigned long>(R.field().prime_degree()) * d;
                FqPoly c = R.mod(a, f);
                b = c;
                for (unsigned long i = 1; i < steps; ++i) {
                    c = R.mulmod(c, c, f);
                    b = R.add(b, c);
                }
            }
            FqPoly g = R.gcd(b, f);
            if (R.deg(g) > 0 && R.deg(g) < R.deg(f)) {
                FqPoly other = R.div(f, g);
                f = R.deg(g) <= R.deg(other) ? g : other;
                break;
            }
        }
    }
    return f;
}

}  // namespace detail

/// Irreducible factorization of x^n - 1 over F_q, canonically sorted.
/// Each factor comes from a q-cyclotomic coset modulo n0: the product of (x - zeta^u)
/// over the coset, evaluated in F_q[x]/(P) for one irreducible factor P of Phi_e.
inline FactorList factor_xn_minus_1(const BaseField& F, std::uint64_t n, std::uint64_t seed = 0) {
    const XnDegrees deg = xn1_factor_degrees(F.q(), n);
    PolyRing<BaseField> R(F);
    std::mt19937_64 rng(seed);
    std::vector<FqPoly> distinct;
    for (std::uint64_t e : divisors_u64(deg.n0)) {
        const std::uint64_t d = mult_order_mod(F.q(), e);
        const FqPoly phi = cyclotomic_poly(F, e);
        if (d == euler_phi_u64(e)) {
            distinct.push_back(phi);
            continue;
        }
        const FqPoly P = detail::one_equal_degree_factor(R, phi, static_cast<unsigned>(d), rng);
        const FieldCtx L(F, P);  // zeta = y is a primitive e-th root of unity
        const PolyRing<FieldCtx> RL(L);
        std::vector<bool> seen(e, false);
        for (std::uint64_t u = 1; u < e; ++u) {
            if (seen[u] || std::gcd(u, e) != 1) continue;
            PolyRing<FieldCtx>::Poly prod = RL.one();
            std::uint64_t v = u;
            do {
                seen[v] = true;
                const auto root = L.pow(L.y(), v);
                prod = RL.mul(prod, PolyRing<FieldCtx>::Poly{L.neg(root), L.one()});
                v = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v) * (F.q() % e) % e);
            } while (v != u);
            FqPoly down;
            for (const auto& c : prod) {
                if (!L.in_base(c)) throw std::logic_error("factor_xn_minus_1: coset product not over F_q");
                down.push_back(c[0]);
            }
            distinct.push_back(down);
        }
    }
    std::sort(distinct.begin(), distinct.end(), [&](const FqPoly& a, const FqPoly& b) { return R.canonical_less(a, b); });
    FactorList out;
    for (auto& f : distinct) out.emplace_back(f, static_cast<unsigned>(deg.multiplicity));
    return out;
}

/// Multiplies the factor list back out.
inline FqPoly expand(const BaseField& F, const FactorList& fl) {
    PolyRing<BaseField> R(F);
    FqPoly r = R.one();
    for (const auto& [f, e] : fl) r = R.mul(r, R.pow(f, e));
    return r;
}

/// Order of (F_q[x]/(f))^*.
inline BigInt poly_phi(const BaseField& F, const FactorList& fl) {
    BigInt r = 1;
    for (const auto& [f, e] : fl) {
        const unsigned long d = static_cast<unsigned long>(f.size() - 1);
        r *= ipow(F.order(), e * d) - ipow(F.order(), (e - 1) * d);
    }
    return r;
}

inline int poly_mobius(const FactorList& fl) {
    for (const auto& [f, e] : fl)
        if (e > 1) return 0;
    return fl.size() % 2 ? -1 : 1;
}

/// Number of square-free monic divisors.
inline BigInt poly_W(const FactorList& fl) {
    BigInt r = 1;
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), fl.size());
    return r;
}

/// A monic divisor together with its own factorization.
struct Divisor {
    FqPoly poly;
    FactorList factors;
};

/// All monic divisors, in graded (degree, then canonical) order.
inline std::vector<Divisor> divisors(const BaseField& F, const FactorList& fl) {
    PolyRing<BaseField> R(F);
    std::vector<Divisor> out{{R.one(), {}}};
    for (const auto& [f, e] : fl) {
        std::vector<Divisor> next;
        for (const auto& d : out) {
            FqPoly cur = d.poly;
            for (unsigned k = 0; k <= e; ++k) {
                Divisor nd{cur, d.factors};
                if (k) nd.factors.emplace_back(f, k);
                next.push_back(std::move(nd));
                cur = R.mul(cur, f);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), [&](const Divisor& a, const Divisor& b) { return R.canonical_less(a.poly, b.poly); });
    return out;
}

/// Factorization of a divisor g of a factored polynomial, by trial division.
inline FactorList factor_divisor(const BaseField& F, const FqPoly& g, const FactorList& of) {
    PolyRing<BaseField> R(F);
    FactorList out;
    FqPoly rest = R.monic(g);
    for (const auto& [f, e] : of) {
        unsigned k = 0;
        while (k < e && R.divides(f, rest)) {
            rest = R.div(rest, f);
            ++k;
        }
        if (k) out.emplace_back(f, k);
    }
    if (R.deg(rest) != 0) throw std::domain_error("factor_divisor: not a divisor");
    return out;
}

inline FactorList generic_factor(const BaseField& F, const FqPoly& f, std::uint64_t seed = 0) {
    return PolyRing<BaseField>(F).factor(f, seed);
}

// ---------------------------------------------------------------------------
// Text syntax: sums of terms like 3*x^2, a^3*x, (x+1)^2, with `a` the field symbol.

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(std::size_t p, const std::string& msg)
        : std::runtime_error("parse error at position " + std::to_string(p) + ": " + msg), pos(p) {}
};

template <class K>
class PolyParser {
   public:
    using Poly = typename PolyRing<K>::Poly;

    PolyParser(const K& k, std::string_view text) : k_(k), R_(k), s_(text) {}

    Poly parse_poly() {
        Poly r = expr();
        skip();
        if (i_ != s_.size()) throw ParseError(i_, std::string("unexpected '") + s_[i_] + "'");
        return r;
    }

    std::pair<Poly, Poly> parse_rational() {
        Poly num = expr();
        skip();
        Poly den = R_.one();
        if (i_ < s_.size() && s_[i_] == '/') {
            ++i_;
            den = expr();
            if (den.empty()) throw ParseError(i_, "zero denominator");
        }
        skip();
        if (i_ != s_.size()) throw ParseError(i_, std::string("unexpected '") + s_[i_] + "'");
        return {num, den};
    }

   private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    Poly expr() {
        Poly r = term();
        for (;;) {
            if (eat('+'))
                r = R_.add(r, term());
            else if (eat('-'))
                r = R_.sub(r, term());
            else
                return r;
        }
    }

    Poly term() {
        Poly r = unary();
        while (eat('*')) r = R_.mul(r, unary());
        return r;
    }

    Poly unary() {
        if (eat('-')) return R_.neg(unary());
        if (eat('+')) return unary();
        return power();
    }

    Poly power() {
        Poly base = atom();
        if (eat('^')) {
            skip();
            const std::size_t start = i_;
            std::uint64_t e = 0;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                e = e * 10 + static_cast<std::uint64_t>(s_[i_] - '0');
                if (e > 1'000'000) throw ParseError(start, "exponent too large");
                ++i_;
            }
            if (i_ == start) throw ParseError(i_, "expected exponent");
            return R_.pow(base, e);
        }
        return base;
    }

    Poly atom() {
        skip();
        if (i_ >= s_.size()) throw ParseError(i_, "unexpected end of input");
        const char c = s_[i_];
        if (c == '(') {
            ++i_;
            Poly r = expr();
            if (!eat(')')) throw ParseError(i_, "expected ')'");
            return r;
        }
        if (c == 'x') {
            ++i_;
            return R_.x();
        }
        if (c == 'a') {
            const std::size_t at = i_;
            ++i_;
            try {
                return R_.constant(k_.symbol_a());
            } catch (const std::invalid_argument& e) {
                throw ParseError(at, e.what());
            }
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            BigInt v(std::string(s_.substr(start, i_ - start)));
            v %= big(k_.characteristic());
            return R_.constant(k_.from_int(static_cast<std::int64_t>(v.get_si())));
        }
        throw ParseError(i_, std::string("unexpected '") + c + "'");
    }

    const K& k_;
    PolyRing<K> R_;
    std::string_view s_;
    std::size_t i_ = 0;
};

template <class K>
typename PolyRing<K>::Poly parse_poly(const K& k, std::string_view text) {
    return PolyParser<K>(k, text).parse_poly();
}

template <class K>
std::pair<typename PolyRing<K>::Poly, typename PolyRing<K>::Poly> parse_rational(const K& k, std::string_view text) {
    return PolyParser<K>(k, text).parse_rational();
}

/// "x^2 + 3*x + 1" with coefficients rendered by the field.
template <class K>
std::string poly_to_string(const K& k, const typename PolyRing<K>::Poly& f) {
    if (f.empty()) return "0";
    std::string out;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (k.is_zero(f[i])) continue;
        if (!out.empty()) out += " + ";
        const bool unit = k.eq(f[i], k.one());
        std::string c = k.to_string(f[i]);
        if (c.find_first_of("+ ") != std::string::npos) c = "(" + c + ")";
        if (i == 0 || !unit) out += c;
        if (i > 0) {
            if (!unit) out += "*";
            out += "x";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace rkpair

#endif  // RKPAIR_FQPOLY_HPP
