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

#ifndef RKPAIR_POLY_HPP
#define RKPAIR_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rkpair/base_field.hpp"

namespace rkpair {

/// Dense univariate polynomials over a finite field K, lowest coefficient first.
/// The zero polynomial is the empty vector.
///
/// K must provide: Elem, zero(), one(), is_zero, eq, add, sub, neg, mul, inv,
/// from_int, random(rng), order() (field size), characteristic(),
/// prime_degree() (log_p of the size), pth_root.
template <class K>
class PolyRing {
   public:
    using Field = K;
    using Elem = typename K::Elem;
    using Poly = std::vector<Elem>;

    explicit PolyRing(const K& k) : k_(&k) {}

    const K& field() const { return *k_; }

    Poly zero() const { return {}; }
    Poly one() const { return {k_->one()}; }
    Poly x() const { return {k_->zero(), k_->one()}; }
    Poly constant(const Elem& c) const {
        Poly r{c};
        normalize(r);
        return r;
    }
    Poly monomial(const Elem& c, std::size_t d) const {
        if (k_->is_zero(c)) return {};
        Poly r(d + 1, k_->zero());
        r[d] = c;
        return r;
    }
    /// x^n - 1
    Poly xn_minus_1(std::size_t n) const {
        Poly r(n + 1, k_->zero());
        r[0] = k_->neg(k_->one());
        r[n] = k_->add(r[n], k_->one());
        normalize(r);
        return r;
    }
    /// Polynomial with integer coefficients reduced into the prime subfield.
    Poly from_ints(const std::vector<std::int64_t>& c) const {
        Poly r;
        for (auto v : c) r.push_back(k_->from_int(v));
        normalize(r);
        return r;
    }

    static int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }
    static bool is_zero(const Poly& a) { return a.empty(); }

    void normalize(Poly& a) const {
        while (!a.empty() && k_->is_zero(a.back())) a.pop_back();
    }

    const Elem& lead(const Poly& a) const {
        if (a.empty()) throw std::domain_error("lead of zero polynomial");
        return a.back();
    }

    bool eq(const Poly& a, const Poly& b) const {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!k_->eq(a[i], b[i])) return false;
        return true;
    }

    bool is_one(const Poly& a) const { return a.size() == 1 && k_->eq(a[0], k_->one()); }

    Poly add(const Poly& a, const Poly& b) const {
        Poly r = a.size() >= b.size() ? a : b;
        const Poly& s = a.size() >= b.size() ? b : a;
        for (std::size_t i = 0; i < s.size(); ++i) r[i] = k_->add(r[i], s[i]);
        normalize(r);
        return r;
    }

    Poly neg(const Poly& a) const {
        Poly r = a;
        for (auto& c : r) c = k_->neg(c);
        return r;
    }

    Poly sub(const Poly& a, const Poly& b) const { return add(a, neg(b)); }

    Poly scale(const Poly& a, const Elem& c) const {
        if (k_->is_zero(c)) return {};
        Poly r = a;
        for (auto& v : r) v = k_->mul(v, c);
        normalize(r);
        return r;
    }

    Poly mul(const Poly& a, const Poly& b) const {
        if (a.empty() || b.empty()) return {};
        Poly r(a.size() + b.size() - 1, k_->zero());
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (k_->is_zero(a[i])) continue;
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k_->add(r[i + j], k_->mul(a[i], b[j]));
        }
        normalize(r);
        return r;
    }

    Poly pow(const Poly& a, std::uint64_t e) const {
        Poly r = one(), b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            e >>= 1;
            if (e) b = mul(b, b);
        }
        return r;
    }

    std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) const {
        if (b.empty()) throw std::domain_error("polynomial division by zero");
        if (a.size() < b.size()) return {Poly{}, a};
        Poly r = a;
        Poly quo(a.size() - b.size() + 1, k_->zero());
        const Elem li = k_->inv(b.back());
        const std::size_t db = b.size() - 1;
        for (std::size_t i = r.size(); i-- > db;) {
            if (k_->is_zero(r[i])) continue;
            const Elem c = k_->mul(r[i], li);
            quo[i - db] = c;
            for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = k_->sub(r[i - db + j], k_->mul(c, b[j]));
        }
        r.resize(db);
        normalize(r);
        normalize(quo);
        return {quo, r};
    }

    Poly div(const Poly& a, const Poly& b) const { return divmod(a, b).first; }
    Poly mod(const Poly& a, const Poly& b) const { return divmod(a, b).second; }
    bool divides(const Poly& d, const Poly& a) const { return mod(a, d).empty(); }

    /// Exact quotient; throws when b does not divide a.
    Poly exact_div(const Poly& a, const Poly& b) const {
        auto [qq, r] = divmod(a, b);
        if (!r.empty()) throw std::domain_error("exact_div: non-zero remainder");
        return qq;
    }

    Poly monic(const Poly& a) const {
        if (a.empty()) return a;
        return scale(a, k_->inv(a.back()));
    }

    Poly gcd(Poly a, Poly b) const {
        while (!b.empty()) {
            Poly r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(a);
    }

    /// (g, s, t) with s*a + t*b = g monic.
    std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) const {
        Poly r0 = a, r1 = b, s0 = one(), s1 = zero(), t0 = zero(), t1 = one();
        while (!r1.empty()) {
            auto [qq, r] = divmod(r0, r1);
            Poly s = sub(s0, mul(qq, s1));
            Poly t = sub(t0, mul(qq, t1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
            t0 = std::move(t1);
            t1 = std::move(t);
        }
        if (r0.empty()) return {r0, s0, t0};
        const Elem li = k_->inv(r0.back());
        return {scale(r0, li), scale(s0, li), scale(t0, li)};
    }

    /// Inverse of a modulo m; throws when not invertible.
    Poly invmod(const Poly& a, const Poly& m) const {
        auto [g, s, t] = xgcd(mod(a, m), m);
        if (!is_one(g)) throw std::domain_error("invmod: not invertible");
        return mod(s, m);
    }

    Poly mulmod(const Poly& a, const Poly& b, const Poly& m) const { return mod(mul(a, b), m); }

    Poly powmod(const Poly& a, const BigInt& e, const Poly& m) const {
        Poly r = mod(one(), m), b = mod(a, m);
        const std::size_t bits = sgn(e) == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = mulmod(r, r, m);
            if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(r, b, m);
        }
        return r;
    }

    Poly powmod(const Poly& a, std::uint64_t e, const Poly& m) const { return powmod(a, big(e), m); }

    Poly derivative(const Poly& a) const {
        if (a.size() <= 1) return {};
        Poly r(a.size() - 1);
        for (std::size_t i = 1; i < a.size(); ++i)
            r[i - 1] = k_->mul(k_->from_int(static_cast<std::int64_t>(i % k_->characteristic())), a[i]);
        normalize(r);
        return r;
    }

    Elem eval(const Poly& a, const Elem& v) const {
        Elem r = k_->zero();
        for (std::size_t i = a.size(); i-- > 0;) r = k_->add(k_->mul(r, v), a[i]);
        return r;
    }

    /// Canonical order: degree, then coefficients compared from the top down.
    bool canonical_less(const Poly& a, const Poly& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = a.size(); i-- > 0;) {
            if (k_->eq(a[i], b[i])) continue;
            return a[i] < b[i];
        }
        return false;
    }

    Poly random_poly(std::size_t below_degree, std::mt19937_64& rng) const {
        Poly r(below_degree);
        for (auto& c : r) c = k_->random(rng);
        normalize(r);
        return r;
    }

    // x^(|K|^d) mod f, by repeated |K|-th powers.
    Poly frobenius_power(const Poly& f, std::uint64_t d) const {
        Poly h = mod(x(), f);
        const BigInt Q = k_->order();
        for (std::uint64_t i = 0; i < d; ++i) h = powmod(h, Q, f);
        return h;
    }

    /// Rabin's irreducibility test.
    bool is_irreducible(const Poly& f) const {
        const int d = deg(f);
        if (d < 1) return false;
        if (d == 1) return true;
        const Poly fm = monic(f);
        if (!eq(frobenius_power(fm, static_cast<std::uint64_t>(d)), mod(x(), fm))) return false;
        for (std::uint64_t s = 2; s <= static_cast<std::uint64_t>(d); ++s) {
            if (d % s || !is_prime_u64(s)) continue;
            const Poly h = sub(frobenius_power(fm, d / s), x());
            if (deg(gcd(h, fm)) > 0) return false;
        }
        return true;
    }

    /// Square-free decomposition of a monic polynomial: pairs (s_i, i) with f = prod s_i^i.
    std::vector<std::pair<Poly, unsigned>> squarefree(const Poly& f_in) const {
        std::vector<std::pair<Poly, unsigned>> out;
        Poly f = monic(f_in);
        if (deg(f) < 1) return out;
        squarefree_rec(f, 1, out);
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
        // merge equal multiplicities
        std::vector<std::pair<Poly, unsigned>> merged;
        for (auto& pr : out) {
            if (!merged.empty() && merged.back().second == pr.second)
                merged.back().first = mul(merged.back().first, pr.first);
            else
                merged.push_back(pr);
        }
        return merged;
    }

    /// Distinct-degree factorization of a square-free monic polynomial.
    std::vector<std::pair<Poly, unsigned>> distinct_degree(Poly f) const {
        std::vector<std::pair<Poly, unsigned>> out;
        const BigInt Q = k_->order();
        Poly h = mod(x(), f);
        for (unsigned d = 1; deg(f) >= 2 * static_cast<int>(d); ++d) {
            h = powmod(h, Q, f);
            Poly g = gcd(sub(h, x()), f);
            if (deg(g) > 0) {
                out.emplace_back(g, d);
                f = div(f, g);
                h = mod(h, f);
            }
        }
        if (deg(f) > 0) out.emplace_back(f, static_cast<unsigned>(deg(f)));
        return out;
    }

    /// Splits a monic product of distinct irreducibles, all of degree d.
    std::vector<Poly> equal_degree(const Poly& f, unsigned d, std::mt19937_64& rng) const {
        std::vector<Poly> out;
        std::vector<Poly> work{monic(f)};
        while (!work.empty()) {
            Poly g = std::move(work.back());
            work.pop_back();
            if (deg(g) <= static_cast<int>(d)) {
                if (deg(g) > 0) out.push_back(g);
                continue;
            }
            for (;;) {
                Poly a = random_poly(static_cast<std::size_t>(deg(g)), rng);
                if (deg(a) < 1) continue;
                Poly b = split_map(a, g, d);
                Poly h = gcd(b, g);
                if (deg(h) > 0 && deg(h) < deg(g)) {
                    work.push_back(h);
                    work.push_back(div(g, h));
                    break;
                }
            }
        }
        return out;
    }

    /// Full factorization into monic irreducibles with multiplicity, canonically sorted.
    std::vector<std::pair<Poly, unsigned>> factor(const Poly& f, std::uint64_t seed = 0) const {
        if (deg(f) < 1) throw std::domain_error("factor: degree must be at least one");
        std::mt19937_64 rng(seed);
        std::vector<std::pair<Poly, unsigned>> out;
        for (auto& [s, mult] : squarefree(f)) {
            for (auto& [g, d] : distinct_degree(s)) {
                for (auto& h : equal_degree(g, d, rng)) out.emplace_back(h, mult);
            }
        }
        std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
        return out;
    }

   private:
    // For odd q: a^((Q^d - 1)/2) - 1; for q even: trace map a + a^2 + ... + a^(2^(kd-1)).
    Poly split_map(const Poly& a, const Poly& g, unsigned d) const {
        if (k_->characteristic() != 2) {
            BigInt e = ipow(k_->order(), d);
            e = (e - 1) / 2;
            return sub(powmod(a, e, g), one());
        }
        const unsigned long steps = static_cast<unsigned long>(k_->prime_degree()) * d;
        Poly t = mod(a, g), c = t;
        for (unsigned long i = 1; i < steps; ++i) {
            c = mulmod(c, c, g);
            t = add(t, c);
        }
        return t;
    }

    Poly pth_root_poly(const Poly& f) const {
        const std::uint64_t p = k_->characteristic();
        Poly r((f.size() + p - 1) / p, k_->zero());
        for (std::size_t i = 0; i < f.size(); i += p) r[i / p] = k_->pth_root(f[i]);
        normalize(r);
        return r;
    }

    void squarefree_rec(const Poly& f, unsigned mult, std::vector<std::pair<Poly, unsigned>>& out) const {
        if (deg(f) < 1) return;
        const Poly df = derivative(f);
        if (df.empty()) {
            squarefree_rec(pth_root_poly(f), mult * static_cast<unsigned>(k_->characteristic()), out);
            return;
        }
        Poly c = gcd(f, df);
        Poly w = div(f, c);
        unsigned i = 1;
        while (deg(w) > 0) {
            Poly y = gcd(w, c);
            Poly z = div(w, y);
            if (deg(z) > 0) out.emplace_back(monic(z), i * mult);
            ++i;
            w = y;
            c = div(c, y);
        }
        if (deg(c) > 0) squarefree_rec(pth_root_poly(c), mult * static_cast<unsigned>(k_->characteristic()), out);
    }

    const K* k_;
};

}  // namespace rkpair

#endif  // RKPAIR_POLY_HPP
