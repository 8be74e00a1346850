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

#ifndef RKPAIR_RATFUN_HPP
#define RKPAIR_RATFUN_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkpair/ffield.hpp"
#include "rkpair/fqpoly.hpp"

namespace rkpair {

/// F1/F2 over F_{q^n}. The denominator is kept monic; the constructor does not cancel
/// common factors, so coprimality stays a checkable property of the input.
struct RatFunc {
    using Poly = PolyRing<FieldCtx>::Poly;
    Poly num;
    Poly den;
    std::string text;  // source string when parsed

    RatFunc() = default;
    RatFunc(const FieldCtx& L, Poly n, Poly d, std::string src = {}) : text(std::move(src)) {
        const PolyRing<FieldCtx> R(L);
        if (d.empty()) throw std::domain_error("RatFunc: zero denominator");
        const auto c = L.inv(d.back());
        num = R.scale(n, c);
        den = R.scale(d, c);
    }

    static RatFunc parse(const FieldCtx& L, std::string_view s) {
        auto [n, d] = parse_rational(L, s);
        return RatFunc(L, std::move(n), std::move(d), std::string(s));
    }

    static RatFunc polynomial(const FieldCtx& L, Poly n) { return RatFunc(L, std::move(n), PolyRing<FieldCtx>(L).one()); }

    int deg_num() const { return PolyRing<FieldCtx>::deg(num); }
    int deg_den() const { return PolyRing<FieldCtx>::deg(den); }
};

/// Coefficient field for the class of rational functions: F_{q^n} (default) or F_q.
enum class UpsilonField { Fqn, Fq };

struct UpsilonResult {
    bool member = false;
    std::string reason;           // first failed condition when not a member
    RatFunc::Poly witness_g;      // irreducible g != x with g^m || F1 F2
    unsigned witness_m = 0;
};

/// Membership in the class of rational functions with deg F1 <= m1, deg F2 <= m2, F1, F2 coprime,
/// and an irreducible monic g != x exactly dividing F1 F2 to a power m with gcd(m, Q - 1) = 1.
/// Q is q^n over F_{q^n} and q over F_q.
inline UpsilonResult in_upsilon(const FieldCtx& L, const RatFunc& F, int m1, int m2,
                                UpsilonField mode = UpsilonField::Fqn, std::uint64_t seed = 0) {
    UpsilonResult res;
    const PolyRing<FieldCtx> R(L);
    if (F.num.empty()) {
        res.reason = "zero numerator";
        return res;
    }
    if (F.deg_num() > m1 || F.deg_den() > m2) {
        res.reason = "degree bound";
        return res;
    }
    if (R.deg(R.gcd(F.num, F.den)) > 0) {
        res.reason = "numerator and denominator not coprime";
        return res;
    }
    if (mode == UpsilonField::Fq) {
        for (const auto* p : {&F.num, &F.den})
            for (const auto& c : *p)
                if (!L.in_base(c)) {
                    res.reason = "coefficients not in F_q";
                    return res;
                }
    }
    const BigInt Qm1 = mode == UpsilonField::Fqn ? L.group_order() : L.base().order() - 1;
    const auto prod = R.mul(F.num, F.den);
    if (R.deg(prod) < 1) {
        res.reason = "constant function";
        return res;
    }
    std::vector<std::pair<RatFunc::Poly, unsigned>> fl;
    if (mode == UpsilonField::Fqn) {
        fl = R.factor(prod, seed);
    } else {
        const PolyRing<BaseField> RB(L.base());
        FqPoly down;
        for (const auto& c : prod) down.push_back(c[0]);
        for (auto& [g, e] : RB.factor(down, seed)) {
            RatFunc::Poly up;
            for (auto c : g) up.push_back(L.from_base(c));
            fl.emplace_back(std::move(up), e);
        }
    }
    std::sort(fl.begin(), fl.end(), [&](const auto& a, const auto& b) { return R.canonical_less(a.first, b.first); });
    const auto x = R.x();
    for (const auto& [g, m] : fl) {
        if (R.eq(g, x)) continue;
        BigInt gm;
        const BigInt mm = m;
        mpz_gcd(gm.get_mpz_t(), mm.get_mpz_t(), Qm1.get_mpz_t());
        if (gm == 1) {
            res.member = true;
            res.witness_g = g;
            res.witness_m = m;
            return res;
        }
    }
    res.reason = "no irreducible factor g != x with admissible multiplicity";
    return res;
}

/// F1(alpha)/F2(alpha); throws at a pole.
inline FieldCtx::Elem evaluate(const FieldCtx& L, const RatFunc& F, const FieldCtx::Elem& alpha) {
    const PolyRing<FieldCtx> R(L);
    const auto d = R.eval(F.den, alpha);
    if (L.is_zero(d)) throw std::domain_error("evaluate: pole");
    return L.div(R.eval(F.num, alpha), d);
}

/// Roots in F_{q^n} of a polynomial over F_{q^n}, sorted by coefficient vector.
inline std::vector<FieldCtx::Elem> roots_by_factoring(const FieldCtx& L, const RatFunc::Poly& f, std::uint64_t seed = 0) {
    const PolyRing<FieldCtx> R(L);
    std::vector<FieldCtx::Elem> out;
    if (R.deg(f) < 1) return out;
    const auto fm = R.monic(f);
    // split part: gcd(f, x^Q - x)
    const auto xq = R.powmod(R.x(), L.order(), fm);
    const auto g = R.gcd(R.sub(xq, R.x()), fm);
    if (R.deg(g) < 1) return out;
    std::mt19937_64 rng(seed);
    for (const auto& lin : R.equal_degree(g, 1, rng)) out.push_back(L.neg(R.monic(lin)[0]));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<FieldCtx::Elem> roots_by_scan(const FieldCtx& L, const RatFunc::Poly& f) {
    const PolyRing<FieldCtx> R(L);
    std::vector<FieldCtx::Elem> out;
    if (f.empty()) throw std::domain_error("roots_by_scan: zero polynomial");
    for (std::uint64_t i = 0; i < L.size_u64(); ++i) {
        auto a = L.from_index(i);
        if (L.is_zero(R.eval(f, a))) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// S_F: zeros of F1 and of F2 in F_{q^n}, without multiplicity.
inline std::vector<FieldCtx::Elem> exceptional_set(const FieldCtx& L, const RatFunc& F, std::uint64_t seed = 0) {
    const bool scan = L.order() <= BigInt(1u << 24);
    std::vector<FieldCtx::Elem> out;
    for (const auto* p : {&F.num, &F.den}) {
        auto r = scan ? roots_by_scan(L, *p) : roots_by_factoring(L, *p, seed);
        out.insert(out.end(), r.begin(), r.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::string ratfunc_to_string(const FieldCtx& L, const RatFunc& F) {
    if (!F.text.empty()) return F.text;
    const PolyRing<FieldCtx> R(L);
    std::string s = "(" + poly_to_string(L, F.num) + ")";
    if (!R.is_one(F.den)) s += "/(" + poly_to_string(L, F.den) + ")";
    return s;
}

}  // namespace rkpair

#endif  // RKPAIR_RATFUN_HPP
