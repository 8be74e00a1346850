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

#ifndef RKPAIR_ELEMS_HPP
#define RKPAIR_ELEMS_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "rkpair/ffield.hpp"
#include "rkpair/fqpoly.hpp"

namespace rkpair {

/// Element classification over a fixed tower. Caches the factorization of x^n - 1.
class Classifier {
   public:
    using Elem = FieldCtx::Elem;
    using LPoly = PolyRing<FieldCtx>::Poly;

    explicit Classifier(const FieldCtx& L) : L_(&L), R_(L.base()), xn1_(factor_xn_minus_1(L.base(), L.n())) {
        xn_ = R_.xn_minus_1(L.n());
    }

    const FieldCtx& field() const { return *L_; }
    const PolyRing<BaseField>& ring() const { return R_; }
    const FactorList& xn1_factors() const { return xn1_; }
    const FqPoly& xn_minus_1() const { return xn_; }

    /// f o alpha = sum f_i alpha^(q^i); f is folded modulo x^n - 1 first.
    Elem additive_action(const FqPoly& f, const Elem& alpha) const { return act(f, L_->conjugates(alpha)); }

    /// Action on precomputed conjugates alpha, alpha^q, ..., alpha^(q^(n-1)).
    Elem act(const FqPoly& f, const std::vector<Elem>& conj) const {
        const std::size_t n = L_->n();
        std::vector<BaseField::Elem> folded(n, 0);
        const BaseField& F = L_->base();
        for (std::size_t i = 0; i < f.size(); ++i) folded[i % n] = F.add(folded[i % n], f[i]);
        Elem r = L_->zero();
        for (std::size_t i = 0; i < n; ++i)
            if (folded[i]) r = L_->add(r, L_->scale(conj[i], folded[i]));
        return r;
    }

    /// Minimal monic annihilator, by stripping irreducible factors from x^n - 1.
    FqPoly fq_order(const Elem& alpha) const {
        const auto conj = L_->conjugates(alpha);
        FqPoly cur = xn_;
        for (const auto& [P, e] : xn1_) {
            for (unsigned k = 0; k < e; ++k) {
                FqPoly cand = R_.div(cur, P);
                if (!L_->is_zero(act(cand, conj))) break;
                cur = std::move(cand);
            }
        }
        return cur;
    }

    /// k = deg gcd(g_alpha, x^n - 1), g_alpha = sum alpha^(q^i) x^(n-1-i), computed over F_{q^n}.
    unsigned normality_k(const Elem& alpha) const {
        const PolyRing<FieldCtx> RL(*L_);
        const auto conj = L_->conjugates(alpha);
        const std::size_t n = L_->n();
        LPoly g(n, L_->zero());
        for (std::size_t i = 0; i < n; ++i) g[n - 1 - i] = conj[i];
        RL.normalize(g);
        LPoly x = lift(xn_);
        if (g.empty()) return static_cast<unsigned>(n);
        return static_cast<unsigned>(RL.deg(RL.gcd(g, x)));
    }

    /// g-freeness through the order: gcd(g, (x^n - 1)/Ord(alpha)) = 1.
    bool is_g_free(const Elem& alpha, const FqPoly& g) const {
        const FqPoly co = R_.div(xn_, fq_order(alpha));
        return R_.deg(R_.gcd(g, co)) == 0;
    }

    /// g-freeness through solvability: alpha = h o beta has a solution iff ((x^n - 1)/h) o alpha = 0.
    bool is_g_free_direct(const Elem& alpha, const FqPoly& g) const {
        const auto conj = L_->conjugates(alpha);
        for (const auto& [h, e] : xn1_) {
            if (!R_.divides(h, g)) continue;
            if (L_->is_zero(act(R_.div(xn_, h), conj))) return false;
        }
        return true;
    }

    LPoly lift(const FqPoly& f) const {
        LPoly r;
        r.reserve(f.size());
        for (auto c : f) r.push_back(L_->from_base(c));
        return r;
    }

   private:
    const FieldCtx* L_;
    PolyRing<BaseField> R_;
    FactorList xn1_;
    FqPoly xn_;
};

/// (R, r)-freeness by exponentiation: alpha^(N/r) = 1 and alpha^(N/(r s)) != 1 for primes s | R.
inline bool is_Rr_free(const FieldCtx& L, const FieldCtx::Elem& alpha, const BigInt& R, const BigInt& r) {
    const BigInt N = L.group_order();
    if (r <= 0 || R <= 0 || N % r != 0 || (N / r) % R != 0)
        throw std::invalid_argument("is_Rr_free: need r | q^n - 1 and R | (q^n - 1)/r");
    if (L.is_zero(alpha)) return false;
    const BigInt Nr = N / r;
    if (!L.eq(L.pow(alpha, Nr), L.one())) return false;
    const Factorization fr = factor_integer(R);
    require_complete(fr, "is_Rr_free");
    for (const auto& [s, e] : fr.factors)
        if (L.eq(L.pow(alpha, BigInt(Nr / s)), L.one())) return false;
    return true;
}

inline bool is_r_primitive(const FieldCtx& L, const FieldCtx::Elem& alpha, const BigInt& r) {
    const BigInt N = L.group_order();
    if (r <= 0 || N % r != 0) throw std::invalid_argument("is_r_primitive: r must divide q^n - 1");
    if (L.is_zero(alpha)) return false;
    return L.mult_order(alpha) == N / r;
}

struct ElemProfile {
    FieldCtx::Elem element;
    BigInt mult_order;  // 0 for alpha = 0
    FqPoly fq_order;
    unsigned k = 0;
};

inline ElemProfile profile(const Classifier& C, const FieldCtx::Elem& alpha) {
    const FieldCtx& L = C.field();
    ElemProfile p;
    p.element = alpha;
    p.mult_order = L.is_zero(alpha) ? BigInt(0) : L.mult_order(alpha);
    p.fq_order = C.fq_order(alpha);
    p.k = L.n() - static_cast<unsigned>(p.fq_order.size() - 1);
    return p;
}

/// f o beta for a normal beta; the result is deg(f)-normal.
inline FieldCtx::Elem construct_k_normal(const Classifier& C, const FqPoly& f, const FieldCtx::Elem& beta) {
    if (!C.ring().divides(f, C.xn_minus_1())) throw std::invalid_argument("construct_k_normal: f must divide x^n - 1");
    if (C.fq_order(beta).size() != C.field().n() + 1) throw std::invalid_argument("construct_k_normal: beta is not normal");
    return C.additive_action(f, beta);
}

/// Seeded pseudorandom scan for a normal element.
inline FieldCtx::Elem find_normal(const Classifier& C, std::uint64_t seed = 0) {
    std::mt19937_64 rng(seed);
    const FieldCtx& L = C.field();
    for (;;) {
        auto a = L.random(rng);
        if (C.fq_order(a).size() == L.n() + 1) return a;
    }
}

}  // namespace rkpair

#endif  // RKPAIR_ELEMS_HPP
