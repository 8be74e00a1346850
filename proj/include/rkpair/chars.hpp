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

#ifndef RKPAIR_CHARS_HPP
#define RKPAIR_CHARS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkpair/elems.hpp"
#include "rkpair/ratfun.hpp"

namespace rkpair {

using cplx = std::complex<double>;

/// Explicit characters of a small field. Elements and additive characters are both
/// addressed by field index: psi_y(a) = exp(2 pi i Tr(y a)/p), eta_t(gamma^j) = exp(2 pi i t j/(Q-1)).
class CharTables {
   public:
    static constexpr std::uint64_t kDefaultCap = 4096;

    explicit CharTables(const Classifier& C, std::uint64_t cap = kDefaultCap) : C_(&C) {
        const FieldCtx& L = C.field();
        if (L.order() > BigInt(cap)) throw std::domain_error("CharTables: field exceeds the size threshold");
        Q_ = L.size_u64();
        N_ = Q_ - 1;
        p_ = static_cast<std::uint32_t>(L.characteristic());
        dlog_.assign(Q_, 0);
        trace_exp_.assign(N_, 0);
        auto g = L.one();
        for (std::uint64_t j = 0; j < N_; ++j) {
            dlog_[L.index_of(g)] = j;
            trace_exp_[j] = L.trace_to_prime(g);
            g = L.mul(g, L.generator());
        }
        // F_p-basis: one F_p digit set in one F_q coordinate
        const BaseField& F = L.base();
        for (unsigned i = 0; i < L.n(); ++i) {
            BaseField::Elem code = 1;
            for (unsigned j = 0; j < F.m(); ++j, code *= static_cast<BaseField::Elem>(F.p())) {
                auto b = L.zero();
                b[i] = code;
                basis_.push_back(b);
            }
        }
        orders_.resize(Q_);
        for (std::uint64_t y = 0; y < Q_; ++y) {
            orders_[y] = compute_char_order(y);
            by_order_[orders_[y]].push_back(y);
        }
    }

    const Classifier& classifier() const { return *C_; }
    const FieldCtx& field() const { return C_->field(); }
    std::uint64_t size() const { return Q_; }
    std::uint64_t dlog(std::uint64_t a) const { return dlog_[a]; }

    /// Tr(y a) in F_p, for field indices y and a.
    std::uint32_t trace_of_product(std::uint64_t y, std::uint64_t a) const {
        if (y == 0 || a == 0) return 0;
        return trace_exp_[(dlog_[y] + dlog_[a]) % N_];
    }

    cplx psi(std::uint64_t y, std::uint64_t a) const { return unit(static_cast<double>(trace_of_product(y, a)) / p_); }

    /// eta_t(a) for a != 0.
    cplx eta(std::uint64_t t, std::uint64_t a) const {
        if (a == 0) throw std::domain_error("eta: zero argument");
        const std::uint64_t k = static_cast<std::uint64_t>((static_cast<unsigned __int128>(t % N_) * dlog_[a]) % N_);
        return unit(static_cast<double>(k) / static_cast<double>(N_));
    }

    std::uint64_t eta_order(std::uint64_t t) const { return N_ / std::gcd(t % N_, N_); }

    /// F_q-order of psi_y.
    const FqPoly& char_order(std::uint64_t y) const { return orders_[y]; }
    const std::map<FqPoly, std::vector<std::uint64_t>>& characters_by_order() const { return by_order_; }

    /// True when psi_z = f o psi_y, i.e. psi_z(b) = psi_y(f o b) for all b.
    bool is_composite_of(std::uint64_t z, const FqPoly& f, std::uint64_t y) const {
        const FieldCtx& L = field();
        for (const auto& b : basis_) {
            const std::uint64_t fb = L.index_of(C_->additive_action(f, b));
            if (trace_of_product(y, fb) != trace_of_product(z, L.index_of(b))) return false;
        }
        return true;
    }

    static cplx unit(double frac) {
        const double ang = 2.0 * std::numbers::pi * frac;
        return {std::cos(ang), std::sin(ang)};
    }

   private:
    bool trivial_after(const FqPoly& h, std::uint64_t y) const {
        const FieldCtx& L = field();
        for (const auto& b : basis_)
            if (trace_of_product(y, L.index_of(C_->additive_action(h, b))) != 0) return false;
        return true;
    }

    FqPoly compute_char_order(std::uint64_t y) const {
        const auto& R = C_->ring();
        FqPoly cur = C_->xn_minus_1();
        for (const auto& [P, e] : C_->xn1_factors()) {
            for (unsigned k = 0; k < e; ++k) {
                FqPoly cand = R.div(cur, P);
                if (!trivial_after(cand, y)) break;
                cur = std::move(cand);
            }
        }
        return cur;
    }

    const Classifier* C_;
    std::uint64_t Q_ = 0, N_ = 0;
    std::uint32_t p_ = 2;
    std::vector<std::uint64_t> dlog_;
    std::vector<std::uint32_t> trace_exp_;
    std::vector<FieldCtx::Elem> basis_;
    std::vector<FqPoly> orders_;
    std::map<FqPoly, std::vector<std::uint64_t>> by_order_;
};

/// Omega_g(a) = Theta(g) sum_{h | g} mu(h)/Phi(h) sum_{Ord(chi) = h} chi(a); the indicator of g-freeness.
inline cplx omega_via_chars(const CharTables& T, std::uint64_t a, const FqPoly& g) {
    const Classifier& C = T.classifier();
    const BaseField& F = C.field().base();
    const FactorList gf = factor_divisor(F, g, C.xn1_factors());
    cplx total = 0;
    for (const auto& d : divisors(F, gf)) {
        const int mu = poly_mobius(d.factors);
        if (mu == 0) continue;
        auto it = T.characters_by_order().find(d.poly);
        if (it == T.characters_by_order().end()) continue;
        cplx s = 0;
        for (std::uint64_t y : it->second) s += T.psi(y, a);
        total += static_cast<double>(mu) / poly_phi(F, d.factors).get_d() * s;
    }
    const double theta = poly_phi(F, gf).get_d() / std::pow(static_cast<double>(F.q()), static_cast<double>(g.size() - 1));
    return theta * total;
}

/// I_{R,r}(a) = theta(R)/r sum_{d | Rr} mu(d_(r))/phi(d_(r)) sum_{ord(eta) = d} eta(a); a != 0.
inline cplx rr_via_chars(const CharTables& T, std::uint64_t a, std::uint64_t R, std::uint64_t r) {
    const std::uint64_t N = T.size() - 1;
    if (r == 0 || R == 0 || N % r || (N / r) % R) throw std::invalid_argument("rr_via_chars: need r | Q - 1 and R | (Q - 1)/r");
    cplx total = 0;
    for (std::uint64_t d : divisors_u64(R * r)) {
        const std::uint64_t dr = rel_part(d, r);
        const int mu = mobius_u64(dr);
        if (mu == 0) continue;
        cplx s = 0;
        // characters of order d: eta_t with t = (N/d) s, gcd(s, d) = 1
        for (std::uint64_t s_ = 1; s_ <= d; ++s_)
            if (std::gcd(s_, d) == 1) s += T.eta((N / d) * (s_ % d), a);
        total += static_cast<double>(mu) / static_cast<double>(euler_phi_u64(dr)) * s;
    }
    const double theta = static_cast<double>(euler_phi_u64(R)) / static_cast<double>(R);
    return theta / static_cast<double>(r) * total;
}

/// I_0(a) = Q^-1 sum_psi psi(a).
inline cplx i0(const CharTables& T, std::uint64_t a) {
    cplx s = 0;
    for (std::uint64_t y = 0; y < T.size(); ++y) s += T.psi(y, a);
    return s / static_cast<double>(T.size());
}

struct OrthogonalityResult {
    cplx sum;                         // sum_beta chi(beta) conj(psi(f o beta))
    bool related = false;             // chi = f o psi
    std::uint64_t preimage_count = 0; // #{psi' : chi = f o psi'}
    bool order_divides = false;       // Ord(chi) | (x^n - 1)/f
};

inline OrthogonalityResult orthogonality_case_b(const CharTables& T, const FqPoly& f, std::uint64_t chi, std::uint64_t psi) {
    const Classifier& C = T.classifier();
    const FieldCtx& L = C.field();
    const auto& R = C.ring();
    if (!R.divides(f, C.xn_minus_1())) throw std::invalid_argument("orthogonality_case_b: f must divide x^n - 1");
    OrthogonalityResult out;
    for (std::uint64_t b = 0; b < T.size(); ++b) {
        const std::uint64_t fb = L.index_of(C.additive_action(f, L.from_index(b)));
        out.sum += T.psi(chi, b) * std::conj(T.psi(psi, fb));
    }
    out.related = T.is_composite_of(chi, f, psi);
    for (std::uint64_t y = 0; y < T.size(); ++y)
        if (T.is_composite_of(chi, f, y)) ++out.preimage_count;
    out.order_divides = R.divides(T.char_order(chi), R.div(C.xn_minus_1(), f));
    return out;
}

struct WeilCheck {
    bool screened = false;  // hypotheses verified
    std::string reason;     // why screening failed
    char part = 'b';        // 'a' when u is constant
    int D1 = 0, D2 = 0, D3 = 0, D4 = 0;
    double lhs = 0.0, rhs = 0.0;
    bool holds() const { return screened && lhs <= rhs + 1e-6; }
};

/// |sum eta(v(a)) psi(u(a))| against the Weil-type bound. Hypotheses are screened by sufficient
/// conditions: v is not a perfect ord(eta)-th power (some exponent is not divisible by it), and u is
/// either constant (bound without the additive part) or nonconstant with every pole order below Q.
inline WeilCheck weil_bound_check(const CharTables& T, const RatFunc& v_in, const RatFunc& u_in, std::uint64_t eta_t,
                                  std::uint64_t psi_y, std::uint64_t seed = 0) {
    const FieldCtx& L = T.field();
    const PolyRing<FieldCtx> R(L);
    WeilCheck out;
    auto reduce = [&](const RatFunc& F) {
        auto g = R.gcd(F.num, F.den);
        return RatFunc(L, R.div(F.num, g), R.div(F.den, g));
    };
    if (v_in.num.empty()) {
        out.reason = "v is zero";
        return out;
    }
    const RatFunc v = reduce(v_in);
    const RatFunc u = u_in.num.empty() ? u_in : reduce(u_in);
    const std::uint64_t ord = T.eta_order(eta_t);
    const std::uint64_t Q = T.size();
    auto factor = [&](const RatFunc::Poly& f) {
        return R.deg(f) < 1 ? std::vector<std::pair<RatFunc::Poly, unsigned>>{} : R.factor(f, seed);
    };

    // exponent vector of v
    std::vector<std::pair<RatFunc::Poly, long>> sj;
    for (auto& [s, e] : factor(v.num)) sj.emplace_back(s, static_cast<long>(e));
    for (auto& [s, e] : factor(v.den)) sj.emplace_back(s, -static_cast<long>(e));
    bool power = true;
    for (const auto& [s, e] : sj) {
        out.D1 += R.deg(s);
        if (e % static_cast<long>(ord) != 0) power = false;
    }
    if (power) {
        out.reason = "v is a perfect ord(eta)-th power";
        return out;
    }
    const bool u_const = R.deg(u.num) <= 0 && R.deg(u.den) <= 0;
    const bool psi_trivial = psi_y == 0;
    if (u_const || psi_trivial) {
        out.part = 'a';
    } else {
        out.D2 = std::max(R.deg(u.num) - R.deg(u.den), 0);
        out.D3 = R.deg(u.den);
        for (auto& [s, e] : factor(u.den)) {
            bool shared = false;
            for (const auto& pr : sj) shared = shared || R.eq(pr.first, s);
            if (!shared) out.D4 += R.deg(s);
        }
        const auto Qi = static_cast<int>(Q);
        if (R.deg(u.num) - R.deg(u.den) >= Qi || R.deg(u.den) >= Qi) {
            out.reason = "u has a pole of order >= Q; not screened";
            return out;
        }
    }
    out.screened = true;
    cplx s = 0;
    for (std::uint64_t a = 0; a < Q; ++a) {
        const auto al = L.from_index(a);
        const auto vd = R.eval(v.den, al);
        if (L.is_zero(vd)) continue;
        const auto vv = L.div(R.eval(v.num, al), vd);
        if (L.is_zero(vv)) continue;
        cplx term = T.eta(eta_t, L.index_of(vv));
        if (out.part == 'b') {
            const auto ud = R.eval(u.den, al);
            if (L.is_zero(ud)) continue;
            const auto uu = u.num.empty() ? L.zero() : L.div(R.eval(u.num, al), ud);
            term *= T.psi(psi_y, L.index_of(uu));
        }
        s += term;
    }
    out.lhs = std::abs(s);
    const double root = std::sqrt(static_cast<double>(Q));
    out.rhs = out.part == 'a' ? (out.D1 - 1) * root : (out.D1 + out.D2 + out.D3 + out.D4 - 1) * root;
    return out;
}

}  // namespace rkpair

#endif  // RKPAIR_CHARS_HPP
