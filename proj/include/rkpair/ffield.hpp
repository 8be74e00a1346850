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

#ifndef RKPAIR_FFIELD_HPP
#define RKPAIR_FFIELD_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rkpair/base_field.hpp"
#include "rkpair/poly.hpp"

namespace rkpair {

using FqPoly = std::vector<BaseField::Elem>;

struct FieldOptions {
    std::uint64_t seed = 0;
    bool with_generator = true;  // false: no generator, no factorization of q^n - 1
    FactorOptions factor{};
};

/// F_{q^n} = F_q[y]/(ext_poly). Elements are coefficient vectors of length n over F_q.
/// Immutable after construction; copies share the precomputed tables.
class FieldCtx {
   public:
    using Elem = std::vector<BaseField::Elem>;
    static constexpr std::uint64_t kDlogCap = 0xFFFFFFFFull;

    FieldCtx(std::uint64_t p, unsigned m, unsigned n, const FieldOptions& opt = {})
        : FieldCtx(BaseField(p, m, opt.seed), n, opt) {}

    FieldCtx(const BaseField& base, unsigned n, const FieldOptions& opt = {}) : base_(base), n_(n) {
        if (n == 0) throw std::invalid_argument("FieldCtx: n must be positive");
        init_sizes();
        ext_ = find_irreducible(opt.seed);
        init_frobenius();
        if (opt.with_generator) {
            fact_ = factor_qn_minus_1(base_.order(), n_, opt.factor);
            if (!fact_.complete())
                throw std::runtime_error("FieldCtx: factoring q^n - 1 exhausted the budget; use bound-only mode");
            find_generator(opt.seed);
        }
    }

    /// Extension defined by a given irreducible monic modulus; no generator.
    FieldCtx(const BaseField& base, const FqPoly& modulus) : base_(base) {
        PolyRing<BaseField> R(base_);
        if (R.deg(modulus) < 1) throw std::invalid_argument("FieldCtx: modulus must have positive degree");
        ext_ = R.monic(modulus);
        n_ = static_cast<unsigned>(R.deg(ext_));
        init_sizes();
        init_frobenius();
    }

    const BaseField& base() const { return base_; }
    std::uint64_t p() const { return base_.p(); }
    unsigned m() const { return base_.m(); }
    std::uint64_t q() const { return base_.q(); }
    unsigned n() const { return n_; }
    std::uint64_t characteristic() const { return base_.p(); }
    unsigned prime_degree() const { return base_.m() * n_; }
    const BigInt& order() const { return size_; }
    BigInt group_order() const { return size_ - 1; }
    const FqPoly& ext_poly() const { return ext_; }
    const Factorization& group_order_fact() const {
        if (!has_generator_) throw std::logic_error("FieldCtx: built without group order factorization");
        return fact_;
    }
    bool has_generator() const { return has_generator_; }
    const Elem& generator() const {
        if (!has_generator_) throw std::logic_error("FieldCtx: built without generator");
        return gen_;
    }
    /// Number of elements when it fits in 64 bits.
    std::uint64_t size_u64() const { return to_u64(size_); }

    Elem zero() const { return Elem(n_, 0); }
    Elem one() const {
        Elem r(n_, 0);
        r[0] = 1;
        return r;
    }
    Elem from_base(BaseField::Elem c) const {
        Elem r(n_, 0);
        r[0] = c;
        return r;
    }
    Elem from_int(std::int64_t v) const { return from_base(base_.from_int(v)); }
    /// The class of y in F_q[y]/(ext_poly).
    Elem y() const {
        if (n_ == 1) return from_base(base_.neg(ext_[0]));
        Elem r(n_, 0);
        r[1] = 1;
        return r;
    }
    /// The symbol `a` of the textual syntax: the generator when present, else y.
    Elem symbol_a() const { return has_generator_ ? gen_ : y(); }

    bool is_zero(const Elem& a) const {
        for (auto c : a)
            if (c) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool in_base(const Elem& a) const {
        for (unsigned i = 1; i < n_; ++i)
            if (a[i]) return false;
        return true;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r(n_);
        for (unsigned i = 0; i < n_; ++i) r[i] = base_.add(a[i], b[i]);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r(n_);
        for (unsigned i = 0; i < n_; ++i) r[i] = base_.sub(a[i], b[i]);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r(n_);
        for (unsigned i = 0; i < n_; ++i) r[i] = base_.neg(a[i]);
        return r;
    }
    Elem scale(const Elem& a, BaseField::Elem c) const {
        Elem r(n_);
        for (unsigned i = 0; i < n_; ++i) r[i] = base_.mul(a[i], c);
        return r;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        if (n_ == 1) return Elem{base_.mul(a[0], b[0])};
        std::vector<BaseField::Elem> t(2 * n_ - 1, 0);
        for (unsigned i = 0; i < n_; ++i) {
            if (!a[i]) continue;
            for (unsigned j = 0; j < n_; ++j) {
                if (!b[j]) continue;
                t[i + j] = base_.add(t[i + j], base_.mul(a[i], b[j]));
            }
        }
        for (unsigned i = 2 * n_ - 1; i-- > n_;) {
            const auto c = t[i];
            if (!c) continue;
            for (unsigned j = 0; j < n_; ++j) t[i - n_ + j] = base_.sub(t[i - n_ + j], base_.mul(c, ext_[j]));
        }
        t.resize(n_);
        return t;
    }

    Elem pow(const Elem& a, const BigInt& e) const {
        if (sgn(e) < 0) return pow(inv(a), BigInt(-e));
        Elem r = one();
        const std::size_t bits = sgn(e) == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = mul(r, r);
            if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
        }
        return r;
    }
    Elem pow(const Elem& a, std::uint64_t e) const { return pow(a, big(e)); }

    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw std::domain_error("FieldCtx: inverse of zero");
        if (n_ == 1) return Elem{base_.inv(a[0])};
        PolyRing<BaseField> R(base_);
        FqPoly pa(a.begin(), a.end());
        R.normalize(pa);
        FqPoly r = R.invmod(pa, ext_);
        r.resize(n_, 0);
        return r;
    }

    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    Elem pth_root(const Elem& a) const { return pow(a, BigInt(size_ / base_.p())); }

    /// a^q, an F_q-linear map computed from the images of y^i.
    Elem frobenius(const Elem& a) const {
        if (n_ == 1) return a;
        Elem r(n_, 0);
        for (unsigned i = 0; i < n_; ++i) {
            if (!a[i]) continue;
            const Elem& img = frob_[i];
            for (unsigned j = 0; j < n_; ++j) r[j] = base_.add(r[j], base_.mul(a[i], img[j]));
        }
        return r;
    }

    Elem frobenius_pow(Elem a, unsigned k) const {
        for (unsigned i = 0; i < k % n_; ++i) a = frobenius(a);
        return a;
    }

    /// a, a^q, ..., a^(q^(n-1))
    std::vector<Elem> conjugates(const Elem& a) const {
        std::vector<Elem> out;
        out.reserve(n_);
        out.push_back(a);
        for (unsigned i = 1; i < n_; ++i) out.push_back(frobenius(out.back()));
        return out;
    }

    /// Trace down to F_q.
    BaseField::Elem trace_to_base(const Elem& a) const {
        Elem s = zero();
        for (const auto& c : conjugates(a)) s = add(s, c);
        return s[0];
    }

    /// Absolute trace down to F_p.
    std::uint32_t trace_to_prime(const Elem& a) const { return base_.trace(trace_to_base(a)); }

    /// Multiplicative order, by dividing out the prime factors of q^n - 1.
    BigInt mult_order(const Elem& a) const {
        if (is_zero(a)) throw std::domain_error("mult_order of zero");
        const Factorization& f = group_order_fact();
        BigInt ord = f.value;
        for (const auto& [s, e] : f.factors) {
            for (unsigned i = 0; i < e; ++i) {
                BigInt cand = ord / s;
                if (pow(a, cand) == one())
                    ord = cand;
                else
                    break;
            }
        }
        return ord;
    }

    /// Baby-step giant-step logarithm to the base of the generator.
    BigInt dlog(const Elem& a) const {
        if (is_zero(a)) throw std::domain_error("dlog of zero");
        const BigInt N = group_order();
        if (N > big(kDlogCap)) throw std::domain_error("dlog: field exceeds the size threshold");
        const std::uint64_t n = to_u64(N);
        const auto mstep = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
        std::unordered_map<std::uint64_t, std::uint64_t> baby;
        baby.reserve(mstep * 2);
        Elem cur = one();
        for (std::uint64_t j = 0; j < mstep; ++j) {
            baby.emplace(index_of(cur), j);
            cur = mul(cur, generator());
        }
        const Elem giant = inv(pow(generator(), mstep));
        Elem g = a;
        for (std::uint64_t i = 0; i <= mstep; ++i) {
            auto it = baby.find(index_of(g));
            if (it != baby.end()) return big((i * mstep + it->second) % n);
            g = mul(g, giant);
        }
        throw std::logic_error("dlog: no logarithm found");
    }

    /// Mixed-radix index sum c_i q^i, a bijection onto [0, q^n) when it fits.
    std::uint64_t index_of(const Elem& a) const {
        std::uint64_t r = 0;
        for (unsigned i = n_; i-- > 0;) r = r * base_.q() + a[i];
        return r;
    }
    Elem from_index(std::uint64_t idx) const {
        Elem r(n_);
        for (unsigned i = 0; i < n_; ++i) {
            r[i] = static_cast<BaseField::Elem>(idx % base_.q());
            idx /= base_.q();
        }
        return r;
    }

    template <class Rng>
    Elem random(Rng& rng) const {
        Elem r(n_);
        for (auto& c : r) c = base_.random(rng);
        return r;
    }

    std::string to_string(const Elem& a) const {
        std::string out;
        for (unsigned i = n_; i-- > 0;) {
            if (!a[i]) continue;
            if (!out.empty()) out += " + ";
            const std::string c = base_.to_string(a[i]);
            const bool bare = (a[i] == 1 && i > 0);
            if (!bare) out += (base_.m() > 1 && i > 0) ? "(" + c + ")" : c;
            if (i > 0) {
                if (!bare) out += "*";
                out += "y";
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out.empty() ? "0" : out;
    }

    /// Canonical JSON for reproducibility manifests.
    std::string to_json() const {
        std::ostringstream os;
        auto list = [&](const std::vector<std::uint32_t>& v) {
            os << '[';
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
            os << ']';
        };
        os << "{\"p\":" << p() << ",\"m\":" << m() << ",\"n\":" << n_ << ",\"q\":" << q() << ",\"base_poly\":";
        list(base_.base_poly());
        os << ",\"ext_poly\":";
        list(ext_);
        os << ",\"generator\":";
        if (has_generator_)
            list(gen_);
        else
            os << "null";
        os << ",\"group_order\":\"" << group_order().get_str() << "\"}";
        return os.str();
    }

   private:
    void init_sizes() {
        size_ = ipow(base_.order(), n_);
    }

    // Lexicographic from the seed when the candidate space is small, otherwise seeded random
    // draws (a lexicographic walk can stall on binomials x^n + c that never split off).
    FqPoly find_irreducible(std::uint64_t seed) const {
        PolyRing<BaseField> R(base_);
        const BigInt count = ipow(base_.order(), n_);
        auto accept = [&](const FqPoly& f) { return !(n_ > 1 && f[0] == 0) && R.is_irreducible(f); };
        if (count <= (1u << 20)) {
            const std::uint64_t c = to_u64(count);
            for (std::uint64_t k = 0; k < c; ++k) {
                std::uint64_t idx = (seed + k) % c;
                FqPoly f(n_ + 1, 0);
                for (unsigned i = 0; i < n_; ++i) {
                    f[i] = static_cast<BaseField::Elem>(idx % base_.q());
                    idx /= base_.q();
                }
                f[n_] = 1;
                if (accept(f)) return f;
            }
            throw std::logic_error("FieldCtx: no irreducible polynomial found");
        }
        std::mt19937_64 rng(seed);
        for (;;) {
            FqPoly f(n_ + 1, 0);
            for (unsigned i = 0; i < n_; ++i) f[i] = base_.random(rng);
            f[n_] = 1;
            if (accept(f)) return f;
        }
    }

    void init_frobenius() {
        PolyRing<BaseField> R(base_);
        frob_.clear();
        if (n_ == 1) return;
        const FqPoly yq = R.powmod(R.x(), base_.order(), ext_);
        FqPoly cur = R.one();
        for (unsigned i = 0; i < n_; ++i) {
            Elem e(cur.begin(), cur.end());
            e.resize(n_, 0);
            frob_.push_back(e);
            cur = R.mulmod(cur, yq, ext_);
        }
    }

    void find_generator(std::uint64_t seed) {
        const BigInt N = group_order();
        const BigInt Q = size_;
        const std::uint64_t start = n_ > 1 ? base_.q() : 1;
        for (std::uint64_t k = 0;; ++k) {
            BigInt idxb = (BigInt(big(seed)) + big(k) + big(start)) % Q;
            if (!fits_u64(idxb)) continue;
            const std::uint64_t idx = to_u64(idxb);
            if (idx == 0) continue;
            Elem g = from_index(idx);
            bool ok = true;
            for (const auto& [s, e] : fact_.factors) {
                if (pow(g, BigInt(N / s)) == one()) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                gen_ = g;
                has_generator_ = true;
                return;
            }
        }
    }

    BaseField base_;
    unsigned n_ = 1;
    BigInt size_;
    FqPoly ext_;
    std::vector<Elem> frob_;
    Factorization fact_;
    Elem gen_;
    bool has_generator_ = false;
};

inline FieldCtx make_ctx(std::uint64_t p, unsigned m, unsigned n, std::uint64_t seed = 0, bool with_generator = true) {
    FieldOptions opt;
    opt.seed = seed;
    opt.with_generator = with_generator;
    return FieldCtx(p, m, n, opt);
}

}  // namespace rkpair

#endif  // RKPAIR_FFIELD_HPP
