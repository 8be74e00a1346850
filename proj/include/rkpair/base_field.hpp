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

#ifndef RKPAIR_BASE_FIELD_HPP
#define RKPAIR_BASE_FIELD_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkpair/intnt.hpp"

namespace rkpair {

/// F_q with q = p^m. Elements are codes in [0, q): the residue itself when m = 1,
/// otherwise the base-p digits of the coordinate vector over F_p[t]/(base_poly).
/// For m > 1 the base polynomial is primitive and multiplication goes through
/// exp/log tables, so q is capped at 2^22.
class BaseField {
   public:
    using Elem = std::uint32_t;
    static constexpr std::uint64_t kMaxTableOrder = 1u << 22;

    BaseField() : BaseField(2, 1, 0) {}

    BaseField(std::uint64_t p, unsigned m = 1, std::uint64_t seed = 0) : p_(p), m_(m) {
        if (!is_prime_u64(p)) throw std::invalid_argument("BaseField: p must be prime");
        if (m == 0) throw std::invalid_argument("BaseField: m must be positive");
        if (m == 1) {
            if (p > 0xFFFFFFFFull) throw std::invalid_argument("BaseField: p must be below 2^32");
            q_ = p;
            base_poly_ = {0, 1};
            return;
        }
        unsigned __int128 q = 1;
        for (unsigned i = 0; i < m; ++i) {
            q *= p;
            if (q > kMaxTableOrder) throw std::invalid_argument("BaseField: p^m too large for table arithmetic");
        }
        q_ = static_cast<std::uint64_t>(q);
        tables_ = std::make_shared<Tables>();
        find_primitive_poly(seed);
    }

    static BaseField from_q(std::uint64_t q, std::uint64_t seed = 0) {
        auto [p, m] = prime_power_decompose(q);
        if (p == 0) throw std::invalid_argument("BaseField: q must be a prime power");
        return BaseField(p, m, seed);
    }

    std::uint64_t p() const { return p_; }
    unsigned m() const { return m_; }
    std::uint64_t q() const { return q_; }
    std::uint64_t characteristic() const { return p_; }
    unsigned prime_degree() const { return m_; }
    BigInt order() const { return big(q_); }
    /// Coefficients of the defining polynomial over F_p, low degree first.
    const std::vector<std::uint32_t>& base_poly() const { return base_poly_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    Elem from_int(std::int64_t v) const {
        const auto pp = static_cast<std::int64_t>(p_);
        std::int64_t r = v % pp;
        if (r < 0) r += pp;
        return static_cast<Elem>(r);
    }

    /// Root of the base polynomial (m > 1); it generates F_q^*.
    Elem symbol_a() const {
        if (m_ == 1) throw std::invalid_argument("prime field has no generator symbol");
        return static_cast<Elem>(p_);
    }

    Elem add(Elem a, Elem b) const {
        if (m_ == 1) {
            const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
            return static_cast<Elem>(s >= p_ ? s - p_ : s);
        }
        if (p_ == 2) return a ^ b;
        Elem r = 0, w = 1;
        for (unsigned i = 0; i < m_; ++i) {
            const Elem s = static_cast<Elem>((a % p_ + b % p_) % p_);
            r += s * w;
            w *= static_cast<Elem>(p_);
            a /= static_cast<Elem>(p_);
            b /= static_cast<Elem>(p_);
        }
        return r;
    }

    Elem neg(Elem a) const {
        if (m_ == 1) return a == 0 ? 0 : static_cast<Elem>(p_ - a);
        if (p_ == 2) return a;
        Elem r = 0, w = 1;
        for (unsigned i = 0; i < m_; ++i) {
            const Elem d = static_cast<Elem>(a % p_);
            r += static_cast<Elem>((p_ - d) % p_) * w;
            w *= static_cast<Elem>(p_);
            a /= static_cast<Elem>(p_);
        }
        return r;
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const {
        if (m_ == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
        if (a == 0 || b == 0) return 0;
        const std::uint64_t s = static_cast<std::uint64_t>(tables_->log[a]) + tables_->log[b];
        return tables_->exp[s % (q_ - 1)];
    }

    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("BaseField: inverse of zero");
        if (m_ == 1) return pow(a, p_ - 2);
        const std::uint64_t l = tables_->log[a];
        return tables_->exp[(q_ - 1 - l) % (q_ - 1)];
    }

    template <class Rng>
    Elem random(Rng& rng) const {
        return static_cast<Elem>(std::uniform_int_distribution<std::uint64_t>(0, q_ - 1)(rng));
    }

    /// Inverse Frobenius a -> a^(1/p).
    Elem pth_root(Elem a) const { return m_ == 1 ? a : pow(a, q_ / p_); }

    /// Coordinates over F_p (m entries).
    std::vector<std::uint32_t> digits(Elem a) const {
        std::vector<std::uint32_t> d(m_);
        for (unsigned i = 0; i < m_; ++i) {
            d[i] = static_cast<std::uint32_t>(a % p_);
            a /= static_cast<Elem>(p_);
        }
        return d;
    }

    Elem from_digits(const std::vector<std::uint32_t>& d) const {
        Elem r = 0, w = 1;
        for (unsigned i = 0; i < m_; ++i) {
            r += static_cast<Elem>(i < d.size() ? d[i] % p_ : 0) * w;
            w *= static_cast<Elem>(p_);
        }
        return r;
    }

    /// Absolute trace F_q -> F_p.
    std::uint32_t trace(Elem a) const {
        if (m_ == 1) return a;
        Elem s = 0, c = a;
        for (unsigned i = 0; i < m_; ++i) {
            s = add(s, c);
            c = pow(c, p_);
        }
        return digits(s)[0];
    }

    std::string to_string(Elem a) const {
        if (m_ == 1) return std::to_string(a);
        // a-polynomial, highest power first
        const auto d = digits(a);
        std::string out;
        for (unsigned i = m_; i-- > 0;) {
            if (d[i] == 0) continue;
            if (!out.empty()) out += "+";
            if (i == 0 || d[i] != 1) out += std::to_string(d[i]);
            if (i > 0) {
                if (d[i] != 1) out += "*";
                out += "a";
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out.empty() ? "0" : out;
    }

    bool operator==(const BaseField& o) const { return p_ == o.p_ && m_ == o.m_ && base_poly_ == o.base_poly_; }

   private:
    struct Tables {
        std::vector<std::uint32_t> exp;
        std::vector<std::uint32_t> log;
    };

    // Seeded lexicographic search for a primitive polynomial: t has order q - 1 modulo it.
    void find_primitive_poly(std::uint64_t seed) {
        const std::uint64_t count = q_;  // lower coefficient vectors
        for (std::uint64_t k = 0; k < count; ++k) {
            std::uint64_t idx = (seed + k) % count;
            std::vector<std::uint32_t> f(m_ + 1);
            for (unsigned i = 0; i < m_; ++i) {
                f[i] = static_cast<std::uint32_t>(idx % p_);
                idx /= p_;
            }
            f[m_] = 1;
            if (f[0] == 0) continue;
            if (try_primitive(f)) {
                base_poly_ = f;
                return;
            }
        }
        throw std::logic_error("BaseField: no primitive polynomial found");
    }

    bool try_primitive(const std::vector<std::uint32_t>& f) {
        auto& t = *tables_;
        t.exp.assign(q_ - 1, 0);
        t.log.assign(q_, 0);
        std::vector<std::uint32_t> cur(m_, 0);
        cur[0] = 1;
        std::vector<bool> seen(q_, false);
        for (std::uint64_t k = 0; k + 1 < q_; ++k) {
            Elem code = 0, w = 1;
            for (unsigned i = 0; i < m_; ++i) {
                code += cur[i] * w;
                w *= static_cast<Elem>(p_);
            }
            if (seen[code]) return false;
            seen[code] = true;
            t.exp[k] = code;
            t.log[code] = static_cast<std::uint32_t>(k);
            // multiply by t modulo f
            const std::uint32_t top = cur[m_ - 1];
            for (unsigned i = m_ - 1; i > 0; --i) cur[i] = cur[i - 1];
            cur[0] = 0;
            if (top) {
                for (unsigned i = 0; i < m_; ++i)
                    cur[i] = static_cast<std::uint32_t>((cur[i] + (p_ - (static_cast<std::uint64_t>(top) * f[i]) % p_)) % p_);
            }
        }
        return cur[0] == 1 && std::all_of(cur.begin() + 1, cur.end(), [](std::uint32_t v) { return v == 0; });
    }

    std::uint64_t p_;
    unsigned m_;
    std::uint64_t q_ = 0;
    std::vector<std::uint32_t> base_poly_;
    std::shared_ptr<Tables> tables_;
};

}  // namespace rkpair

#endif  // RKPAIR_BASE_FIELD_HPP
