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

#ifndef RKPAIR_SEARCH_HPP
#define RKPAIR_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rkpair/criteria.hpp"
#include "rkpair/elems.hpp"
#include "rkpair/ratfun.hpp"

namespace rkpair {

/// (r1, k1, r2, k2): alpha r1-primitive k1-normal, F(alpha) r2-primitive k2-normal.
struct PairParams {
    std::uint64_t r1 = 2, k1 = 2, r2 = 3, k2 = 1;
};

struct SearchOptions {
    std::uint64_t cap = 100'000'000;  // largest field size scanned
    unsigned threads = 1;
    std::uint64_t block = 1u << 12;  // exponents per work unit
    bool check_upsilon = true;
    int m1 = 2, m2 = 1;
    UpsilonField upsilon_field = UpsilonField::Fqn;
    // Fixed-divisor mode: Ord(alpha) = (x^n - 1)/f1 and Ord(F(alpha)) = (x^n - 1)/f2 instead of
    // "some divisor of degree k".
    std::optional<FqPoly> f1, f2;
};

struct PairWitness {
    std::uint64_t j = 0;  // alpha = gamma^j
    FieldCtx::Elem alpha, image;
    ElemProfile alpha_profile, image_profile;
    RatFunc F;
    PairParams params;
};

namespace detail {

inline void require_cap(const FieldCtx& L, std::uint64_t cap, const char* who) {
    if (L.order() > big(cap)) throw std::length_error(std::string(who) + ": field exceeds the enumeration cap");
}

inline std::uint64_t group_order_u64(const FieldCtx& L) { return to_u64(L.group_order()); }

/// Runs body(t0, t1) over blocks of [0, count), handed out in ascending order. Blocks that
/// start at or past `bound` are skipped, so a found minimum stops the scan.
template <class Body>
void for_blocks(std::uint64_t count, std::uint64_t block, unsigned threads, Body body,
                const std::atomic<std::uint64_t>* bound = nullptr) {
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            const std::uint64_t t0 = b * block;
            if (t0 >= count) return;
            if (bound && t0 >= bound->load()) return;
            body(t0, std::min(count, t0 + block));
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

inline bool ord_matches(const Classifier& C, const FieldCtx::Elem& a, std::uint64_t k, const std::optional<FqPoly>& f) {
    const FqPoly ord = C.fq_order(a);
    if (f) return ord == C.ring().div(C.xn_minus_1(), *f);
    return C.field().n() - (ord.size() - 1) == k;
}

}  // namespace detail

/// F1(alpha) F2(alpha) != 0.
inline bool outside_exceptional(const FieldCtx& L, const RatFunc& F, const FieldCtx::Elem& a) {
    const PolyRing<FieldCtx> R(L);
    return !L.is_zero(R.eval(F.num, a)) && !L.is_zero(R.eval(F.den, a));
}

/// Re-checks every witness invariant by routes independent of the scan: mult orders by
/// exponentiation, normality by the gcd route, the image by direct evaluation.
/// Returns the first failed condition, or nothing.
inline std::optional<std::string> certify(const Classifier& C, const PairWitness& w) {
    const FieldCtx& L = C.field();
    const BigInt N = L.group_order();
    if (L.is_zero(w.alpha)) return "alpha is zero";
    if (!L.eq(L.pow(L.generator(), big(w.j)), w.alpha)) return "alpha != gamma^j";
    if (!outside_exceptional(L, w.F, w.alpha)) return "alpha in S_F";
    if (!L.eq(evaluate(L, w.F, w.alpha), w.image)) return "image != F(alpha)";
    if (!is_r_primitive(L, w.alpha, big(w.params.r1))) return "alpha not r1-primitive";
    if (!is_r_primitive(L, w.image, big(w.params.r2))) return "image not r2-primitive";
    if (C.normality_k(w.alpha) != w.params.k1) return "alpha not k1-normal";
    if (C.normality_k(w.image) != w.params.k2) return "image not k2-normal";
    if (w.alpha_profile.element != w.alpha || w.image_profile.element != w.image) return "profile element mismatch";
    if (w.alpha_profile.mult_order != N / w.params.r1 || w.image_profile.mult_order != N / w.params.r2)
        return "profile order mismatch";
    if (w.alpha_profile.k != w.params.k1 || w.image_profile.k != w.params.k2) return "profile k mismatch";
    return std::nullopt;
}

/// First alpha = gamma^j (j ascending) with the pair property; nothing if none exists.
/// Throws std::invalid_argument when F is outside the admissible class (unless waived) and
/// std::length_error above the cap.
inline std::optional<PairWitness> find_witness(const Classifier& C, const RatFunc& F, const PairParams& P,
                                               const SearchOptions& opt = {}) {
    const FieldCtx& L = C.field();
    detail::require_cap(L, opt.cap, "find_witness");
    if (!L.has_generator()) throw std::invalid_argument("find_witness: the field needs a generator");
    if (opt.check_upsilon) {
        const auto u = in_upsilon(L, F, opt.m1, opt.m2, opt.upsilon_field);
        if (!u.member) throw std::invalid_argument("find_witness: F not admissible (" + u.reason + ")");
    }
    const std::uint64_t N = detail::group_order_u64(L);
    if (P.r1 == 0 || P.r2 == 0 || N % P.r1 || N % P.r2) return std::nullopt;  // no r-primitive elements
    const std::uint64_t M1 = N / P.r1, M2 = N / P.r2;
    const BigInt bM2 = big(M2);
    // alpha = (gamma^r1)^t with gcd(t, M1) = 1 are exactly the r1-primitive elements
    const auto step = L.pow(L.generator(), big(P.r1));
    std::vector<std::uint64_t> m2_primes;
    for (const auto& [s, e] : L.group_order_fact().factors)
        if (bM2 % s == 0) m2_primes.push_back(to_u64(s));

    auto r2_primitive = [&](const FieldCtx::Elem& b) {
        if (L.is_zero(b) || !L.eq(L.pow(b, M2), L.one())) return false;
        for (auto s : m2_primes)
            if (L.eq(L.pow(b, M2 / s), L.one())) return false;
        return true;
    };

    std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
    detail::for_blocks(
        M1, opt.block, opt.threads,
        [&](std::uint64_t t0, std::uint64_t t1) {
            auto a = L.pow(step, big(t0));
            for (std::uint64_t t = t0; t < t1; ++t, a = L.mul(a, step)) {
                if (t >= best.load()) return;
                if (std::gcd(t, M1) != 1) continue;
                if (!outside_exceptional(L, F, a)) continue;
                const auto b = evaluate(L, F, a);
                if (!r2_primitive(b)) continue;
                if (!detail::ord_matches(C, a, P.k1, opt.f1) || !detail::ord_matches(C, b, P.k2, opt.f2)) continue;
                std::uint64_t cur = best.load();
                while (t < cur && !best.compare_exchange_weak(cur, t)) {
                }
                return;
            }
        },
        &best);
    if (best.load() == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;

    PairWitness w;
    w.j = best.load() * P.r1;
    w.alpha = L.pow(L.generator(), big(w.j));
    w.image = evaluate(L, F, w.alpha);
    w.alpha_profile = profile(C, w.alpha);
    w.image_profile = profile(C, w.image);
    w.F = F;
    w.params = P;
    if (auto bad = certify(C, w)) throw std::logic_error("find_witness: certificate failed: " + *bad);
    return w;
}

/// counts[k] = #{alpha r-primitive with k-normality k}, k = 0..n. The sum is phi((q^n - 1)/r).
inline std::vector<std::uint64_t> count_class_profile(const Classifier& C, std::uint64_t r, const SearchOptions& opt = {}) {
    const FieldCtx& L = C.field();
    detail::require_cap(L, opt.cap, "count_class");
    if (!L.has_generator()) throw std::invalid_argument("count_class: the field needs a generator");
    const std::uint64_t N = detail::group_order_u64(L);
    if (r == 0 || N % r) throw std::invalid_argument("count_class: r must divide q^n - 1");
    const std::uint64_t M = N / r;
    const auto step = L.pow(L.generator(), big(r));
    std::vector<std::uint64_t> total(L.n() + 1, 0);
    std::mutex mu;
    detail::for_blocks(M, opt.block, opt.threads, [&](std::uint64_t t0, std::uint64_t t1) {
        std::vector<std::uint64_t> local(L.n() + 1, 0);
        auto a = L.pow(step, big(t0));
        for (std::uint64_t t = t0; t < t1; ++t, a = L.mul(a, step)) {
            if (std::gcd(t, M) != 1) continue;
            ++local[L.n() - (C.fq_order(a).size() - 1)];
        }
        std::lock_guard lk(mu);
        for (std::size_t k = 0; k < local.size(); ++k) total[k] += local[k];
    });
    return total;
}

inline std::uint64_t count_class(const Classifier& C, std::uint64_t r, std::uint64_t k, const SearchOptions& opt = {}) {
    if (k > C.field().n()) return 0;
    return count_class_profile(C, r, opt)[k];
}

/// Arguments of the triple count N_F(R1, R2, g1, g2) with fixed f1, f2.
struct TripleParams {
    BigInt R1 = 1, r1 = 1, R2 = 1, r2 = 1;
    FqPoly g1{1}, g2{1}, f1{1}, f2{1};
};

/// #{(alpha, beta1, beta2)}: alpha not in S_F, alpha (R1, r1)-free, F(alpha) (R2, r2)-free,
/// beta_i g_i-free, alpha = f1 o beta1, F(alpha) = f2 o beta2.
inline BigInt count_triples(const Classifier& C, const RatFunc& F, const TripleParams& T, std::uint64_t cap = 1'000'000) {
    const FieldCtx& L = C.field();
    detail::require_cap(L, cap, "count_triples");
    const auto& R = C.ring();
    for (const auto* f : {&T.g1, &T.g2, &T.f1, &T.f2})
        if (!R.divides(*f, C.xn_minus_1())) throw std::invalid_argument("count_triples: g_i, f_i must divide x^n - 1");
    const BigInt N = L.group_order();
    for (auto [Rr, rr] : {std::pair{&T.R1, &T.r1}, std::pair{&T.R2, &T.r2}})
        if (*rr <= 0 || *Rr <= 0 || N % *rr != 0 || (N / *rr) % *Rr != 0)
            throw std::invalid_argument("count_triples: need r_i | q^n - 1 and R_i | (q^n - 1)/r_i");
    const std::uint64_t size = L.size_u64();

    // hist_i[v] = #{beta g_i-free : f_i o beta = v}
    std::vector<std::uint32_t> h1(size, 0), h2(size, 0);
    for (std::uint64_t i = 0; i < size; ++i) {
        const auto beta = L.from_index(i);
        const auto conj = L.conjugates(beta);
        if (C.is_g_free(beta, T.g1)) ++h1[L.index_of(C.act(T.f1, conj))];
        if (C.is_g_free(beta, T.g2)) ++h2[L.index_of(C.act(T.f2, conj))];
    }

    auto Rr_free = [&](const BigInt& Rv, const BigInt& rv) {
        std::vector<BigInt> ex;
        const BigInt Nr = N / rv;
        const auto fr = factor_integer(Rv);
        require_complete(fr, "count_triples");
        for (const auto& [s, e] : fr.factors) ex.push_back(Nr / s);
        return [&L, Nr, ex](const FieldCtx::Elem& a) {
            if (L.is_zero(a) || !L.eq(L.pow(a, Nr), L.one())) return false;
            for (const auto& e : ex)
                if (L.eq(L.pow(a, e), L.one())) return false;
            return true;
        };
    };
    const auto free1 = Rr_free(T.R1, T.r1), free2 = Rr_free(T.R2, T.r2);

    BigInt total = 0;
    for (std::uint64_t i = 1; i < size; ++i) {
        const auto a = L.from_index(i);
        if (!h1[i] || !outside_exceptional(L, F, a) || !free1(a)) continue;
        const auto b = evaluate(L, F, a);
        const auto n2 = h2[L.index_of(b)];
        if (!n2 || !free2(b)) continue;
        total += BigInt(static_cast<unsigned long>(h1[i])) * static_cast<unsigned long>(n2);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Test family

struct FamilyMember {
    std::string name;  // family label
    RatFunc F;
    UpsilonResult membership;
};

/// x(x+1), (x^2+1)/(x+c) for the first admissible c, (x^2+ax+1)/(x+1); each checked for
/// membership in the class with (m1, m2) = (2, 1). c runs over 0, 1, ..., p-1, then a, a^2, ...
inline std::vector<FamilyMember> test_family(const FieldCtx& L, UpsilonField mode = UpsilonField::Fqn) {
    std::vector<FamilyMember> out;
    auto add = [&](std::string name, const std::string& text) {
        auto F = RatFunc::parse(L, text);
        auto m = in_upsilon(L, F, 2, 1, mode);
        out.push_back({std::move(name), std::move(F), std::move(m)});
    };
    add("x(x+1)", "x*(x+1)");
    {
        std::vector<std::string> cs;
        for (std::uint64_t c = 0; c < L.p(); ++c) cs.push_back(std::to_string(c));
        if (L.has_generator() || L.n() * L.m() > 1)
            for (unsigned e = 1; e <= std::min<unsigned>(64, static_cast<unsigned>(L.size_u64())); ++e)
                cs.push_back("a^" + std::to_string(e));
        bool found = false;
        for (const auto& c : cs) {
            const std::string text = "(x^2+1)/(x+" + c + ")";
            auto F = RatFunc::parse(L, text);
            auto m = in_upsilon(L, F, 2, 1, mode);
            if (m.member) {
                out.push_back({"(x^2+1)/(x+c)", std::move(F), std::move(m)});
                found = true;
                break;
            }
        }
        if (!found) {
            auto F = RatFunc::parse(L, "(x^2+1)/(x+0)");
            UpsilonResult m;
            m.reason = "no admissible c";
            out.push_back({"(x^2+1)/(x+c)", std::move(F), std::move(m)});
        }
    }
    add("(x^2+ax+1)/(x+1)", "(x^2+a*x+1)/(x+1)");
    return out;
}

// ---------------------------------------------------------------------------
// Existence table

struct ExistenceEntry {
    std::string F;
    bool admissible = false;
    std::optional<std::uint64_t> j;  // witness exponent when found
};

struct ExistenceCell {
    std::uint64_t q = 0, n = 0;
    bool condition = false;        // 6 | q^n - 1 and gcd(q^3 - q, n) != 1
    std::vector<ExistenceEntry> entries;
    bool covered = false;          // the biconditional is claimed for n >= 8
    bool consistent = true;        // condition <=> witness for every admissible F
    bool violation = false;        // covered and inconsistent
};

/// One cell per (q, n); the family is built per field. An empty family gives an empty table.
inline std::vector<ExistenceCell> existence_table(
    const std::vector<std::uint64_t>& qs, const std::vector<std::uint64_t>& ns,
    const std::function<std::vector<FamilyMember>(const FieldCtx&)>& family, const PairParams& P,
    const SearchOptions& opt = {}) {
    std::vector<ExistenceCell> out;
    if (!family) return out;
    for (auto n : ns)
        for (auto q : qs) {
            const FieldCtx L(BaseField::from_q(q), static_cast<unsigned>(n));
            const auto fam = family(L);
            if (fam.empty()) continue;
            const Classifier C(L);
            ExistenceCell cell;
            cell.q = q;
            cell.n = n;
            cell.condition = condition_qn(q, n);
            cell.covered = n >= 8;
            SearchOptions o = opt;
            o.check_upsilon = false;
            for (const auto& m : fam) {
                ExistenceEntry e;
                e.F = ratfunc_to_string(L, m.F);
                e.admissible = m.membership.member;
                if (e.admissible) {
                    if (auto w = find_witness(C, m.F, P, o)) e.j = w->j;
                    if (e.j.has_value() != cell.condition) cell.consistent = false;
                }
                cell.entries.push_back(std::move(e));
            }
            cell.violation = cell.covered && !cell.consistent;
            out.push_back(std::move(cell));
        }
    return out;
}

}  // namespace rkpair

#endif  // RKPAIR_SEARCH_HPP
