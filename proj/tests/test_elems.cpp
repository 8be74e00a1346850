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

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "rkpair/elems.hpp"

using namespace rkpair;

namespace {

// F_q-dimension of span{alpha^(q^i)} by Gaussian elimination; k = n - rank.
unsigned rank_k(const FieldCtx& L, const FieldCtx::Elem& alpha) {
    const BaseField& F = L.base();
    auto rows = L.conjugates(alpha);
    const unsigned n = L.n();
    unsigned rank = 0;
    for (unsigned col = 0; col < n && rank < n; ++col) {
        unsigned piv = rank;
        while (piv < n && rows[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(rows[piv], rows[rank]);
        const auto inv = F.inv(rows[rank][col]);
        for (unsigned r = 0; r < n; ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            const auto c = F.mul(rows[r][col], inv);
            for (unsigned j = 0; j < n; ++j) rows[r][j] = F.sub(rows[r][j], F.mul(c, rows[rank][j]));
        }
        ++rank;
    }
    return n - rank;
}

struct QN {
    std::uint64_t q;
    unsigned n;
};

std::vector<QN> small_grid() {
    std::vector<QN> out;
    for (std::uint64_t q = 2; q <= 49; ++q) {
        if (!oracle::prime_power(q).first) continue;
        std::uint64_t v = q;
        for (unsigned n = 1; v <= 2401; ++n, v *= q) out.push_back({q, n});
    }
    return out;
}

}  // namespace

TEST(Elems, AdditiveActionBasics) {
    FieldCtx L(5, 1, 4);
    Classifier C(L);
    const auto& R = C.ring();
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        auto a = L.random(rng), b = L.random(rng);
        EXPECT_TRUE(L.is_zero(C.additive_action(C.xn_minus_1(), a)));
        EXPECT_EQ(C.additive_action(R.x(), a), L.pow(a, 5));
        EXPECT_EQ(C.additive_action(R.from_ints({-1, 1}), a), L.sub(L.pow(a, 5), a));
        auto f = R.from_ints({1, 2, 0, 3}), g = R.from_ints({4, 1});
        EXPECT_EQ(C.additive_action(R.mul(f, g), a), C.additive_action(f, C.additive_action(g, a)));
        EXPECT_EQ(C.additive_action(f, L.add(a, b)), L.add(C.additive_action(f, a), C.additive_action(f, b)));
    }
}

// Dual-route k-normality, dual-route g-freeness and the rank oracle on every element of every field up to 2401.
TEST(Elems, DualRoutesExhaustive) {
    for (auto [q, n] : small_grid()) {
        FieldCtx L(BaseField::from_q(q), n);
        Classifier C(L);
        auto divs = divisors(L.base(), C.xn1_factors());
        std::map<FqPoly, std::uint64_t> ord_count;
        for (std::uint64_t idx = 0; idx < L.size_u64(); ++idx) {
            auto a = L.from_index(idx);
            auto ord = C.fq_order(a);
            const unsigned k = n - static_cast<unsigned>(ord.size() - 1);
            ASSERT_EQ(C.normality_k(a), k) << q << "^" << n << " idx " << idx;
            ASSERT_EQ(rank_k(L, a), k);
            ++ord_count[ord];
            for (const auto& d : divs) ASSERT_EQ(C.is_g_free(a, d.poly), C.is_g_free_direct(a, d.poly));
        }
        std::uint64_t total = 0;
        for (const auto& d : divs) {
            const std::uint64_t c = ord_count.count(d.poly) ? ord_count[d.poly] : 0;
            EXPECT_EQ(big(c), poly_phi(L.base(), d.factors)) << q << "^" << n;
            total += c;
        }
        EXPECT_EQ(total, L.size_u64());
    }
}

TEST(Elems, RPrimitiveCountsExhaustive) {
    for (auto [q, n] : small_grid()) {
        FieldCtx L(BaseField::from_q(q), n);
        const std::uint64_t N = L.size_u64() - 1;
        std::map<std::uint64_t, std::uint64_t> by_order;
        for (std::uint64_t idx = 1; idx < L.size_u64(); ++idx) ++by_order[to_u64(L.mult_order(L.from_index(idx)))];
        for (std::uint64_t r : divisors_u64(N)) {
            EXPECT_EQ(by_order[N / r], oracle::phi(N / r));
            // r-primitive <=> ((N/r), r)-free, on a sample of elements
            for (std::uint64_t idx = 1; idx < L.size_u64(); idx += 1 + L.size_u64() / 40) {
                auto a = L.from_index(idx);
                EXPECT_EQ(is_r_primitive(L, a, big(r)), is_Rr_free(L, a, big(N / r), big(r)));
            }
        }
    }
}

// (R, r)-freeness against the definition: membership in C_r and no s-th root within C_r.
TEST(Elems, RrFreeMatchesDefinition) {
    for (auto [q, n] : std::vector<QN>{{7, 2}, {5, 2}, {3, 4}, {3, 2}}) {
        FieldCtx L(BaseField::from_q(q), n);
        const std::uint64_t N = L.size_u64() - 1;
        std::vector<FieldCtx::Elem> all;
        for (std::uint64_t i = 1; i <= N; ++i) all.push_back(L.from_index(i));
        for (std::uint64_t r : divisors_u64(N)) {
            std::vector<FieldCtx::Elem> Cr;
            for (const auto& b : all)
                if (L.eq(L.pow(b, N / r), L.one())) Cr.push_back(b);
            ASSERT_EQ(Cr.size(), N / r);
            for (std::uint64_t R : divisors_u64(N / r)) {
                if (oracle::omega(R) > 3) continue;
                for (const auto& a : all) {
                    bool in = false;
                    for (const auto& b : Cr) in = in || L.eq(a, b);
                    bool free = in;
                    for (std::uint64_t s : divisors_u64(R)) {
                        if (s == 1 || !free) continue;
                        for (const auto& b : Cr)
                            if (L.eq(L.pow(b, s), a)) free = false;
                    }
                    ASSERT_EQ(is_Rr_free(L, a, big(R), big(r)), free) << q << "^" << n << " R=" << R << " r=" << r;
                }
            }
        }
    }
}

TEST(Elems, NoTwoNormalInF5to7) {
    FieldCtx L(5, 1, 7);
    Classifier C(L);
    for (std::uint64_t idx = 0; idx < L.size_u64(); ++idx) ASSERT_NE(C.fq_order(L.from_index(idx)).size(), 6u);
}

TEST(Elems, KNormalConstructions) {
    FieldCtx L(5, 1, 8);
    Classifier C(L);
    const auto& R = C.ring();
    auto beta = find_normal(C, 3);
    EXPECT_EQ(C.normality_k(beta), 0u);
    EXPECT_EQ(C.normality_k(construct_k_normal(C, R.one(), beta)), 0u);
    EXPECT_EQ(C.normality_k(construct_k_normal(C, R.from_ints({-1, 1}), beta)), 1u);
    EXPECT_EQ(C.normality_k(construct_k_normal(C, R.from_ints({-1, 0, 1}), beta)), 2u);
    EXPECT_THROW(construct_k_normal(C, R.one(), L.one()), std::invalid_argument);
    // gamma^r is r-primitive
    const BigInt N = L.group_order();
    for (unsigned long r : {1ul, 2ul, 3ul, 4ul, 13ul}) EXPECT_TRUE(is_r_primitive(L, L.pow(L.generator(), r), big(r)));
    EXPECT_TRUE(is_Rr_free(L, L.one(), big(1), N));
    EXPECT_FALSE(is_Rr_free(L, L.one(), big(2), N / 2));
    auto p0 = profile(C, L.zero());
    EXPECT_EQ(p0.k, 8u);
    EXPECT_EQ(p0.mult_order, 0);
    auto p1 = profile(C, L.from_int(3));
    EXPECT_EQ(p1.k, 7u);
}
