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

#include <random>
#include <set>

#include "oracles.hpp"
#include "rkpair/ffield.hpp"

using namespace rkpair;

namespace {

// Naive product of coefficient vectors over F_p modulo a monic f.
std::vector<std::uint32_t> naive_mulmod(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                        const std::vector<std::uint32_t>& f, std::uint64_t p) {
    const std::size_t n = f.size() - 1;
    std::vector<std::uint64_t> t(2 * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[i + j] = (t[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
    for (std::size_t k = 2 * n - 1; k >= n; --k) {
        const std::uint64_t c = t[k];
        if (!c) continue;
        t[k] = 0;
        for (std::size_t i = 0; i < n; ++i) t[k - n + i] = (t[k - n + i] + (p - c) * f[i]) % p;
    }
    return {t.begin(), t.begin() + static_cast<long>(n)};
}

}  // namespace

TEST(BaseField, AxiomsExhaustive) {
    for (std::uint64_t q : {2ull, 3ull, 4ull, 8ull, 9ull, 16ull, 25ull, 27ull, 32ull, 49ull}) {
        auto F = BaseField::from_q(q);
        std::set<std::uint32_t> units;
        for (std::uint32_t a = 0; a < q; ++a) {
            EXPECT_EQ(F.add(a, F.neg(a)), 0u);
            EXPECT_EQ(F.mul(a, 1), a);
            if (a) { EXPECT_EQ(F.mul(a, F.inv(a)), 1u); }
            EXPECT_EQ(F.pow(a, q), a);                 // Frobenius fixes F_q
            EXPECT_EQ(F.pow(F.pth_root(a), F.p()), a);
            for (std::uint32_t b = 0; b < q; ++b) {
                EXPECT_EQ(F.add(a, b), F.add(b, a));
                EXPECT_EQ(F.mul(a, b), F.mul(b, a));
                std::uint32_t c = (a * 7 + b * 3) % q;
                EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
            }
        }
        // symbol a has order q - 1
        if (F.m() > 1) {
            std::uint32_t x = F.symbol_a();
            std::uint64_t k = 1;
            while (x != 1) {
                x = F.mul(x, F.symbol_a());
                ++k;
            }
            EXPECT_EQ(k, q - 1);
        }
    }
}

TEST(FieldCtx, MatchesNaiveArithmetic) {
    std::mt19937_64 rng(11);
    for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 5}, {3, 4}, {5, 3}, {7, 2}, {101, 3}, {2, 12}}) {
        FieldCtx L(p, 1, n);
        std::vector<std::uint32_t> f(L.ext_poly().begin(), L.ext_poly().end());
        for (int t = 0; t < 200; ++t) {
            auto a = L.random(rng), b = L.random(rng);
            auto want = naive_mulmod(a, b, f, p);
            EXPECT_EQ(L.mul(a, b), want);
            if (!L.is_zero(a)) { EXPECT_EQ(L.mul(a, L.inv(a)), L.one()); }
        }
    }
}

TEST(FieldCtx, GeneratorFrobeniusTraceDlog) {
    for (auto [q, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 6}, {3, 4}, {4, 3}, {5, 2}, {9, 2}, {8, 2}, {7, 3}}) {
        auto F = BaseField::from_q(q);
        FieldCtx L(F, n);
        const std::uint64_t N = L.size_u64() - 1;
        // generator has full order by brute-force stepping
        auto x = L.generator();
        std::uint64_t k = 1;
        std::set<std::uint64_t> seen;
        while (!L.eq(x, L.one())) {
            seen.insert(L.index_of(x));
            x = L.mul(x, L.generator());
            ++k;
        }
        EXPECT_EQ(k, N);
        EXPECT_EQ(L.mult_order(L.generator()), big(N));
        auto g = L.one();
        for (std::uint64_t e = 0; e < N; ++e) {
            EXPECT_EQ(L.dlog(g), big(e));
            EXPECT_EQ(L.frobenius(g), L.pow(g, q));
            auto s = L.zero();
            for (const auto& c : L.conjugates(g)) s = L.add(s, c);
            EXPECT_TRUE(L.in_base(s));
            EXPECT_EQ(s[0], L.trace_to_base(g));
            EXPECT_EQ(L.from_index(L.index_of(g)), g);
            g = L.mul(g, L.generator());
        }
    }
}

TEST(FieldCtx, LargeFieldBasics) {
    FieldCtx L(1'000'000'007ull, 1, 7);
    std::mt19937_64 rng(3);
    auto a = L.random(rng);
    EXPECT_EQ(L.pow(a, L.order()), a);
    EXPECT_EQ(L.mult_order(L.generator()), L.group_order());
    EXPECT_TRUE(L.group_order_fact().complete());
}

TEST(FieldCtx, SeedChangesModulusDeterministically) {
    FieldCtx A(3, 1, 5, {.seed = 0}), B(3, 1, 5, {.seed = 0}), C(3, 1, 5, {.seed = 17});
    EXPECT_EQ(A.ext_poly(), B.ext_poly());
    EXPECT_EQ(A.to_json(), B.to_json());
    EXPECT_EQ(C.to_json(), FieldCtx(3, 1, 5, {.seed = 17}).to_json());
}
