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

#include "oracles.hpp"
#include "rkpair/fqpoly.hpp"

using namespace rkpair;

namespace {

// Irreducibility by trial division with every monic polynomial of degree <= deg/2.
bool brute_irreducible(const BaseField& F, const FqPoly& f) {
    PolyRing<BaseField> R(F);
    const int d = R.deg(f);
    if (d <= 0) return false;
    for (int k = 1; 2 * k <= d; ++k) {
        std::uint64_t count = 1;
        for (int i = 0; i < k; ++i) count *= F.q();
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            FqPoly g(static_cast<std::size_t>(k) + 1, 0);
            std::uint64_t v = idx;
            for (int i = 0; i < k; ++i) {
                g[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v % F.q());
                v /= F.q();
            }
            g[static_cast<std::size_t>(k)] = 1;
            if (R.divides(g, f)) return false;
        }
    }
    return true;
}

// Degree census from orders of q on Z/n0, by brute-force orbit enumeration.
std::map<std::uint64_t, std::uint64_t> brute_degrees(std::uint64_t q, std::uint64_t n, std::uint64_t p) {
    while (n % p == 0) n /= p;
    std::map<std::uint64_t, std::uint64_t> out;
    std::vector<bool> seen(n, false);
    for (std::uint64_t u = 0; u < n; ++u) {
        if (seen[u]) continue;
        std::uint64_t v = u, len = 0;
        do {
            seen[v] = true;
            v = v * (q % n) % n;
            ++len;
        } while (v != u);
        ++out[len];
    }
    return out;
}

}  // namespace

TEST(XnDegrees, MatchOrbitCensus) {
    for (std::uint64_t q = 2; q < 200; ++q) {
        auto [p, m] = oracle::prime_power(q);
        if (!p) continue;
        for (std::uint64_t n = 1; n <= 200; ++n) {
            auto d = xn1_factor_degrees(q, n);
            EXPECT_EQ(d.count_by_degree, brute_degrees(q, n, p)) << q << " " << n;
            std::uint64_t total = 0;
            for (auto [deg, c] : d.count_by_degree) total += deg * c;
            EXPECT_EQ(total * d.multiplicity, n);
        }
    }
}

TEST(FactorXn1, SmallFieldsIrreducibleAndComplete) {
    for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 8ull, 9ull, 16ull}) {
        auto F = BaseField::from_q(q);
        PolyRing<BaseField> R(F);
        for (std::uint64_t n = 1; n <= 24; ++n) {
            auto fl = factor_xn_minus_1(F, n);
            EXPECT_TRUE(R.eq(expand(F, fl), R.xn_minus_1(n))) << q << " " << n;
            auto degs = xn1_factor_degrees(q, n);
            EXPECT_EQ(fl.size(), degs.distinct());
            for (const auto& [f, e] : fl) {
                EXPECT_EQ(e, degs.multiplicity);
                EXPECT_EQ(f.back(), 1u);
                if (std::pow(static_cast<double>(q), (f.size() - 1) / 2.0) < 5000) { EXPECT_TRUE(brute_irreducible(F, f)); }
            }
            for (std::size_t i = 1; i < fl.size(); ++i) EXPECT_TRUE(R.canonical_less(fl[i - 1].first, fl[i].first));
        }
    }
}

// Exhaustive product identity over the full grid of small fields and lengths.
TEST(FactorXn1, ProductIdentityGrid) {
    for (std::uint64_t q = 2; q <= 199; ++q) {
        auto [p, m] = oracle::prime_power(q);
        if (!p) continue;
        auto F = BaseField::from_q(q);
        PolyRing<BaseField> R(F);
        for (std::uint64_t n = 1; n <= 100; ++n) {
            auto fl = factor_xn_minus_1(F, n);
            ASSERT_TRUE(R.eq(expand(F, fl), R.xn_minus_1(n))) << q << " " << n;
            ASSERT_EQ(fl.size(), xn1_distinct_factors(q, n));
            for (const auto& [f, e] : fl) ASSERT_TRUE(R.is_irreducible(f)) << q << " " << n;
        }
    }
}

TEST(FactorXn1, ArithmeticFunctions) {
    auto F = BaseField::from_q(3);
    PolyRing<BaseField> R(F);
    for (std::uint64_t n : {4ull, 6ull, 8ull, 10ull, 12ull}) {
        auto fl = factor_xn_minus_1(F, n);
        // Phi by counting residues coprime to x^n - 1 (3^n residues, brute force)
        std::uint64_t cnt = 0, total = 1;
        for (std::uint64_t i = 0; i < n; ++i) total *= 3;
        auto xn = R.xn_minus_1(n);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            FqPoly g(n, 0);
            std::uint64_t v = idx;
            for (std::uint64_t i = 0; i < n; ++i) {
                g[i] = static_cast<std::uint32_t>(v % 3);
                v /= 3;
            }
            R.normalize(g);
            if (!g.empty() && R.deg(R.gcd(g, xn)) == 0) ++cnt;
        }
        EXPECT_EQ(poly_phi(F, fl), big(cnt)) << n;
        EXPECT_EQ(poly_W(fl), BigInt(1) << static_cast<unsigned>(fl.size()));
        auto divs = divisors(F, fl);
        std::uint64_t expect = 1;
        for (const auto& [f, e] : fl) expect *= e + 1;
        EXPECT_EQ(divs.size(), expect);
        for (const auto& d : divs) {
            EXPECT_TRUE(R.divides(d.poly, xn));
            EXPECT_TRUE(R.eq(expand(F, d.factors), d.poly));
            auto again = factor_divisor(F, d.poly, fl);
            EXPECT_EQ(again.size(), d.factors.size());
        }
        for (std::size_t i = 1; i < divs.size(); ++i) EXPECT_LE(divs[i - 1].poly.size(), divs[i].poly.size());
    }
    EXPECT_EQ(poly_mobius(factor_xn_minus_1(F, 3)), 0);
    EXPECT_EQ(poly_mobius(factor_xn_minus_1(F, 4)), -1);  // (x-1)(x+1)(x^2+1)
    EXPECT_EQ(poly_mobius(factor_xn_minus_1(F, 2)), 1);
}

TEST(Parser, PolynomialsAndRationals) {
    auto F = BaseField::from_q(7);
    PolyRing<BaseField> R(F);
    EXPECT_TRUE(R.eq(parse_poly(F, "x^2 + 3*x + 1"), R.from_ints({1, 3, 1})));
    EXPECT_TRUE(R.eq(parse_poly(F, "(x+1)^2 - 2*x"), R.from_ints({1, 0, 1})));
    EXPECT_TRUE(R.eq(parse_poly(F, "-x + 15"), R.from_ints({1, -1})));
    auto [num, den] = parse_rational(F, "(x^2+1)/(x+3)");
    EXPECT_TRUE(R.eq(num, R.from_ints({1, 0, 1})));
    EXPECT_TRUE(R.eq(den, R.from_ints({3, 1})));
    EXPECT_THROW(parse_poly(F, "x^"), ParseError);
    EXPECT_THROW(parse_poly(F, "a*x"), ParseError);  // no symbol over a prime field
    try {
        parse_poly(F, "x + $");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.pos, 4u);
    }
    auto F9 = BaseField::from_q(9);
    PolyRing<BaseField> R9(F9);
    auto f = parse_poly(F9, "a*x + a^2");
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[1], F9.symbol_a());
    EXPECT_EQ(f[0], F9.mul(F9.symbol_a(), F9.symbol_a()));
    EXPECT_EQ(poly_to_string(F, R.from_ints({1, 3, 1})), "x^2 + 3*x + 1");
}
