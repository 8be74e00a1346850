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

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rkpair/boundscan.hpp"

using namespace rkpair;

namespace {

double rel_log_err(const LogMagnitude& got, const LogMagnitude& want) {
    return std::fabs(got.log10 - want.log10) / std::fabs(want.log10);
}

// Consecutive primes from `from`, filtered by residue, by trial division.
std::vector<std::uint64_t> primes_from(std::uint64_t from, std::size_t count, std::uint64_t mod = 0, bool of_form = true) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = from; out.size() < count; ++p) {
        if (!oracle::is_prime(p)) continue;
        if (mod && ((p % mod == 1) != of_form)) continue;
        out.push_back(p);
    }
    return out;
}

// Direct transcription of the inner maximum with long doubles and explicit loops.
long double naive_chain_max(std::uint64_t p0, long double Plog, long double extra_base, long double per_m) {
    std::vector<std::uint64_t> small;
    for (std::uint64_t p = 2; p < p0; ++p)
        if (oracle::is_prime(p)) small.push_back(p);
    const auto big = primes_from(p0, 4000);
    long double worst = -1e300L;
    for (std::size_t m = 2; m <= small.size(); ++m) {
        long double Pm = 0;
        for (std::size_t i = 0; i < m; ++i) Pm += std::log10(static_cast<long double>(small[i]));
        std::size_t u = 0;
        long double lg = 0, S = 0;
        while (Pm + lg + std::log10(static_cast<long double>(big[u])) <= Plog) {
            lg += std::log10(static_cast<long double>(big[u]));
            S += 1.0L / big[u];
            ++u;
        }
        const long double Delta = 2 + (2.0L * u - 1) / (1 - 2 * S);
        worst = std::max(worst, extra_base + per_m * m + std::log10(Delta));
    }
    return worst;
}

long double naive_bound_sieve(double qmin, double qmax_log10, unsigned n, std::uint64_t p0, std::uint64_t pbar,
                              unsigned np, double e1, double e2, bool strict, bool nine_not) {
    std::vector<std::uint64_t> small;
    for (std::uint64_t p = 2; p < p0; ++p)
        if (oracle::is_prime(p) && p % pbar != 1) small.push_back(p);
    const auto r1 = primes_from(p0, 3000, pbar, false);
    const auto r2 = primes_from(2, 3000, pbar, true);
    const long double L1 = qmax_log10 * (n / np), L2 = qmax_log10 * n;
    long double best = -1e300L;
    const std::size_t mmax = strict ? small.size() - 1 : small.size();
    for (std::size_t m = 2; m <= mmax; ++m) {
        long double P0 = 0;
        for (std::size_t i = 0; i < m; ++i) P0 += std::log10(static_cast<long double>(small[i]));
        long double P1 = 0, S1 = 0;
        for (std::size_t u1 = 0; std::log10(e1) + P0 + P1 <= L1; ++u1) {
            long double P2 = 0, S2 = 0;
            for (std::size_t u2 = 0; std::log10(e2) + P0 + P1 + P2 <= L2; ++u2) {
                const long double d = 1 - 2 * (S1 + S2) - (2.0L * n - 3) / qmin;
                const long double Delta = 2 + (2.0L * (u1 + u2) + 2.0L * n - 4) / d;
                const long double v =
                    (std::log10(36 * Delta) + (2.0L * m - (nine_not ? 1 : 0)) * std::log10(2.0L)) * 2 / (n - 6.0L);
                best = std::max(best, v);
                P2 += std::log10(static_cast<long double>(r2[u2]));
                S2 += 1.0L / r2[u2];
            }
            P1 += std::log10(static_cast<long double>(r1[u1]));
            S1 += 1.0L / r1[u1];
        }
    }
    return best;
}

}  // namespace

TEST(GlobalBound, ChainFrom10009) {
    const auto rows = global_chain_10009();
    const auto out = run_chain(rows, false, [](std::uint64_t p0, const LogMagnitude& P) {
        return global_bound_iteration(10009, p0, P);
    });
    ASSERT_EQ(out.size(), rows.size());
    // each output is the next row's input, rounded up
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        EXPECT_TRUE(out[i].ok);
        EXPECT_LE(out[i].output_P, rows[i + 1].P) << i;
        EXPECT_LT(rel_log_err(out[i].output_P, rows[i + 1].P), 1e-3) << i;
    }
    EXPECT_LE(out.back().output_P, LogMagnitude::scientific(1.66, 92));
    EXPECT_LT(rel_log_err(out.back().output_P, LogMagnitude::scientific(1.66, 92)), 1e-3);
}

TEST(GlobalBound, ChainFrom100003) {
    const auto rows = global_chain_100003();
    const auto out = run_chain(rows, false, [](std::uint64_t p0, const LogMagnitude& P) {
        return global_bound_iteration(100003, p0, P);
    });
    ASSERT_EQ(out.size(), rows.size());
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        EXPECT_LE(out[i].output_P, rows[i + 1].P) << i;
        EXPECT_LT(rel_log_err(out[i].output_P, rows[i + 1].P), 1e-3) << i;
    }
    EXPECT_LE(out.back().output_P, LogMagnitude::scientific(1.29, 63));
}

TEST(GlobalBound, AgreesWithNaiveMaximum) {
    for (auto [q0, p0, P] : {std::tuple{10009ull, 89ull, LogMagnitude::scientific(6.18, 718)},
                             std::tuple{10009ull, 31ull, LogMagnitude::scientific(8.31, 118)},
                             std::tuple{100003ull, 23ull, LogMagnitude::scientific(2.33, 65)}}) {
        const auto st = global_bound_iteration(q0, p0, P);
        const long double expo = 0.25L - std::log(4.0L) / std::log(static_cast<long double>(q0));
        const long double l2 = std::log10(2.0L);
        const long double want = naive_chain_max(p0, P.log10, std::log10(36.0L) - 3 * l2, 2 * l2) / expo;
        EXPECT_NEAR(st.output_P.log10, static_cast<double>(want), 1e-9 * std::fabs(static_cast<double>(want)));
        EXPECT_GE(st.worst_m, 2u);
        EXPECT_LE(st.worst_m, st.max_m);
    }
}

TEST(GlobalBound, MonotoneInInput) {
    for (std::uint64_t p0 : {23ull, 29ull, 41ull}) {
        LogMagnitude prev = global_bound_iteration(10009, p0, LogMagnitude::from_log10(60)).output_P;
        for (double l = 61; l <= 400; l += 7) {
            const auto cur = global_bound_iteration(10009, p0, LogMagnitude::from_log10(l));
            if (!cur.ok) break;
            EXPECT_GE(cur.output_P, prev) << p0 << " " << l;
            prev = cur.output_P;
        }
    }
}

TEST(GlobalBound, Errors) {
    EXPECT_THROW(global_bound_iteration(200, 29, LogMagnitude::from_log10(100)), std::invalid_argument);
    EXPECT_THROW(global_bound_iteration(10009, 3, LogMagnitude::from_log10(100)), std::invalid_argument);
    // p0 = 5 sieves 5, 7, 11, ... and their reciprocal sum passes 1/2 quickly
    const auto st = global_bound_iteration(10009, 5, LogMagnitude::from_log10(700));
    EXPECT_FALSE(st.ok);
    EXPECT_GE(st.failed_m, 2u);
}

TEST(Primorial, Checkpoint265) {
    const auto v = LogMagnitude::from_value(3) * primorial_log(265);
    EXPECT_EQ(v.str(3), "6.18e718");
}

TEST(Table1, RowsHoldAndMatch) {
    for (const auto& r : table1_rows()) {
        const auto w = weil_start_bound(r.n, r.N, r.m);
        EXPECT_TRUE(w.holds) << r.n;
        EXPECT_EQ(w.three_Pm.str(3), r.expected_three_Pm.str(3)) << r.n;
    }
    EXPECT_FALSE(weil_start_bound(8, 16.008, 100).holds);
    EXPECT_THROW(weil_start_bound(8, 4.0, 100), std::invalid_argument);
}

TEST(Table1, ValidityUpwardClosedInM) {
    // 3 P_m grows with m, so validity is upward closed
    bool seen = false;
    for (std::size_t m = 200; m <= 400; ++m) {
        const bool h = weil_start_bound(11, 9.161, m).holds;
        if (seen) {
            EXPECT_TRUE(h) << m;
        }
        seen = seen || h;
    }
    EXPECT_TRUE(seen);
}

TEST(Table2, AllRowsReproduce) {
    const auto rows = table2_rows();
    ASSERT_EQ(rows.size(), 21u);
    for (const auto& r : rows) {
        const auto st = fixed_n_bound_iteration(r.n, r.P, r.p0);
        ASSERT_TRUE(st.ok) << r.n << " " << r.p0;
        EXPECT_LT(rel_log_err(st.output_P, r.expected), 1e-3) << r.n << " " << r.p0 << " " << st.output_P.str();
    }
    EXPECT_EQ(fixed_n_bound_iteration(8, rows[0].P, 1609).output_P.str(4), "8.261e1320");
}

TEST(Table2, AgreesWithNaiveMaximum) {
    for (const auto& r : table2_rows()) {
        if (r.P.log10 > 2000) continue;
        const auto st = fixed_n_bound_iteration(r.n, r.P, r.p0);
        const long double l2 = std::log10(2.0L);
        const long double inner = naive_chain_max(r.p0, r.P.log10, std::log10(36.0L) + (2.0L * r.n - 3) * l2, 2 * l2);
        const long double want = inner * r.n / (r.n / 2.0L - 3);
        EXPECT_NEAR(st.output_P.log10, static_cast<double>(want), 1e-9 * static_cast<double>(want)) << r.n << " " << r.p0;
    }
}

TEST(Table2, MonotoneInInput) {
    for (unsigned n : {8u, 9u, 10u, 11u}) {
        LogMagnitude prev = fixed_n_bound_iteration(n, LogMagnitude::from_log10(70), 23).output_P;
        for (double l = 75; l <= 300; l += 5) {
            const auto cur = fixed_n_bound_iteration(n, LogMagnitude::from_log10(l), 23);
            if (!cur.ok) break;
            EXPECT_GE(cur.output_P, prev) << n << " " << l;
            prev = cur.output_P;
        }
    }
    EXPECT_THROW(fixed_n_bound_iteration(6, LogMagnitude::from_log10(100), 23), std::invalid_argument);
}

TEST(MnBound, Values) {
    EXPECT_NEAR(mn_bound(12).value.value(), 1.81642e5, 1.0);
    EXPECT_FALSE(mn_bound(12).exact);
    EXPECT_EQ(mn_bound(16).exact, 100003u);
    EXPECT_EQ(mn_bound(40).exact, 10009u);
    EXPECT_LT(mn_bound(1029).value, LogMagnitude::from_value(5));
    EXPECT_GE(mn_bound(1028).value, LogMagnitude::from_value(5));
    EXPECT_EQ(mn_qcap(16, true), 100003u);
    EXPECT_EQ(mn_qcap(16, false), 100002u);
    EXPECT_EQ(mn_qcap(1029, true), 4u);
    EXPECT_THROW(mn_bound(0), std::invalid_argument);
}

TEST(MnBound, NonIncreasingInN) {
    for (unsigned n = 12; n < 2000; ++n) EXPECT_LE(mn_bound(n + 1).value, mn_bound(n).value) << n;
}

TEST(MnBound, IsMinimumOfBranches) {
    for (unsigned n = 12; n <= 1100; n += 11) {
        const double a = std::max(std::log10(100003.0), (63 + std::log10(1.29)) / n);
        const double b = std::max(std::log10(10009.0), (92 + std::log10(1.66)) / n);
        const double c = (718 + std::log10(6.18)) / n;
        EXPECT_NEAR(mn_bound(n).value.log10, std::min({a, b, c}), 1e-12) << n;
    }
}

TEST(BoundSieve, NineCascade) {
    const double want[] = {585229, 128243, 65337, 62416};
    const std::uint64_t p0s[] = {19, 17, 13, 13};
    LogMagnitude q = LogMagnitude::scientific(4.413, 9);
    for (int i = 0; i < 4; ++i) {
        const auto r = bound_sieve(1e4, q, 9, p0s[i]);
        EXPECT_TRUE(r.B) << i;
        EXPECT_LT(r.q_new.value(), want[i]) << i;
        EXPECT_GT(r.q_new.value(), want[i] - 1) << i;
        q = LogMagnitude::from_value(want[i]);
    }
}

TEST(BoundSieve, EightFirstStep) {
    const auto r = bound_sieve(1e9, LogMagnitude::scientific(6.515, 14), 8, 37);
    EXPECT_TRUE(r.B);
    EXPECT_LT(r.q_new, LogMagnitude::scientific(6.226, 10));
    EXPECT_GT(r.q_new, LogMagnitude::scientific(6.225, 10));
    EXPECT_EQ(r.pbar, 8u);
    EXPECT_EQ(r.e1, 8u);
    EXPECT_EQ(r.e2, 16u);
}

TEST(BoundSieve, Parameters) {
    const auto r7 = bound_sieve(1e9, LogMagnitude::from_log10(15), 7, 17);
    EXPECT_EQ(r7.pbar, 14u);
    EXPECT_EQ(r7.e1, 1u);
    const auto r9 = bound_sieve(1e4, LogMagnitude::from_log10(6), 9, 13);
    EXPECT_EQ(r9.pbar, 18u);
    EXPECT_EQ(r9.e2, 9u);
    EXPECT_GE(r9.worst_m, 2u);
    EXPECT_LE(r9.worst_m, r9.m_max);
    EXPECT_THROW(bound_sieve(1e4, LogMagnitude::from_log10(6), 10, 13), std::invalid_argument);
    EXPECT_THROW(bound_sieve(1e4, LogMagnitude::from_log10(6), 9, 15), std::invalid_argument);
    BoundSieveVariant v;
    v.nine_divides = true;
    EXPECT_THROW(bound_sieve(1e4, LogMagnitude::from_log10(6), 9, 13, v), std::invalid_argument);
}

TEST(BoundSieve, AgreesWithNaiveEnumeration) {
    struct Case {
        double qmin, qmax_log10;
        unsigned n;
        std::uint64_t p0, pbar;
        unsigned np;
        double e1, e2;
        BoundSieveVariant v;
    };
    BoundSieveVariant nd, st, nn, both;
    nd.nine_divides = true;
    st.strict_m = true;
    nn.nine_not_divides = true;
    both.nine_divides = both.strict_m = true;
    const Case cases[] = {
        {1e4, std::log10(4.413e9), 9, 19, 18, 3, 3, 9, {}},
        {1e4, std::log10(65337.0), 9, 13, 18, 3, 3, 9, st},
        {1e9, std::log10(6.515e14), 8, 37, 8, 2, 8, 16, {}},
        {1e9, std::log10(1.781e9), 8, 29, 8, 2, 24, 48, nd},
        {1e8, std::log10(1.572e9), 8, 29, 8, 2, 24, 48, both},
        {1e8, std::log10(1.781e9), 8, 29, 8, 2, 8, 16, nn},
        {1e9, std::log10(1.9137e22), 7, 19, 14, 7, 1, 1, {}},
    };
    for (const auto& c : cases) {
        const auto r = bound_sieve(c.qmin, LogMagnitude::from_log10(c.qmax_log10), c.n, c.p0, c.v);
        const long double want = naive_bound_sieve(c.qmin, c.qmax_log10, c.n, c.p0, c.pbar, c.np, c.e1, c.e2,
                                                   c.v.strict_m, c.v.nine_not_divides);
        EXPECT_NEAR(r.q_new.log10, static_cast<double>(want), 1e-9 * static_cast<double>(want)) << c.n << " " << c.p0;
    }
}

TEST(BoundSieve, MonotoneInQmax) {
    for (unsigned n : {7u, 8u, 9u}) {
        const std::uint64_t p0 = n == 9 ? 13 : 29;
        LogMagnitude prev = bound_sieve(1e4, LogMagnitude::from_log10(5), n, p0).q_new;
        for (double l = 5.25; l <= 30; l += 0.25) {
            const auto cur = bound_sieve(1e4, LogMagnitude::from_log10(l), n, p0).q_new;
            EXPECT_GE(cur, prev) << n << " " << l;
            prev = cur;
        }
    }
}

TEST(BoundSieve, VariantsWeaken) {
    const auto q = LogMagnitude::scientific(1.781, 9);
    BoundSieveVariant st, nn;
    st.strict_m = true;
    nn.nine_not_divides = true;
    const auto base = bound_sieve(1e8, q, 8, 29).q_new;
    // fewer m and a smaller 2-power weight can only lower the maximum
    EXPECT_LE(bound_sieve(1e8, q, 8, 29, st).q_new, base);
    EXPECT_LT(bound_sieve(1e8, q, 8, 29, nn).q_new, base);
}

TEST(BoundSieve, VariantText) {
    EXPECT_EQ(BoundSieveVariant{}.str(), "standard");
    const auto v = BoundSieveVariant::parse("nine_divides+strict_m");
    EXPECT_TRUE(v.nine_divides && v.strict_m && !v.nine_not_divides);
    EXPECT_EQ(BoundSieveVariant::parse(v.str()).str(), v.str());
    EXPECT_TRUE(BoundSieveVariant::parse("strict_m,nine_not_divides").nine_not_divides);
    EXPECT_EQ(BoundSieveVariant::parse("standard").str(), "standard");
    EXPECT_THROW(BoundSieveVariant::parse("nine"), std::invalid_argument);
}

TEST(Casen7, Chain) {
    Casen7Options o;
    o.threads = 2;
    const auto r = casen7_chain(o);
    EXPECT_EQ(r.census_count, 54318003u);
    EXPECT_LT(rel_log_err(r.B, LogMagnitude::scientific(6.8777, 9530)), 1e-3);
    EXPECT_LE(r.B, LogMagnitude::scientific(6.8777, 9530));
    EXPECT_LT(rel_log_err(r.bound1, LogMagnitude::scientific(8.5184, 572158)), 1e-3);
    EXPECT_LE(r.u, 476020u);
    EXPECT_LE(r.S_u, 0.29162);
    EXPECT_GE(r.delta2, 0.4167589);
    EXPECT_LE(r.Delta2, 2.285e6);
    EXPECT_LT(rel_log_err(r.bound2, LogMagnitude::scientific(3.4726, 58)), 1e-3);
    ASSERT_EQ(r.cascade.size(), 5u);
    for (const auto& c : r.cascade) EXPECT_TRUE(c.B);
    EXPECT_LT(r.cascade.back().q_new, LogMagnitude::scientific(5.259, 15));
    EXPECT_LT(rel_log_err(r.cascade.back().q_new, LogMagnitude::scientific(5.259, 15)), 1e-3);
}
