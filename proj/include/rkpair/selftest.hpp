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

// Exhaustive identity suites over small fields, shared by the command-line tool and the
// acceptance runner. Each returns counts of checks and the first failure, if any.

#ifndef RKPAIR_SELFTEST_HPP
#define RKPAIR_SELFTEST_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rkpair/chars.hpp"
#include "rkpair/criteria.hpp"
#include "rkpair/elems.hpp"

namespace rkpair {

struct SuiteReport {
    std::string name;
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    std::string first_failure;
    double max_error = 0;  // numeric suites only

    bool ok() const { return failures == 0; }
    void fail(std::string what) {
        if (failures++ == 0) first_failure = std::move(what);
    }
};

/// sum_{d|R} |mu(d_(r))|/phi(d_(r)) phi(d) = gcd(R, r) W(gcd(R, R_(r))) for R <= R_max, r <= r_max.
inline SuiteReport divisor_sum_suite(std::uint64_t R_max = 200, std::uint64_t r_max = 30) {
    SuiteReport rep;
    rep.name = "divisor-sum";
    for (std::uint64_t R = 1; R <= R_max; ++R)
        for (std::uint64_t r = 1; r <= r_max; ++r) {
            ++rep.checks;
            const auto [l, h] = divisor_sum_identity(R, r);
            if (l != h) rep.fail("R=" + std::to_string(R) + " r=" + std::to_string(r));
        }
    return rep;
}

inline const std::vector<std::pair<std::uint64_t, unsigned>>& char_suite_fields() {
    static const std::vector<std::pair<std::uint64_t, unsigned>> f = {{3, 2}, {5, 2}, {7, 2}, {3, 4}};
    return f;
}

/// Character formulas for g-freeness, (R, r)-freeness and the zero indicator against direct
/// tests, every element and every admissible (g, R, r); tolerance 1e-6.
inline SuiteReport char_indicator_suite(const std::vector<std::pair<std::uint64_t, unsigned>>& fields = char_suite_fields()) {
    SuiteReport rep;
    rep.name = "char-indicators";
    constexpr double tol = 1e-6;
    for (auto [q, n] : fields) {
        const FieldCtx L(BaseField::from_q(q), n);
        const Classifier C(L);
        const CharTables T(C);
        const std::uint64_t N = T.size() - 1;
        const auto divs = divisors(L.base(), C.xn1_factors());
        const std::string tag = std::to_string(q) + "^" + std::to_string(n);
        for (std::uint64_t a = 0; a < T.size(); ++a) {
            const auto al = L.from_index(a);
            auto check = [&](cplx got, double want, const std::string& what) {
                ++rep.checks;
                const double e = std::abs(got - want);
                rep.max_error = std::max(rep.max_error, e);
                if (!(e < tol)) rep.fail(tag + " a=" + std::to_string(a) + " " + what);
            };
            for (const auto& g : divs) check(omega_via_chars(T, a, g.poly), C.is_g_free(al, g.poly) ? 1 : 0, "Omega_g");
            check(i0(T, a), a == 0 ? 1 : 0, "I_0");
            if (a == 0) continue;
            for (std::uint64_t r : divisors_u64(N))
                for (std::uint64_t R : divisors_u64(N / r))
                    check(rr_via_chars(T, a, R, r), is_Rr_free(L, al, big(R), big(r)) ? 1 : 0,
                          "I_{" + std::to_string(R) + "," + std::to_string(r) + "}");
        }
    }
    return rep;
}

/// The additive orthogonality dichotomy on F_{3^2}: the sum is Q or 0 according to chi = f o psi,
/// and #{psi : chi = f o psi} is q^deg f or 0 according to Ord(chi) | (x^n - 1)/f.
inline SuiteReport orthogonality_suite(std::uint64_t q = 3, unsigned n = 2) {
    SuiteReport rep;
    rep.name = "orthogonality";
    const FieldCtx L(BaseField::from_q(q), n);
    const Classifier C(L);
    const CharTables T(C);
    const double Q = static_cast<double>(T.size());
    for (const auto& f : divisors(L.base(), C.xn1_factors())) {
        const double qk = std::pow(static_cast<double>(q), static_cast<double>(f.poly.size() - 1));
        for (std::uint64_t chi = 0; chi < T.size(); ++chi)
            for (std::uint64_t psi = 0; psi < T.size(); ++psi) {
                const auto r = orthogonality_case_b(T, f.poly, chi, psi);
                rep.checks += 2;
                const double e = std::abs(r.sum - (r.related ? Q : 0.0));
                rep.max_error = std::max(rep.max_error, e);
                if (!(e < 1e-6)) rep.fail("sum chi=" + std::to_string(chi) + " psi=" + std::to_string(psi));
                if (static_cast<double>(r.preimage_count) != (r.order_divides ? qk : 0.0))
                    rep.fail("preimages chi=" + std::to_string(chi));
            }
    }
    return rep;
}

/// Every (q, n), n >= 1, with q^n <= limit.
inline std::vector<std::pair<std::uint64_t, unsigned>> fields_up_to(std::uint64_t limit) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t q : prime_powers_below(limit + 1)) {
        std::uint64_t v = q;
        for (unsigned n = 1; v <= limit; ++n, v *= q) out.emplace_back(q, n);
    }
    return out;
}

/// Dual routes for k-normality (annihilator vs gcd) and g-freeness (order vs solvability) on
/// every element, plus #{Ord = d} = Phi_q(d) and #{r-primitive} = phi((q^n - 1)/r).
inline SuiteReport dual_route_suite(std::uint64_t limit = 2401) {
    SuiteReport rep;
    rep.name = "dual-route";
    for (auto [q, n] : fields_up_to(limit)) {
        const FieldCtx L(BaseField::from_q(q), n);
        const Classifier C(L);
        const auto divs = divisors(L.base(), C.xn1_factors());
        const std::string tag = std::to_string(q) + "^" + std::to_string(n);
        std::map<FqPoly, std::uint64_t> by_ord;
        std::map<std::uint64_t, std::uint64_t> by_mult;
        for (std::uint64_t i = 0; i < L.size_u64(); ++i) {
            const auto a = L.from_index(i);
            const FqPoly ord = C.fq_order(a);
            ++by_ord[ord];
            if (i) ++by_mult[to_u64(L.mult_order(a))];
            ++rep.checks;
            if (L.n() - (ord.size() - 1) != C.normality_k(a)) rep.fail(tag + " k i=" + std::to_string(i));
            for (const auto& g : divs) {
                ++rep.checks;
                if (C.is_g_free(a, g.poly) != C.is_g_free_direct(a, g.poly)) rep.fail(tag + " g-free i=" + std::to_string(i));
            }
        }
        for (const auto& d : divs) {
            ++rep.checks;
            if (BigInt(static_cast<unsigned long>(by_ord[d.poly])) != poly_phi(L.base(), d.factors))
                rep.fail(tag + " #Ord=d");
        }
        const std::uint64_t N = L.size_u64() - 1;
        for (std::uint64_t r : divisors_u64(N)) {
            ++rep.checks;
            if (by_mult[N / r] != euler_phi_u64(N / r)) rep.fail(tag + " #r-primitive r=" + std::to_string(r));
        }
    }
    return rep;
}

/// The factor-count bound for the five (a, b) pairs over q <= q_max (prime powers), n <= n_max.
inline SuiteReport factor_count_suite(std::uint64_t q_max = 199, std::uint64_t n_max = 200) {
    SuiteReport rep;
    rep.name = "factor-count";
    for (std::uint64_t q : prime_powers_below(q_max + 1))
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            ++rep.checks;
            if (!factor_count_check(q, n)) rep.fail("q=" + std::to_string(q) + " n=" + std::to_string(n));
        }
    return rep;
}

}  // namespace rkpair

#endif  // RKPAIR_SELFTEST_HPP
