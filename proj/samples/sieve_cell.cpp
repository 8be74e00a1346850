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

// Runs the three criteria in order on one cell: sieve_cell q n.

#include <cstdlib>
#include <iostream>

#include "rkpair/criteria.hpp"

using namespace rkpair;

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: sieve_cell q n\n";
        return 3;
    }
    const std::uint64_t q = std::strtoull(argv[1], nullptr, 10), n = std::strtoull(argv[2], nullptr, 10);
    if (!condition_qn(q, n)) std::cout << "note: 6 does not divide q^n - 1 or gcd(q^3 - q, n) = 1\n";

    const auto t = test_theorem(q, n, 8);
    std::cout << "TestTheorem   " << to_string(t.result) << " (log10 margin " << t.margin << ")\n";
    if (t.result == TriState::True) return 0;

    const auto s = special_sieve(q, n, special_p0_by_size(q, n));
    std::cout << "SpecialSieve  " << to_string(s.verdict);
    if (s.has_delta) std::cout << " (delta " << s.delta.get_d() << ", Delta " << s.Delta.get_d() << ")";
    std::cout << "\n";
    if (s.verdict == Verdict::Proven) return 0;

    const auto o = total_sieve(q, n);
    std::cout << "TotalSieve    " << to_string(o.verdict);
    if (o.split) std::cout << " (kept " << o.split->i1 << ", " << o.split->i2 << ", " << o.split->j1 << ", " << o.split->j2 << ")";
    std::cout << "\n";
    return o.verdict == Verdict::Proven ? 0 : o.verdict == Verdict::NotProven ? 1 : 2;
}
