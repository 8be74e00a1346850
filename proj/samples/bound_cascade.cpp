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

// The n = 9 bound cascade, each step fed the printed bound of the previous one.

#include <cmath>
#include <iostream>

#include "rkpair/boundscan.hpp"

using namespace rkpair;

int main() {
    LogMagnitude q = LogMagnitude::scientific(4.413, 9);
    for (std::uint64_t p0 : {19, 17, 13, 13}) {
        const auto r = bound_sieve(1e4, q, 9, p0);
        const double bound = std::floor(r.q_new.value()) + 1;
        std::cout << "p0 = " << p0 << ": q < " << static_cast<std::uint64_t>(bound) << " (worst m = " << r.worst_m
                  << ", u1 = " << r.worst_u1 << ", u2 = " << r.worst_u2 << ")\n";
        q = LogMagnitude::from_value(bound);
    }
    return 0;
}
