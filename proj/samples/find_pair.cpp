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

// Finds a 2-primitive 2-normal alpha with alpha(alpha+1) 3-primitive 1-normal in F_{7^7}
// and prints the certificate fields.

#include <iostream>

#include "rkpair/search.hpp"

using namespace rkpair;

int main() {
    const FieldCtx L(BaseField::from_q(7), 7);
    const Classifier C(L);
    const RatFunc F = RatFunc::parse(L, "x*(x+1)");
    const auto w = find_witness(C, F, PairParams{2, 2, 3, 1});
    if (!w) {
        std::cout << "no witness\n";
        return 1;
    }
    std::cout << "modulus  " << poly_to_string(L.base(), L.ext_poly()) << " (elements in y), gamma = " << L.to_string(L.generator())
              << "\n"
              << "alpha    = gamma^" << w->j << " = " << L.to_string(w->alpha) << "\n"
              << "F(alpha) = " << L.to_string(w->image) << "\n"
              << "orders   = " << w->alpha_profile.mult_order.get_str() << ", " << w->image_profile.mult_order.get_str()
              << " of " << L.group_order().get_str() << "\n"
              << "k        = " << w->alpha_profile.k << ", " << w->image_profile.k << "\n"
              << "certificate " << (certify(C, *w) ? "FAILED" : "ok") << "\n";
    return 0;
}
