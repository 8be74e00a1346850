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

#ifndef RKPAIR_VERSION_HPP
#define RKPAIR_VERSION_HPP

namespace rkpair {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kSchema = "rkpair/1";

}  // namespace rkpair

#endif  // RKPAIR_VERSION_HPP
