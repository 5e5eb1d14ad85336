// Copyright 2026 The stfe Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef STFE_RNG_HPP
#define STFE_RNG_HPP

#include <array>
#include <cstdint>

namespace stfe {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Stateless: the output is
/// a pure function of (counter, key).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

/// One standard normal draw addressed by (seed, trajectory, step, mode).
/// Counter layout: {mode, step lo, step hi, trajectory}; key is the seed.
double standard_normal(std::uint64_t seed, std::uint32_t trajectory, std::uint64_t step,
                       std::int32_t mode) noexcept;

}  // namespace stfe

#endif  // STFE_RNG_HPP
