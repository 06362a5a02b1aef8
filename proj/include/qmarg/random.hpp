// Copyright 2026 The qmarg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Seeded random coefficients.
 *
 * The generator is std::mt19937_64. A 64-bit draw x becomes a double
 * u = (x >> 11) * 2^-53 in [0, 1). Each coefficient takes two draws, first
 * the magnitude 0.1 + 0.9 * ((x >> 11) + 0.5) * 2^-53, which lies strictly
 * inside (0.1, 1), then the phase 2 pi u. The list is normalized at the end.
 */
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qmarg/states.hpp"

namespace qmarg {

class CoefficientRng {
  public:
    explicit CoefficientRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on (0, 1).
    double open_uniform();
    /// Standard normal via Box-Muller on two draws.
    double normal();
    /// Magnitude in (0.1, 1) with a uniform phase.
    Complex coefficient();

  private:
    std::mt19937_64 engine_;
};

/// `count` coefficients from a fresh generator, normalized to unit norm.
std::vector<Complex> random_coefficients(std::size_t count, std::uint64_t seed);

/// Pure state with a random coefficient on every basis vector.
PureState random_pure_state(const Dims &dims, std::uint64_t seed);

/// Mixed state sum_k p_k |v_k><v_k| of `rank` random pure states with random
/// positive weights.
DensityMatrix random_mixed_state(const Dims &dims, int rank, std::uint64_t seed);

}  // namespace qmarg
