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

#pragma once

namespace qmarg::tol {

// Norm and trace invariants of stored states and matrices.
inline constexpr double kNormalization = 1e-12;
// Inputs within this distance of unit norm are renormalized; worse is rejected.
inline constexpr double kRenormalize = 1e-9;
inline constexpr double kTrace = 1e-12;
inline constexpr double kDiagonalFloor = -1e-12;
inline constexpr double kDiagonalImag = 1e-12;

// Marginal entries below this magnitude are stored as exact zeros.
inline constexpr double kStoredZero = 1e-15;

// Reconstruction: entries the state class forces to vanish.
inline constexpr double kStructuralZero = 1e-9;
// Reconstruction: product and phase-cycle consistency.
inline constexpr double kConsistency = 1e-9;

// Zero propagation: a marginal diagonal at or below this is a structural zero.
inline constexpr double kPropagationZero = 1e-12;
// Zero propagation: tolerance on sums of determined diagonals.
inline constexpr double kPropagationSum = 1e-9;

inline constexpr double kPsd = 1e-10;

}  // namespace qmarg::tol
