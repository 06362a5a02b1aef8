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
 * Feasibility of marginal sets.
 *
 * zero_propagation reasons about the diagonal of an unknown joint state. A
 * marginal diagonal R_aa is the sum of the joint diagonals on its suffix
 * list, and joint diagonals are non-negative, so R_aa = 0 forces every one
 * of them to zero. Constraints left with a single live member pin that
 * member's value; a constraint whose pinned members already reach R_aa
 * forces the rest to zero. The trace is one more constraint with value 1.
 *
 * projection_solver alternates between the affine set of matrices with the
 * prescribed marginals and the unit-trace PSD matrices.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmarg/marginals.hpp"
#include "qmarg/states.hpp"

namespace qmarg {

enum class Verdict { Infeasible, FeasibleWitness, Undetermined };
std::string_view to_string(Verdict v);

enum class ProofRule { ZeroDiagonal, SaturatedSum, Trace };
std::string_view to_string(ProofRule r);

/// A joint diagonal pinned by a constraint with a single live member.
struct Pinned {
    BasisIndex index;
    int marginal;  // -1 for the trace
    BasisIndex diagonal_index;
    double value;
};

struct ProofStep {
    ProofRule rule;
    int marginal;  // position in the marginal set, -1 for the trace
    BasisIndex diagonal_index;
    std::vector<BasisIndex> killed_indices;
    /// For saturated sums: the pinned members whose values fill the constraint.
    std::vector<Pinned> pinned;
};

enum class ContradictionKind { AllKilled, UnsupportedWeight, Overdetermined };
std::string_view to_string(ContradictionKind k);

struct Contradiction {
    ContradictionKind kind;
    int marginal;  // -1 for the trace
    BasisIndex diagonal_index;
    std::string detail;
};

struct FeasibilityVerdict {
    Verdict verdict = Verdict::Undetermined;
    std::vector<ProofStep> proof;
    std::optional<Contradiction> contradiction;
    std::vector<BasisIndex> surviving;
    std::vector<Pinned> determined;
    std::optional<DensityMatrix> witness;
    double residual = 0.0;
    int iterations = 0;
};

/// Diagonal zero propagation; d^N is limited to 2^20.
FeasibilityVerdict zero_propagation(const MarginalSet &ms);

/// Re-checks an Infeasible proof from scratch against the marginal set.
bool replay_proof(const MarginalSet &ms, const FeasibilityVerdict &verdict);

/// Alternating projections; d^N is limited to 4096.
FeasibilityVerdict projection_solver(const MarginalSet &ms, int max_iters, double tol);

struct ConsistencyReport {
    bool consistent = true;
    std::vector<double> residuals;  // one per marginal, max entrywise deviation
};

ConsistencyReport check_consistency(const DensityMatrix &joint, const MarginalSet &ms, double tol);

}  // namespace qmarg
