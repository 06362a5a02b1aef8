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
 * Recovering W and Dicke-class states from their marginals.
 *
 * Every support string i of these classes has a digit m (the majority
 * digit) that fills all but a few positions. If a marginal's party set P
 * holds every position where i or j differs from m, the complement of P is
 * forced to be all m, so the marginal entry at (i|P, j|P) is exactly
 * a_i conj(a_j). Diagonals give |a_i|^2, off-diagonals give the relative
 * phases. The amplitude with the largest modulus (smallest index on ties) is
 * taken real and positive.
 */
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qmarg/indexing.hpp"
#include "qmarg/marginals.hpp"
#include "qmarg/states.hpp"

namespace qmarg {

/// One marginal entry used to fix an amplitude or a relative phase.
struct CertificateRecord {
    PartySet parties;
    BasisIndex local_row;
    BasisIndex local_col;
    BasisIndex row;  // full-system support index
    BasisIndex col;
    Complex value;
};

struct ReconstructionResult {
    PureState state;
    std::vector<CertificateRecord> certificate;
    std::size_t marginals_consulted = 0;
};

struct PhaseEdge {
    BasisIndex from;
    BasisIndex to;
    Complex product;  // a_from conj(a_to)
};

struct PhaseGraph {
    std::vector<BasisIndex> nodes;
    std::vector<PhaseEdge> edges;

    bool connected() const;
};

/// Generalized W state from all bipartite marginals (N >= 3).
ReconstructionResult reconstruct_w(const MarginalSet &ms);
/// Generalized qubit Dicke state with l excitations from all 2l-partite
/// marginals; requires 1 <= l < floor(N/2).
ReconstructionResult reconstruct_dicke(const MarginalSet &ms, int l);
/// Generalized qubit Dicke state, promised pure, from the (l+1)-partite
/// marginals that contain party p.
ReconstructionResult reconstruct_dicke_pure(const MarginalSet &ms, int l, int p);
/// d-dimensional Dicke state from all K-partite marginals, K = max_hamming.
ReconstructionResult reconstruct_d_dicke(const MarginalSet &ms, const SupportDescriptor &counts);

/// Phase graph used by reconstruct_dicke_pure: one edge per support pair
/// whose union of excited positions and p fits in l+1 parties.
PhaseGraph dicke_phase_graph(const MarginalSet &ms, int l, int p);

/// Sparse reconstruction for systems without a dense index. Phases are
/// read against the gauge reference only.
struct SparseReconstruction {
    std::vector<std::pair<SparseWord, Complex>> amplitudes;
    std::size_t marginals_consulted = 0;
};

SparseReconstruction reconstruct_sparse_w(const MarginalSource &source);

/// |a_i|^2 for each listed support word of a d-dimensional Dicke class,
/// read from K-partite marginals of the source.
std::vector<double> recover_sparse_diagonals(const MarginalSource &source,
                                             const SupportDescriptor &counts,
                                             const std::vector<SparseWord> &words);

/// The pair r3 e^{i t3}(|3>+|12>) + r5 e^{i t5}(|5>+|10>) + r6 e^{i t6}(|6>+|9>)
/// and its twin with every phase negated.
std::pair<PureState, PureState> remark3_pair(double r3, double r5, double r6, double theta3,
                                             double theta5, double theta6);

/// Adds eps to the real part of every entry (i, j), i < j, between support
/// strings of the l-excitation qubit Dicke class with hamming(i, j) > l + 1.
/// The result has unit trace but need not be positive.
DensityMatrix perturb_unseen(const DensityMatrix &rho, int l, double eps);

}  // namespace qmarg
