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
 * Pure states, density matrices and the W / Dicke state families.
 *
 * Everything is stored sparsely: a PureState keeps its non-zero amplitudes,
 * a matrix keeps its non-zero upper-half entries (row <= col). Entries below
 * the diagonal are implied by Hermiticity.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qmarg/indexing.hpp"

namespace qmarg {

using Complex = std::complex<double>;
using AmplitudeMap = std::map<BasisIndex, Complex>;

class PureState {
  public:
    /// Generic constructor: exact zeros are dropped, keys must be < d^N and
    /// the norm must be within 1e-9 of one (the state is renormalized).
    static PureState from_amplitudes(const Dims &dims, const AmplitudeMap &amplitudes);

    const Dims &dims() const noexcept { return dims_; }
    const AmplitudeMap &amplitudes() const noexcept { return amplitudes_; }
    Complex amplitude(BasisIndex i) const;
    std::vector<BasisIndex> support() const;
    double norm_squared() const;

  private:
    PureState(Dims dims, AmplitudeMap amplitudes)
        : dims_(dims), amplitudes_(std::move(amplitudes)) {}

    Dims dims_;
    AmplitudeMap amplitudes_;
};

/// Support of the N-qudit W class: j d^i for j in 1..d-1, i in 0..N-1, sorted.
std::vector<BasisIndex> w_support(int n, int d);

/// Like PureState::from_amplitudes but zero coefficients are allowed.
PureState make_generic(const Dims &dims, const AmplitudeMap &amplitudes);
PureState make_w_state(int n, int d, const AmplitudeMap &w);
PureState make_generalized_dicke(int n, int l, const AmplitudeMap &a);
PureState make_d_dicke(const SupportDescriptor &counts, const AmplitudeMap &a);

enum class Family { W, QubitDicke, DDicke, Generic };

/// A family plus its parameters and one coefficient per support element, in
/// increasing index order.
struct StateDescriptor {
    Family family = Family::Generic;
    int n = 0;
    int d = 2;
    int l = 0;
    std::optional<SupportDescriptor> counts;
    std::vector<Complex> coefficients;
};

std::vector<BasisIndex> family_support(const StateDescriptor &desc);
PureState build_state(const StateDescriptor &desc);

struct MatrixEntry {
    BasisIndex row;
    BasisIndex col;
    Complex value;
};

/// Hermitian operator stored as its upper-half entries, sorted by (row, col).
class HermitianMatrix {
  public:
    /// Entries must satisfy row <= col and be unique; diagonal entries must be
    /// real within 1e-12 (the imaginary part is then discarded).
    HermitianMatrix(Dims dims, std::vector<MatrixEntry> upper);

    const Dims &dims() const noexcept { return dims_; }
    const std::vector<MatrixEntry> &entries() const noexcept { return entries_; }
    /// Element (i, j) for any i, j; the lower half is the conjugate mirror.
    Complex at(BasisIndex i, BasisIndex j) const;
    double diagonal(BasisIndex i) const { return at(i, i).real(); }
    double trace() const;
    /// Indices that occur as a row or column of a stored entry.
    std::vector<BasisIndex> support() const;

  private:
    Dims dims_;
    std::vector<MatrixEntry> entries_;
};

/// Hermitian, unit-trace matrix with non-negative diagonal. Positivity is
/// not enforced here; see is_psd.
class DensityMatrix : public HermitianMatrix {
  public:
    explicit DensityMatrix(HermitianMatrix m);
    DensityMatrix(Dims dims, std::vector<MatrixEntry> upper)
        : DensityMatrix(HermitianMatrix(dims, std::move(upper))) {}
};

/// Entries c_i conj(c_j), i <= j, over the support of the state.
DensityMatrix to_density(const PureState &psi);

struct PsdVerdict {
    bool psd = true;
    double min_eigenvalue = 0.0;
    /// Unit vector v with <v|rho|v> < -tol when the matrix is not PSD.
    std::map<BasisIndex, Complex> witness;
};

/// Spectral check on the principal submatrix spanned by the stored entries
/// (rows and columns outside it are zero and cannot create negative
/// eigenvalues). The submatrix may have at most 2^14 rows.
PsdVerdict is_psd(const HermitianMatrix &rho, double tol);

/// <v|rho|v> for a sparse vector v.
Complex expectation(const HermitianMatrix &rho, const std::map<BasisIndex, Complex> &v);

bool equal_up_to_global_phase(const PureState &psi, const PureState &phi, double tol);
/// |<psi|phi>|^2.
double fidelity(const PureState &psi, const PureState &phi);

/**
 * Pure state over sparse digit strings, for party counts whose d^N does not
 * fit a 64-bit index. Keeps a per-party index of the words that carry a
 * non-zero digit there.
 */
class SparseState {
  public:
    SparseState(int n, int d, std::vector<std::pair<SparseWord, Complex>> amplitudes);

    int n() const noexcept { return n_; }
    int d() const noexcept { return d_; }
    std::size_t size() const noexcept { return words_.size(); }
    const std::vector<SparseWord> &words() const noexcept { return words_; }
    const std::vector<Complex> &amplitudes() const noexcept { return amplitudes_; }
    /// Position of `word` in words(), if present.
    std::optional<std::size_t> find(const SparseWord &word) const;
    /// Indices into words() of the entries with a non-zero digit at `party`.
    const std::vector<std::size_t> &touching(int party) const;
    double norm_squared() const noexcept { return norm_squared_; }

  private:
    int n_;
    int d_;
    std::vector<SparseWord> words_;
    std::vector<Complex> amplitudes_;
    // Open addressing over words_: slot holds position + 1, 0 when empty.
    std::vector<std::size_t> slots_;
    std::vector<std::vector<std::size_t>> by_party_;
    double norm_squared_ = 0.0;
};

/// Sparse W-class state; coefficients follow the order of the W support
/// (increasing numeric order of the strings).
SparseState make_sparse_w(int n, int d, const std::vector<Complex> &coefficients);
/// Sparse d-dimensional Dicke state; coefficients follow support_words order.
SparseState make_sparse_d_dicke(const SupportDescriptor &counts,
                                const std::vector<Complex> &coefficients);
std::vector<SparseWord> sparse_w_support(int n, int d);

}  // namespace qmarg
