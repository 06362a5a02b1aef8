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

#include "qmarg/states.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmarg/error.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

namespace {

constexpr std::size_t kMaxDenseRows = std::size_t{1} << 14;

double renormalization_scale(double norm_squared) {
    if (!(std::abs(norm_squared - 1.0) <= tol::kRenormalize)) {
        throw Error(ErrorCode::Normalization,
                    "sum of squared magnitudes is " + std::to_string(norm_squared) +
                        ", expected 1 within 1e-9");
    }
    return 1.0 / std::sqrt(norm_squared);
}

AmplitudeMap checked_amplitudes(const Dims &dims, const AmplitudeMap &amplitudes, bool allow_zero) {
    dims.require_dense();
    AmplitudeMap out;
    double norm = 0.0;
    for (const auto &[index, value] : amplitudes) {
        if (index >= dims.size()) {
            throw Error(ErrorCode::InvalidArgument,
                        "amplitude index " + std::to_string(index) + " outside the basis");
        }
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            throw Error(ErrorCode::InvalidArgument, "non-finite amplitude");
        }
        if (value == Complex{}) {
            if (!allow_zero) {
                throw Error(ErrorCode::ZeroCoefficient,
                            "coefficient of |" + std::to_string(index) + "> is zero");
            }
            continue;
        }
        norm += std::norm(value);
        out.emplace(index, value);
    }
    const double scale = renormalization_scale(norm);
    for (auto &[index, value] : out) {
        value *= scale;
    }
    return out;
}

void require_exact_support(const AmplitudeMap &amplitudes, const std::vector<BasisIndex> &support,
                           const char *family) {
    for (const auto &[index, value] : amplitudes) {
        if (!std::binary_search(support.begin(), support.end(), index)) {
            throw Error(ErrorCode::SupportViolation, "index " + std::to_string(index) +
                                                         " is outside the " + family + " support");
        }
    }
    if (amplitudes.size() != support.size()) {
        for (BasisIndex index : support) {
            if (!amplitudes.contains(index)) {
                throw Error(ErrorCode::ZeroCoefficient, std::string(family) + " coefficient of |" +
                                                            std::to_string(index) +
                                                            "> is missing");
            }
        }
    }
}

}  // namespace

PureState PureState::from_amplitudes(const Dims &dims, const AmplitudeMap &amplitudes) {
    return PureState(dims, checked_amplitudes(dims, amplitudes, true));
}

Complex PureState::amplitude(BasisIndex i) const {
    auto it = amplitudes_.find(i);
    return it == amplitudes_.end() ? Complex{} : it->second;
}

std::vector<BasisIndex> PureState::support() const {
    std::vector<BasisIndex> out;
    out.reserve(amplitudes_.size());
    for (const auto &[index, value] : amplitudes_) {
        out.push_back(index);
    }
    return out;
}

double PureState::norm_squared() const {
    double norm = 0.0;
    for (const auto &[index, value] : amplitudes_) {
        norm += std::norm(value);
    }
    return norm;
}

std::vector<BasisIndex> w_support(int n, int d) {
    const Dims dims(n, d);
    dims.require_dense();
    std::vector<BasisIndex> out;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t place = checked_pow(static_cast<std::uint64_t>(d), i);
        for (int j = 1; j < d; ++j) {
            out.push_back(static_cast<std::uint64_t>(j) * place);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

PureState make_generic(const Dims &dims, const AmplitudeMap &amplitudes) {
    return PureState::from_amplitudes(dims, amplitudes);
}

PureState make_w_state(int n, int d, const AmplitudeMap &w) {
    const Dims dims(n, d);
    require_exact_support(w, w_support(n, d), "W");
    return PureState::from_amplitudes(dims, checked_amplitudes(dims, w, false));
}

PureState make_generalized_dicke(int n, int l, const AmplitudeMap &a) {
    if (l < 1 || l > n - 1) {
        throw Error(ErrorCode::InvalidArgument, "excitation number must lie in 1..N-1");
    }
    return make_d_dicke(SupportDescriptor({n - l, l}), a);
}

PureState make_d_dicke(const SupportDescriptor &counts, const AmplitudeMap &a) {
    const Dims dims(counts.n(), counts.d());
    require_exact_support(a, support_indices(counts), "Dicke");
    return PureState::from_amplitudes(dims, checked_amplitudes(dims, a, false));
}

std::vector<BasisIndex> family_support(const StateDescriptor &desc) {
    switch (desc.family) {
        case Family::W:
            return w_support(desc.n, desc.d);
        case Family::QubitDicke:
            if (desc.l < 1 || desc.l > desc.n - 1) {
                throw Error(ErrorCode::InvalidArgument, "excitation number must lie in 1..N-1");
            }
            return support_indices(SupportDescriptor({desc.n - desc.l, desc.l}));
        case Family::DDicke:
            if (!desc.counts) {
                throw Error(ErrorCode::InvalidArgument, "d-dimensional Dicke family needs counts");
            }
            return support_indices(*desc.counts);
        case Family::Generic: {
            const Dims dims(desc.n, desc.d);
            std::vector<BasisIndex> all(dims.size());
            std::iota(all.begin(), all.end(), BasisIndex{0});
            return all;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown family");
}

PureState build_state(const StateDescriptor &desc) {
    const std::vector<BasisIndex> support = family_support(desc);
    if (support.size() != desc.coefficients.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::to_string(support.size()) + " coefficients, got " +
                        std::to_string(desc.coefficients.size()));
    }
    AmplitudeMap amplitudes;
    for (std::size_t k = 0; k < support.size(); ++k) {
        amplitudes.emplace(support[k], desc.coefficients[k]);
    }
    switch (desc.family) {
        case Family::W:
            return make_w_state(desc.n, desc.d, amplitudes);
        case Family::QubitDicke:
            return make_generalized_dicke(desc.n, desc.l, amplitudes);
        case Family::DDicke:
            return make_d_dicke(*desc.counts, amplitudes);
        case Family::Generic:
            return make_generic(Dims(desc.n, desc.d), amplitudes);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown family");
}

HermitianMatrix::HermitianMatrix(Dims dims, std::vector<MatrixEntry> upper) : dims_(dims) {
    dims_.require_dense();
    const std::uint64_t size = dims_.size();
    entries_.reserve(upper.size());
    for (auto &e : upper) {
        if (e.row > e.col) {
            throw Error(ErrorCode::InvalidMatrix, "entry (" + std::to_string(e.row) + ", " +
                                                      std::to_string(e.col) +
                                                      ") lies below the diagonal");
        }
        if (e.col >= size) {
            throw Error(ErrorCode::InvalidMatrix, "entry index outside the basis");
        }
        if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
            throw Error(ErrorCode::InvalidMatrix, "non-finite matrix entry");
        }
        if (e.row == e.col) {
            if (std::abs(e.value.imag()) > tol::kDiagonalImag) {
                throw Error(ErrorCode::InvalidMatrix,
                            "diagonal entry " + std::to_string(e.row) + " is not real");
            }
            e.value = Complex{e.value.real(), 0.0};
        }
        if (e.value != Complex{}) {
            entries_.push_back(e);
        }
    }
    std::sort(entries_.begin(), entries_.end(), [](const MatrixEntry &a, const MatrixEntry &b) {
        return std::pair(a.row, a.col) < std::pair(b.row, b.col);
    });
    for (std::size_t k = 1; k < entries_.size(); ++k) {
        if (entries_[k].row == entries_[k - 1].row && entries_[k].col == entries_[k - 1].col) {
            throw Error(ErrorCode::InvalidMatrix, "duplicate entry (" +
                                                      std::to_string(entries_[k].row) + ", " +
                                                      std::to_string(entries_[k].col) + ")");
        }
    }
}

Complex HermitianMatrix::at(BasisIndex i, BasisIndex j) const {
    const bool swapped = i > j;
    if (swapped) {
        std::swap(i, j);
    }
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), std::pair(i, j),
        [](const MatrixEntry &e, const std::pair<BasisIndex, BasisIndex> &key) {
            return std::pair(e.row, e.col) < key;
        });
    if (it == entries_.end() || it->row != i || it->col != j) {
        return {};
    }
    return swapped ? std::conj(it->value) : it->value;
}

double HermitianMatrix::trace() const {
    double t = 0.0;
    for (const auto &e : entries_) {
        if (e.row == e.col) {
            t += e.value.real();
        }
    }
    return t;
}

std::vector<BasisIndex> HermitianMatrix::support() const {
    std::vector<BasisIndex> out;
    out.reserve(2 * entries_.size());
    for (const auto &e : entries_) {
        out.push_back(e.row);
        out.push_back(e.col);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DensityMatrix::DensityMatrix(HermitianMatrix m) : HermitianMatrix(std::move(m)) {
    for (const auto &e : entries()) {
        if (e.row == e.col && e.value.real() < tol::kDiagonalFloor) {
            throw Error(ErrorCode::InvalidMatrix, "negative diagonal entry at " +
                                                      std::to_string(e.row));
        }
    }
    const double t = trace();
    if (!(std::abs(t - 1.0) <= tol::kTrace)) {
        throw Error(ErrorCode::InvalidMatrix, "trace is " + std::to_string(t) + ", expected 1");
    }
}

DensityMatrix to_density(const PureState &psi) {
    const auto &amps = psi.amplitudes();
    std::vector<MatrixEntry> entries;
    entries.reserve(amps.size() * (amps.size() + 1) / 2);
    for (auto it = amps.begin(); it != amps.end(); ++it) {
        entries.push_back({it->first, it->first, Complex{std::norm(it->second), 0.0}});
        for (auto jt = std::next(it); jt != amps.end(); ++jt) {
            entries.push_back({it->first, jt->first, it->second * std::conj(jt->second)});
        }
    }
    return DensityMatrix(psi.dims(), std::move(entries));
}

PsdVerdict is_psd(const HermitianMatrix &rho, double tol) {
    const std::vector<BasisIndex> rows = rho.support();
    PsdVerdict verdict;
    if (rows.empty()) {
        return verdict;
    }
    if (rows.size() > kMaxDenseRows) {
        throw Error(ErrorCode::SizeLimit, "PSD check limited to 2^14 supported rows");
    }
    const auto dim = static_cast<Eigen::Index>(rows.size());
    auto position = [&](BasisIndex i) {
        return static_cast<Eigen::Index>(std::lower_bound(rows.begin(), rows.end(), i) -
                                         rows.begin());
    };
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &e : rho.entries()) {
        const Eigen::Index r = position(e.row);
        const Eigen::Index c = position(e.col);
        dense(r, c) = e.value;
        dense(c, r) = std::conj(e.value);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    verdict.min_eigenvalue = solver.eigenvalues()(0);
    verdict.psd = verdict.min_eigenvalue >= -tol;
    if (!verdict.psd) {
        const Eigen::VectorXcd v = solver.eigenvectors().col(0);
        for (Eigen::Index k = 0; k < dim; ++k) {
            if (v(k) != Complex{}) {
                verdict.witness.emplace(rows[static_cast<std::size_t>(k)], v(k));
            }
        }
    }
    return verdict;
}

Complex expectation(const HermitianMatrix &rho, const std::map<BasisIndex, Complex> &v) {
    auto component = [&](BasisIndex i) {
        auto it = v.find(i);
        return it == v.end() ? Complex{} : it->second;
    };
    Complex total{};
    for (const auto &e : rho.entries()) {
        const Complex vi = component(e.row);
        const Complex vj = component(e.col);
        if (e.row == e.col) {
            total += std::norm(vi) * e.value;
        } else {
            total += std::conj(vi) * e.value * vj + std::conj(vj) * std::conj(e.value) * vi;
        }
    }
    return total;
}

bool equal_up_to_global_phase(const PureState &psi, const PureState &phi, double tol) {
    if (!(psi.dims() == phi.dims())) {
        throw Error(ErrorCode::DimensionMismatch, "states belong to different systems");
    }
    // Align on the largest-magnitude amplitude of psi (smallest index on ties).
    BasisIndex anchor = 0;
    double best = -1.0;
    for (const auto &[index, value] : psi.amplitudes()) {
        if (std::abs(value) > best) {
            best = std::abs(value);
            anchor = index;
        }
    }
    if (best < 0.0) {
        return phi.amplitudes().empty();
    }
    const Complex a = psi.amplitude(anchor);
    const Complex b = phi.amplitude(anchor);
    if (std::abs(b) == 0.0) {
        return false;
    }
    const Complex ratio = a / b;
    const Complex theta = ratio / std::abs(ratio);
    for (const auto &[index, value] : psi.amplitudes()) {
        if (std::abs(value - theta * phi.amplitude(index)) > tol) {
            return false;
        }
    }
    for (const auto &[index, value] : phi.amplitudes()) {
        if (std::abs(psi.amplitude(index) - theta * value) > tol) {
            return false;
        }
    }
    return true;
}

double fidelity(const PureState &psi, const PureState &phi) {
    if (!(psi.dims() == phi.dims())) {
        throw Error(ErrorCode::DimensionMismatch, "states belong to different systems");
    }
    Complex overlap{};
    for (const auto &[index, value] : psi.amplitudes()) {
        overlap += std::conj(value) * phi.amplitude(index);
    }
    return std::norm(overlap);
}

SparseState::SparseState(int n, int d, std::vector<std::pair<SparseWord, Complex>> amplitudes)
    : n_(n), d_(d) {
    const Dims dims(n, d);  // validates n and d
    auto by_word = [](const auto &a, const auto &b) { return a.first < b.first; };
    if (!std::is_sorted(amplitudes.begin(), amplitudes.end(), by_word)) {
        std::sort(amplitudes.begin(), amplitudes.end(), by_word);
    }
    double norm = 0.0;
    for (auto &[word, value] : amplitudes) {
        for (const auto &[position, digit] : word.nonzero()) {
            if (position > n || digit >= d) {
                throw Error(ErrorCode::InvalidDigit, "sparse word does not fit the system");
            }
        }
        if (!words_.empty() && words_.back() == word) {
            throw Error(ErrorCode::InvalidArgument, "duplicate sparse word");
        }
        if (value == Complex{}) {
            continue;
        }
        norm += std::norm(value);
        words_.push_back(std::move(word));
        amplitudes_.push_back(value);
    }
    const double scale = renormalization_scale(norm);
    norm_squared_ = 0.0;
    for (auto &value : amplitudes_) {
        value *= scale;
        norm_squared_ += std::norm(value);
    }
    by_party_.resize(static_cast<std::size_t>(n) + 1);
    std::size_t capacity = 16;
    while (capacity < 2 * words_.size()) {
        capacity *= 2;
    }
    slots_.assign(capacity, 0);
    for (std::size_t k = 0; k < words_.size(); ++k) {
        std::size_t slot = words_[k].hash() & (capacity - 1);
        while (slots_[slot] != 0) {
            slot = (slot + 1) & (capacity - 1);
        }
        slots_[slot] = k + 1;
        for (const auto &entry : words_[k].nonzero()) {
            by_party_[static_cast<std::size_t>(entry.position)].push_back(k);
        }
    }
}

std::optional<std::size_t> SparseState::find(const SparseWord &word) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t slot = word.hash() & mask; slots_[slot] != 0; slot = (slot + 1) & mask) {
        if (words_[slots_[slot] - 1] == word) {
            return slots_[slot] - 1;
        }
    }
    return std::nullopt;
}

const std::vector<std::size_t> &SparseState::touching(int party) const {
    if (party < 1 || party > n_) {
        throw Error(ErrorCode::InvalidArgument, "party outside 1..N");
    }
    return by_party_[static_cast<std::size_t>(party)];
}

std::vector<SparseWord> sparse_w_support(int n, int d) {
    const Dims dims(n, d);
    std::vector<SparseWord> out;
    out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d - 1));
    for (int position = n; position >= 1; --position) {
        for (int digit = 1; digit < d; ++digit) {
            out.emplace_back(std::vector<DigitAt>{{position, digit}});
        }
    }
    return out;
}

namespace {

SparseState sparse_family(int n, int d, std::vector<SparseWord> support,
                          const std::vector<Complex> &coefficients) {
    if (support.size() != coefficients.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::to_string(support.size()) + " coefficients");
    }
    std::vector<std::pair<SparseWord, Complex>> amplitudes;
    amplitudes.reserve(support.size());
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (coefficients[k] == Complex{}) {
            throw Error(ErrorCode::ZeroCoefficient, "zero coefficient in a W/Dicke state");
        }
        amplitudes.emplace_back(std::move(support[k]), coefficients[k]);
    }
    return SparseState(n, d, std::move(amplitudes));
}

}  // namespace

SparseState make_sparse_w(int n, int d, const std::vector<Complex> &coefficients) {
    return sparse_family(n, d, sparse_w_support(n, d), coefficients);
}

SparseState make_sparse_d_dicke(const SupportDescriptor &counts,
                                const std::vector<Complex> &coefficients) {
    return sparse_family(counts.n(), counts.d(), support_words(counts), coefficients);
}

}  // namespace qmarg
