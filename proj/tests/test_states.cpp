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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "qmarg/error.hpp"
#include "qmarg/random.hpp"
#include "qmarg/states.hpp"

using namespace qmarg;

namespace {

template <typename F>
ErrorCode code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

AmplitudeMap uniform_on(const std::vector<BasisIndex> &support) {
    AmplitudeMap a;
    for (BasisIndex i : support) {
        a[i] = 1.0 / std::sqrt(static_cast<double>(support.size()));
    }
    return a;
}

}  // namespace

TEST(States, standard_w) {
    const PureState w = make_w_state(3, 2, uniform_on({1, 2, 4}));
    ASSERT_EQ(w.support(), (std::vector<BasisIndex>{1, 2, 4}));
    ASSERT_NEAR(w.amplitude(2).real(), 1.0 / std::sqrt(3.0), 1e-15);
    ASSERT_NEAR(w.norm_squared(), 1.0, 1e-15);
}

TEST(States, w_support_ordering) {
    ASSERT_EQ(w_support(3, 2), (std::vector<BasisIndex>{1, 2, 4}));
    ASSERT_EQ(w_support(2, 3), (std::vector<BasisIndex>{1, 2, 3, 6}));
}

TEST(States, w_rejects_bad_keys) {
    ASSERT_EQ(code_of([] { make_w_state(3, 2, {{3, 1.0}}); }), ErrorCode::SupportViolation);
    AmplitudeMap a = uniform_on({1, 2, 4});
    a[1] = 0.0;
    ASSERT_EQ(code_of([&] { make_w_state(3, 2, a); }), ErrorCode::ZeroCoefficient);
}

TEST(States, normalization_is_checked) {
    ASSERT_EQ(code_of([] { make_generic(Dims(2, 2), {{0, 0.5}}); }), ErrorCode::Normalization);
    const PureState ok = make_generic(Dims(2, 2), {{0, 1.0 + 2e-10}});
    ASSERT_NEAR(ok.norm_squared(), 1.0, 1e-15);
}

TEST(States, dicke_support) {
    const PureState gd = make_generalized_dicke(4, 2, uniform_on({3, 5, 6, 9, 10, 12}));
    ASSERT_EQ(gd.support(), (std::vector<BasisIndex>{3, 5, 6, 9, 10, 12}));
    ASSERT_EQ(code_of([] { make_generalized_dicke(4, 2, {{7, 1.0}}); }),
              ErrorCode::SupportViolation);
}

TEST(States, d_dicke_permutations) {
    const SupportDescriptor counts({1, 1, 1});
    const PureState s = make_d_dicke(counts, uniform_on(support_indices(counts)));
    ASSERT_EQ(s.support(), (std::vector<BasisIndex>{5, 7, 11, 15, 19, 21}));
}

TEST(States, build_state_dispatches) {
    StateDescriptor desc;
    desc.family = Family::QubitDicke;
    desc.n = 5;
    desc.l = 2;
    desc.coefficients = random_coefficients(10, 3);
    const PureState s = build_state(desc);
    ASSERT_EQ(s.support(), support_indices(SupportDescriptor({3, 2})));
    desc.coefficients.pop_back();
    ASSERT_EQ(code_of([&] { build_state(desc); }), ErrorCode::InvalidArgument);
}

TEST(States, to_density_basis) {
    const DensityMatrix rho = to_density(make_generic(Dims(3, 2), {{0, 1.0}}));
    ASSERT_EQ(rho.entries().size(), 1u);
    ASSERT_EQ(rho.at(0, 0), Complex(1.0, 0.0));
}

TEST(States, to_density_outer_product) {
    const PureState psi = random_pure_state(Dims(3, 2), 11);
    const DensityMatrix rho = to_density(psi);
    for (BasisIndex i = 0; i < 8; ++i) {
        for (BasisIndex j = 0; j < 8; ++j) {
            const Complex expected = psi.amplitude(i) * std::conj(psi.amplitude(j));
            ASSERT_NEAR(std::abs(rho.at(i, j) - expected), 0.0, 1e-15);
        }
    }
    ASSERT_NEAR(rho.trace(), 1.0, 1e-12);
}

TEST(States, hermitian_validation) {
    ASSERT_EQ(code_of([] { HermitianMatrix(Dims(1, 2), {{1, 0, 1.0}}); }),
              ErrorCode::InvalidMatrix);
    ASSERT_EQ(code_of([] { HermitianMatrix(Dims(1, 2), {{0, 0, Complex(1.0, 0.1)}}); }),
              ErrorCode::InvalidMatrix);
    ASSERT_EQ(code_of([] { HermitianMatrix(Dims(1, 2), {{0, 0, 1.0}, {0, 0, 1.0}}); }),
              ErrorCode::InvalidMatrix);
    ASSERT_EQ(code_of([] { DensityMatrix(Dims(1, 2), {{0, 0, 0.5}}); }), ErrorCode::InvalidMatrix);
}

TEST(States, psd_checks) {
    ASSERT_TRUE(is_psd(to_density(random_pure_state(Dims(3, 3), 2)), 1e-10).psd);
    const HermitianMatrix bad(Dims(1, 2), {{0, 0, 1.5}, {1, 1, -0.5}});
    const PsdVerdict v = is_psd(bad, 1e-10);
    ASSERT_FALSE(v.psd);
    ASSERT_NEAR(v.min_eigenvalue, -0.5, 1e-12);
    ASSERT_NEAR(std::abs(v.witness.at(1)), 1.0, 1e-12);
    ASSERT_LT(expectation(bad, v.witness).real(), -1e-10);
}

TEST(States, psd_catches_inflated_secondary_diagonal) {
    const SupportDescriptor counts({2, 2});
    const PureState gd = make_d_dicke(counts, uniform_on(support_indices(counts)));
    std::vector<MatrixEntry> entries = to_density(gd).entries();
    for (MatrixEntry &e : entries) {
        if (e.row == 3 && e.col == 12) {
            e.value = 0.5;
        }
    }
    const HermitianMatrix inflated(Dims(4, 2), entries);
    const PsdVerdict v = is_psd(inflated, 1e-10);
    ASSERT_FALSE(v.psd);
    ASSERT_LT(expectation(inflated, v.witness).real(), -1e-10);
}

TEST(States, global_phase) {
    const PureState psi = random_pure_state(Dims(3, 2), 5);
    AmplitudeMap rotated;
    const Complex phase = std::polar(1.0, std::numbers::pi / 3);
    for (const auto &[i, a] : psi.amplitudes()) {
        rotated[i] = a * phase;
    }
    const PureState phi = make_generic(psi.dims(), rotated);
    ASSERT_TRUE(equal_up_to_global_phase(psi, psi, 1e-12));
    ASSERT_TRUE(equal_up_to_global_phase(psi, phi, 1e-12));
    ASSERT_NEAR(fidelity(psi, phi), 1.0, 1e-12);
    const PureState other = random_pure_state(Dims(3, 2), 6);
    ASSERT_FALSE(equal_up_to_global_phase(psi, other, 1e-9));
    ASSERT_EQ(code_of([&] { equal_up_to_global_phase(psi, random_pure_state(Dims(2, 2), 1), 1e-9); }),
              ErrorCode::DimensionMismatch);
}

TEST(States, random_is_deterministic) {
    const auto a = random_coefficients(20, 42);
    const auto b = random_coefficients(20, 42);
    ASSERT_EQ(a, b);
    double norm = 0.0;
    for (const Complex &c : a) {
        norm += std::norm(c);
    }
    ASSERT_NEAR(norm, 1.0, 1e-14);
    CoefficientRng rng(9);
    for (int k = 0; k < 1000; ++k) {
        const Complex c = rng.coefficient();
        ASSERT_GT(std::abs(c), 0.1);
        ASSERT_LT(std::abs(c), 1.0);
    }
}

TEST(States, random_mixed_state_is_valid) {
    const DensityMatrix rho = random_mixed_state(Dims(2, 3), 4, 8);
    ASSERT_NEAR(rho.trace(), 1.0, 1e-12);
    ASSERT_TRUE(is_psd(rho, 1e-10).psd);
}

TEST(States, sparse_w_matches_dense) {
    const auto coeffs = random_coefficients(8, 4);
    const SparseState sparse = make_sparse_w(4, 3, coeffs);
    ASSERT_EQ(sparse.size(), 8u);
    ASSERT_NEAR(sparse.norm_squared(), 1.0, 1e-12);
    const Dims dims(4, 3);
    for (std::size_t k = 0; k < sparse.size(); ++k) {
        const BasisIndex i = sparse.words()[k].to_index(dims);
        ASSERT_EQ(hamming(dims, i, 0), 1);
        ASSERT_EQ(sparse.find(sparse.words()[k]), k);
    }
    ASSERT_EQ(sparse.touching(2).size(), 2u);
}

TEST(States, random_stream_is_pinned) {
    // The engine is std::mt19937_64; its 10000th output is fixed by the standard.
    std::mt19937_64 engine(5489u);
    engine.discard(9999);
    ASSERT_EQ(engine(), 9981545732273789042ULL);
    std::mt19937_64 raw(1);
    CoefficientRng rng(1);
    ASSERT_EQ(rng.uniform(), static_cast<double>(raw() >> 11) / 9007199254740992.0);

    const auto c = random_coefficients(3, 1);
    const Complex expected[] = {{0.20885633665203249, 0.24116590977489266},
                                {0.72590348904179125, 0.096452908264665627},
                                {0.51071956788593842, -0.31803226041611515}};
    for (int k = 0; k < 3; ++k) {
        ASSERT_NEAR(std::abs(c[static_cast<std::size_t>(k)] - expected[k]), 0.0, 1e-15);
    }
}
