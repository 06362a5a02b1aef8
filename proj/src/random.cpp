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

#include "qmarg/random.hpp"

#include <cmath>
#include <numbers>

#include "qmarg/error.hpp"

namespace qmarg {

namespace {

constexpr double kTwoPow53 = 9007199254740992.0;

}  // namespace

double CoefficientRng::uniform() {
    return static_cast<double>(engine_() >> 11) / kTwoPow53;
}

double CoefficientRng::open_uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) / kTwoPow53;
}

double CoefficientRng::normal() {
    const double u1 = open_uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex CoefficientRng::coefficient() {
    const double magnitude = 0.1 + 0.9 * open_uniform();
    const double phase = 2.0 * std::numbers::pi * uniform();
    return std::polar(magnitude, phase);
}

std::vector<Complex> random_coefficients(std::size_t count, std::uint64_t seed) {
    CoefficientRng rng(seed);
    std::vector<Complex> out(count);
    double norm = 0.0;
    for (auto &c : out) {
        c = rng.coefficient();
        norm += std::norm(c);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto &c : out) {
        c *= scale;
    }
    return out;
}

PureState random_pure_state(const Dims &dims, std::uint64_t seed) {
    const std::vector<Complex> coefficients = random_coefficients(dims.size(), seed);
    AmplitudeMap amplitudes;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        amplitudes.emplace(k, coefficients[k]);
    }
    return PureState::from_amplitudes(dims, amplitudes);
}

DensityMatrix random_mixed_state(const Dims &dims, int rank, std::uint64_t seed) {
    if (rank < 1) {
        throw Error(ErrorCode::InvalidArgument, "rank must be positive");
    }
    const auto size = static_cast<std::size_t>(dims.size());
    CoefficientRng rng(seed);
    std::vector<Complex> dense(size * size);
    double total = 0.0;
    for (int r = 0; r < rank; ++r) {
        const double weight = 0.1 + 0.9 * rng.open_uniform();
        total += weight;
        std::vector<Complex> v(size);
        double norm = 0.0;
        for (auto &c : v) {
            c = rng.coefficient();
            norm += std::norm(c);
        }
        for (std::size_t i = 0; i < size; ++i) {
            for (std::size_t j = i; j < size; ++j) {
                dense[i * size + j] += weight * v[i] * std::conj(v[j]) / norm;
            }
        }
    }
    std::vector<MatrixEntry> upper;
    upper.reserve(size * (size + 1) / 2);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = i; j < size; ++j) {
            Complex value = dense[i * size + j] / total;
            if (i == j) {
                value = Complex{value.real(), 0.0};
            }
            upper.push_back({i, j, value});
        }
    }
    return DensityMatrix(dims, std::move(upper));
}

}  // namespace qmarg
