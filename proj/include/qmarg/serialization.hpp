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
 * JSON formats.
 *
 *   state     {"n", "d", "amplitudes": [[index, re, im], ...]}
 *   density   {"n", "d", "entries": [[i, j, re, im], ...]}, i <= j
 *   marginals {"n", "d", "marginals": [{"parties": [...], "entries": [...]}]}
 *
 * Reals are written with 17 significant digits.
 */
#pragma once

#include <string>

#include <json.hpp>

#include "qmarg/marginals.hpp"
#include "qmarg/qmp.hpp"
#include "qmarg/reconstruction.hpp"
#include "qmarg/states.hpp"

namespace qmarg {

using Json = nlohmann::ordered_json;

Json to_json(const PureState &psi);
Json to_json(const DensityMatrix &rho);
Json to_json(const MarginalSet &ms);
Json to_json(const std::vector<CertificateRecord> &certificate);
Json to_json(const FeasibilityVerdict &verdict);

PureState state_from_json(const Json &j);
DensityMatrix density_from_json(const Json &j);
MarginalSet marginals_from_json(const Json &j);

/// Deterministic text form: two-space indentation, arrays of scalars on one
/// line, reals as %.17g.
std::string dump(const Json &j);
/// Parses text; malformed input raises ErrorCode::Format.
Json parse_json(const std::string &text);

}  // namespace qmarg
