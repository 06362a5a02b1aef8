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

#include "qmarg/error.hpp"

namespace qmarg {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return "invalid-argument";
        case ErrorCode::InvalidDigit:
            return "invalid-digit";
        case ErrorCode::DimensionMismatch:
            return "dimension-mismatch";
        case ErrorCode::SizeLimit:
            return "size-limit";
        case ErrorCode::SupportViolation:
            return "support-violation";
        case ErrorCode::ZeroCoefficient:
            return "zero-coefficient";
        case ErrorCode::Normalization:
            return "normalization";
        case ErrorCode::InvalidMatrix:
            return "invalid-matrix";
        case ErrorCode::KOutOfRange:
            return "k-out-of-range";
        case ErrorCode::NotWClass:
            return "not-w-class";
        case ErrorCode::NotDickeClass:
            return "not-dicke-class";
        case ErrorCode::InconsistentMarginals:
            return "inconsistent-marginals";
        case ErrorCode::InsufficientMarginals:
            return "insufficient-marginals";
        case ErrorCode::UnsupportedRegime:
            return "unsupported-regime";
        case ErrorCode::PartySetMismatch:
            return "party-set-mismatch";
        case ErrorCode::InconsistentShapes:
            return "inconsistent-shapes";
        case ErrorCode::Format:
            return "format";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace qmarg
