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

#include "qmarg/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qmarg/error.hpp"

namespace qmarg {

namespace {

Json entries_json(const HermitianMatrix &m) {
    Json out = Json::array();
    for (const auto &e : m.entries()) {
        out.push_back(Json::array({e.row, e.col, e.value.real(), e.value.imag()}));
    }
    return out;
}

[[noreturn]] void format_error(const std::string &what) { throw Error(ErrorCode::Format, what); }

const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        format_error(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

int int_field(const Json &j, const char *key) {
    const Json &v = field(j, key);
    if (!v.is_number_integer()) {
        format_error(std::string("field \"") + key + "\" must be an integer");
    }
    return v.get<int>();
}

BasisIndex index_value(const Json &v) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        format_error("basis index must be a non-negative integer");
    }
    return v.get<BasisIndex>();
}

double real_value(const Json &v) {
    if (!v.is_number()) {
        format_error("expected a number");
    }
    return v.get<double>();
}

std::vector<MatrixEntry> entries_from_json(const Json &list) {
    if (!list.is_array()) {
        format_error("\"entries\" must be an array");
    }
    std::vector<MatrixEntry> out;
    out.reserve(list.size());
    for (const Json &row : list) {
        if (!row.is_array() || row.size() != 4) {
            format_error("matrix entries are [i, j, re, im]");
        }
        const BasisIndex i = index_value(row[0]);
        const BasisIndex k = index_value(row[1]);
        if (i > k) {
            format_error("matrix entries must satisfy i <= j");
        }
        out.push_back({i, k, Complex{real_value(row[2]), real_value(row[3])}});
    }
    return out;
}

void write_real(std::string &out, double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    out += buffer;
}

bool is_scalar(const Json &j) { return !j.is_array() && !j.is_object(); }

void write(std::string &out, const Json &j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (j.is_number_float()) {
        write_real(out, j.get<double>());
    } else if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += inner + Json(it.key()).dump() + ": ";
            write(out, it.value(), indent + 1);
        }
        out += "\n" + pad + "}";
    } else if (j.is_array()) {
        if (std::all_of(j.begin(), j.end(), is_scalar)) {
            out += "[";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k > 0) {
                    out += ", ";
                }
                write(out, j[k], indent + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k > 0) {
                out += ",\n";
            }
            out += inner;
            write(out, j[k], indent + 1);
        }
        out += "\n" + pad + "]";
    } else {
        out += j.dump();
    }
}

Json pinned_json(const std::vector<Pinned> &pins) {
    Json out = Json::array();
    for (const Pinned &p : pins) {
        out.push_back({{"index", p.index},
                       {"marginal", p.marginal},
                       {"diagonal_index", p.diagonal_index},
                       {"value", p.value}});
    }
    return out;
}

}  // namespace

Json to_json(const PureState &psi) {
    Json amplitudes = Json::array();
    for (const auto &[index, value] : psi.amplitudes()) {
        amplitudes.push_back(Json::array({index, value.real(), value.imag()}));
    }
    return {{"n", psi.dims().n()}, {"d", psi.dims().d()}, {"amplitudes", amplitudes}};
}

Json to_json(const DensityMatrix &rho) {
    return {{"n", rho.dims().n()}, {"d", rho.dims().d()}, {"entries", entries_json(rho)}};
}

Json to_json(const MarginalSet &ms) {
    Json marginals = Json::array();
    for (const Marginal &m : ms.marginals()) {
        marginals.push_back({{"parties", m.parties.parties()}, {"entries", entries_json(m.rho)}});
    }
    return {{"n", ms.dims().n()}, {"d", ms.dims().d()}, {"marginals", marginals}};
}

Json to_json(const std::vector<CertificateRecord> &certificate) {
    Json out = Json::array();
    for (const CertificateRecord &r : certificate) {
        out.push_back({{"parties", r.parties.parties()},
                       {"local_row", r.local_row},
                       {"local_col", r.local_col},
                       {"row", r.row},
                       {"col", r.col},
                       {"value", Json::array({r.value.real(), r.value.imag()})}});
    }
    return out;
}

Json to_json(const FeasibilityVerdict &verdict) {
    Json out = {{"verdict", std::string(to_string(verdict.verdict))}};
    if (verdict.verdict == Verdict::Infeasible) {
        Json proof = Json::array();
        for (const ProofStep &step : verdict.proof) {
            Json s = {{"marginal", step.marginal},
                      {"diagonal_index", step.diagonal_index},
                      {"killed_indices", step.killed_indices},
                      {"rule", std::string(to_string(step.rule))}};
            if (!step.pinned.empty()) {
                s["pinned"] = pinned_json(step.pinned);
            }
            proof.push_back(std::move(s));
        }
        out["proof"] = std::move(proof);
        if (verdict.contradiction) {
            const Contradiction &c = *verdict.contradiction;
            out["contradiction"] = {{"kind", std::string(to_string(c.kind))},
                                    {"marginal", c.marginal},
                                    {"diagonal_index", c.diagonal_index},
                                    {"detail", c.detail}};
        }
    } else if (verdict.verdict == Verdict::FeasibleWitness) {
        out["residual"] = verdict.residual;
        out["iterations"] = verdict.iterations;
        if (verdict.witness) {
            out["witness"] = to_json(*verdict.witness);
        }
    } else {
        out["surviving"] = verdict.surviving;
        if (!verdict.determined.empty()) {
            out["determined"] = pinned_json(verdict.determined);
        }
        if (verdict.iterations > 0) {
            out["residual"] = verdict.residual;
            out["iterations"] = verdict.iterations;
        }
    }
    return out;
}

PureState state_from_json(const Json &j) {
    const Dims dims(int_field(j, "n"), int_field(j, "d"));
    const Json &list = field(j, "amplitudes");
    if (!list.is_array()) {
        format_error("\"amplitudes\" must be an array");
    }
    AmplitudeMap amplitudes;
    for (const Json &row : list) {
        if (!row.is_array() || row.size() != 3) {
            format_error("amplitudes are [index, re, im]");
        }
        const BasisIndex index = index_value(row[0]);
        if (!amplitudes.emplace(index, Complex{real_value(row[1]), real_value(row[2])}).second) {
            format_error("duplicate amplitude index " + std::to_string(index));
        }
    }
    return PureState::from_amplitudes(dims, amplitudes);
}

DensityMatrix density_from_json(const Json &j) {
    const Dims dims(int_field(j, "n"), int_field(j, "d"));
    return DensityMatrix(dims, entries_from_json(field(j, "entries")));
}

MarginalSet marginals_from_json(const Json &j) {
    const Dims dims(int_field(j, "n"), int_field(j, "d"));
    const Json &list = field(j, "marginals");
    if (!list.is_array()) {
        format_error("\"marginals\" must be an array");
    }
    std::vector<Marginal> marginals;
    for (const Json &m : list) {
        const Json &parties_json = field(m, "parties");
        if (!parties_json.is_array()) {
            format_error("\"parties\" must be an array");
        }
        std::vector<int> parties;
        for (const Json &p : parties_json) {
            if (!p.is_number_integer()) {
                format_error("party labels must be integers");
            }
            parties.push_back(p.get<int>());
        }
        PartySet set(std::move(parties), dims.n());
        const Dims local(set.size(), dims.d());
        marginals.push_back({set, DensityMatrix(local, entries_from_json(field(m, "entries")))});
    }
    return MarginalSet(dims, std::move(marginals));
}

std::string dump(const Json &j) {
    std::string out;
    write(out, j, 0);
    out += "\n";
    return out;
}

Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        format_error(e.what());
    }
}

}  // namespace qmarg
