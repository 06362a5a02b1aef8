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

#include "qmarg/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "qmarg/error.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

namespace {

struct EngineConfig {
    int n;
    int d;
    int k;         // marginal size
    int majority;  // digit filling the traced-out positions
    std::optional<int> common;
    bool all_pairs;  // otherwise only pairs with the gauge reference
    ErrorCode class_error;
};

struct EngineRecord {
    PartySet parties;
    BasisIndex local_row;
    BasisIndex local_col;
    std::size_t row;  // positions in the support list
    std::size_t col;
    Complex value;
};

struct Edge {
    std::size_t from;
    std::size_t to;
    EngineRecord record;
};

struct EngineOutput {
    std::vector<Complex> amplitudes;
    std::vector<EngineRecord> certificate;
    std::set<PartySet> consulted;
};

std::vector<int> off_majority(const SparseWord &w, int n, int majority) {
    std::vector<int> out;
    if (majority == 0) {
        for (const auto &entry : w.nonzero()) {
            out.push_back(entry.position);
        }
        return out;
    }
    for (int position = 1; position <= n; ++position) {
        if (w.digit_at(position) != majority) {
            out.push_back(position);
        }
    }
    return out;
}

// Party set holding the off-majority positions of the given words plus the
// common party, padded with the smallest absent parties. Empty if too large.
std::optional<PartySet> select_parties(const EngineConfig &cfg,
                                       std::initializer_list<const SparseWord *> words) {
    std::vector<int> parties;
    for (const SparseWord *w : words) {
        const std::vector<int> positions = off_majority(*w, cfg.n, cfg.majority);
        parties.insert(parties.end(), positions.begin(), positions.end());
    }
    if (cfg.common) {
        parties.push_back(*cfg.common);
    }
    std::sort(parties.begin(), parties.end());
    parties.erase(std::unique(parties.begin(), parties.end()), parties.end());
    if (static_cast<int>(parties.size()) > cfg.k) {
        return std::nullopt;
    }
    std::vector<int> padded;
    padded.reserve(static_cast<std::size_t>(cfg.k));
    std::size_t next = 0;
    for (int party = 1; party <= cfg.n && static_cast<int>(padded.size()) < cfg.k; ++party) {
        if (next < parties.size() && parties[next] == party) {
            padded.push_back(party);
            ++next;
        } else if (static_cast<int>(padded.size() + parties.size() - next) < cfg.k) {
            padded.push_back(party);
        }
    }
    return PartySet(std::move(padded), cfg.n);
}

std::vector<Edge> collect_edges(const EngineConfig &cfg, const std::vector<SparseWord> &support,
                                const MarginalSource &source, std::optional<std::size_t> hub) {
    std::vector<Edge> edges;
    auto try_pair = [&](std::size_t x, std::size_t y) {
        const auto parties = select_parties(cfg, {&support[x], &support[y]});
        if (!parties || !source.has(*parties)) {
            return;
        }
        const Marginal &m = source.get(*parties);
        const BasisIndex a = support[x].project(*parties, cfg.d);
        const BasisIndex b = support[y].project(*parties, cfg.d);
        edges.push_back({x, y, EngineRecord{*parties, a, b, x, y, m.rho.at(a, b)}});
    };
    if (hub) {
        for (std::size_t y = 0; y < support.size(); ++y) {
            if (y != *hub) {
                try_pair(*hub, y);
            }
        }
    } else {
        for (std::size_t x = 0; x < support.size(); ++x) {
            for (std::size_t y = x + 1; y < support.size(); ++y) {
                try_pair(x, y);
            }
        }
    }
    return edges;
}

EngineOutput run_engine(const EngineConfig &cfg, const std::vector<SparseWord> &support,
                        const MarginalSource &source) {
    EngineOutput out;
    const std::size_t size = support.size();
    std::vector<double> diag(size);
    double total = 0.0;
    for (std::size_t x = 0; x < size; ++x) {
        const auto parties = select_parties(cfg, {&support[x]});
        if (!parties) {
            throw Error(ErrorCode::UnsupportedRegime, "support string does not fit the marginals");
        }
        const Marginal &m = source.get(*parties);
        out.consulted.insert(*parties);
        const BasisIndex a = support[x].project(*parties, cfg.d);
        diag[x] = m.rho.diagonal(a);
        if (diag[x] <= tol::kStructuralZero) {
            throw Error(ErrorCode::ZeroCoefficient,
                        "recovered coefficient weight vanishes on " + parties->to_string());
        }
        total += diag[x];
        out.certificate.push_back({*parties, a, a, x, x, Complex{diag[x], 0.0}});
    }
    if (std::abs(total - 1.0) > tol::kConsistency) {
        throw Error(cfg.class_error, "support weights sum to " + std::to_string(total) +
                                         "; weight lies outside the class support");
    }

    // Gauge: largest weight, first in index order on ties, is real positive.
    const std::size_t ref = static_cast<std::size_t>(
        std::max_element(diag.begin(), diag.end()) - diag.begin());
    const std::vector<Edge> edges =
        collect_edges(cfg, support, source, cfg.all_pairs ? std::nullopt : std::optional(ref));

    std::vector<std::vector<std::size_t>> adjacency(size);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        adjacency[edges[e].from].push_back(e);
        adjacency[edges[e].to].push_back(e);
    }
    out.amplitudes.assign(size, Complex{});
    std::vector<bool> known(size, false);
    out.amplitudes[ref] = Complex{std::sqrt(diag[ref]), 0.0};
    known[ref] = true;
    std::deque<std::size_t> queue{ref};
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t e : adjacency[u]) {
            const Edge &edge = edges[e];
            const std::size_t v = edge.from == u ? edge.to : edge.from;
            if (known[v]) {
                continue;
            }
            const Complex p = edge.record.value;  // a_from conj(a_to)
            out.amplitudes[v] = edge.from == u ? std::conj(p / out.amplitudes[u])
                                               : p / std::conj(out.amplitudes[u]);
            known[v] = true;
            out.certificate.push_back(edge.record);
            out.consulted.insert(edge.record.parties);
            queue.push_back(v);
        }
    }
    for (std::size_t x = 0; x < size; ++x) {
        if (!known[x]) {
            throw Error(ErrorCode::InsufficientMarginals,
                        "phase of a support amplitude is not reachable from the reference");
        }
    }
    for (const Edge &edge : edges) {
        const Complex expect = out.amplitudes[edge.from] * std::conj(out.amplitudes[edge.to]);
        if (std::abs(edge.record.value - expect) > tol::kConsistency) {
            throw Error(ErrorCode::InconsistentMarginals,
                        "off-diagonal products disagree on " + edge.record.parties.to_string());
        }
    }
    for (std::size_t x = 0; x < size; ++x) {
        if (std::abs(std::norm(out.amplitudes[x]) - diag[x]) > tol::kConsistency) {
            throw Error(ErrorCode::InconsistentMarginals,
                        "recovered modulus disagrees with its diagonal");
        }
    }
    return out;
}

// Diagonal entries of local patterns the class cannot produce must vanish.
void check_structural_zeros(const MarginalSet &ms,
                            const std::function<bool(const Digits &)> &admissible,
                            ErrorCode class_error) {
    for (const Marginal &m : ms.marginals()) {
        const Dims local = m.rho.dims();
        for (const auto &e : m.rho.entries()) {
            if (e.row != e.col || e.value.real() <= tol::kStructuralZero) {
                continue;
            }
            const Digits pattern = to_digits(e.row, local);
            if (!admissible(pattern)) {
                throw Error(class_error, "marginal on " + m.parties.to_string() +
                                             " has weight on |" + format_digits(pattern) + ">");
            }
        }
    }
}

void require_marginal_size(const MarginalSet &ms, int k) {
    for (const Marginal &m : ms.marginals()) {
        if (m.parties.size() != k) {
            throw Error(ErrorCode::PartySetMismatch,
                        "expected " + std::to_string(k) + "-party marginals, got " +
                            m.parties.to_string());
        }
    }
}

/// Size check plus presence of every k-subset.
void require_all_subsets(const MarginalSet &ms, int k) {
    require_marginal_size(ms, k);
    if (ms.size() != binomial(ms.dims().n(), k)) {
        throw Error(ErrorCode::InsufficientMarginals,
                    "expected all " + std::to_string(binomial(ms.dims().n(), k)) + " " +
                        std::to_string(k) + "-party marginals, got " + std::to_string(ms.size()));
    }
}

std::vector<SparseWord> to_words(const std::vector<BasisIndex> &support, const Dims &dims) {
    std::vector<SparseWord> words;
    words.reserve(support.size());
    for (BasisIndex i : support) {
        words.push_back(SparseWord::from_index(i, dims));
    }
    return words;
}

ReconstructionResult finish_dense(const EngineOutput &out, const std::vector<BasisIndex> &support,
                                  const Dims &dims) {
    AmplitudeMap amplitudes;
    for (std::size_t x = 0; x < support.size(); ++x) {
        amplitudes.emplace(support[x], out.amplitudes[x]);
    }
    ReconstructionResult result{PureState::from_amplitudes(dims, amplitudes), {},
                                out.consulted.size()};
    result.certificate.reserve(out.certificate.size());
    for (const EngineRecord &r : out.certificate) {
        result.certificate.push_back(
            {r.parties, r.local_row, r.local_col, support[r.row], support[r.col], r.value});
    }
    return result;
}

bool single_excitation(const Digits &pattern) {
    return std::count_if(pattern.begin(), pattern.end(), [](int digit) { return digit != 0; }) <= 1;
}

EngineConfig qubit_dicke_config(const MarginalSet &ms, int l, int k) {
    const Dims &dims = ms.dims();
    if (dims.d() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "qubit Dicke reconstruction needs d = 2");
    }
    if (l < 1 || l > dims.n() - 1) {
        throw Error(ErrorCode::InvalidArgument, "excitation number must lie in 1..N-1");
    }
    return EngineConfig{dims.n(), 2, k, 0, std::nullopt, true, ErrorCode::NotDickeClass};
}

}  // namespace

bool PhaseGraph::connected() const {
    if (nodes.empty()) {
        return true;
    }
    std::map<BasisIndex, std::vector<BasisIndex>> adjacency;
    for (const PhaseEdge &e : edges) {
        adjacency[e.from].push_back(e.to);
        adjacency[e.to].push_back(e.from);
    }
    std::set<BasisIndex> seen{nodes.front()};
    std::deque<BasisIndex> queue{nodes.front()};
    while (!queue.empty()) {
        const BasisIndex u = queue.front();
        queue.pop_front();
        for (BasisIndex v : adjacency[u]) {
            if (seen.insert(v).second) {
                queue.push_back(v);
            }
        }
    }
    return std::all_of(nodes.begin(), nodes.end(),
                       [&](BasisIndex node) { return seen.contains(node); });
}

ReconstructionResult reconstruct_w(const MarginalSet &ms) {
    const Dims &dims = ms.dims();
    if (dims.n() < 3) {
        throw Error(ErrorCode::UnsupportedRegime, "W reconstruction needs at least 3 parties");
    }
    require_all_subsets(ms, 2);
    check_structural_zeros(ms, single_excitation, ErrorCode::NotWClass);
    const std::vector<BasisIndex> support = w_support(dims.n(), dims.d());
    const EngineConfig cfg{dims.n(), dims.d(), 2, 0, std::nullopt, true, ErrorCode::NotWClass};
    const EngineOutput out = run_engine(cfg, to_words(support, dims), MarginalSetSource(ms));
    return finish_dense(out, support, dims);
}

ReconstructionResult reconstruct_dicke(const MarginalSet &ms, int l) {
    const EngineConfig cfg = qubit_dicke_config(ms, l, 2 * l);
    const int n = cfg.n;
    if (l >= n / 2) {
        throw Error(ErrorCode::UnsupportedRegime,
                    "2l-partite marginals carry no information when l >= floor(N/2)");
    }
    require_all_subsets(ms, 2 * l);
    const SupportDescriptor counts({n - l, l});
    check_structural_zeros(
        ms, [&](const Digits &p) { return counts.admits_pattern(p); }, ErrorCode::NotDickeClass);
    const std::vector<BasisIndex> support = support_indices(counts);
    const EngineOutput out = run_engine(cfg, to_words(support, ms.dims()), MarginalSetSource(ms));
    return finish_dense(out, support, ms.dims());
}

ReconstructionResult reconstruct_dicke_pure(const MarginalSet &ms, int l, int p) {
    EngineConfig cfg = qubit_dicke_config(ms, l, l + 1);
    if (l + 1 > cfg.n - 1) {
        throw Error(ErrorCode::UnsupportedRegime, "(l+1)-partite marginals must be proper");
    }
    if (p < 1 || p > cfg.n) {
        throw Error(ErrorCode::InvalidArgument, "common party outside 1..N");
    }
    cfg.common = p;
    for (const Marginal &m : ms.marginals()) {
        if (m.parties.size() != l + 1 || !m.parties.contains(p)) {
            throw Error(ErrorCode::PartySetMismatch,
                        "marginal " + m.parties.to_string() + " is not an (l+1)-party set with " +
                            "party " + std::to_string(p));
        }
    }
    const SupportDescriptor counts({cfg.n - l, l});
    check_structural_zeros(
        ms, [&](const Digits &q) { return counts.admits_pattern(q); }, ErrorCode::NotDickeClass);
    const std::vector<BasisIndex> support = support_indices(counts);
    const EngineOutput out = run_engine(cfg, to_words(support, ms.dims()), MarginalSetSource(ms));
    return finish_dense(out, support, ms.dims());
}

PhaseGraph dicke_phase_graph(const MarginalSet &ms, int l, int p) {
    EngineConfig cfg = qubit_dicke_config(ms, l, l + 1);
    cfg.common = p;
    const std::vector<BasisIndex> support = support_indices(SupportDescriptor({cfg.n - l, l}));
    const std::vector<Edge> edges =
        collect_edges(cfg, to_words(support, ms.dims()), MarginalSetSource(ms), std::nullopt);
    PhaseGraph graph{support, {}};
    for (const Edge &e : edges) {
        graph.edges.push_back({support[e.from], support[e.to], e.record.value});
    }
    return graph;
}

ReconstructionResult reconstruct_d_dicke(const MarginalSet &ms, const SupportDescriptor &counts) {
    const Dims &dims = ms.dims();
    if (!(dims == Dims(counts.n(), counts.d()))) {
        throw Error(ErrorCode::DimensionMismatch, "counts do not match the marginal set");
    }
    const int k = max_hamming(counts);
    if (k >= dims.n()) {
        throw Error(ErrorCode::UnsupportedRegime,
                    "maximum Hamming distance equals N; only the full state determines it");
    }
    require_all_subsets(ms, k);
    check_structural_zeros(
        ms, [&](const Digits &p) { return counts.admits_pattern(p); }, ErrorCode::NotDickeClass);
    const std::vector<BasisIndex> support = support_indices(counts);
    const EngineConfig cfg{dims.n(), dims.d(), k, counts.majority_digit(), std::nullopt, true,
                           ErrorCode::NotDickeClass};
    const EngineOutput out = run_engine(cfg, to_words(support, dims), MarginalSetSource(ms));
    return finish_dense(out, support, dims);
}

SparseReconstruction reconstruct_sparse_w(const MarginalSource &source) {
    if (source.n() < 3) {
        throw Error(ErrorCode::UnsupportedRegime, "W reconstruction needs at least 3 parties");
    }
    const std::vector<SparseWord> support = sparse_w_support(source.n(), source.d());
    const EngineConfig cfg{source.n(), source.d(), 2, 0, std::nullopt, false,
                           ErrorCode::NotWClass};
    const EngineOutput out = run_engine(cfg, support, source);
    SparseReconstruction result;
    result.marginals_consulted = out.consulted.size();
    result.amplitudes.reserve(support.size());
    for (std::size_t x = 0; x < support.size(); ++x) {
        result.amplitudes.emplace_back(support[x], out.amplitudes[x]);
    }
    return result;
}

std::vector<double> recover_sparse_diagonals(const MarginalSource &source,
                                             const SupportDescriptor &counts,
                                             const std::vector<SparseWord> &words) {
    if (source.n() != counts.n() || source.d() != counts.d()) {
        throw Error(ErrorCode::DimensionMismatch, "counts do not match the source");
    }
    const int k = max_hamming(counts);
    if (k >= counts.n()) {
        throw Error(ErrorCode::UnsupportedRegime, "maximum Hamming distance equals N");
    }
    const EngineConfig cfg{counts.n(), counts.d(), k, counts.majority_digit(), std::nullopt,
                           false, ErrorCode::NotDickeClass};
    std::vector<double> out;
    out.reserve(words.size());
    for (const SparseWord &w : words) {
        const auto parties = select_parties(cfg, {&w});
        if (!parties) {
            throw Error(ErrorCode::NotDickeClass, "word is outside the class");
        }
        out.push_back(source.get(*parties).rho.diagonal(w.project(*parties, cfg.d)));
    }
    return out;
}

std::pair<PureState, PureState> remark3_pair(double r3, double r5, double r6, double theta3,
                                             double theta5, double theta6) {
    const double norm = 2.0 * (r3 * r3 + r5 * r5 + r6 * r6);
    if (std::abs(norm - 1.0) > tol::kRenormalize) {
        throw Error(ErrorCode::Normalization, "2(r3^2 + r5^2 + r6^2) must equal 1");
    }
    auto build = [&](double sign) {
        const Complex c3 = std::polar(r3, sign * theta3);
        const Complex c5 = std::polar(r5, sign * theta5);
        const Complex c6 = std::polar(r6, sign * theta6);
        return make_generalized_dicke(4, 2, {{3, c3}, {12, c3}, {5, c5}, {10, c5}, {6, c6},
                                             {9, c6}});
    };
    return {build(1.0), build(-1.0)};
}

DensityMatrix perturb_unseen(const DensityMatrix &rho, int l, double eps) {
    const Dims &dims = rho.dims();
    if (dims.d() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "perturbation is defined for qubits");
    }
    if (l < 1 || l > dims.n() - 1) {
        throw Error(ErrorCode::InvalidArgument, "excitation number must lie in 1..N-1");
    }
    std::map<std::pair<BasisIndex, BasisIndex>, Complex> entries;
    for (const auto &e : rho.entries()) {
        entries.emplace(std::pair(e.row, e.col), e.value);
    }
    const std::vector<BasisIndex> support = support_indices(SupportDescriptor({dims.n() - l, l}));
    for (std::size_t x = 0; x < support.size(); ++x) {
        for (std::size_t y = x + 1; y < support.size(); ++y) {
            if (hamming(dims, support[x], support[y]) > l + 1) {
                entries[{support[x], support[y]}] += eps;
            }
        }
    }
    std::vector<MatrixEntry> upper;
    upper.reserve(entries.size());
    for (const auto &[key, value] : entries) {
        upper.push_back({key.first, key.second, value});
    }
    return DensityMatrix(dims, std::move(upper));
}

}  // namespace qmarg
