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

#include "qmarg/qmp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "qmarg/error.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

namespace {

constexpr std::uint64_t kPropagationLimit = std::uint64_t{1} << 20;
constexpr std::uint64_t kSolverLimit = 4096;

// One linear constraint on the joint diagonal: sum over members = value.
struct Constraint {
    int marginal;  // -1 for the trace
    BasisIndex diagonal_index;
    double value;
    std::vector<BasisIndex> members;
};

std::vector<Constraint> build_constraints(const MarginalSet &ms) {
    const Dims &dims = ms.dims();
    if (dims.size() > kPropagationLimit) {
        throw Error(ErrorCode::SizeLimit, "zero propagation is limited to d^N <= 2^20");
    }
    std::vector<Constraint> out;
    for (std::size_t k = 0; k < ms.size(); ++k) {
        const Marginal &m = ms.marginals()[k];
        const Dims local = m.rho.dims();
        for (BasisIndex a = 0; a < local.size(); ++a) {
            out.push_back({static_cast<int>(k), a, m.rho.diagonal(a),
                           diagonal_expression(m.parties, a, dims).suffixes});
        }
    }
    std::vector<BasisIndex> all(dims.size());
    std::iota(all.begin(), all.end(), BasisIndex{0});
    out.push_back({-1, 0, 1.0, std::move(all)});
    return out;
}

const Constraint *find_constraint(const std::vector<Constraint> &cs, const MarginalSet &ms,
                                  int marginal, BasisIndex diagonal_index) {
    if (marginal == -1) {
        return diagonal_index == 0 ? &cs.back() : nullptr;
    }
    if (marginal < 0 || static_cast<std::size_t>(marginal) >= ms.size()) {
        return nullptr;
    }
    for (const Constraint &c : cs) {
        if (c.marginal == marginal && c.diagonal_index == diagonal_index) {
            return &c;
        }
    }
    return nullptr;
}

std::vector<BasisIndex> live_members(const Constraint &c, const std::vector<bool> &alive) {
    std::vector<BasisIndex> out;
    for (BasisIndex k : c.members) {
        if (alive[static_cast<std::size_t>(k)]) {
            out.push_back(k);
        }
    }
    return out;
}

bool is_subset(const std::vector<BasisIndex> &part, const std::vector<BasisIndex> &whole) {
    return std::all_of(part.begin(), part.end(), [&](BasisIndex k) {
        return std::binary_search(whole.begin(), whole.end(), k);
    });
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Infeasible:
            return "Infeasible";
        case Verdict::FeasibleWitness:
            return "FeasibleWitness";
        case Verdict::Undetermined:
            return "Undetermined";
    }
    return "unknown";
}

std::string_view to_string(ProofRule r) {
    switch (r) {
        case ProofRule::ZeroDiagonal:
            return "zero_diagonal";
        case ProofRule::SaturatedSum:
            return "saturated_sum";
        case ProofRule::Trace:
            return "trace";
    }
    return "unknown";
}

std::string_view to_string(ContradictionKind k) {
    switch (k) {
        case ContradictionKind::AllKilled:
            return "all_killed";
        case ContradictionKind::UnsupportedWeight:
            return "unsupported_weight";
        case ContradictionKind::Overdetermined:
            return "overdetermined";
    }
    return "unknown";
}

FeasibilityVerdict zero_propagation(const MarginalSet &ms) {
    const std::vector<Constraint> constraints = build_constraints(ms);
    const std::size_t size = static_cast<std::size_t>(ms.dims().size());
    std::vector<bool> alive(size, true);
    std::map<BasisIndex, Pinned> pins;
    FeasibilityVerdict verdict;

    auto kill_zero_diagonals = [&] {
        bool changed = false;
        for (const Constraint &c : constraints) {
            if (c.value > tol::kPropagationZero) {
                continue;
            }
            const std::vector<BasisIndex> live = live_members(c, alive);
            if (live.empty()) {
                continue;
            }
            for (BasisIndex k : live) {
                alive[static_cast<std::size_t>(k)] = false;
                pins.erase(k);
            }
            verdict.proof.push_back(
                {ProofRule::ZeroDiagonal, c.marginal, c.diagonal_index, live, {}});
            changed = true;
        }
        return changed;
    };

    auto pin_and_saturate = [&] {
        bool changed = false;
        for (const Constraint &c : constraints) {
            if (c.value <= tol::kPropagationZero) {
                continue;
            }
            const std::vector<BasisIndex> live = live_members(c, alive);
            if (live.size() == 1) {
                if (!pins.contains(live.front())) {
                    pins.emplace(live.front(),
                                 Pinned{live.front(), c.marginal, c.diagonal_index, c.value});
                    changed = true;
                }
                continue;
            }
            double pinned_sum = 0.0;
            std::vector<Pinned> used;
            std::vector<BasisIndex> free;
            for (BasisIndex k : live) {
                auto it = pins.find(k);
                if (it != pins.end()) {
                    pinned_sum += it->second.value;
                    used.push_back(it->second);
                } else {
                    free.push_back(k);
                }
            }
            if (!free.empty() && !used.empty() &&
                std::abs(pinned_sum - c.value) <= tol::kPropagationZero) {
                for (BasisIndex k : free) {
                    alive[static_cast<std::size_t>(k)] = false;
                }
                verdict.proof.push_back({c.marginal == -1 ? ProofRule::Trace
                                                          : ProofRule::SaturatedSum,
                                         c.marginal, c.diagonal_index, free, used});
                changed = true;
            }
        }
        return changed;
    };

    // Zero diagonals first, so that kill chains run to closure before any
    // contradiction is reported.
    while (kill_zero_diagonals() || pin_and_saturate()) {
    }

    auto infeasible = [&](ContradictionKind kind, const Constraint &c, std::string detail) {
        verdict.verdict = Verdict::Infeasible;
        verdict.contradiction = Contradiction{kind, c.marginal, c.diagonal_index,
                                              std::move(detail)};
        return verdict;
    };
    if (std::none_of(alive.begin(), alive.end(), [](bool a) { return a; })) {
        return infeasible(ContradictionKind::AllKilled, constraints.back(),
                          "every joint diagonal is forced to zero but the trace is 1");
    }
    for (const Constraint &c : constraints) {
        if (c.value > tol::kPropagationZero && live_members(c, alive).empty()) {
            return infeasible(ContradictionKind::UnsupportedWeight, c,
                              "positive marginal diagonal with no surviving joint diagonal");
        }
    }
    for (const Constraint &c : constraints) {
        const std::vector<BasisIndex> live = live_members(c, alive);
        double pinned_sum = 0.0;
        for (BasisIndex k : live) {
            auto it = pins.find(k);
            if (it != pins.end()) {
                pinned_sum += it->second.value;
            }
        }
        const bool conflict = live.size() == 1 && pins.contains(live.front()) &&
                              std::abs(pins.at(live.front()).value - c.value) >
                                  tol::kPropagationSum;
        if (conflict || pinned_sum > c.value + tol::kPropagationSum) {
            return infeasible(ContradictionKind::Overdetermined, c,
                              "pinned joint diagonals disagree with the marginal diagonal");
        }
    }

    for (std::size_t k = 0; k < size; ++k) {
        if (alive[k]) {
            verdict.surviving.push_back(k);
        }
    }
    for (const auto &[k, pin] : pins) {
        verdict.determined.push_back(pin);
    }
    verdict.verdict = Verdict::Undetermined;
    return verdict;
}

bool replay_proof(const MarginalSet &ms, const FeasibilityVerdict &verdict) {
    if (verdict.verdict != Verdict::Infeasible || !verdict.contradiction) {
        return false;
    }
    const std::vector<Constraint> constraints = build_constraints(ms);
    const std::size_t size = static_cast<std::size_t>(ms.dims().size());
    std::vector<bool> alive(size, true);

    for (const ProofStep &step : verdict.proof) {
        const Constraint *c = find_constraint(constraints, ms, step.marginal, step.diagonal_index);
        if (c == nullptr || step.killed_indices.empty() ||
            !is_subset(step.killed_indices, c->members)) {
            return false;
        }
        if (step.rule == ProofRule::ZeroDiagonal) {
            if (c->value > tol::kPropagationZero) {
                return false;
            }
        } else {
            if ((step.rule == ProofRule::Trace) != (step.marginal == -1) || step.pinned.empty()) {
                return false;
            }
            double sum = 0.0;
            for (const Pinned &p : step.pinned) {
                const Constraint *source =
                    find_constraint(constraints, ms, p.marginal, p.diagonal_index);
                if (source == nullptr || source->value != p.value ||
                    !std::binary_search(c->members.begin(), c->members.end(), p.index) ||
                    std::find(step.killed_indices.begin(), step.killed_indices.end(), p.index) !=
                        step.killed_indices.end()) {
                    return false;
                }
                const std::vector<BasisIndex> live = live_members(*source, alive);
                if (live.size() != 1 || live.front() != p.index) {
                    return false;
                }
                sum += p.value;
            }
            if (std::abs(sum - c->value) > tol::kPropagationZero) {
                return false;
            }
            // Every live member is either pinned or killed by this step.
            for (BasisIndex k : live_members(*c, alive)) {
                const bool pinned = std::any_of(step.pinned.begin(), step.pinned.end(),
                                                [&](const Pinned &p) { return p.index == k; });
                const bool killed = std::find(step.killed_indices.begin(),
                                              step.killed_indices.end(),
                                              k) != step.killed_indices.end();
                if (!pinned && !killed) {
                    return false;
                }
            }
        }
        for (BasisIndex k : step.killed_indices) {
            alive[static_cast<std::size_t>(k)] = false;
        }
    }

    const Contradiction &end = *verdict.contradiction;
    const Constraint *c = find_constraint(constraints, ms, end.marginal, end.diagonal_index);
    if (c == nullptr) {
        return false;
    }
    switch (end.kind) {
        case ContradictionKind::AllKilled:
            return std::none_of(alive.begin(), alive.end(), [](bool a) { return a; });
        case ContradictionKind::UnsupportedWeight:
            return c->value > tol::kPropagationZero && live_members(*c, alive).empty();
        case ContradictionKind::Overdetermined: {
            // Recompute the pins available at the final state.
            std::map<BasisIndex, std::vector<double>> pinned;
            for (const Constraint &other : constraints) {
                const std::vector<BasisIndex> live = live_members(other, alive);
                if (live.size() == 1 && other.value > tol::kPropagationZero) {
                    pinned[live.front()].push_back(other.value);
                }
            }
            const std::vector<BasisIndex> live = live_members(*c, alive);
            if (live.size() == 1) {
                const auto &values = pinned[live.front()];
                return std::any_of(values.begin(), values.end(), [&](double v) {
                    return std::abs(v - c->value) > tol::kPropagationSum;
                });
            }
            double sum = 0.0;
            for (BasisIndex k : live) {
                auto it = pinned.find(k);
                if (it != pinned.end()) {
                    sum += it->second.front();
                }
            }
            return sum > c->value + tol::kPropagationSum;
        }
    }
    return false;
}

namespace {

// Index layout of one marginal inside the joint space: groups[g][a] is the
// joint index with local digits a and traced-out pattern g.
struct Layout {
    std::vector<std::vector<Eigen::Index>> groups;
    Eigen::MatrixXcd target;
};

Layout make_layout(const Marginal &m, const Dims &dims) {
    const Dims local = m.rho.dims();
    const auto local_size = static_cast<Eigen::Index>(local.size());
    std::map<BasisIndex, std::vector<Eigen::Index>> by_key;
    for (BasisIndex k = 0; k < dims.size(); ++k) {
        auto &group = by_key[clear_parties(k, m.parties, dims)];
        if (group.empty()) {
            group.assign(static_cast<std::size_t>(local_size), 0);
        }
        group[static_cast<std::size_t>(project(k, m.parties, dims))] =
            static_cast<Eigen::Index>(k);
    }
    Layout layout;
    for (auto &[key, group] : by_key) {
        layout.groups.push_back(std::move(group));
    }
    layout.target = Eigen::MatrixXcd::Zero(local_size, local_size);
    for (const auto &e : m.rho.entries()) {
        const auto r = static_cast<Eigen::Index>(e.row);
        const auto c = static_cast<Eigen::Index>(e.col);
        layout.target(r, c) = e.value;
        layout.target(c, r) = std::conj(e.value);
    }
    return layout;
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd &x, const Layout &layout) {
    const auto m = layout.target.rows();
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(m, m);
    for (const auto &g : layout.groups) {
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b) {
                y(a, b) += x(g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)]);
            }
        }
    }
    return y;
}

double marginal_residual(const Eigen::MatrixXcd &x, const std::vector<Layout> &layouts) {
    double worst = 0.0;
    for (const Layout &layout : layouts) {
        worst = std::max(worst, (partial_trace(x, layout) - layout.target).cwiseAbs().maxCoeff());
    }
    return worst;
}

// Euclidean projection of a spectrum onto {l >= 0, sum l = 1}: shift all
// eigenvalues by a common tau, then clamp at zero.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd &eigenvalues) {
    std::vector<double> sorted(eigenvalues.begin(), eigenvalues.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double prefix = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        prefix += sorted[k];
        const double candidate = (prefix - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) {
            tau = candidate;
        }
    }
    return (eigenvalues.array() - tau).cwiseMax(0.0);
}

}  // namespace

FeasibilityVerdict projection_solver(const MarginalSet &ms, int max_iters, double tol) {
    const Dims &dims = ms.dims();
    if (dims.size() > kSolverLimit) {
        throw Error(ErrorCode::SizeLimit, "projection solver is limited to d^N <= 4096");
    }
    if (max_iters < 1) {
        throw Error(ErrorCode::InvalidArgument, "max_iters must be positive");
    }
    const auto size = static_cast<Eigen::Index>(dims.size());
    std::vector<Layout> layouts;
    for (const Marginal &m : ms.marginals()) {
        layouts.push_back(make_layout(m, dims));
    }

    Eigen::MatrixXcd x = Eigen::MatrixXcd::Identity(size, size) / static_cast<double>(size);
    FeasibilityVerdict verdict;
    verdict.residual = marginal_residual(x, layouts);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
    for (int it = 1; it <= max_iters && verdict.residual >= tol; ++it) {
        for (const Layout &layout : layouts) {
            const Eigen::MatrixXcd delta =
                (layout.target - partial_trace(x, layout)) / static_cast<double>(layout.groups.size());
            const auto m = layout.target.rows();
            for (const auto &g : layout.groups) {
                for (Eigen::Index a = 0; a < m; ++a) {
                    for (Eigen::Index b = 0; b < m; ++b) {
                        x(g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)]) +=
                            delta(a, b);
                    }
                }
            }
        }
        x = (x + x.adjoint()).eval() * 0.5;
        solver.compute(x);
        const Eigen::VectorXd clamped = project_to_simplex(solver.eigenvalues());
        x = solver.eigenvectors() * clamped.asDiagonal() * solver.eigenvectors().adjoint();
        verdict.residual = marginal_residual(x, layouts);
        verdict.iterations = it;
    }

    if (verdict.residual < tol) {
        std::vector<MatrixEntry> upper;
        for (Eigen::Index r = 0; r < size; ++r) {
            for (Eigen::Index c = r; c < size; ++c) {
                Complex v = x(r, c);
                if (r == c) {
                    v = Complex{v.real(), 0.0};
                }
                if (v != Complex{}) {
                    upper.push_back({static_cast<BasisIndex>(r), static_cast<BasisIndex>(c), v});
                }
            }
        }
        verdict.verdict = Verdict::FeasibleWitness;
        verdict.witness.emplace(HermitianMatrix(dims, std::move(upper)));
    } else {
        verdict.verdict = Verdict::Undetermined;
        for (Eigen::Index k = 0; k < size; ++k) {
            if (x(k, k).real() > tol::kPropagationZero) {
                verdict.surviving.push_back(static_cast<BasisIndex>(k));
            }
        }
    }
    return verdict;
}

ConsistencyReport check_consistency(const DensityMatrix &joint, const MarginalSet &ms,
                                    double tol) {
    if (joint.dims().n() != ms.dims().n()) {
        throw Error(ErrorCode::PartySetMismatch, "marginal set and joint state differ in N");
    }
    if (!(joint.dims() == ms.dims())) {
        throw Error(ErrorCode::DimensionMismatch, "marginal set and joint state differ in d");
    }
    ConsistencyReport report;
    for (const Marginal &given : ms.marginals()) {
        const Marginal computed = rdm_mixed(joint, given.parties);
        double worst = 0.0;
        for (const auto &e : computed.rho.entries()) {
            worst = std::max(worst, std::abs(e.value - given.rho.at(e.row, e.col)));
        }
        for (const auto &e : given.rho.entries()) {
            worst = std::max(worst, std::abs(e.value - computed.rho.at(e.row, e.col)));
        }
        report.residuals.push_back(worst);
        report.consistent = report.consistent && worst <= tol;
    }
    return report;
}

}  // namespace qmarg
