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

// Acceptance checks. Each criterion prints one PASS or FAIL line with its
// measurements; the exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qmarg/error.hpp"
#include "qmarg/qmp.hpp"
#include "qmarg/random.hpp"
#include "qmarg/reconstruction.hpp"

using namespace qmarg;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Records the first failure; later checks only add to the detail.
class Checker {
  public:
    void require(bool ok, const std::string &what) {
        if (!ok && pass_) {
            pass_ = false;
            first_ = what;
        }
    }
    Outcome finish(const std::string &detail) const {
        return {pass_, pass_ ? detail : first_ + "; " + detail};
    }

  private:
    bool pass_ = true;
    std::string first_;
};

std::string fmt(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3g", v);
    return buffer;
}

AmplitudeMap random_on(const std::vector<BasisIndex> &support, std::uint64_t seed) {
    const auto coeffs = random_coefficients(support.size(), seed);
    AmplitudeMap a;
    for (std::size_t k = 0; k < support.size(); ++k) {
        a[support[k]] = coeffs[k];
    }
    return a;
}

PureState random_dicke(int n, int l, std::uint64_t seed) {
    return make_generalized_dicke(n, l, random_on(support_indices(SupportDescriptor({n - l, l})), seed));
}

ErrorCode error_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

double max_marginal_gap(const MarginalSet &a, const MarginalSet &b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, oracle::max_deviation(a.marginals()[k].rho, b.marginals()[k].rho));
    }
    return worst;
}

Outcome oracle_equivalence() {
    Checker check;
    const std::vector<std::pair<int, int>> shapes = {{2, 2}, {3, 2}, {4, 2}, {5, 2}, {6, 2},
                                                     {2, 3}, {3, 3}, {4, 3}, {5, 3}, {6, 3}};
    double worst = 0.0;
    std::size_t subsets = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto [n, d] = shapes[seed % shapes.size()];
        const PureState psi = random_pure_state(Dims(n, d), 1000 + seed);
        for (int k = 1; k <= n; ++k) {
            for (const PartySet &p : party_subsets(n, k)) {
                const auto expected = oracle::partial_trace(psi, p.parties());
                worst = std::max(worst, oracle::max_deviation(expected, rdm_pure_by_suffixes(psi, p).rho));
                worst = std::max(worst, oracle::max_deviation(expected, rdm_pure(psi, p).rho));
                ++subsets;
            }
        }
    }
    check.require(worst <= 1e-12, "entry deviation above 1e-12");
    return check.finish("200 states, " + std::to_string(subsets) + " party sets, max deviation " +
                        fmt(worst));
}

Outcome w_round_trip() {
    Checker check;
    const std::vector<std::pair<int, int>> shapes = {{3, 2}, {4, 2}, {3, 3}, {4, 3}, {5, 2}};
    int runs = 0;
    double worst = 0.0;
    for (const auto &[n, d] : shapes) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const PureState psi = make_w_state(n, d, random_on(w_support(n, d), 2000 + seed));
            const ReconstructionResult r = reconstruct_w(marginal_set(psi, 2));
            check.require(equal_up_to_global_phase(r.state, psi, 1e-9), "state mismatch");
            worst = std::max(worst, 1.0 - fidelity(r.state, psi));
            ++runs;
        }
    }
    return check.finish(std::to_string(runs) + " round trips, max 1-fidelity " + fmt(worst));
}

Outcome dicke_round_trip() {
    Checker check;
    const std::vector<std::pair<int, int>> shapes = {{5, 1}, {6, 2}, {7, 2}, {8, 3}};
    int runs = 0;
    for (const auto &[n, l] : shapes) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const PureState psi = random_dicke(n, l, 3000 + seed);
            const ReconstructionResult r = reconstruct_dicke(marginal_set(psi, 2 * l), l);
            check.require(equal_up_to_global_phase(r.state, psi, 1e-9), "state mismatch");
            ++runs;
        }
    }
    int rejected = 0;
    for (int n : {4, 5, 6, 7, 8}) {
        const int l = n / 2;
        const PureState psi = random_dicke(n, l, 77);
        const MarginalSet ms = marginal_set(psi, std::min(2 * l, n - 1));
        const bool ok =
            error_of([&] { reconstruct_dicke(ms, l); }) == ErrorCode::UnsupportedRegime;
        check.require(ok, "l = floor(N/2) accepted for N=" + std::to_string(n));
        rejected += ok;
    }
    return check.finish(std::to_string(runs) + " round trips, " + std::to_string(rejected) +
                        "/5 half-filling requests rejected");
}

Outcome unseen_perturbation() {
    Checker check;
    const PureState psi = random_dicke(6, 2, 4000);
    const DensityMatrix rho = to_density(psi);
    const DensityMatrix moved = perturb_unseen(rho, 2, 1e-3);
    int identical = 0;
    for (const PartySet &p : party_subsets(6, 3)) {
        identical += oracle::bit_identical(rdm_mixed(rho, p), rdm_mixed(moved, p));
    }
    check.require(identical == 20, "a 3-party marginal changed");
    double largest = 0.0;
    for (const PartySet &p : party_subsets(6, 4)) {
        largest = std::max(largest, oracle::max_deviation(rdm_mixed(rho, p).rho, rdm_mixed(moved, p).rho));
    }
    check.require(largest >= 1e-4, "no 4-party marginal moved by 1e-4");
    return check.finish(std::to_string(identical) + "/20 3-party marginals bit-identical, largest 4-party change " +
                        fmt(largest));
}

Outcome common_party() {
    Checker check;
    const std::vector<std::pair<int, int>> shapes = {{4, 1}, {5, 2}, {6, 2}};
    std::string counts;
    for (const auto &[n, l] : shapes) {
        std::size_t used = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const PureState psi = random_dicke(n, l, 5000 + seed);
            const int p = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(n));
            const MarginalSet ms = marginal_set(psi, l + 1, CommonParty{p});
            check.require(ms.size() == binomial(n - 1, l), "marginal count differs");
            const ReconstructionResult r = reconstruct_dicke_pure(ms, l, p);
            check.require(equal_up_to_global_phase(r.state, psi, 1e-9), "state mismatch");
            check.require(r.marginals_consulted <= binomial(n - 1, l), "consulted too many");
            used = ms.size();
        }
        counts += " (" + std::to_string(n) + "," + std::to_string(l) + "):" + std::to_string(used) +
                  "=C(" + std::to_string(n - 1) + "," + std::to_string(l) + ")";
    }
    return check.finish("60 round trips, marginal counts" + counts);
}

Outcome twin_pairs() {
    Checker check;
    CoefficientRng rng(6000);
    double pair_gap = 0.0;
    double min_triple_gap = 1.0;
    int distinct = 0;
    for (int trial = 0; trial < 100; ++trial) {
        double r[3];
        double norm = 0.0;
        for (double &x : r) {
            x = 0.1 + 0.9 * rng.open_uniform();
            norm += x * x;
        }
        for (double &x : r) {
            x /= std::sqrt(2.0 * norm);
        }
        const double t3 = 2 * std::numbers::pi * rng.uniform();
        const double t5 = 2 * std::numbers::pi * rng.uniform();
        const double t6 = 2 * std::numbers::pi * rng.uniform();
        const auto [a, b] = remark3_pair(r[0], r[1], r[2], t3, t5, t6);
        pair_gap = std::max(pair_gap, max_marginal_gap(marginal_set(a, 2), marginal_set(b, 2)));
        distinct += !equal_up_to_global_phase(a, b, 1e-9);
        min_triple_gap = std::min(min_triple_gap, max_marginal_gap(marginal_set(a, 3), marginal_set(b, 3)));
    }
    check.require(pair_gap <= 1e-12, "bipartite marginals differ");
    check.require(distinct == 100, "twins equal up to phase");
    check.require(min_triple_gap >= 1e-6, "tripartite marginals agree");
    return check.finish("100 triples, max bipartite gap " + fmt(pair_gap) + ", " +
                        std::to_string(distinct) + " distinct, min tripartite gap " + fmt(min_triple_gap));
}

Outcome large_classes() {
    Checker check;
    const SupportDescriptor large_class({2004, 2, 3});
    const int k = max_hamming(large_class);
    check.require(k == 10, "max Hamming distance is " + std::to_string(k));
    // Five non-zero digits per word bound any distance by 10; disjoint words reach it.
    const SparseWord x({{1, 1}, {2, 1}, {3, 2}, {4, 2}, {5, 2}});
    const SparseWord y({{2005, 1}, {2006, 1}, {2007, 2}, {2008, 2}, {2009, 2}});
    check.require(hamming(x, y) == 10, "witness pair distance");

    const SupportDescriptor desk({6, 1, 2});
    const PureState psi = make_d_dicke(desk, random_on(support_indices(desk), 7000));
    const ReconstructionResult r = reconstruct_d_dicke(marginal_set(psi, max_hamming(desk)), desk);
    check.require(equal_up_to_global_phase(r.state, psi, 1e-9), "(6,1,2) round trip");

    const auto start = std::chrono::steady_clock::now();
    const SupportDescriptor big({2007, 1, 1});
    const std::vector<SparseWord> words = support_words(big);
    check.require(words.size() == multinomial(big) && words.size() == 2009u * 2008u,
                  "support size of (2007,1,1)");
    check.require(std::is_sorted(words.begin(), words.end()) &&
                      std::adjacent_find(words.begin(), words.end()) == words.end(),
                  "support not strictly increasing");
    const SparseState state = make_sparse_d_dicke(big, random_coefficients(words.size(), 7001));
    SparseStateSource source(state);
    std::vector<SparseWord> sample;
    // Evenly spaced words, first and last included; each needs its own 4-party marginal.
    const std::size_t stride = words.size() / 250;
    for (std::size_t s = 0; s < words.size(); s += stride) {
        sample.push_back(words[s]);
    }
    sample.push_back(words.back());
    const std::vector<double> diagonals = recover_sparse_diagonals(source, big, sample);
    double diag_gap = 0.0;
    for (std::size_t s = 0; s < sample.size(); ++s) {
        diag_gap = std::max(diag_gap, std::abs(diagonals[s] - std::norm(state.amplitudes()[*state.find(sample[s])])));
    }
    check.require(diag_gap <= 1e-12, "sparse diagonal recovery");

    const auto coeffs = random_coefficients(2009 * 2, 7002);
    const SparseState w = make_sparse_w(2009, 3, coeffs);
    SparseStateSource w_source(w);
    const SparseReconstruction rw = reconstruct_sparse_w(w_source);
    Complex overlap{};
    for (const auto &[word, amplitude] : rw.amplitudes) {
        overlap += std::conj(w.amplitudes()[*w.find(word)]) * amplitude;
    }
    const double w_fidelity = std::norm(overlap);
    check.require(std::abs(w_fidelity - 1.0) <= 1e-9, "sparse W fidelity");
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(seconds < 10.0, "sparse path took " + fmt(seconds) + " s");
    return check.finish("K(2004,2,3)=" + std::to_string(k) + ", (6,1,2) round trip ok, " +
                        std::to_string(words.size()) + " words of (2007,1,1), " +
                        std::to_string(sample.size()) + " diagonals recovered (max error " + fmt(diag_gap) +
                        "), N=2009 W fidelity " + fmt(w_fidelity) + ", sparse path " + fmt(seconds) + " s");
}

Outcome singlet_infeasibility() {
    Checker check;
    const double s = 1.0 / std::sqrt(2.0);
    const DensityMatrix singlet = to_density(make_generic(Dims(2, 2), {{1, s}, {2, -s}}));
    std::vector<Marginal> list;
    for (const PartySet &p : party_subsets(3, 2)) {
        list.push_back({p, singlet});
    }
    const MarginalSet triple(Dims(3, 2), std::move(list));
    const FeasibilityVerdict v = zero_propagation(triple);
    check.require(v.verdict == Verdict::Infeasible, "not refuted");
    std::vector<bool> killed(8, false);
    for (const ProofStep &step : v.proof) {
        for (BasisIndex i : step.killed_indices) {
            killed[i] = true;
        }
    }
    const auto covered = std::count(killed.begin(), killed.end(), true);
    check.require(covered == 8, "kill chain incomplete");
    check.require(replay_proof(triple, v), "proof does not replay");
    const FeasibilityVerdict numeric = projection_solver(triple, 10000, 1e-8);
    check.require(numeric.verdict == Verdict::Undetermined && numeric.residual > 1e-3,
                  "solver converged on the singlet triple");

    const std::vector<std::pair<int, int>> shapes = {{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3},
                                                     {5, 2}, {4, 3}, {6, 2}, {7, 2}, {8, 2}};
    int witnesses = 0;
    double worst = 0.0;
    int most_iters = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto [n, d] = shapes[seed % shapes.size()];
        const Dims dims(n, d);
        const DensityMatrix joint =
            random_mixed_state(dims, static_cast<int>(dims.size()), 8000 + seed);
        const MarginalSet ms = marginal_set(joint, n == 2 ? 1 : 2);
        check.require(zero_propagation(ms).verdict != Verdict::Infeasible, "feasible input refuted");
        const FeasibilityVerdict f = projection_solver(ms, 10000, 1e-8);
        const bool ok = f.verdict == Verdict::FeasibleWitness && f.residual < 1e-8 &&
                        check_consistency(*f.witness, ms, 1e-8).consistent;
        check.require(ok, "no witness for seed " + std::to_string(seed));
        witnesses += ok;
        worst = std::max(worst, f.residual);
        most_iters = std::max(most_iters, f.iterations);
    }
    return check.finish(std::to_string(v.proof.size()) + " proof steps covering " + std::to_string(covered) +
                        "/8 diagonals, replay ok, singlet residual " + fmt(numeric.residual) +
                        " after 1e4 iterations, " + std::to_string(witnesses) +
                        "/50 witnesses (max residual " + fmt(worst) + ", max iterations " +
                        std::to_string(most_iters) + ")");
}

Outcome marginal_invariants() {
    Checker check;
    CoefficientRng rng(9000);
    const std::vector<std::pair<int, int>> shapes = {{3, 2}, {4, 2}, {5, 2}, {6, 2}, {3, 3}, {4, 3}};
    double trace_gap = 0.0;
    double nest_gap = 0.0;
    for (std::uint64_t c = 0; c < 500; ++c) {
        const auto [n, d] = shapes[c % shapes.size()];
        const Dims dims(n, d);
        const bool mixed = c % 2 == 1;
        const DensityMatrix rho = mixed ? random_mixed_state(dims, 1 + static_cast<int>(c % 4), 9100 + c)
                                        : to_density(random_pure_state(dims, 9100 + c));
        std::vector<int> parties;
        for (int p = 1; p <= n; ++p) {
            if (rng.uniform() < 0.6) {
                parties.push_back(p);
            }
        }
        if (parties.empty()) {
            parties.push_back(1 + static_cast<int>(c % static_cast<std::uint64_t>(n)));
        }
        const PartySet set(parties, n);
        const Marginal m = rdm_mixed(rho, set);
        trace_gap = std::max(trace_gap, std::abs(m.rho.trace() - 1.0));
        check.require(is_psd(m.rho, 1e-10).psd, "marginal not PSD");
        std::vector<int> sub;
        for (int p : parties) {
            if (rng.uniform() < 0.5) {
                sub.push_back(p);
            }
        }
        if (sub.empty()) {
            sub.push_back(parties.front());
        }
        const PartySet subset(sub, n);
        nest_gap = std::max(nest_gap, oracle::max_deviation(reduce_marginal(m, subset).rho,
                                                            rdm_mixed(rho, subset).rho));
    }
    check.require(trace_gap <= 1e-12, "trace off by more than 1e-12");
    check.require(nest_gap <= 1e-12, "nesting inconsistent");
    return check.finish("500 cases, max trace error " + fmt(trace_gap) + ", max nesting error " +
                        fmt(nest_gap));
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        Outcome (*run)();
        double limit_seconds;
    };
    const Criterion criteria[] = {
        {"AC1 diagonal-expression RDM equals generic partial trace", oracle_equivalence, 60},
        {"AC2 W states from bipartite marginals", w_round_trip, 30},
        {"AC3 generalized Dicke states from 2l-party marginals", dicke_round_trip, 120},
        {"AC4 unseen off-diagonals invisible to (l+1)-party marginals", unseen_perturbation, 60},
        {"AC5 pure Dicke states from common-party (l+1)-party marginals", common_party, 60},
        {"AC6 phase-conjugate twins share bipartite marginals", twin_pairs, 60},
        {"AC7 qudit Dicke classes and the sparse path", large_classes, 60},
        {"AC8 singlet triple infeasibility and projection witnesses", singlet_infeasibility, 120},
        {"AC9 marginal invariants", marginal_invariants, 60},
    };
    int failures = 0;
    for (const Criterion &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception &e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (outcome.pass && seconds >= c.limit_seconds) {
            outcome = {false, "over the time limit; " + outcome.detail};
        }
        std::printf("%s %s: %s [%.2f s, limit %.0f s]\n", outcome.pass ? "PASS" : "FAIL", c.name,
                    outcome.detail.c_str(), seconds, c.limit_seconds);
        std::fflush(stdout);
        failures += !outcome.pass;
    }
    return failures == 0 ? 0 : 1;
}
