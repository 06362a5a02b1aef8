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
 * Reduced density matrices.
 *
 * An RDM entry r_ab over parties P is a sum over the d^{N-M} completions of
 * the local strings a and b. The completions of a (its suffix list) and of b
 * are enumerated in the same complement order, so r_ab pairs them by
 * position: r_ab = sum_p c_{k_p} conj(c_{l_p}).
 */
#pragma once

#include <map>
#include <variant>
#include <vector>

#include "qmarg/indexing.hpp"
#include "qmarg/states.hpp"

namespace qmarg {

/// Local RDM index together with the full-system indices it collects.
struct DiagonalExpression {
    BasisIndex rdm_index;
    std::vector<BasisIndex> suffixes;
};

DiagonalExpression diagonal_expression(const PartySet &parties, BasisIndex rdm_index,
                                       const Dims &dims);

struct Marginal {
    PartySet parties;
    DensityMatrix rho;  // over Dims(parties.size(), d)
};

/// RDM of a pure state by grouping its support on the traced-out digits.
Marginal rdm_pure(const PureState &psi, const PartySet &parties);
/// RDM of a pure state through explicit diagonal expressions. Enumerates all
/// d^{N-M} suffixes per local index; kept as a reference path.
Marginal rdm_pure_by_suffixes(const PureState &psi, const PartySet &parties);
/// RDM of a mixed state: R_ab = sum_s r_{(k_s)(l_s)} over matching suffixes.
Marginal rdm_mixed(const DensityMatrix &rho, const PartySet &parties);
/// RDM of a sparse pure state; works for any N.
Marginal rdm_sparse(const SparseState &psi, const PartySet &parties);
/// Traces a marginal further down to `subset` (labels of the full system).
Marginal reduce_marginal(const Marginal &m, const PartySet &subset);

/// Marginals of one N-party system, at most one per party set.
class MarginalSet {
  public:
    MarginalSet(Dims dims, std::vector<Marginal> marginals);

    const Dims &dims() const noexcept { return dims_; }
    const std::vector<Marginal> &marginals() const noexcept { return marginals_; }
    std::size_t size() const noexcept { return marginals_.size(); }
    const Marginal *find(const PartySet &parties) const;
    /// Throws InsufficientMarginals when the set has no marginal on `parties`.
    const Marginal &at(const PartySet &parties) const;
    /// Position of the marginal on `parties` in marginals(), or -1.
    int index_of(const PartySet &parties) const;

  private:
    Dims dims_;
    std::vector<Marginal> marginals_;
    std::map<PartySet, std::size_t> by_parties_;
};

struct AllSubsets {};
struct CommonParty {
    int party;
};
using MarginalScheme = std::variant<AllSubsets, CommonParty>;

/// Party sets of size k selected by the scheme, in lexicographic order.
std::vector<PartySet> scheme_party_sets(int n, int k, const MarginalScheme &scheme);

MarginalSet marginal_set(const PureState &psi, int k, const MarginalScheme &scheme = AllSubsets{});
MarginalSet marginal_set(const DensityMatrix &rho, int k,
                         const MarginalScheme &scheme = AllSubsets{});

/// True when entry (i, j) survives the partial trace onto some k-party set.
bool visible_in_k_marginal(const Dims &dims, BasisIndex i, BasisIndex j, int k);

/// Supplies marginals by party set, either from a stored set or computed on
/// demand from a sparse state.
class MarginalSource {
  public:
    virtual ~MarginalSource() = default;
    virtual int n() const = 0;
    virtual int d() const = 0;
    virtual bool has(const PartySet &parties) const = 0;
    virtual const Marginal &get(const PartySet &parties) const = 0;
};

class MarginalSetSource final : public MarginalSource {
  public:
    explicit MarginalSetSource(const MarginalSet &set) : set_(set) {}

    int n() const override { return set_.dims().n(); }
    int d() const override { return set_.dims().d(); }
    bool has(const PartySet &parties) const override { return set_.find(parties) != nullptr; }
    const Marginal &get(const PartySet &parties) const override { return set_.at(parties); }

  private:
    const MarginalSet &set_;
};

/// Computes marginals of a sparse state lazily and caches them.
class SparseStateSource final : public MarginalSource {
  public:
    explicit SparseStateSource(const SparseState &psi) : psi_(psi) {}

    int n() const override { return psi_.n(); }
    int d() const override { return psi_.d(); }
    bool has(const PartySet &parties) const override { return parties.n() == psi_.n(); }
    const Marginal &get(const PartySet &parties) const override;
    std::size_t computed() const noexcept { return cache_.size(); }

  private:
    const SparseState &psi_;
    mutable std::map<PartySet, Marginal> cache_;
};

}  // namespace qmarg
