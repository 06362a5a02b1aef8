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

#include "qmarg/marginals.hpp"

#include <algorithm>
#include <cmath>

#include "qmarg/error.hpp"
#include "qmarg/tolerances.hpp"

namespace qmarg {

namespace {

constexpr BasisIndex kDenseAccumulatorLimit = 1024;

// Upper-half accumulator for an RDM over d^M local indices. Dense storage for
// small local spaces, an ordered map otherwise.
class Accumulator {
  public:
    explicit Accumulator(BasisIndex local_size)
        : size_(local_size), dense_(local_size <= kDenseAccumulatorLimit) {
        if (dense_) {
            values_.assign(static_cast<std::size_t>(size_ * size_), Complex{});
        }
    }

    void add(BasisIndex a, BasisIndex b, Complex v) {
        if (a > b) {
            std::swap(a, b);
            v = std::conj(v);
        }
        if (dense_) {
            values_[static_cast<std::size_t>(a * size_ + b)] += v;
        } else {
            sparse_[{a, b}] += v;
        }
    }

    std::vector<MatrixEntry> entries() const {
        std::vector<MatrixEntry> out;
        auto keep = [&](BasisIndex a, BasisIndex b, Complex v) {
            if (std::abs(v) >= tol::kStoredZero) {
                out.push_back({a, b, v});
            }
        };
        if (dense_) {
            for (BasisIndex a = 0; a < size_; ++a) {
                for (BasisIndex b = a; b < size_; ++b) {
                    keep(a, b, values_[static_cast<std::size_t>(a * size_ + b)]);
                }
            }
        } else {
            for (const auto &[key, v] : sparse_) {
                keep(key.first, key.second, v);
            }
        }
        return out;
    }

  private:
    BasisIndex size_;
    bool dense_;
    std::vector<Complex> values_;
    std::map<std::pair<BasisIndex, BasisIndex>, Complex> sparse_;
};

void require_same_system(const PartySet &parties, const Dims &dims) {
    if (parties.n() != dims.n()) {
        throw Error(ErrorCode::PartySetMismatch, "party set " + parties.to_string() +
                                                     " does not belong to an " +
                                                     std::to_string(dims.n()) + "-party system");
    }
}

Marginal finish(const PartySet &parties, int d, const Accumulator &acc) {
    return Marginal{parties, DensityMatrix(Dims(parties.size(), d), acc.entries())};
}

}  // namespace

DiagonalExpression diagonal_expression(const PartySet &parties, BasisIndex rdm_index,
                                       const Dims &dims) {
    const Dims local(parties.size(), dims.d());
    local.require_contains(rdm_index);
    const Digits digits = to_digits(rdm_index, local);
    return {rdm_index, enumerate_suffixes(parties, digits, dims)};
}

Marginal rdm_pure(const PureState &psi, const PartySet &parties) {
    const Dims &dims = psi.dims();
    require_same_system(parties, dims);
    const Dims local(parties.size(), dims.d());

    struct Member {
        BasisIndex local;
        Complex amplitude;
    };
    std::map<BasisIndex, std::vector<Member>> groups;
    for (const auto &[index, amplitude] : psi.amplitudes()) {
        groups[clear_parties(index, parties, dims)].push_back(
            {project(index, parties, dims), amplitude});
    }
    Accumulator acc(local.size());
    for (const auto &[key, members] : groups) {
        for (std::size_t x = 0; x < members.size(); ++x) {
            for (std::size_t y = x; y < members.size(); ++y) {
                acc.add(members[x].local, members[y].local,
                        members[x].amplitude * std::conj(members[y].amplitude));
            }
        }
    }
    return finish(parties, dims.d(), acc);
}

Marginal rdm_pure_by_suffixes(const PureState &psi, const PartySet &parties) {
    const Dims &dims = psi.dims();
    require_same_system(parties, dims);
    const Dims local(parties.size(), dims.d());
    const BasisIndex local_size = local.size();

    std::vector<std::vector<Complex>> columns;
    std::vector<BasisIndex> touched;
    columns.reserve(static_cast<std::size_t>(local_size));
    for (BasisIndex a = 0; a < local_size; ++a) {
        const DiagonalExpression expr = diagonal_expression(parties, a, dims);
        std::vector<Complex> values;
        values.reserve(expr.suffixes.size());
        bool any = false;
        for (BasisIndex k : expr.suffixes) {
            values.push_back(psi.amplitude(k));
            any = any || values.back() != Complex{};
        }
        if (any) {
            touched.push_back(a);
        }
        columns.push_back(std::move(values));
    }
    Accumulator acc(local_size);
    for (std::size_t x = 0; x < touched.size(); ++x) {
        const auto &ka = columns[static_cast<std::size_t>(touched[x])];
        for (std::size_t y = x; y < touched.size(); ++y) {
            const auto &lb = columns[static_cast<std::size_t>(touched[y])];
            Complex sum{};
            for (std::size_t p = 0; p < ka.size(); ++p) {
                sum += ka[p] * std::conj(lb[p]);
            }
            acc.add(touched[x], touched[y], sum);
        }
    }
    return finish(parties, dims.d(), acc);
}

Marginal rdm_mixed(const DensityMatrix &rho, const PartySet &parties) {
    const Dims &dims = rho.dims();
    require_same_system(parties, dims);
    const Dims local(parties.size(), dims.d());
    Accumulator acc(local.size());
    for (const auto &e : rho.entries()) {
        // Only pairs that agree on the traced-out digits contribute.
        if (e.row != e.col &&
            clear_parties(e.row, parties, dims) != clear_parties(e.col, parties, dims)) {
            continue;
        }
        acc.add(project(e.row, parties, dims), project(e.col, parties, dims), e.value);
    }
    return finish(parties, dims.d(), acc);
}

Marginal rdm_sparse(const SparseState &psi, const PartySet &parties) {
    if (parties.n() != psi.n()) {
        throw Error(ErrorCode::PartySetMismatch, "party set does not match the state");
    }
    const Dims local(parties.size(), psi.d());
    const auto &words = psi.words();
    const auto &amps = psi.amplitudes();

    // Words with a non-zero digit on some party of the set. Every other word
    // projects to local index 0 and is its own traced-out key.
    std::vector<std::size_t> touched;
    for (int party : parties.parties()) {
        const auto &list = psi.touching(party);
        touched.insert(touched.end(), list.begin(), list.end());
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    // Touched words sorted by their traced-out key; equal keys form a group.
    std::vector<std::pair<SparseWord, std::size_t>> keyed;
    keyed.reserve(touched.size());
    double touched_weight = 0.0;
    for (std::size_t k : touched) {
        keyed.emplace_back(words[k].clear_parties(parties), k);
        touched_weight += std::norm(amps[k]);
    }
    std::sort(keyed.begin(), keyed.end());

    Accumulator acc(local.size());
    acc.add(0, 0, Complex{psi.norm_squared() - touched_weight, 0.0});
    std::vector<BasisIndex> local_index;
    for (std::size_t begin = 0; begin < keyed.size();) {
        std::size_t end = begin + 1;
        while (end < keyed.size() && keyed[end].first == keyed[begin].first) {
            ++end;
        }
        local_index.clear();
        for (std::size_t x = begin; x < end; ++x) {
            local_index.push_back(words[keyed[x].second].project(parties, psi.d()));
        }
        const std::optional<std::size_t> base = psi.find(keyed[begin].first);
        for (std::size_t x = begin; x < end; ++x) {
            const std::size_t kx = keyed[x].second;
            const BasisIndex ax = local_index[x - begin];
            if (base) {
                acc.add(0, ax, amps[*base] * std::conj(amps[kx]));
            }
            for (std::size_t y = x; y < end; ++y) {
                acc.add(ax, local_index[y - begin], amps[kx] * std::conj(amps[keyed[y].second]));
            }
        }
        begin = end;
    }
    return finish(parties, psi.d(), acc);
}

Marginal reduce_marginal(const Marginal &m, const PartySet &subset) {
    if (subset.n() != m.parties.n()) {
        throw Error(ErrorCode::PartySetMismatch, "subset belongs to a different system");
    }
    std::vector<int> ranks;
    for (int party : subset.parties()) {
        const int rank = m.parties.rank_of(party);
        if (rank < 0) {
            throw Error(ErrorCode::PartySetMismatch, subset.to_string() + " is not inside " +
                                                         m.parties.to_string());
        }
        ranks.push_back(rank + 1);
    }
    Marginal inner = rdm_mixed(m.rho, PartySet(std::move(ranks), m.parties.size()));
    return Marginal{subset, std::move(inner.rho)};
}

MarginalSet::MarginalSet(Dims dims, std::vector<Marginal> marginals)
    : dims_(dims), marginals_(std::move(marginals)) {
    for (std::size_t k = 0; k < marginals_.size(); ++k) {
        const Marginal &m = marginals_[k];
        require_same_system(m.parties, dims_);
        if (!(m.rho.dims() == Dims(m.parties.size(), dims_.d()))) {
            throw Error(ErrorCode::InconsistentShapes,
                        "marginal on " + m.parties.to_string() + " has the wrong shape");
        }
        if (!by_parties_.emplace(m.parties, k).second) {
            throw Error(ErrorCode::InvalidArgument,
                        "duplicate marginal on " + m.parties.to_string());
        }
    }
}

const Marginal *MarginalSet::find(const PartySet &parties) const {
    auto it = by_parties_.find(parties);
    return it == by_parties_.end() ? nullptr : &marginals_[it->second];
}

const Marginal &MarginalSet::at(const PartySet &parties) const {
    const Marginal *m = find(parties);
    if (m == nullptr) {
        throw Error(ErrorCode::InsufficientMarginals,
                    "no marginal on parties " + parties.to_string());
    }
    return *m;
}

int MarginalSet::index_of(const PartySet &parties) const {
    auto it = by_parties_.find(parties);
    return it == by_parties_.end() ? -1 : static_cast<int>(it->second);
}

std::vector<PartySet> scheme_party_sets(int n, int k, const MarginalScheme &scheme) {
    if (k < 1 || k > n - 1) {
        throw Error(ErrorCode::KOutOfRange,
                    "marginal size " + std::to_string(k) + " outside 1..N-1");
    }
    std::vector<PartySet> sets = party_subsets(n, k);
    if (const auto *common = std::get_if<CommonParty>(&scheme)) {
        if (common->party < 1 || common->party > n) {
            throw Error(ErrorCode::InvalidArgument, "common party outside 1..N");
        }
        std::erase_if(sets, [&](const PartySet &s) { return !s.contains(common->party); });
    }
    return sets;
}

MarginalSet marginal_set(const PureState &psi, int k, const MarginalScheme &scheme) {
    std::vector<Marginal> out;
    for (const PartySet &parties : scheme_party_sets(psi.dims().n(), k, scheme)) {
        out.push_back(rdm_pure(psi, parties));
    }
    return MarginalSet(psi.dims(), std::move(out));
}

MarginalSet marginal_set(const DensityMatrix &rho, int k, const MarginalScheme &scheme) {
    std::vector<Marginal> out;
    for (const PartySet &parties : scheme_party_sets(rho.dims().n(), k, scheme)) {
        out.push_back(rdm_mixed(rho, parties));
    }
    return MarginalSet(rho.dims(), std::move(out));
}

bool visible_in_k_marginal(const Dims &dims, BasisIndex i, BasisIndex j, int k) {
    return hamming(dims, i, j) <= k;
}

const Marginal &SparseStateSource::get(const PartySet &parties) const {
    auto it = cache_.find(parties);
    if (it == cache_.end()) {
        it = cache_.emplace(parties, rdm_sparse(psi_, parties)).first;
    }
    return it->second;
}

}  // namespace qmarg
