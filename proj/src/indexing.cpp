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

#include "qmarg/indexing.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "qmarg/error.hpp"

namespace qmarg {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

bool pow_fits(std::uint64_t base, int exponent, std::uint64_t &out) {
    std::uint64_t r = 1;
    for (int e = 0; e < exponent; ++e) {
        if (base != 0 && r > kMax / base) {
            return false;
        }
        r *= base;
    }
    out = r;
    return true;
}

}  // namespace

std::uint64_t checked_pow(std::uint64_t base, int exponent) {
    if (exponent < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative exponent");
    }
    std::uint64_t r;
    if (!pow_fits(base, exponent, r)) {
        throw Error(ErrorCode::SizeLimit, std::to_string(base) + "^" + std::to_string(exponent) +
                                              " exceeds 64 bits");
    }
    return r;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n - k + i) / i stays integral at every step.
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > kMax) {
            throw Error(ErrorCode::SizeLimit, "binomial coefficient exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(r);
}

Dims::Dims(int n, int d) : n_(n), d_(d) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "party count must be >= 1");
    }
    if (d < 2) {
        throw Error(ErrorCode::InvalidArgument, "local dimension must be >= 2");
    }
    dense_ = pow_fits(static_cast<std::uint64_t>(d), n, size_);
}

std::uint64_t Dims::size() const {
    require_dense();
    return size_;
}

std::uint64_t Dims::place_value(int party) const {
    if (party < 1 || party > n_) {
        throw Error(ErrorCode::InvalidArgument, "party " + std::to_string(party) + " outside 1.." +
                                                    std::to_string(n_));
    }
    return checked_pow(static_cast<std::uint64_t>(d_), n_ - party);
}

void Dims::require_dense() const {
    if (!dense_) {
        throw Error(ErrorCode::SizeLimit, std::to_string(d_) + "^" + std::to_string(n_) +
                                              " does not fit a 64-bit index");
    }
}

void Dims::require_contains(BasisIndex i) const {
    require_dense();
    if (i >= size_) {
        throw Error(ErrorCode::InvalidArgument,
                    "index " + std::to_string(i) + " outside 0.." + std::to_string(size_ - 1));
    }
}

Digits to_digits(BasisIndex i, const Dims &dims) {
    dims.require_contains(i);
    Digits digits(static_cast<std::size_t>(dims.n()));
    const auto d = static_cast<std::uint64_t>(dims.d());
    for (int pos = dims.n() - 1; pos >= 0; --pos) {
        digits[static_cast<std::size_t>(pos)] = static_cast<int>(i % d);
        i /= d;
    }
    return digits;
}

BasisIndex from_digits(std::span<const int> digits, int d) {
    if (d < 2) {
        throw Error(ErrorCode::InvalidArgument, "local dimension must be >= 2");
    }
    if (digits.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty digit string");
    }
    const auto base = static_cast<std::uint64_t>(d);
    std::uint64_t value = 0;
    for (int digit : digits) {
        if (digit < 0 || digit >= d) {
            throw Error(ErrorCode::InvalidDigit,
                        "digit " + std::to_string(digit) + " not in 0.." + std::to_string(d - 1));
        }
        if (value > (kMax - static_cast<std::uint64_t>(digit)) / base) {
            throw Error(ErrorCode::SizeLimit, "digit string exceeds 64 bits");
        }
        value = value * base + static_cast<std::uint64_t>(digit);
    }
    return value;
}

std::string format_digits(std::span<const int> digits) {
    static constexpr char kChars[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string out;
    out.reserve(digits.size());
    for (int digit : digits) {
        if (digit < 0 || digit >= 36) {
            throw Error(ErrorCode::InvalidDigit, "digit not printable as a single character");
        }
        out.push_back(kChars[digit]);
    }
    return out;
}

int hamming(const Dims &dims, BasisIndex i, BasisIndex j) {
    dims.require_contains(i);
    dims.require_contains(j);
    const auto d = static_cast<std::uint64_t>(dims.d());
    int distance = 0;
    for (int pos = 0; pos < dims.n(); ++pos) {
        distance += (i % d) != (j % d);
        i /= d;
        j /= d;
    }
    return distance;
}

int hamming(const BasisElement &a, const BasisElement &b) {
    if (!(a.dims == b.dims)) {
        throw Error(ErrorCode::DimensionMismatch, "basis elements belong to different systems");
    }
    return hamming(a.dims, a.value, b.value);
}

PartySet::PartySet(std::vector<int> parties, int n) : parties_(std::move(parties)), n_(n) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "party count must be >= 1");
    }
    if (parties_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "party set must not be empty");
    }
    for (std::size_t k = 0; k < parties_.size(); ++k) {
        if (parties_[k] < 1 || parties_[k] > n) {
            throw Error(ErrorCode::InvalidArgument, "party " + std::to_string(parties_[k]) +
                                                        " outside 1.." + std::to_string(n));
        }
        if (k > 0 && parties_[k] <= parties_[k - 1]) {
            throw Error(ErrorCode::InvalidArgument,
                        "party set must be strictly increasing: " + to_string());
        }
    }
}

PartySet PartySet::all(int n) {
    std::vector<int> parties(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(parties.begin(), parties.end(), 1);
    return PartySet(std::move(parties), n);
}

bool PartySet::contains(int party) const {
    return std::binary_search(parties_.begin(), parties_.end(), party);
}

int PartySet::rank_of(int party) const {
    auto it = std::lower_bound(parties_.begin(), parties_.end(), party);
    if (it == parties_.end() || *it != party) {
        return -1;
    }
    return static_cast<int>(it - parties_.begin());
}

std::vector<int> PartySet::complement() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n_ - size()));
    auto it = parties_.begin();
    for (int p = 1; p <= n_; ++p) {
        if (it != parties_.end() && *it == p) {
            ++it;
        } else {
            out.push_back(p);
        }
    }
    return out;
}

std::string PartySet::to_string() const {
    std::string out = "{";
    for (std::size_t k = 0; k < parties_.size(); ++k) {
        if (k) {
            out += ",";
        }
        out += std::to_string(parties_[k]);
    }
    return out + "}";
}

std::vector<PartySet> party_subsets(int n, int k) {
    std::vector<PartySet> out;
    if (k < 1 || k > n) {
        return out;
    }
    std::vector<int> current(static_cast<std::size_t>(k));
    std::iota(current.begin(), current.end(), 1);
    while (true) {
        out.emplace_back(current, n);
        int pos = k - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == n - k + pos + 1) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++current[static_cast<std::size_t>(pos)];
        for (int t = pos + 1; t < k; ++t) {
            current[static_cast<std::size_t>(t)] = current[static_cast<std::size_t>(t - 1)] + 1;
        }
    }
    return out;
}

BasisIndex project(BasisIndex full, const PartySet &parties, const Dims &dims) {
    dims.require_contains(full);
    const auto d = static_cast<std::uint64_t>(dims.d());
    BasisIndex local = 0;
    for (int party : parties.parties()) {
        local = local * d + (full / dims.place_value(party)) % d;
    }
    return local;
}

BasisIndex clear_parties(BasisIndex full, const PartySet &parties, const Dims &dims) {
    dims.require_contains(full);
    const auto d = static_cast<std::uint64_t>(dims.d());
    for (int party : parties.parties()) {
        const std::uint64_t pv = dims.place_value(party);
        full -= ((full / pv) % d) * pv;
    }
    return full;
}

std::vector<BasisIndex> enumerate_suffixes(const PartySet &parties,
                                           std::span<const int> fixed_digits,
                                           const Dims &dims) {
    dims.require_dense();
    if (parties.n() != dims.n()) {
        throw Error(ErrorCode::DimensionMismatch, "party set drawn from a different system");
    }
    if (fixed_digits.size() != parties.parties().size()) {
        throw Error(ErrorCode::InvalidArgument, "one fixed digit per party required");
    }
    BasisIndex first = 0;
    for (std::size_t j = 0; j < fixed_digits.size(); ++j) {
        const int s = fixed_digits[j];
        if (s < 0 || s >= dims.d()) {
            throw Error(ErrorCode::InvalidDigit, "digit " + std::to_string(s) + " not in 0.." +
                                                     std::to_string(dims.d() - 1));
        }
        first += static_cast<std::uint64_t>(s) * dims.place_value(parties.parties()[j]);
    }

    const std::vector<int> free = parties.complement();
    std::vector<std::uint64_t> place(free.size());
    for (std::size_t t = 0; t < free.size(); ++t) {
        place[t] = dims.place_value(free[t]);
    }
    const std::uint64_t count = checked_pow(static_cast<std::uint64_t>(dims.d()),
                                            static_cast<int>(free.size()));

    // Odometer over the free digits, least significant free party fastest;
    // this visits the indices in increasing order.
    std::vector<BasisIndex> out;
    out.reserve(count);
    std::vector<int> odometer(free.size(), 0);
    BasisIndex current = first;
    for (std::uint64_t step = 0; step < count; ++step) {
        out.push_back(current);
        for (std::size_t t = free.size(); t-- > 0;) {
            if (odometer[t] + 1 < dims.d()) {
                ++odometer[t];
                current += place[t];
                break;
            }
            current -= static_cast<std::uint64_t>(odometer[t]) * place[t];
            odometer[t] = 0;
        }
    }
    return out;
}

SupportDescriptor::SupportDescriptor(std::vector<int> counts) : counts_(std::move(counts)), n_(0) {
    if (counts_.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "descriptor needs at least two digit counts");
    }
    long long total = 0;
    for (int c : counts_) {
        if (c < 0) {
            throw Error(ErrorCode::InvalidArgument, "digit counts must be non-negative");
        }
        total += c;
    }
    if (total < 1 || total > std::numeric_limits<int>::max()) {
        throw Error(ErrorCode::InvalidArgument, "digit counts must sum to a positive N");
    }
    n_ = static_cast<int>(total);
}

int SupportDescriptor::max_count() const {
    return *std::max_element(counts_.begin(), counts_.end());
}

int SupportDescriptor::majority_digit() const {
    return static_cast<int>(std::max_element(counts_.begin(), counts_.end()) - counts_.begin());
}

bool SupportDescriptor::matches(std::span<const int> digits) const {
    if (static_cast<int>(digits.size()) != n_) {
        return false;
    }
    return admits_pattern(digits);
}

bool SupportDescriptor::admits_pattern(std::span<const int> pattern) const {
    std::vector<int> seen(counts_.size(), 0);
    for (int digit : pattern) {
        if (digit < 0 || digit >= d()) {
            return false;
        }
        if (++seen[static_cast<std::size_t>(digit)] > counts_[static_cast<std::size_t>(digit)]) {
            return false;
        }
    }
    return true;
}

std::string SupportDescriptor::to_string() const {
    std::string out = "(";
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        if (k) {
            out += ",";
        }
        out += std::to_string(counts_[k]);
    }
    return out + ")";
}

std::uint64_t multinomial(const SupportDescriptor &desc) {
    unsigned __int128 total = 1;
    int remaining = desc.n();
    for (int c : desc.counts()) {
        total *= binomial(remaining, c);
        if (total > kMax) {
            throw Error(ErrorCode::SizeLimit, "multinomial coefficient exceeds 64 bits");
        }
        remaining -= c;
    }
    return static_cast<std::uint64_t>(total);
}

std::vector<BasisIndex> support_indices(const SupportDescriptor &desc) {
    const Dims dims(desc.n(), desc.d());
    dims.require_dense();
    Digits digits;
    digits.reserve(static_cast<std::size_t>(desc.n()));
    for (int digit = 0; digit < desc.d(); ++digit) {
        digits.insert(digits.end(), static_cast<std::size_t>(desc.counts()[digit]), digit);
    }
    std::vector<BasisIndex> out;
    out.reserve(multinomial(desc));
    // next_permutation walks multiset permutations in lexicographic order,
    // which is increasing numeric order for fixed-width strings.
    do {
        out.push_back(from_digits(digits, desc.d()));
    } while (std::next_permutation(digits.begin(), digits.end()));
    return out;
}

int max_hamming(const SupportDescriptor &desc) {
    return desc.n() - std::max(0, 2 * desc.max_count() - desc.n());
}

SparseWord::SparseWord(std::vector<DigitAt> nonzero) : nonzero_(std::move(nonzero)) {
    for (std::size_t k = 0; k < nonzero_.size(); ++k) {
        if (nonzero_[k].position < 1 || nonzero_[k].digit < 1) {
            throw Error(ErrorCode::InvalidArgument, "sparse word entries need position >= 1 and "
                                                    "a non-zero digit");
        }
        if (k > 0 && nonzero_[k].position <= nonzero_[k - 1].position) {
            throw Error(ErrorCode::InvalidArgument, "sparse word positions must increase");
        }
    }
}

SparseWord SparseWord::from_index(BasisIndex i, const Dims &dims) {
    const Digits digits = to_digits(i, dims);
    std::vector<DigitAt> nonzero;
    for (int pos = 0; pos < dims.n(); ++pos) {
        if (digits[static_cast<std::size_t>(pos)] != 0) {
            nonzero.push_back({pos + 1, digits[static_cast<std::size_t>(pos)]});
        }
    }
    return SparseWord(std::move(nonzero));
}

BasisIndex SparseWord::to_index(const Dims &dims) const {
    dims.require_dense();
    BasisIndex value = 0;
    for (const auto &[position, digit] : nonzero_) {
        if (position > dims.n() || digit >= dims.d()) {
            throw Error(ErrorCode::InvalidDigit, "sparse word does not fit the system");
        }
        value += static_cast<std::uint64_t>(digit) * dims.place_value(position);
    }
    return value;
}

int SparseWord::digit_at(int position) const {
    auto it = std::lower_bound(nonzero_.begin(), nonzero_.end(), position,
                               [](const DigitAt &e, int p) { return e.position < p; });
    return (it != nonzero_.end() && it->position == position) ? it->digit : 0;
}

BasisIndex SparseWord::project(const PartySet &parties, int d) const {
    const auto base = static_cast<std::uint64_t>(d);
    BasisIndex local = 0;
    auto it = nonzero_.begin();
    for (int party : parties.parties()) {
        while (it != nonzero_.end() && it->position < party) {
            ++it;
        }
        const int digit = (it != nonzero_.end() && it->position == party) ? it->digit : 0;
        local = local * base + static_cast<std::uint64_t>(digit);
    }
    return local;
}

SparseWord SparseWord::clear_parties(const PartySet &parties) const {
    SparseWord out;
    out.nonzero_.reserve(nonzero_.size());
    for (const auto &entry : nonzero_) {
        if (!parties.contains(entry.position)) {
            out.nonzero_.push_back(entry);
        }
    }
    return out;
}

std::size_t SparseWord::hash() const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto &[position, digit] : nonzero_) {
        h ^= static_cast<std::size_t>(position) * 0x9e3779b97f4a7c15ULL +
             static_cast<std::size_t>(digit);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::strong_ordering operator<=>(const SparseWord &a, const SparseWord &b) {
    const auto &x = a.nonzero_;
    const auto &y = b.nonzero_;
    std::size_t k = 0;
    for (; k < x.size() && k < y.size(); ++k) {
        if (x[k].position != y[k].position) {
            // The earlier non-zero digit sits where the other string has 0.
            return x[k].position < y[k].position ? std::strong_ordering::greater
                                                 : std::strong_ordering::less;
        }
        if (x[k].digit != y[k].digit) {
            return x[k].digit <=> y[k].digit;
        }
    }
    return x.size() <=> y.size();
}

int hamming(const SparseWord &a, const SparseWord &b) {
    const auto &x = a.nonzero();
    const auto &y = b.nonzero();
    int distance = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].position < y[j].position)) {
            ++distance;
            ++i;
        } else if (i == x.size() || y[j].position < x[i].position) {
            ++distance;
            ++j;
        } else {
            distance += x[i].digit != y[j].digit;
            ++i;
            ++j;
        }
    }
    return distance;
}

namespace {

void emit_words(int position, int n, std::vector<int> &remaining, int nonzero_left,
                std::vector<DigitAt> &current, std::vector<SparseWord> &out) {
    if (nonzero_left == 0) {
        out.emplace_back(current);
        return;
    }
    if (position > n) {
        return;
    }
    for (std::size_t digit = 0; digit < remaining.size(); ++digit) {
        if (remaining[digit] == 0) {
            continue;
        }
        --remaining[digit];
        if (digit > 0) {
            current.push_back({position, static_cast<int>(digit)});
        }
        emit_words(position + 1, n, remaining, nonzero_left - (digit > 0 ? 1 : 0), current, out);
        if (digit > 0) {
            current.pop_back();
        }
        ++remaining[digit];
    }
}

}  // namespace

std::vector<SparseWord> support_words(const SupportDescriptor &desc) {
    std::vector<int> remaining = desc.counts();
    const int nonzero = desc.n() - remaining[0];
    std::vector<SparseWord> out;
    out.reserve(multinomial(desc));
    std::vector<DigitAt> current;
    current.reserve(static_cast<std::size_t>(nonzero));
    emit_words(1, desc.n(), remaining, nonzero, current, out);
    return out;
}

}  // namespace qmarg
