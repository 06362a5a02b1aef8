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
 * Basis indexing for N-qudit systems.
 *
 * A basis vector of (C^d)^{⊗N} is labelled by an N-digit base-d string. Party
 * J (1-based, counted left to right) owns the digit with place value
 * d^{N-J}, so the decimal value of the string is the lexicographic position
 * of the basis vector. Dense indices are 64-bit; systems whose d^N does not
 * fit are only reachable through SparseWord.
 */
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmarg {

using BasisIndex = std::uint64_t;
using Digits = std::vector<int>;

/// Party count N and local dimension d.
class Dims {
  public:
    Dims(int n, int d);

    int n() const noexcept { return n_; }
    int d() const noexcept { return d_; }

    /// True when d^N fits in a 64-bit index.
    bool is_dense() const noexcept { return dense_; }
    /// d^N; throws SizeLimit when the system is not dense.
    std::uint64_t size() const;
    /// d^{N-party}, the place value of the digit owned by `party`.
    std::uint64_t place_value(int party) const;
    void require_dense() const;
    void require_contains(BasisIndex i) const;

    friend bool operator==(const Dims &, const Dims &) = default;

  private:
    int n_;
    int d_;
    bool dense_;
    std::uint64_t size_ = 0;
};

/// A basis index together with the system it lives in.
struct BasisElement {
    Dims dims;
    BasisIndex value;
};

/// base^exponent; throws SizeLimit when the result overflows 64 bits.
std::uint64_t checked_pow(std::uint64_t base, int exponent);
/// C(n, k); throws SizeLimit on overflow.
std::uint64_t binomial(int n, int k);

Digits to_digits(BasisIndex i, const Dims &dims);
BasisIndex from_digits(std::span<const int> digits, int d);
/// Renders a digit string with one character per digit (0-9 then a-z).
std::string format_digits(std::span<const int> digits);

int hamming(const Dims &dims, BasisIndex i, BasisIndex j);
int hamming(const BasisElement &a, const BasisElement &b);

/// Strictly increasing list of 1-based party labels drawn from 1..N.
class PartySet {
  public:
    PartySet(std::vector<int> parties, int n);

    static PartySet all(int n);

    const std::vector<int> &parties() const noexcept { return parties_; }
    int size() const noexcept { return static_cast<int>(parties_.size()); }
    int n() const noexcept { return n_; }
    bool contains(int party) const;
    /// Position of `party` inside this set (0-based), or -1.
    int rank_of(int party) const;
    /// Parties of 1..N not in this set; may be empty.
    std::vector<int> complement() const;
    std::string to_string() const;

    friend bool operator==(const PartySet &, const PartySet &) = default;
    friend auto operator<=>(const PartySet &a, const PartySet &b) {
        return a.parties_ <=> b.parties_;
    }

  private:
    std::vector<int> parties_;
    int n_;
};

/// All k-element party sets of 1..n in lexicographic order.
std::vector<PartySet> party_subsets(int n, int k);

/// Local index of the digits `full` carries at `parties` (an M-digit string).
BasisIndex project(BasisIndex full, const PartySet &parties, const Dims &dims);
/// `full` with the digits at `parties` replaced by zero.
BasisIndex clear_parties(BasisIndex full, const PartySet &parties, const Dims &dims);

/**
 * All full-system indices whose digit at party parties[j] equals
 * fixed_digits[j], in increasing order. The first element is
 * sum_j s_j d^{N-i_j}; the last adds (d-1) d^{N-J} for every free party J.
 */
std::vector<BasisIndex> enumerate_suffixes(const PartySet &parties,
                                           std::span<const int> fixed_digits,
                                           const Dims &dims);

/// Digit-count multiset (k_0, ..., k_{d-1}); d is the number of counts.
class SupportDescriptor {
  public:
    explicit SupportDescriptor(std::vector<int> counts);

    const std::vector<int> &counts() const noexcept { return counts_; }
    int n() const noexcept { return n_; }
    int d() const noexcept { return static_cast<int>(counts_.size()); }
    int max_count() const;
    /// The digit with the largest count, smallest digit on ties.
    int majority_digit() const;
    /// True when the digit string realizes exactly these counts.
    bool matches(std::span<const int> digits) const;
    /// True when a sub-pattern could be part of such a string (no digit
    /// occurs more often than its count).
    bool admits_pattern(std::span<const int> pattern) const;
    std::string to_string() const;

    friend bool operator==(const SupportDescriptor &, const SupportDescriptor &) = default;

  private:
    std::vector<int> counts_;
    int n_;
};

/// Number of distinct strings realizing the descriptor; SizeLimit on overflow.
std::uint64_t multinomial(const SupportDescriptor &desc);
/// Sorted indices of every string realizing the descriptor.
std::vector<BasisIndex> support_indices(const SupportDescriptor &desc);
/// Largest Hamming distance between two strings realizing the descriptor.
int max_hamming(const SupportDescriptor &desc);

struct DigitAt {
    int position;
    int digit;

    friend bool operator==(const DigitAt &, const DigitAt &) = default;
};

/**
 * Digit string stored as its non-zero digits only. Used for systems whose
 * d^N exceeds 64 bits. Ordering matches the numeric order of the strings.
 */
class SparseWord {
  public:
    SparseWord() = default;
    explicit SparseWord(std::vector<DigitAt> nonzero);

    static SparseWord from_index(BasisIndex i, const Dims &dims);
    BasisIndex to_index(const Dims &dims) const;

    const std::vector<DigitAt> &nonzero() const noexcept { return nonzero_; }
    int digit_at(int position) const;
    /// Digits at `parties` as a local index in base d.
    BasisIndex project(const PartySet &parties, int d) const;
    SparseWord clear_parties(const PartySet &parties) const;
    std::size_t hash() const noexcept;

    friend bool operator==(const SparseWord &, const SparseWord &) = default;
    friend std::strong_ordering operator<=>(const SparseWord &a, const SparseWord &b);

  private:
    std::vector<DigitAt> nonzero_;
};

struct SparseWordHash {
    std::size_t operator()(const SparseWord &w) const noexcept { return w.hash(); }
};

int hamming(const SparseWord &a, const SparseWord &b);

/// Sparse counterpart of support_indices, in increasing numeric order.
/// Valid for any N; the caller bounds the output size via multinomial().
std::vector<SparseWord> support_words(const SupportDescriptor &desc);

}  // namespace qmarg
