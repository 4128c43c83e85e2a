#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fock/types.hpp"

namespace fock {

/// Exponent vector m = (m_1, ..., m_n) of the monomial z^m.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_)
      if (e < 0) throw ParameterError("MultiIndex: negative entry");
  }
  MultiIndex(std::initializer_list<int> entries)
      : MultiIndex(std::vector<int>(entries)) {}

  int size() const { return static_cast<int>(entries_.size()); }
  int operator[](int j) const { return entries_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& entries() const { return entries_; }

  /// |m| = sum of entries.
  int degree() const {
    int d = 0;
    for (int e : entries_) d += e;
    return d;
  }

  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> entries_;
};

/// All multi-indices of length n with |m| <= max_degree in graded-lexicographic
/// order: by degree, then lexicographically descending in the entries, so
/// z1^2 comes before z1 z2 before z2^2.
std::vector<MultiIndex> graded_lex_indices(int n, int max_degree);

/// C(D + n, n).
std::int64_t graded_count(int n, int max_degree);

}  // namespace fock
