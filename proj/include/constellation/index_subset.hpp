#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "constellation/errors.hpp"

namespace constellation {

/// Largest ambient dimension representable by the bitmask encoding.
inline constexpr int kMaxDimension = 64;

using Mask = std::uint64_t;

/// Bit for the 1-based basis index `i`.
constexpr Mask bit_of(int i) { return Mask{1} << (i - 1); }

/// Mask of the full subset {1..n}.
constexpr Mask full_mask(int n) {
  return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

/// Sign of the permutation sorting the concatenation (S, T) of two disjoint
/// increasing index lists, i.e. eps_S ^ eps_T = sign * eps_{S u T}.
/// Returns 0 when the masks overlap.
inline int merge_sign(Mask s, Mask t) {
  if (s & t) return 0;
  int inversions = 0;
  while (t) {
    const int low = std::countr_zero(t);
    // elements of S above this element of T each contribute one inversion
    inversions += std::popcount(s >> low);
    t &= t - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

/// A strictly increasing map {1..k} -> {1..N}, stored as a bitmask.
class IndexSubset {
 public:
  IndexSubset() = default;
  /// Builds from a strictly increasing list of 1-based indices.
  IndexSubset(std::span<const int> indices, int dim);
  IndexSubset(std::initializer_list<int> indices, int dim)
      : IndexSubset(std::span<const int>(indices.begin(), indices.size()), dim) {}

  static IndexSubset from_mask(Mask mask, int dim);
  static IndexSubset full(int dim) { return from_mask(full_mask(dim), dim); }

  Mask mask() const { return mask_; }
  int dim() const { return dim_; }
  int size() const { return std::popcount(mask_); }
  bool empty() const { return mask_ == 0; }

  /// 1-based indices in increasing order.
  std::vector<int> indices() const;
  /// 1-based index of the k-th element (k is 0-based).
  int at(int k) const;
  /// Sum of the 1-based indices.
  int index_sum() const;

  bool contains(int i) const { return (mask_ & bit_of(i)) != 0; }
  bool subset_of(const IndexSubset& other) const {
    return (mask_ & ~other.mask_) == 0;
  }

  std::string to_string() const;

  friend bool operator==(const IndexSubset&, const IndexSubset&) = default;

 private:
  Mask mask_ = 0;
  int dim_ = 0;
};

/// Number of k-subsets of an n-set, saturating at UINT64_MAX.
std::uint64_t binomial_count(int n, int k);

/// All masks of k-subsets of {1..n} in increasing mask order.
std::vector<Mask> k_subsets(int n, int k);

/// Visits every k-subset of {1..n} (increasing mask order).
void for_each_k_subset(int n, int k, const std::function<void(Mask)>& visit);

/// Increasing 1-based index list of a mask.
std::vector<int> mask_indices(Mask mask);

}  // namespace constellation
