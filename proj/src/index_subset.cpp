#include "constellation/index_subset.hpp"

#include <limits>
#include <sstream>

namespace constellation {

IndexSubset::IndexSubset(std::span<const int> indices, int dim) : dim_(dim) {
  if (dim < 0 || dim > kMaxDimension) {
    throw InvalidArgument("IndexSubset: ambient dimension " +
                          std::to_string(dim) + " outside [0, 64]");
  }
  int previous = 0;
  for (int i : indices) {
    if (i <= previous || i > dim) {
      throw InvalidArgument(
          "IndexSubset: indices must be strictly increasing within [1, " +
          std::to_string(dim) + "]");
    }
    mask_ |= bit_of(i);
    previous = i;
  }
}

IndexSubset IndexSubset::from_mask(Mask mask, int dim) {
  if (dim < 0 || dim > kMaxDimension) {
    throw InvalidArgument("IndexSubset: ambient dimension outside [0, 64]");
  }
  if (mask & ~full_mask(dim)) {
    throw InvalidArgument("IndexSubset: mask has bits beyond dimension " +
                          std::to_string(dim));
  }
  IndexSubset s;
  s.mask_ = mask;
  s.dim_ = dim;
  return s;
}

std::vector<int> IndexSubset::indices() const { return mask_indices(mask_); }

int IndexSubset::at(int k) const {
  Mask m = mask_;
  for (int j = 0; j < k; ++j) m &= m - 1;
  if (!m) throw InvalidArgument("IndexSubset::at: position out of range");
  return std::countr_zero(m) + 1;
}

int IndexSubset::index_sum() const {
  int total = 0;
  for (Mask m = mask_; m; m &= m - 1) total += std::countr_zero(m) + 1;
  return total;
}

std::string IndexSubset::to_string() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (int i : indices()) {
    if (!first) out << ',';
    out << i;
    first = false;
  }
  out << '}';
  return out.str();
}

std::uint64_t binomial_count(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

void for_each_k_subset(int n, int k, const std::function<void(Mask)>& visit) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    visit(0);
    return;
  }
  const Mask limit = full_mask(n);
  Mask m = full_mask(k);
  while (true) {
    visit(m);
    if (m == (limit & ~full_mask(n - k))) break;
    // Gosper's hack: next mask with the same popcount
    const Mask low = m & (~m + 1);
    const Mask ripple = m + low;
    m = (((ripple ^ m) >> 2) / low) | ripple;
  }
}

std::vector<Mask> k_subsets(int n, int k) {
  std::vector<Mask> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(binomial_count(n, k), 1u << 20)));
  for_each_k_subset(n, k, [&](Mask m) { out.push_back(m); });
  return out;
}

std::vector<int> mask_indices(Mask mask) {
  std::vector<int> out;
  out.reserve(std::popcount(mask));
  for (; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask) + 1);
  return out;
}

}  // namespace constellation
