#include "invman/multiindex.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include "invman/errors.hpp"

namespace invman {
namespace {

constexpr int kMaxDims = 16;
constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 26;

// binomial(x, c) for small c; saturates to UINT64_MAX on overflow.
std::uint64_t binomial(std::uint64_t x, int c) {
  if (c < 0 || static_cast<std::uint64_t>(c) > x) return 0;
  unsigned __int128 acc = 1;
  for (int i = 1; i <= c; ++i) {
    acc = acc * (x - static_cast<std::uint64_t>(c) + static_cast<std::uint64_t>(i)) /
          static_cast<unsigned>(i);
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> exponents)
    : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw InvalidArgument("MultiIndex: negative exponent");
  }
  order_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

std::uint64_t graded_count(int dims, int max_order) {
  if (dims < 1 || max_order < 0) {
    throw InvalidArgument("graded_count: need dims >= 1 and max_order >= 0");
  }
  if (max_order == 0) return 0;
  const std::uint64_t c = binomial(static_cast<std::uint64_t>(max_order) +
                                       static_cast<std::uint64_t>(dims) - 1,
                                   dims);
  if (c == UINT64_MAX) {
    throw SizeError("graded_count: index count overflows 64 bits");
  }
  return c;
}

GradedOrdering::GradedOrdering(int dims, int max_order)
    : dims_(dims), max_order_(max_order) {
  if (dims < 1 || dims > kMaxDims) {
    throw InvalidArgument("GradedOrdering: dims must be in [1, " +
                          std::to_string(kMaxDims) + "]");
  }
  if (max_order < 1) throw InvalidArgument("GradedOrdering: max_order must be >= 1");
  const std::uint64_t count = graded_count(dims, max_order);
  if (count > kMaxEntries) {
    throw SizeError("GradedOrdering: " + std::to_string(count) +
                    " multi-indices exceed the supported table size");
  }
  size_ = static_cast<std::size_t>(count);
  exponents_.reserve(size_ * static_cast<std::size_t>(dims));
  orders_.reserve(size_);

  // Within one order, walk the compositions of k in descending lexicographic
  // order: start from (k, 0, ..., 0) and step to the predecessor each time.
  std::vector<int> alpha(static_cast<std::size_t>(dims));
  for (int k = 0; k < max_order; ++k) {
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[0] = k;
    while (true) {
      exponents_.insert(exponents_.end(), alpha.begin(), alpha.end());
      orders_.push_back(k);
      // Find the right-most non-zero entry excluding the last coordinate.
      int j = dims - 2;
      while (j >= 0 && alpha[static_cast<std::size_t>(j)] == 0) --j;
      if (j < 0) break;
      const int tail = alpha[static_cast<std::size_t>(dims - 1)];
      alpha[static_cast<std::size_t>(j)] -= 1;
      alpha[static_cast<std::size_t>(dims - 1)] = 0;
      alpha[static_cast<std::size_t>(j + 1)] = tail + 1;
    }
  }

  parents_.assign(size_, 0);
  parent_vars_.assign(size_, -1);
  std::vector<int> tmp(static_cast<std::size_t>(dims));
  for (std::size_t pos = 1; pos < size_; ++pos) {
    auto e = exponents(pos);
    std::copy(e.begin(), e.end(), tmp.begin());
    int v = 0;
    while (tmp[static_cast<std::size_t>(v)] == 0) ++v;
    tmp[static_cast<std::size_t>(v)] -= 1;
    parents_[pos] = position(tmp);
    parent_vars_[pos] = v;
  }
}

std::shared_ptr<const GradedOrdering> GradedOrdering::make(int dims, int max_order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const GradedOrdering>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dims, max_order}];
  if (!slot) slot = std::make_shared<const GradedOrdering>(dims, max_order);
  return slot;
}

MultiIndex GradedOrdering::index(std::size_t pos) const {
  auto e = exponents(pos);
  return MultiIndex(std::vector<int>(e.begin(), e.end()));
}

std::size_t GradedOrdering::order_offset(int k) const {
  if (k <= 0) return 0;
  return static_cast<std::size_t>(binomial(
      static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(dims_) - 1, dims_));
}

std::size_t GradedOrdering::position(std::span<const int> alpha) const {
  if (dims_ == 1) return static_cast<std::size_t>(alpha[0]);
  if (dims_ == 2) {
    const auto k = static_cast<std::size_t>(alpha[0] + alpha[1]);
    return k * (k + 1) / 2 + static_cast<std::size_t>(alpha[1]);
  }
  int k = 0;
  for (int a : alpha) k += a;
  std::size_t pos = order_offset(k);
  // Indices of the same order that precede α: those larger in the first
  // coordinate where they differ. Summed with the hockey-stick identity.
  int rem = k;
  for (int i = 0; i + 1 < dims_; ++i) {
    const int ai = alpha[static_cast<std::size_t>(i)];
    const int c = dims_ - i - 1;
    if (rem - ai >= 1) {
      pos += static_cast<std::size_t>(
          binomial(static_cast<std::uint64_t>(rem - ai - 1 + c), c));
    }
    rem -= ai;
  }
  return pos;
}

std::size_t GradedOrdering::position_of_sum(std::size_t p, std::size_t q) const {
  auto a = exponents(p);
  auto b = exponents(q);
  if (dims_ == 1) return static_cast<std::size_t>(a[0] + b[0]);
  if (dims_ == 2) {
    const auto k = static_cast<std::size_t>(a[0] + a[1] + b[0] + b[1]);
    return k * (k + 1) / 2 + static_cast<std::size_t>(a[1] + b[1]);
  }
  int sum[kMaxDims];
  for (int i = 0; i < dims_; ++i) {
    sum[i] = a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
  }
  return position(std::span<const int>(sum, static_cast<std::size_t>(dims_)));
}

OrderingPtr enumerate_multiindices(int dims, int max_order) {
  return GradedOrdering::make(dims, max_order);
}

}  // namespace invman
