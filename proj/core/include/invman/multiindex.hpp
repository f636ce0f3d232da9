#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace invman {

// Exponent tuple (α₁, …, α_m) of a monomial θ^α.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  int dims() const { return static_cast<int>(exponents_.size()); }
  int order() const { return order_; }
  int operator[](int i) const { return exponents_[static_cast<std::size_t>(i)]; }
  std::span<const int> exponents() const { return exponents_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exponents_;
  int order_ = 0;
};

// Number of multi-indices in `dims` variables with |α| < max_order, i.e.
// binomial(max_order + dims - 1, dims). Throws SizeError on overflow.
std::uint64_t graded_count(int dims, int max_order);

// Table of all multi-indices with |α| < max_order, sorted by growing order
// and, inside one order, lexicographically with the first exponent largest:
// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
//
// Positions are universal: the position of α does not depend on max_order,
// so sequences truncated at different orders share a common prefix layout.
class GradedOrdering {
 public:
  GradedOrdering(int dims, int max_order);

  // Shared, cached instance. Orderings are immutable, so one per (dims, N)
  // is enough for the whole process.
  static std::shared_ptr<const GradedOrdering> make(int dims, int max_order);

  int dims() const { return dims_; }
  int max_order() const { return max_order_; }
  std::size_t size() const { return size_; }

  std::span<const int> exponents(std::size_t pos) const {
    return {exponents_.data() + pos * static_cast<std::size_t>(dims_),
            static_cast<std::size_t>(dims_)};
  }
  MultiIndex index(std::size_t pos) const;
  int order_of(std::size_t pos) const { return orders_[pos]; }

  // Position of α in the universal graded layout. α may have any order,
  // including orders at or beyond max_order.
  std::size_t position(std::span<const int> alpha) const;
  std::size_t position(const MultiIndex& alpha) const {
    return position(alpha.exponents());
  }
  // Position of α + β for two stored positions.
  std::size_t position_of_sum(std::size_t p, std::size_t q) const;

  // Number of indices with |α| < k (first position of order k).
  std::size_t order_offset(int k) const;

  // α − e_v where v is the first non-zero exponent; defined for pos > 0.
  std::size_t parent(std::size_t pos) const { return parents_[pos]; }
  int parent_var(std::size_t pos) const { return parent_vars_[pos]; }

 private:
  int dims_;
  int max_order_;
  std::size_t size_;
  std::vector<int> exponents_;
  std::vector<int> orders_;
  std::vector<std::size_t> parents_;
  std::vector<int> parent_vars_;
};

using OrderingPtr = std::shared_ptr<const GradedOrdering>;

OrderingPtr enumerate_multiindices(int dims, int max_order);

}  // namespace invman
