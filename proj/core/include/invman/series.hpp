#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "invman/multiindex.hpp"

namespace invman {

using Complex = std::complex<double>;

// One scalar component u = (u_α)_{|α|<N} of a multivariate Taylor series,
// stored densely in the graded layout of its ordering.
class CoeffSeq {
 public:
  CoeffSeq() = default;
  explicit CoeffSeq(OrderingPtr ordering);
  CoeffSeq(OrderingPtr ordering, std::vector<Complex> values);

  static CoeffSeq delta(OrderingPtr ordering, const MultiIndex& alpha,
                        Complex value = 1.0);

  const GradedOrdering& ordering() const { return *ordering_; }
  const OrderingPtr& ordering_ptr() const { return ordering_; }
  int dims() const { return ordering_->dims(); }
  int max_order() const { return ordering_->max_order(); }
  std::size_t size() const { return values_.size(); }

  Complex operator[](std::size_t pos) const { return values_[pos]; }
  Complex& operator[](std::size_t pos) { return values_[pos]; }
  Complex at(const MultiIndex& alpha) const;

  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }

  // Same coefficients re-laid into an ordering of a different truncation
  // order (zero padding or truncation).
  CoeffSeq truncated(int max_order) const;

 private:
  OrderingPtr ordering_;
  std::vector<Complex> values_;
};

// a = (a^(1), ..., a^(n)), all components sharing one ordering.
class VectorSeq {
 public:
  VectorSeq() = default;
  VectorSeq(int n, OrderingPtr ordering);
  explicit VectorSeq(std::vector<CoeffSeq> components);

  int n() const { return static_cast<int>(components_.size()); }
  int dims() const { return ordering_->dims(); }
  int max_order() const { return ordering_->max_order(); }
  const GradedOrdering& ordering() const { return *ordering_; }
  const OrderingPtr& ordering_ptr() const { return ordering_; }

  const CoeffSeq& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  CoeffSeq& operator[](int i) { return components_[static_cast<std::size_t>(i)]; }

  VectorSeq truncated(int max_order) const;

 private:
  OrderingPtr ordering_;
  std::vector<CoeffSeq> components_;
};

// Positive eigenvector scalings γ = (γ₁, ..., γ_{n_s}).
class Scaling {
 public:
  Scaling() = default;
  explicit Scaling(std::vector<double> gamma);
  static Scaling uniform(int dims, double value);

  int dims() const { return static_cast<int>(gamma_.size()); }
  double operator[](int k) const { return gamma_[static_cast<std::size_t>(k)]; }
  std::span<const double> values() const { return gamma_; }

  Scaling inverse() const;
  Scaling times(double t) const;

  // Throws InvalidArgument unless entries at each pair are equal.
  void check_pairing(std::span<const std::pair<int, int>> pairs) const;

  // γ^α for every position of `ordering` (graded recursion, no pow calls).
  std::vector<double> powers(const GradedOrdering& ordering) const;

 private:
  std::vector<double> gamma_;
};

// (u * v)_α = Σ_{β≤α} u_{α−β} v_β for |α| < out_order.
CoeffSeq cauchy_product(const CoeffSeq& u, const CoeffSeq& v, int out_order);

double ell1_norm(const CoeffSeq& u, double nu = 1.0);
double x_norm(const VectorSeq& a, double nu = 1.0);

// 𝓛(a): a_α ↦ γ^α a_α.
VectorSeq rescale(const VectorSeq& a, const Scaling& gamma);
CoeffSeq rescale(const CoeffSeq& u, const Scaling& gamma);

// Σ_{|α|<N} a_α θ^α, accumulating θ^α along the graded parent chain.
std::vector<Complex> evaluate(const VectorSeq& a, std::span<const Complex> theta);
Complex evaluate(const CoeffSeq& u, std::span<const Complex> theta);

// θ^α for all positions of `ordering`.
std::vector<Complex> monomials(const GradedOrdering& ordering,
                               std::span<const Complex> theta);

}  // namespace invman
