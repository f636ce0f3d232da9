#pragma once

// Structure of DF^[N] shared by the Newton solver and the validator.
//
// With the layout index pos(α)·n + i, DF^[N] is block lower triangular:
//   rows |α| ≤ 1:  identity (constraint rows);
//   rows |α| ≥ 2:  D_α = (α·λ)I − R[0] on the diagonal and −R[α−γ] for γ < α,
// where R[ε] is the n×n matrix of coefficients ε of ∂g_i/∂y_j(f(θ)).
// Blocks vanish unless γ ≤ α component-wise, and the inverse keeps that
// support, so everything is assembled with gathers over sub-indices.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "invman/polyfield.hpp"
#include "invman/series.hpp"

namespace invman::detail {

// For each δ, the pairs (pos ε, pos δ−ε) over all ε ≤ δ.
class DivisorTable {
 public:
  explicit DivisorTable(const GradedOrdering& ordering);

  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs(std::size_t delta) const {
    return pairs_[delta];
  }

 private:
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> pairs_;
};

std::complex<double> alpha_dot_lambda(std::span<const int> alpha,
                                      const std::vector<std::complex<double>>& lambdas);

class Linearization {
 public:
  Linearization(const PolyVectorField& g, const VectorSeq& a,
                const std::vector<std::complex<double>>& lambdas);

  int n() const { return n_; }
  const GradedOrdering& ordering() const { return *ord_; }
  const OrderingPtr& ordering_ptr() const { return ord_; }
  const DivisorTable& divisors() const { return divisors_; }

  const Eigen::MatrixXcd& coupling(std::size_t eps) const { return R_[eps]; }
  bool has_coupling(std::size_t eps) const { return nonzero_[eps]; }
  // D_α, or the identity for |α| ≤ 1.
  Eigen::MatrixXcd diagonal_block(std::size_t pos) const;

  // h with DF^[N] h = rhs, both in the dense layout.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

  // (DF^[N])⁻¹ as a dense matrix; entries outside the α ≥ β support are
  // exact zeros.
  Eigen::MatrixXcd inverse() const;

 private:
  int n_;
  OrderingPtr ord_;
  DivisorTable divisors_;
  std::vector<Eigen::MatrixXcd> R_;
  std::vector<bool> nonzero_;
  std::vector<std::complex<double>> dots_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_;
};

}  // namespace invman::detail
