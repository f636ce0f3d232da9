#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invman/interval.hpp"
#include "invman/parameterization.hpp"

namespace invman {

enum class BoundMode { Floating, Interval };

// Upper bounds per phase-space component, for one scaling γ.
struct BoundSet {
  std::vector<double> Y, Z0, Z1, Z2;
  Scaling gamma;
  BoundMode mode = BoundMode::Floating;
  // Set when the cheap γ re-evaluation was replaced by a full rebuild.
  bool from_scratch = false;
};

struct RootInterval {
  double r0;
  double r1;
};

// Intersection over components of {r > 0 : P(r) = Y + (Z0+Z1−1)r + Z2 r² < 0},
// endpoints moved inward by interval evaluation of the quadratic formula.
std::optional<RootInterval> radii_root_interval(const BoundSet& bounds);

struct RadiiReport {
  BoundSet bounds;
  // (Y, Z0 + Z1 − 1, Z2) per component.
  std::vector<std::array<double, 3>> polynomials;
  std::optional<RootInterval> roots;
  bool valid = false;
  double r_used = 0.0;
  double r_max = 0.0;
  int N = 0;
  std::string reason;
};

// K^{(i,j)} = max_β ν^{−|β|} Σ_α |B^{(i,j)}_{α,β}| ν^{|α|} for a matrix in the
// layout pos(α)·n + i.
Eigen::MatrixXd operator_norm_K(const Eigen::MatrixXcd& B, const GradedOrdering& ordering, int n,
                                double nu = 1.0);

// Same with arbitrary positive weights w_α in place of ν^{|α|}, on |B|.
// Only rows with pos ≥ pos(β) are read when `lower` is set.
Eigen::MatrixXd weighted_operator_norm(const Eigen::MatrixXd& absB, const std::vector<double>& w,
                                       int n, bool lower);

// Everything needed to bound the Newton-like operator T(a) = a − A F(a)
// around ā, built once and re-evaluated cheaply for any scaling γ.
// Restricted to fields of degree ≤ 2; throws UnsupportedDegree otherwise.
class Validator {
 public:
  explicit Validator(const Parameterization& par);

  std::vector<double> bound_Y(const Scaling& gamma, BoundMode mode = BoundMode::Floating) const;
  std::vector<double> bound_Z0(const Scaling& gamma, BoundMode mode = BoundMode::Floating) const;
  std::vector<double> bound_Z1(const Scaling& gamma, BoundMode mode = BoundMode::Floating) const;
  std::vector<double> bound_Z2(const Scaling& gamma, BoundMode mode = BoundMode::Floating) const;

  // All four bounds. When max Z0 exceeds `fallback_threshold` and
  // `allow_fallback` is set, the bounds are rebuilt from scratch on 𝓛(ā).
  BoundSet bounds(const Scaling& gamma, BoundMode mode, bool allow_fallback = true) const;

  RadiiReport prove(const Scaling& gamma, BoundMode mode = BoundMode::Interval) const;

  // Bounds of a fresh Validator built on par.rescaled(gamma), at unit scaling.
  static BoundSet from_scratch(const Parameterization& par, const Scaling& gamma, BoundMode mode);

  const Parameterization& parameterization() const { return par_; }
  const Eigen::MatrixXcd& approximate_inverse() const { return A_; }
  // 1/(α·λ) for |α| ≥ N.
  Complex tail_multiplier(std::span<const int> alpha) const;
  double tail_bound() const { return tail_; }
  Eigen::Index matrix_size() const { return A_.rows(); }

  double fallback_threshold = 1e-2;

 private:
  std::vector<Interval> powers(const Scaling& gamma, const GradedOrdering& ord) const;
  std::vector<double> K_upper(const Eigen::MatrixXd& absM, const Scaling& gamma,
                              BoundMode mode, bool is_B) const;

  Parameterization par_;
  int n_;
  int N_;
  OrderingPtr ord_;       // |α| < N
  OrderingPtr ord_full_;  // |α| ≤ d(N−1)
  double tail_;           // 1/(N·min|Re λ|), rounded up
  Eigen::MatrixXcd A_;
  Eigen::MatrixXd A_abs_;
  Eigen::MatrixXd B_mid_abs_;
  Eigen::MatrixXd B_upper_;
  // |(A F(ā))_α^{(i)}|, layout pos·n + i over ord_full_.
  std::vector<double> v_mid_abs_;
  std::vector<double> v_upper_;
  std::vector<double> linear_sum_;           // Σ |b| over linear terms, per component
  std::vector<std::vector<double>> quad_;    // [k][i]: Σ |b^{(k)}| β_i over quadratic terms
  std::vector<double> quad_sum_;             // 2 Σ |b^{(k)}| over quadratic terms
};

}  // namespace invman
