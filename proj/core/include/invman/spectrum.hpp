#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace invman {

struct EigenPair {
  std::complex<double> lambda;
  Eigen::VectorXcd vector;
};

enum class Stability { Stable, Unstable };

// How the selected eigenvectors are scaled before phase fixing.
//   Unit:     ‖V‖₂ = 1, largest-modulus entry real positive.
//   MaxEntry: largest-modulus entry equal to exactly 1 (first entry wins ties).
enum class Normalization { Unit, MaxEntry };

struct SpectralData {
  Eigen::VectorXd p;
  std::vector<std::complex<double>> lambdas;
  std::vector<Eigen::VectorXcd> vectors;
  // Positions (k, k+1) of conjugate pairs, Im λ_k > 0.
  std::vector<std::pair<int, int>> pairing;
  double min_abs_re = 0.0;
  double max_abs_re = 0.0;
  // True when the eigenvalues were negated for an unstable manifold.
  bool time_reversed = false;

  int n_s() const { return static_cast<int>(lambdas.size()); }
  int n() const { return static_cast<int>(p.size()); }
  bool is_real() const { return pairing.empty(); }
};

// All eigenpairs of a small real matrix: characteristic polynomial roots
// (simultaneous Aberth iteration, then Newton on det(J − λI)), eigenvectors
// from the numerical null space refined by inverse iteration.
// Throws NonConvergence or DefectiveMatrix.
std::vector<EigenPair> eigenpairs(const Eigen::MatrixXd& J);

// Coefficients c_0..c_n of det(λI − J), c_n = 1.
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& J);

// Roots of a real polynomial with coefficients c_0..c_n (c_n ≠ 0).
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

// Picks the half-spectrum with Re λ < 0 (after negating everything when
// `stability` is Unstable), orders it by increasing Re λ with conjugate
// pairs adjacent, and normalizes the vectors.
// Throws NonHyperbolic if some |Re λ| < 1e-10 or nothing is selected.
SpectralData select_and_pair(const std::vector<EigenPair>& eigs, Stability stability,
                             const Eigen::VectorXd& p,
                             Normalization normalization = Normalization::Unit);

struct ResonanceCheck {
  int max_order = 0;  // M_res, the largest |α| that was examined
  double closest = 0.0;  // min |α·λ − λ_j| over the examined set
};

constexpr double kResonanceTol = 1e-8;

// Looks for α·λ = λ_j with 2 ≤ |α| ≤ M_res. Throws ResonanceDetected with
// the witness when |α·λ − λ_j| < tol.
ResonanceCheck check_nonresonance(const std::vector<std::complex<double>>& lambdas,
                                  double tol = kResonanceTol);

}  // namespace invman
