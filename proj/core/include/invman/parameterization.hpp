#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "invman/polyfield.hpp"
#include "invman/series.hpp"
#include "invman/spectrum.hpp"

namespace invman {

// A field, its equilibrium data and the truncation / validity thresholds.
// `field` is already in stable form: for unstable manifolds it is -g.
struct ManifoldProblem {
  PolyVectorField field;
  SpectralData spectral;
  int N = 30;
  double epsilon_max = 1e-5;
  double r_max = 1e-5;
  ResonanceCheck resonance;

  int n() const { return field.n(); }
  int n_s() const { return spectral.n_s(); }
  int degree() const { return field.degree(); }

  // Throws InvalidArgument on N < 2 or non-positive thresholds.
  void validate() const;
};

struct ProblemSettings {
  int N = 30;
  double epsilon_max = 1e-5;
  double r_max = 1e-5;
  Stability stability = Stability::Stable;
  Normalization normalization = Normalization::Unit;
  EquilibriumOptions equilibrium;
};

// Equilibrium by Newton from `guess`, spectrum, selection and the
// non-resonance check. Throws the errors of the individual steps.
ManifoldProblem build_problem(const PolyVectorField& g, const Eigen::VectorXd& guess,
                              const ProblemSettings& settings);

// Coefficients ā (|α| < N) together with the eigenvector scaling γ in use,
// so that ā_{e_k} = γ_k V_k.
class Parameterization {
 public:
  Parameterization(ManifoldProblem problem, VectorSeq coeffs, Scaling gamma);

  const ManifoldProblem& problem() const { return problem_; }
  const VectorSeq& coeffs() const { return coeffs_; }
  const Scaling& gamma() const { return gamma_; }
  int N() const { return problem_.N; }

  // 𝓛(ā) for the scaling `factor`; the result carries γ·factor.
  Parameterization rescaled(const Scaling& factor) const;

 private:
  ManifoldProblem problem_;
  VectorSeq coeffs_;
  Scaling gamma_;
};

// a_0 = p, a_{e_k} = γ_k V_k, all higher coefficients zero.
VectorSeq linear_jet(const ManifoldProblem& problem, const Scaling& gamma);

// Order-by-order recursion: [(α·λ)I − Dg(p)] a_α = [g∘a]_α with a_α = 0 on
// the right. Throws SingularHomological when |det| < 1e-12.
Parameterization solve_homological(const ManifoldProblem& problem,
                                   std::optional<Scaling> gamma = std::nullopt);

struct NewtonOptions {
  int max_iterations = 30;
  // Both tolerances are relative to max(1, ‖a‖_X).
  double step_tol = 1e-13;
  double residual_tol = 1e-12;
};

struct NewtonStats {
  int iterations = 0;
  double residual = 0.0;
  double step = 0.0;
};

// Newton on F^[N] with the exact derivative; orders 0 and 1 are fixed by
// the constraints. Default initial guess is the linear jet.
// Throws NonConvergence.
Parameterization newton_solve(const ManifoldProblem& problem,
                              std::optional<VectorSeq> initial = std::nullopt,
                              std::optional<Scaling> gamma = std::nullopt,
                              const NewtonOptions& options = {}, NewtonStats* stats = nullptr);

// F_α(ā) for every |α| ≤ d(N−1): constraint residuals at orders 0 and 1,
// (α·λ)ā_α − [g∘ā]_α above.
VectorSeq residual(const Parameterization& par);

// F restricted to |α| < N.
VectorSeq truncated_residual(const Parameterization& par);

// ‖F̃(𝓛ā)‖_X for many γ from one residual evaluation, using
// F̃_α(𝓛ā) = γ^α F_α(ā).
class DefectEvaluator {
 public:
  explicit DefectEvaluator(const Parameterization& par);

  double operator()(const Scaling& gamma) const;
  const VectorSeq& residual() const { return residual_; }
  double epsilon_max() const { return epsilon_max_; }

 private:
  VectorSeq residual_;
  std::vector<std::vector<double>> moduli_;
  double epsilon_max_;
};

double defect(const Parameterization& par, const Scaling& gamma);
bool is_defect_valid(const Parameterization& par, const Scaling& gamma);

// max |a_α − conj(a_σ(α))| where σ swaps the exponents of each conjugate
// pair. Zero for a parameterization of a real manifold.
double conjugate_symmetry_error(const VectorSeq& a,
                                const std::vector<std::pair<int, int>>& pairing);

}  // namespace invman
