#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invman/series.hpp"

namespace invman {

// One monomial y^β of the field with its coefficient vector b_β ∈ ℝⁿ.
struct PolyTerm {
  std::vector<int> exponent;
  std::vector<double> coeff;

  int order() const;
};

// g(y) = Σ_β b_β y^β. Terms are merged by exponent and kept sorted, so two
// fields built from the same monomials compare equal term by term.
class PolyVectorField {
 public:
  PolyVectorField() = default;
  PolyVectorField(int n, std::vector<PolyTerm> terms,
                  std::map<std::string, double> parameters = {},
                  std::vector<std::string> variables = {});

  // Convenience for scalar contributions: component `target` gains
  // coeff · y^exponent.
  struct ScalarTerm {
    int target;
    std::vector<int> exponent;
    double coeff;
  };
  static PolyVectorField from_scalar_terms(int n, const std::vector<ScalarTerm>& terms,
                                           std::map<std::string, double> parameters = {},
                                           std::vector<std::string> variables = {});

  int n() const { return n_; }
  int degree() const { return degree_; }
  const std::vector<PolyTerm>& terms() const { return terms_; }
  const std::map<std::string, double>& parameters() const { return parameters_; }
  const std::vector<std::string>& variables() const { return variables_; }

  // -g, used to turn an unstable manifold problem into a stable one.
  PolyVectorField negated() const;

 private:
  int n_ = 0;
  int degree_ = 0;
  std::vector<PolyTerm> terms_;
  std::map<std::string, double> parameters_;
  std::vector<std::string> variables_;
};

Eigen::VectorXd eval_field(const PolyVectorField& g, const Eigen::VectorXd& y);
Eigen::VectorXcd eval_field(const PolyVectorField& g, const Eigen::VectorXcd& y);

Eigen::MatrixXd jacobian(const PolyVectorField& g, const Eigen::VectorXd& y);
Eigen::MatrixXcd jacobian(const PolyVectorField& g, const Eigen::VectorXcd& y);

struct EquilibriumOptions {
  double tol = 1e-13;
  int max_iterations = 50;
};

// Newton iteration on g(p) = 0 with the exact Jacobian.
// Throws NonConvergence or SingularJacobian.
Eigen::VectorXd find_equilibrium(const PolyVectorField& g, const Eigen::VectorXd& y0,
                                 const EquilibriumOptions& options = {});

// Coefficients of g∘f for |α| < out_order, f given by the series a.
VectorSeq compose_field_series(const PolyVectorField& g, const VectorSeq& a, int out_order);

// Entries ∂g_i/∂y_j (f(θ)) as series for |α| < out_order, indexed [i][j].
// Entry [i][j] at α = 0 is the Jacobian Dg(p) when a_0 = p.
std::vector<std::vector<CoeffSeq>> jacobian_series(const PolyVectorField& g, const VectorSeq& a,
                                                   int out_order);

// Memoized products a^β over the multi-indices used by a field. Each product
// is built from a shorter prefix times one component, so a cubic term costs
// at most two convolutions and shared prefixes are computed once.
class PowerTable {
 public:
  PowerTable(const VectorSeq& a, int out_order);

  // a^β for an exponent over the n phase variables.
  const CoeffSeq& power(const std::vector<int>& beta);

 private:
  const VectorSeq* a_;
  int out_order_;
  std::map<std::vector<int>, CoeffSeq> cache_;
};

}  // namespace invman
