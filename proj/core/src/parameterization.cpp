#include "invman/parameterization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invman/errors.hpp"
#include "linearization.hpp"

namespace invman {

void ManifoldProblem::validate() const {
  if (N < 2) throw InvalidArgument("ManifoldProblem: N must be >= 2");
  if (!(epsilon_max > 0.0)) throw InvalidArgument("ManifoldProblem: epsilon_max must be > 0");
  if (!(r_max > 0.0)) throw InvalidArgument("ManifoldProblem: r_max must be > 0");
  if (spectral.n() != field.n()) throw InvalidArgument("ManifoldProblem: equilibrium has wrong dimension");
  if (spectral.n_s() < 1) throw InvalidArgument("ManifoldProblem: empty spectrum");
}

ManifoldProblem build_problem(const PolyVectorField& g, const Eigen::VectorXd& guess,
                              const ProblemSettings& settings) {
  ManifoldProblem problem;
  problem.N = settings.N;
  problem.epsilon_max = settings.epsilon_max;
  problem.r_max = settings.r_max;
  const Eigen::VectorXd p = find_equilibrium(g, guess, settings.equilibrium);
  problem.field = settings.stability == Stability::Unstable ? g.negated() : g;
  problem.spectral = select_and_pair(eigenpairs(jacobian(g, p)), settings.stability, p,
                                     settings.normalization);
  problem.resonance = check_nonresonance(problem.spectral.lambdas);
  problem.validate();
  return problem;
}

Parameterization::Parameterization(ManifoldProblem problem, VectorSeq coeffs, Scaling gamma)
    : problem_(std::move(problem)), coeffs_(std::move(coeffs)), gamma_(std::move(gamma)) {
  if (coeffs_.n() != problem_.n() || coeffs_.dims() != problem_.n_s() ||
      coeffs_.max_order() != problem_.N) {
    throw InvalidArgument("Parameterization: coefficient shape does not match the problem");
  }
  if (gamma_.dims() != problem_.n_s()) throw InvalidArgument("Parameterization: gamma has wrong length");
  gamma_.check_pairing(problem_.spectral.pairing);
}

Parameterization Parameterization::rescaled(const Scaling& factor) const {
  if (factor.dims() != gamma_.dims()) throw InvalidArgument("rescaled: gamma has wrong length");
  std::vector<double> g(gamma_.values().begin(), gamma_.values().end());
  for (int k = 0; k < factor.dims(); ++k) g[static_cast<std::size_t>(k)] *= factor[k];
  return Parameterization(problem_, rescale(coeffs_, factor), Scaling(std::move(g)));
}

VectorSeq linear_jet(const ManifoldProblem& problem, const Scaling& gamma) {
  const int n = problem.n();
  const int ns = problem.n_s();
  if (gamma.dims() != ns) throw InvalidArgument("linear_jet: gamma has wrong length");
  VectorSeq a(n, GradedOrdering::make(ns, problem.N));
  for (int i = 0; i < n; ++i) {
    a[i][0] = problem.spectral.p(i);
    for (int k = 0; k < ns; ++k) {
      a[i][static_cast<std::size_t>(k) + 1] = gamma[k] * problem.spectral.vectors[static_cast<std::size_t>(k)](i);
    }
  }
  return a;
}

namespace {

Scaling unit_or(const ManifoldProblem& problem, const std::optional<Scaling>& gamma) {
  return gamma ? *gamma : Scaling::uniform(problem.n_s(), 1.0);
}

// F_α for 2 ≤ |α| < N in the dense layout pos·n + i; rows of order ≤ 1 zero.
Eigen::VectorXcd high_order_residual(const ManifoldProblem& problem, const VectorSeq& a) {
  const int n = problem.n();
  const auto& ord = a.ordering();
  const VectorSeq comp = compose_field_series(problem.field, a, problem.N);
  Eigen::VectorXcd F = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ord.size()) * n);
  for (std::size_t pos = ord.order_offset(2); pos < ord.size(); ++pos) {
    const Complex dot = detail::alpha_dot_lambda(ord.exponents(pos), problem.spectral.lambdas);
    for (int i = 0; i < n; ++i) {
      F(static_cast<Eigen::Index>(pos) * n + i) = dot * a[i][pos] - comp[i][pos];
    }
  }
  return F;
}

double layout_norm(const Eigen::VectorXcd& v, int n) {
  std::vector<double> sums(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index k = 0; k < v.size(); ++k) sums[static_cast<std::size_t>(k % n)] += std::abs(v(k));
  return *std::max_element(sums.begin(), sums.end());
}

}  // namespace

Parameterization solve_homological(const ManifoldProblem& problem, std::optional<Scaling> gamma) {
  problem.validate();
  const Scaling g = unit_or(problem, gamma);
  VectorSeq a = linear_jet(problem, g);
  const int n = problem.n();
  const auto& ord = a.ordering();
  const Eigen::MatrixXcd Dg = jacobian(problem.field, problem.spectral.p).cast<Complex>();
  for (int k = 2; k < problem.N; ++k) {
    const VectorSeq comp = compose_field_series(problem.field, a, k + 1);
    for (std::size_t pos = ord.order_offset(k); pos < ord.order_offset(k + 1); ++pos) {
      const Complex dot = detail::alpha_dot_lambda(ord.exponents(pos), problem.spectral.lambdas);
      Eigen::MatrixXcd M = -Dg;
      M.diagonal().array() += dot;
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
      if (std::abs(lu.determinant()) < 1e-12) {
        std::ostringstream msg;
        msg << "solve_homological: near-resonant system at alpha = (";
        const auto alpha = ord.exponents(pos);
        for (std::size_t m = 0; m < alpha.size(); ++m) msg << (m ? "," : "") << alpha[m];
        msg << ")";
        throw SingularHomological(msg.str());
      }
      Eigen::VectorXcd rhs(n);
      for (int i = 0; i < n; ++i) rhs(i) = comp[i][pos];
      const Eigen::VectorXcd sol = lu.solve(rhs);
      for (int i = 0; i < n; ++i) a[i][pos] = sol(i);
    }
  }
  return Parameterization(problem, std::move(a), g);
}

Parameterization newton_solve(const ManifoldProblem& problem, std::optional<VectorSeq> initial,
                              std::optional<Scaling> gamma, const NewtonOptions& options,
                              NewtonStats* stats) {
  problem.validate();
  const Scaling g = unit_or(problem, gamma);
  const VectorSeq jet = linear_jet(problem, g);
  VectorSeq a = jet;
  const int n = problem.n();
  if (initial) {
    if (initial->n() != n || initial->dims() != problem.n_s()) {
      throw InvalidArgument("newton_solve: initial guess has the wrong shape");
    }
    a = initial->truncated(problem.N);
    for (int i = 0; i < n; ++i) {
      for (std::size_t pos = 0; pos < a.ordering().order_offset(2); ++pos) a[i][pos] = jet[i][pos];
    }
  }
  const auto& ord = a.ordering();
  Eigen::VectorXcd F = high_order_residual(problem, a);
  NewtonStats local;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const detail::Linearization lin(problem.field, a, problem.spectral.lambdas);
    const Eigen::VectorXcd h = lin.solve(-F);
    for (std::size_t pos = ord.order_offset(2); pos < ord.size(); ++pos) {
      for (int i = 0; i < n; ++i) a[i][pos] += h(static_cast<Eigen::Index>(pos) * n + i);
    }
    F = high_order_residual(problem, a);
    local.iterations = it;
    local.step = layout_norm(h, n);
    local.residual = layout_norm(F, n);
    const double scale = std::max(1.0, x_norm(a));
    if (!std::isfinite(local.step) || !std::isfinite(local.residual)) break;
    if (local.step <= options.step_tol * scale && local.residual <= options.residual_tol * scale) {
      if (stats) *stats = local;
      return Parameterization(problem, std::move(a), g);
    }
  }
  if (stats) *stats = local;
  std::ostringstream msg;
  msg << "newton_solve: no convergence after " << local.iterations << " iterations (step "
      << local.step << ", residual " << local.residual << ")";
  throw NonConvergence(msg.str());
}

namespace {

VectorSeq residual_to(const Parameterization& par, int out_order) {
  const auto& problem = par.problem();
  const int n = problem.n();
  const VectorSeq comp = compose_field_series(problem.field, par.coeffs(), out_order);
  const VectorSeq a = par.coeffs().truncated(out_order);
  VectorSeq F(n, comp.ordering_ptr());
  const auto& ord = comp.ordering();
  for (int i = 0; i < n; ++i) {
    F[i][0] = a[i][0] - problem.spectral.p(i);
    for (int k = 0; k < problem.n_s(); ++k) {
      const std::size_t pos = static_cast<std::size_t>(k) + 1;
      F[i][pos] = a[i][pos] - par.gamma()[k] * problem.spectral.vectors[static_cast<std::size_t>(k)](i);
    }
  }
  for (std::size_t pos = ord.order_offset(2); pos < ord.size(); ++pos) {
    const Complex dot = detail::alpha_dot_lambda(ord.exponents(pos), problem.spectral.lambdas);
    for (int i = 0; i < n; ++i) F[i][pos] = dot * a[i][pos] - comp[i][pos];
  }
  return F;
}

}  // namespace

VectorSeq residual(const Parameterization& par) {
  const int d = std::max(1, par.problem().degree());
  return residual_to(par, d * (par.N() - 1) + 1);
}

VectorSeq truncated_residual(const Parameterization& par) { return residual_to(par, par.N()); }

DefectEvaluator::DefectEvaluator(const Parameterization& par)
    : residual_(invman::residual(par)), epsilon_max_(par.problem().epsilon_max) {
  moduli_.resize(static_cast<std::size_t>(residual_.n()));
  for (int i = 0; i < residual_.n(); ++i) {
    const auto vals = residual_[i].values();
    auto& m = moduli_[static_cast<std::size_t>(i)];
    m.resize(vals.size());
    std::transform(vals.begin(), vals.end(), m.begin(), [](Complex c) { return std::abs(c); });
  }
}

double DefectEvaluator::operator()(const Scaling& gamma) const {
  const auto w = gamma.powers(residual_.ordering());
  double best = 0.0;
  for (const auto& m : moduli_) {
    double s = 0.0;
    for (std::size_t pos = 0; pos < m.size(); ++pos) s += m[pos] * w[pos];
    best = std::max(best, s);
  }
  return best;
}

double defect(const Parameterization& par, const Scaling& gamma) {
  return DefectEvaluator(par)(gamma);
}

bool is_defect_valid(const Parameterization& par, const Scaling& gamma) {
  return defect(par, gamma) < par.problem().epsilon_max;
}

double conjugate_symmetry_error(const VectorSeq& a,
                                const std::vector<std::pair<int, int>>& pairing) {
  const auto& ord = a.ordering();
  double err = 0.0;
  std::vector<int> swapped(static_cast<std::size_t>(ord.dims()));
  for (std::size_t pos = 0; pos < ord.size(); ++pos) {
    const auto alpha = ord.exponents(pos);
    std::copy(alpha.begin(), alpha.end(), swapped.begin());
    for (auto [k, l] : pairing) std::swap(swapped[static_cast<std::size_t>(k)], swapped[static_cast<std::size_t>(l)]);
    const std::size_t mirror = ord.position(swapped);
    for (int i = 0; i < a.n(); ++i) {
      err = std::max(err, std::abs(a[i][pos] - std::conj(a[i][mirror])));
    }
  }
  return err;
}

}  // namespace invman
