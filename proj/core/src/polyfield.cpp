#include "invman/polyfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "invman/errors.hpp"

namespace invman {

int PolyTerm::order() const { return std::accumulate(exponent.begin(), exponent.end(), 0); }

PolyVectorField::PolyVectorField(int n, std::vector<PolyTerm> terms,
                                 std::map<std::string, double> parameters,
                                 std::vector<std::string> variables)
    : n_(n), parameters_(std::move(parameters)), variables_(std::move(variables)) {
  if (n < 1) throw InvalidArgument("PolyVectorField: dimension must be >= 1");
  std::map<std::vector<int>, std::vector<double>> merged;
  for (auto& t : terms) {
    if (static_cast<int>(t.exponent.size()) != n || static_cast<int>(t.coeff.size()) != n) {
      throw InvalidArgument("PolyVectorField: term has wrong dimension");
    }
    for (int e : t.exponent) {
      if (e < 0) throw InvalidArgument("PolyVectorField: negative exponent");
    }
    auto [it, inserted] = merged.try_emplace(t.exponent, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) it->second[static_cast<std::size_t>(i)] += t.coeff[static_cast<std::size_t>(i)];
  }
  for (auto& [exponent, coeff] : merged) {
    if (std::all_of(coeff.begin(), coeff.end(), [](double c) { return c == 0.0; })) continue;
    terms_.push_back({exponent, coeff});
  }
  // Graded order of exponents: constants, linear, quadratic, ...
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const PolyTerm& a, const PolyTerm& b) { return a.order() < b.order(); });
  for (const auto& t : terms_) degree_ = std::max(degree_, t.order());
}

PolyVectorField PolyVectorField::from_scalar_terms(int n, const std::vector<ScalarTerm>& terms,
                                                   std::map<std::string, double> parameters,
                                                   std::vector<std::string> variables) {
  std::vector<PolyTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.target < 0 || t.target >= n) {
      throw InvalidArgument("PolyVectorField: term target out of range");
    }
    std::vector<double> coeff(static_cast<std::size_t>(n), 0.0);
    coeff[static_cast<std::size_t>(t.target)] = t.coeff;
    out.push_back({t.exponent, std::move(coeff)});
  }
  return PolyVectorField(n, std::move(out), std::move(parameters), std::move(variables));
}

PolyVectorField PolyVectorField::negated() const {
  std::vector<PolyTerm> terms = terms_;
  for (auto& t : terms) {
    for (auto& c : t.coeff) c = -c;
  }
  return PolyVectorField(n_, std::move(terms), parameters_, variables_);
}

namespace {

template <typename Scalar>
Scalar monomial(const std::vector<int>& beta, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
  Scalar m(1.0);
  for (std::size_t j = 0; j < beta.size(); ++j) {
    for (int e = 0; e < beta[j]; ++e) m *= y(static_cast<Eigen::Index>(j));
  }
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eval_impl(const PolyVectorField& g,
                                                   const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
  if (y.size() != g.n()) throw InvalidArgument("eval_field: state has wrong dimension");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(g.n());
  for (const auto& t : g.terms()) {
    const Scalar m = monomial(t.exponent, y);
    for (int i = 0; i < g.n(); ++i) out(i) += t.coeff[static_cast<std::size_t>(i)] * m;
  }
  return out;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jacobian_impl(
    const PolyVectorField& g, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
  if (y.size() != g.n()) throw InvalidArgument("jacobian: state has wrong dimension");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> J =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(g.n(), g.n());
  for (const auto& t : g.terms()) {
    for (int j = 0; j < g.n(); ++j) {
      const int bj = t.exponent[static_cast<std::size_t>(j)];
      if (bj == 0) continue;
      auto reduced = t.exponent;
      reduced[static_cast<std::size_t>(j)] -= 1;
      const Scalar d = static_cast<double>(bj) * monomial(reduced, y);
      for (int i = 0; i < g.n(); ++i) J(i, j) += t.coeff[static_cast<std::size_t>(i)] * d;
    }
  }
  return J;
}

}  // namespace

Eigen::VectorXd eval_field(const PolyVectorField& g, const Eigen::VectorXd& y) {
  return eval_impl<double>(g, y);
}
Eigen::VectorXcd eval_field(const PolyVectorField& g, const Eigen::VectorXcd& y) {
  return eval_impl<std::complex<double>>(g, y);
}
Eigen::MatrixXd jacobian(const PolyVectorField& g, const Eigen::VectorXd& y) {
  return jacobian_impl<double>(g, y);
}
Eigen::MatrixXcd jacobian(const PolyVectorField& g, const Eigen::VectorXcd& y) {
  return jacobian_impl<std::complex<double>>(g, y);
}

Eigen::VectorXd find_equilibrium(const PolyVectorField& g, const Eigen::VectorXd& y0,
                                 const EquilibriumOptions& options) {
  Eigen::VectorXd y = y0;
  for (int it = 0; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd r = eval_field(g, y);
    if (r.lpNorm<Eigen::Infinity>() <= options.tol) return y;
    if (it == options.max_iterations) break;
    const Eigen::MatrixXd J = jacobian(g, y);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible() || lu.rcond() < 1e-14) {
      throw SingularJacobian("find_equilibrium: singular Jacobian during Newton iteration");
    }
    y -= lu.solve(r);
    if (!y.allFinite()) break;
  }
  throw NonConvergence("find_equilibrium: Newton did not reach |g(p)| <= " +
                       std::to_string(options.tol) + " within " +
                       std::to_string(options.max_iterations) + " iterations");
}

PowerTable::PowerTable(const VectorSeq& a, int out_order) : a_(&a), out_order_(out_order) {}

const CoeffSeq& PowerTable::power(const std::vector<int>& beta) {
  if (auto it = cache_.find(beta); it != cache_.end()) return it->second;
  const int order = std::accumulate(beta.begin(), beta.end(), 0);
  CoeffSeq value;
  if (order == 0) {
    value = CoeffSeq(GradedOrdering::make(a_->dims(), out_order_));
    value[0] = 1.0;
  } else {
    int j = static_cast<int>(beta.size()) - 1;
    while (beta[static_cast<std::size_t>(j)] == 0) --j;
    if (order == 1) {
      value = (*a_)[j].truncated(out_order_);
    } else {
      auto prefix = beta;
      prefix[static_cast<std::size_t>(j)] -= 1;
      const CoeffSeq& base = power(prefix);
      value = cauchy_product(base, (*a_)[j], out_order_);
    }
  }
  return cache_.emplace(beta, std::move(value)).first->second;
}

VectorSeq compose_field_series(const PolyVectorField& g, const VectorSeq& a, int out_order) {
  if (a.n() != g.n()) throw InvalidArgument("compose_field_series: dimension mismatch");
  VectorSeq out(g.n(), GradedOrdering::make(a.dims(), out_order));
  PowerTable powers(a, out_order);
  for (const auto& t : g.terms()) {
    const CoeffSeq& m = powers.power(t.exponent);
    for (int i = 0; i < g.n(); ++i) {
      const double b = t.coeff[static_cast<std::size_t>(i)];
      if (b == 0.0) continue;
      auto dst = out[i].values();
      auto src = m.values();
      for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += b * src[p];
    }
  }
  return out;
}

std::vector<std::vector<CoeffSeq>> jacobian_series(const PolyVectorField& g, const VectorSeq& a,
                                                   int out_order) {
  if (a.n() != g.n()) throw InvalidArgument("jacobian_series: dimension mismatch");
  const int n = g.n();
  auto ord = GradedOrdering::make(a.dims(), out_order);
  std::vector<std::vector<CoeffSeq>> R(static_cast<std::size_t>(n),
                                       std::vector<CoeffSeq>(static_cast<std::size_t>(n), CoeffSeq(ord)));
  PowerTable powers(a, out_order);
  for (const auto& t : g.terms()) {
    for (int j = 0; j < n; ++j) {
      const int bj = t.exponent[static_cast<std::size_t>(j)];
      if (bj == 0) continue;
      auto reduced = t.exponent;
      reduced[static_cast<std::size_t>(j)] -= 1;
      const auto src = powers.power(reduced).values();
      for (int i = 0; i < n; ++i) {
        const double b = t.coeff[static_cast<std::size_t>(i)] * bj;
        if (b == 0.0) continue;
        auto dst = R[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].values();
        for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += b * src[p];
      }
    }
  }
  return R;
}

}  // namespace invman
