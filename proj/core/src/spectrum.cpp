#include "invman/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "invman/errors.hpp"
#include "invman/multiindex.hpp"

namespace invman {

using cd = std::complex<double>;

std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& J) {
  // Faddeev–LeVerrier recursion; adequate for the n ≤ 10 matrices met here,
  // the roots are polished against det(J − λI) afterwards anyway.
  const Eigen::Index n = J.rows();
  if (n == 0 || J.cols() != n) throw InvalidArgument("characteristic_polynomial: need a square matrix");
  std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = J * M + c[static_cast<std::size_t>(n - k + 1)] * I;
    c[static_cast<std::size_t>(n - k)] = -(J * M).trace() / static_cast<double>(k);
  }
  return c;
}

namespace {

std::pair<cd, cd> horner(const std::vector<double>& c, cd z) {
  cd p = c.back();
  cd dp = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
  return {p, dp};
}

}  // namespace

std::vector<cd> polynomial_roots(const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() < 2) throw InvalidArgument("polynomial_roots: degree must be >= 1");
  const double lead = c.back();
  for (auto& x : c) x /= lead;
  const std::size_t n = c.size() - 1;

  // Zero roots split off exactly.
  std::size_t zeros = 0;
  while (zeros < n && c[zeros] == 0.0) ++zeros;
  std::vector<double> reduced(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
  const std::size_t m = reduced.size() - 1;
  std::vector<cd> z(m);
  if (m > 0) {
    double radius = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      radius = std::max(radius, std::pow(std::abs(reduced[k]), 1.0 / static_cast<double>(m - k)));
    }
    radius = std::max(radius, 1e-3);
    for (std::size_t k = 0; k < m; ++k) {
      z[k] = std::polar(radius, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m) + 0.4);
    }
    bool converged = false;
    for (int it = 0; it < 2000 && !converged; ++it) {
      converged = true;
      for (std::size_t k = 0; k < m; ++k) {
        auto [p, dp] = horner(reduced, z[k]);
        if (p == cd{}) continue;
        const cd ratio = p / dp;
        cd s{};
        for (std::size_t j = 0; j < m; ++j) {
          if (j != k) s += 1.0 / (z[k] - z[j]);
        }
        const cd w = ratio / (1.0 - ratio * s);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
        z[k] -= w;
        if (std::abs(w) > 1e-15 * std::max(1.0, std::abs(z[k]))) converged = false;
      }
    }
    if (!converged) {
      // Multiple roots stall the update at ~1e-8 relative; accept when the
      // residual is tiny.
      for (const auto& r : z) {
        const double scale = std::max(1.0, std::pow(std::abs(r), static_cast<double>(m)));
        if (std::abs(horner(reduced, r).first) > 1e-6 * scale) {
          throw NonConvergence("polynomial_roots: Aberth iteration did not converge");
        }
      }
    }
  }
  z.insert(z.end(), zeros, cd{});
  return z;
}

namespace {

double polish_real(const Eigen::MatrixXd& J, double lambda) {
  const Eigen::Index n = J.rows();
  for (int it = 0; it < 20; ++it) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J - lambda * Eigen::MatrixXd::Identity(n, n));
    const Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite()) break;
    const double tr = inv.trace();
    if (tr == 0.0 || !std::isfinite(tr)) break;
    const double step = 1.0 / tr;
    lambda += step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(lambda))) break;
  }
  return lambda;
}

cd polish_complex(const Eigen::MatrixXd& J, cd lambda) {
  const Eigen::Index n = J.rows();
  const Eigen::MatrixXcd Jc = J.cast<cd>();
  for (int it = 0; it < 20; ++it) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Jc - lambda * Eigen::MatrixXcd::Identity(n, n));
    const Eigen::MatrixXcd inv = lu.inverse();
    if (!inv.allFinite()) break;
    const cd tr = inv.trace();
    if (tr == cd{}) break;
    const cd step = 1.0 / tr;
    lambda += step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(lambda))) break;
  }
  return lambda;
}

// Groups values closer than a relative 1e-6 and replaces each group by its
// mean. Returns (value, multiplicity).
template <typename T>
std::vector<std::pair<T, int>> cluster(std::vector<T> values) {
  std::vector<std::pair<T, int>> out;
  std::vector<bool> used(values.size(), false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> group{i};
    used[i] = true;
    for (std::size_t g = 0; g < group.size(); ++g) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (used[j]) continue;
        const T a = values[group[g]];
        if (std::abs(a - values[j]) <= 1e-6 * std::max(1.0, std::abs(a))) {
          used[j] = true;
          group.push_back(j);
        }
      }
    }
    T mean{};
    for (auto k : group) mean += values[k];
    mean /= static_cast<double>(group.size());
    out.emplace_back(mean, static_cast<int>(group.size()));
  }
  return out;
}

template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> null_vectors(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& M, int count) {
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(M, Eigen::ComputeFullV);
  const auto& V = svd.matrixV();
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> out;
  for (int k = 0; k < count; ++k) out.push_back(V.col(V.cols() - 1 - k));
  return out;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> refine(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& J,
                                               Scalar lambda,
                                               Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = J.rows();
  const Mat shifted = J - lambda * Mat::Identity(n, n);
  Eigen::PartialPivLU<Mat> lu(shifted);
  for (int it = 0; it < 2; ++it) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = lu.solve(v);
    if (!x.allFinite() || x.norm() == 0.0) break;
    v = x / x.norm();
  }
  return v;
}

void check_residual(const Eigen::MatrixXcd& J, cd lambda, const Eigen::VectorXcd& v) {
  const double res = (J * v - lambda * v).lpNorm<Eigen::Infinity>();
  if (!(res <= 1e-10 * v.lpNorm<Eigen::Infinity>())) {
    std::ostringstream msg;
    msg << "eigenpairs: eigenvalue " << lambda << " has residual " << res
        << "; the matrix appears defective";
    throw DefectiveMatrix(msg.str());
  }
}

}  // namespace

std::vector<EigenPair> eigenpairs(const Eigen::MatrixXd& J) {
  const Eigen::Index n = J.rows();
  if (n == 0 || J.cols() != n) throw InvalidArgument("eigenpairs: need a square matrix");
  if (!J.allFinite()) throw InvalidArgument("eigenpairs: matrix has non-finite entries");
  const auto roots = polynomial_roots(characteristic_polynomial(J));

  std::vector<double> reals;
  std::vector<cd> uppers;
  int lower_count = 0;
  for (const auto& z : roots) {
    if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z))) {
      reals.push_back(z.real());
    } else if (z.imag() > 0) {
      uppers.push_back(z);
    } else {
      ++lower_count;
    }
  }
  if (lower_count != static_cast<int>(uppers.size())) {
    throw NonConvergence("eigenpairs: complex roots are not conjugate-paired");
  }

  const Eigen::MatrixXcd Jc = J.cast<cd>();
  std::vector<EigenPair> out;
  for (auto [value, mult] : cluster(reals)) {
    const double lambda = mult == 1 ? polish_real(J, value) : value;
    const Eigen::MatrixXd shifted = J - lambda * Eigen::MatrixXd::Identity(n, n);
    for (auto v : null_vectors<double>(shifted, mult)) {
      if (mult == 1) v = refine<double>(J, lambda, v);
      Eigen::VectorXcd vc = v.cast<cd>();
      check_residual(Jc, lambda, vc);
      out.push_back({cd(lambda, 0.0), vc});
    }
  }
  for (auto [value, mult] : cluster(uppers)) {
    const cd lambda = mult == 1 ? polish_complex(J, value) : value;
    const Eigen::MatrixXcd shifted = Jc - lambda * Eigen::MatrixXcd::Identity(n, n);
    for (auto v : null_vectors<cd>(shifted, mult)) {
      if (mult == 1) v = refine<cd>(Jc, lambda, v);
      check_residual(Jc, lambda, v);
      out.push_back({lambda, v});
      out.push_back({std::conj(lambda), v.conjugate()});
    }
  }
  return out;
}

namespace {

Eigen::VectorXcd normalize(Eigen::VectorXcd v, Normalization mode) {
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) throw InvalidArgument("normalize: zero eigenvector");
  Eigen::Index anchor = 0;
  while (std::abs(v(anchor)) < vmax * (1.0 - 1e-12)) ++anchor;
  if (mode == Normalization::MaxEntry) {
    v /= v(anchor);
    v(anchor) = 1.0;
  } else {
    v /= v.norm();
    const cd a = v(anchor);
    v *= std::conj(a) / std::abs(a);
    v(anchor) = std::abs(v(anchor));
  }
  return v;
}

}  // namespace

SpectralData select_and_pair(const std::vector<EigenPair>& eigs, Stability stability,
                             const Eigen::VectorXd& p, Normalization normalization) {
  const double sign = stability == Stability::Unstable ? -1.0 : 1.0;
  for (const auto& e : eigs) {
    if (std::abs(e.lambda.real()) < 1e-10) {
      std::ostringstream msg;
      msg << "select_and_pair: eigenvalue " << e.lambda << " is not hyperbolic";
      throw NonHyperbolic(msg.str());
    }
  }
  struct Slot {
    cd lambda;
    Eigen::VectorXcd vector;
    bool paired;
  };
  std::vector<Slot> slots;
  for (const auto& e : eigs) {
    const cd lambda = sign * e.lambda;
    if (lambda.real() >= 0.0) continue;
    if (lambda.imag() == 0.0) {
      slots.push_back({lambda, e.vector, false});
    } else if (lambda.imag() > 0.0) {
      slots.push_back({lambda, e.vector, true});
    }
  }
  if (slots.empty()) {
    throw NonHyperbolic(std::string("select_and_pair: no eigenvalues in the requested ") +
                        (stability == Stability::Stable ? "stable" : "unstable") + " half-plane");
  }
  std::stable_sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    return a.lambda.real() < b.lambda.real();
  });

  SpectralData out;
  out.p = p;
  out.time_reversed = stability == Stability::Unstable;
  for (auto& s : slots) {
    Eigen::VectorXcd v = normalize(s.vector, normalization);
    if (!s.paired) {
      v = v.real().cast<cd>();
      out.lambdas.push_back(s.lambda);
      out.vectors.push_back(v);
    } else {
      const int k = static_cast<int>(out.lambdas.size());
      out.lambdas.push_back(s.lambda);
      out.vectors.push_back(v);
      out.lambdas.push_back(std::conj(s.lambda));
      out.vectors.push_back(v.conjugate());
      out.pairing.emplace_back(k, k + 1);
    }
  }
  out.min_abs_re = std::numeric_limits<double>::infinity();
  for (const auto& l : out.lambdas) {
    out.min_abs_re = std::min(out.min_abs_re, std::abs(l.real()));
    out.max_abs_re = std::max(out.max_abs_re, std::abs(l.real()));
  }
  return out;
}

ResonanceCheck check_nonresonance(const std::vector<cd>& lambdas, double tol) {
  if (lambdas.empty()) throw InvalidArgument("check_nonresonance: no eigenvalues");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& l : lambdas) {
    if (!(l.real() < 0.0)) throw InvalidArgument("check_nonresonance: eigenvalues must have Re < 0");
    lo = std::min(lo, -l.real());
    hi = std::max(hi, -l.real());
  }
  ResonanceCheck result;
  result.max_order = static_cast<int>(std::ceil(hi / lo)) + 1;
  result.closest = std::numeric_limits<double>::infinity();
  const int dims = static_cast<int>(lambdas.size());
  const auto ord = GradedOrdering::make(dims, result.max_order + 1);
  for (std::size_t pos = ord->order_offset(2); pos < ord->size(); ++pos) {
    const auto alpha = ord->exponents(pos);
    cd s{};
    for (int k = 0; k < dims; ++k) s += static_cast<double>(alpha[static_cast<std::size_t>(k)]) * lambdas[static_cast<std::size_t>(k)];
    for (int j = 0; j < dims; ++j) {
      const double d = std::abs(s - lambdas[static_cast<std::size_t>(j)]);
      result.closest = std::min(result.closest, d);
      if (d < tol) {
        std::ostringstream msg;
        msg << "resonance: alpha = (";
        for (int k = 0; k < dims; ++k) msg << (k ? "," : "") << alpha[static_cast<std::size_t>(k)];
        msg << ") gives alpha.lambda within " << d << " of lambda_" << j;
        throw ResonanceDetected(msg.str(), std::vector<int>(alpha.begin(), alpha.end()), j);
      }
    }
  }
  return result;
}

}  // namespace invman
