#include "invman/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "invman/errors.hpp"
#include "linearization.hpp"

namespace invman {

namespace {

constexpr double kUnit = 0x1p-53;

// γ_m = m·u / (1 − m·u), the classical bound for m accumulated roundings.
double gamma_m(double m) { return m * kUnit / (1.0 - m * kUnit); }

std::pair<Complex, double> mid_rad(const CInterval& z) {
  const double re_mid = z.re().mid();
  const double im_mid = z.im().mid();
  const double re_rad = round_up(std::max(z.re().hi() - re_mid, re_mid - z.re().lo()));
  const double im_rad = round_up(std::max(z.im().hi() - im_mid, im_mid - z.im().lo()));
  return {Complex(re_mid, im_mid), round_up(re_rad + im_rad)};
}

CInterval point(Complex z) { return CInterval(z.real(), z.imag()); }

CInterval interval_dot(std::span<const int> alpha, const std::vector<Complex>& lambdas) {
  CInterval s(0.0, 0.0);
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    s += Interval(static_cast<double>(alpha[k])) * point(lambdas[k]);
  }
  return s;
}

double sum_up(const std::vector<double>& terms) {
  Interval s(0.0);
  for (double t : terms) s += Interval(t);
  return s.hi();
}

}  // namespace

Eigen::MatrixXd weighted_operator_norm(const Eigen::MatrixXd& absB, const std::vector<double>& w,
                                       int n, bool lower) {
  const Eigen::Index rho = absB.rows();
  if (absB.cols() != rho || rho % n != 0 || static_cast<Eigen::Index>(w.size()) * n < rho) {
    throw InvalidArgument("weighted_operator_norm: matrix and weights do not match");
  }
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> s(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < rho; ++c) {
    const Eigen::Index beta = c / n;
    const int j = static_cast<int>(c % n);
    std::fill(s.begin(), s.end(), 0.0);
    const Eigen::Index r0 = lower ? beta * n : 0;
    const double* col = absB.data() + c * rho;
    for (Eigen::Index r = r0; r < rho; ++r) {
      s[static_cast<std::size_t>(r % n)] += col[r] * w[static_cast<std::size_t>(r / n)];
    }
    const double wb = w[static_cast<std::size_t>(beta)];
    for (int i = 0; i < n; ++i) K(i, j) = std::max(K(i, j), s[static_cast<std::size_t>(i)] / wb);
  }
  return K;
}

Eigen::MatrixXd operator_norm_K(const Eigen::MatrixXcd& B, const GradedOrdering& ordering, int n,
                                double nu) {
  if (!(nu > 0.0)) throw InvalidArgument("operator_norm_K: nu must be positive");
  if (B.rows() != static_cast<Eigen::Index>(ordering.size()) * n) {
    throw InvalidArgument("operator_norm_K: matrix size does not match the ordering");
  }
  std::vector<double> w(ordering.size());
  for (std::size_t p = 0; p < w.size(); ++p) w[p] = std::pow(nu, ordering.order_of(p));
  return weighted_operator_norm(B.cwiseAbs(), w, n, false);
}

std::optional<RootInterval> radii_root_interval(const BoundSet& b) {
  const std::size_t n = b.Y.size();
  double r0 = 0.0;
  double r1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Interval Y(b.Y[i]);
    const Interval c = Interval(b.Z0[i]) + Interval(b.Z1[i]) - Interval(1.0);
    const Interval Z2(b.Z2[i]);
    if (c.hi() >= 0.0) return std::nullopt;
    if (b.Z2[i] == 0.0) {
      r0 = std::max(r0, std::max(0.0, (Y / (-c)).hi()));
      continue;
    }
    const Interval disc = sqr(c) - Interval(4.0) * Z2 * Y;
    if (disc.lo() < 0.0) return std::nullopt;
    const Interval sq = sqrt(disc);
    const Interval lower_root = (Interval(2.0) * Y) / (-c + sq);
    const Interval upper_root = (-c + sq) / (Interval(2.0) * Z2);
    r0 = std::max(r0, std::max(0.0, lower_root.hi()));
    r1 = std::min(r1, upper_root.lo());
  }
  if (!(r0 < r1)) return std::nullopt;
  return RootInterval{r0, r1};
}

Validator::Validator(const Parameterization& par) : par_(par) {
  const auto& pr = par.problem();
  if (pr.degree() > 2) {
    throw UnsupportedDegree("Validator: proof bounds need a field of degree <= 2 (got degree " +
                            std::to_string(pr.degree()) + "); use defect mode instead");
  }
  n_ = pr.n();
  N_ = pr.N;
  ord_ = par.coeffs().ordering_ptr();
  const int d = std::max(1, pr.degree());
  ord_full_ = GradedOrdering::make(pr.n_s(), d * (N_ - 1) + 1);
  const auto& ord = *ord_;
  const auto& full = *ord_full_;
  const std::size_t S = ord.size();
  const Eigen::Index rho = static_cast<Eigen::Index>(S) * n_;
  const auto& lambdas = pr.spectral.lambdas;
  const auto& a = par.coeffs();

  tail_ = (Interval(1.0) / (Interval(static_cast<double>(N_)) * Interval(pr.spectral.min_abs_re))).hi();

  // Field coefficient summaries for Z1 and Z2.
  linear_sum_.assign(static_cast<std::size_t>(n_), 0.0);
  quad_sum_.assign(static_cast<std::size_t>(n_), 0.0);
  quad_.assign(static_cast<std::size_t>(n_), std::vector<double>(static_cast<std::size_t>(n_), 0.0));
  {
    std::vector<std::vector<double>> lin(static_cast<std::size_t>(n_)), quad(static_cast<std::size_t>(n_));
    for (const auto& t : pr.field.terms()) {
      for (int k = 0; k < n_; ++k) {
        const double b = std::abs(t.coeff[static_cast<std::size_t>(k)]);
        if (b == 0.0) continue;
        if (t.order() == 1) lin[static_cast<std::size_t>(k)].push_back(b);
        if (t.order() == 2) {
          quad[static_cast<std::size_t>(k)].push_back(b);
          for (int i = 0; i < n_; ++i) {
            const int e = t.exponent[static_cast<std::size_t>(i)];
            if (e > 0) {
              auto& q = quad_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
              q = round_up(q + b * e);
            }
          }
        }
      }
    }
    for (int k = 0; k < n_; ++k) {
      linear_sum_[static_cast<std::size_t>(k)] = sum_up(lin[static_cast<std::size_t>(k)]);
      quad_sum_[static_cast<std::size_t>(k)] = round_up(2.0 * sum_up(quad[static_cast<std::size_t>(k)]));
    }
  }

  // Enclosure of DF^[N](ā): coupling series R[ε] and diagonal blocks D_α.
  std::vector<std::vector<CInterval>> Rint(S, std::vector<CInterval>(static_cast<std::size_t>(n_ * n_), CInterval(0.0, 0.0)));
  auto R_at = [&](std::size_t pos, int i, int j) -> CInterval& {
    return Rint[pos][static_cast<std::size_t>(i * n_ + j)];
  };
  for (const auto& t : pr.field.terms()) {
    if (t.order() == 0) continue;
    for (int j = 0; j < n_; ++j) {
      const int bj = t.exponent[static_cast<std::size_t>(j)];
      if (bj == 0) continue;
      int other = -1;
      if (t.order() == 2) {
        for (int m = 0; m < n_; ++m) {
          const int e = t.exponent[static_cast<std::size_t>(m)] - (m == j ? 1 : 0);
          if (e > 0) other = m;
        }
      }
      for (int i = 0; i < n_; ++i) {
        const double b = t.coeff[static_cast<std::size_t>(i)] * bj;  // exact: bj ∈ {1, 2}
        if (b == 0.0) continue;
        if (other < 0) {
          R_at(0, i, j) += CInterval(b, 0.0);
        } else {
          const auto src = a[other].values();
          for (std::size_t pos = 0; pos < S; ++pos) {
            if (src[pos] == Complex{}) continue;
            R_at(pos, i, j) += Interval(b) * point(src[pos]);
          }
        }
      }
    }
  }
  std::vector<Eigen::MatrixXcd> Rm(S, Eigen::MatrixXcd::Zero(n_, n_));
  std::vector<Eigen::MatrixXd> Rabs(S, Eigen::MatrixXd::Zero(n_, n_)), Rrad(S, Eigen::MatrixXd::Zero(n_, n_));
  std::vector<bool> Rnonzero(S, false);
  for (std::size_t pos = 0; pos < S; ++pos) {
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        auto [m, r] = mid_rad(R_at(pos, i, j));
        Rm[pos](i, j) = m;
        Rabs[pos](i, j) = std::abs(m);
        Rrad[pos](i, j) = r;
        if (m != Complex{} || r != 0.0) Rnonzero[pos] = true;
      }
    }
  }
  std::vector<Eigen::MatrixXcd> Dm(S);
  std::vector<Eigen::MatrixXd> Dabs(S), Drad(S);
  for (std::size_t pos = 0; pos < S; ++pos) {
    if (ord.order_of(pos) <= 1) {
      Dm[pos] = Eigen::MatrixXcd::Identity(n_, n_);
      Dabs[pos] = Eigen::MatrixXd::Identity(n_, n_);
      Drad[pos] = Eigen::MatrixXd::Zero(n_, n_);
      continue;
    }
    const CInterval dot = interval_dot(ord.exponents(pos), lambdas);
    Dm[pos].resize(n_, n_);
    Dabs[pos].resize(n_, n_);
    Drad[pos].resize(n_, n_);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        CInterval e = -R_at(0, i, j);
        if (i == j) e += dot;
        auto [m, r] = mid_rad(e);
        Dm[pos](i, j) = m;
        Dabs[pos](i, j) = std::abs(m);
        Drad[pos](i, j) = r;
      }
    }
  }

  // Approximate inverse: the floating-point inverse of DF^[N](ā).
  A_ = detail::Linearization(pr.field, a, lambdas).inverse();
  A_abs_ = A_.cwiseAbs();

  // B = I − A·DF, gathered over the α ≥ γ ≥ β support. The radius covers
  // the floating accumulation (2γ_{ρ+4}·|A||DF|) and the width of DF.
  const detail::DivisorTable divisors(ord);
  const double c_round = 2.0 * gamma_m(static_cast<double>(rho) + 4.0);
  const double inflate = 1.0 + 2.0 * c_round;
  B_mid_abs_ = Eigen::MatrixXd::Zero(rho, rho);
  B_upper_ = Eigen::MatrixXd::Zero(rho, rho);
  Eigen::MatrixXcd C(n_, n_);
  Eigen::MatrixXd S1(n_, n_), S2(n_, n_);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n_, n_);
  for (std::size_t beta = 0; beta < S; ++beta) {
    const std::size_t dend = ord.order_offset(N_ - ord.order_of(beta));
    for (std::size_t delta = 0; delta < dend; ++delta) {
      const std::size_t alpha = ord.position_of_sum(beta, delta);
      const Eigen::Index ra = static_cast<Eigen::Index>(alpha) * n_;
      if (delta == 0) C = I; else C.setZero();
      S1.setZero();
      S2.setZero();
      for (auto [eps, rest] : divisors.pairs(delta)) {
        (void)rest;
        const std::size_t gpos = ord.position_of_sum(beta, eps);
        const Eigen::Index cg = static_cast<Eigen::Index>(gpos) * n_;
        if (eps == 0) {
          C.noalias() -= A_.block(ra, cg, n_, n_) * Dm[beta];
          S1.noalias() += A_abs_.block(ra, cg, n_, n_) * Dabs[beta];
          S2.noalias() += A_abs_.block(ra, cg, n_, n_) * Drad[beta];
        } else if (ord.order_of(gpos) >= 2 && Rnonzero[eps]) {
          C.noalias() += A_.block(ra, cg, n_, n_) * Rm[eps];
          S1.noalias() += A_abs_.block(ra, cg, n_, n_) * Rabs[eps];
          S2.noalias() += A_abs_.block(ra, cg, n_, n_) * Rrad[eps];
        }
      }
      const Eigen::Index cb = static_cast<Eigen::Index>(beta) * n_;
      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
          const double m = std::abs(C(i, j));
          B_mid_abs_(ra + i, cb + j) = m;
          const double rad = (c_round * S1(i, j) + S2(i, j)) * inflate;
          B_upper_(ra + i, cb + j) = round_up((m + rad) * (1.0 + 4.0 * kUnit));
        }
      }
    }
  }

  // F(ā) over |α| ≤ d(N−1) in interval arithmetic.
  const std::size_t Sf = full.size();
  std::vector<std::vector<CInterval>> comp(static_cast<std::size_t>(n_), std::vector<CInterval>(Sf, CInterval(0.0, 0.0)));
  for (const auto& t : pr.field.terms()) {
    std::vector<int> vars;
    for (int j = 0; j < n_; ++j) {
      for (int e = 0; e < t.exponent[static_cast<std::size_t>(j)]; ++e) vars.push_back(j);
    }
    std::vector<CInterval> series(Sf, CInterval(0.0, 0.0));
    if (vars.empty()) {
      series[0] = CInterval(1.0, 0.0);
    } else if (vars.size() == 1) {
      const auto src = a[vars[0]].values();
      for (std::size_t p = 0; p < S; ++p) series[p] = point(src[p]);
    } else {
      const auto u = a[vars[0]].values();
      const auto v = a[vars[1]].values();
      for (std::size_t p = 0; p < S; ++p) {
        if (u[p] == Complex{}) continue;
        const CInterval up = point(u[p]);
        for (std::size_t q = 0; q < S; ++q) {
          if (v[q] == Complex{}) continue;
          auto& dst = series[full.position_of_sum(p, q)];
          dst += up * point(v[q]);
        }
      }
    }
    for (int i = 0; i < n_; ++i) {
      const double b = t.coeff[static_cast<std::size_t>(i)];
      if (b == 0.0) continue;
      auto& dst = comp[static_cast<std::size_t>(i)];
      for (std::size_t p = 0; p < Sf; ++p) dst[p] += Interval(b) * series[p];
    }
  }
  std::vector<std::vector<CInterval>> F(static_cast<std::size_t>(n_), std::vector<CInterval>(Sf));
  for (int i = 0; i < n_; ++i) {
    auto& Fi = F[static_cast<std::size_t>(i)];
    Fi[0] = point(a[i][0]) - CInterval(pr.spectral.p(i), 0.0);
    for (int k = 0; k < pr.n_s(); ++k) {
      const std::size_t pos = static_cast<std::size_t>(k) + 1;
      Fi[pos] = point(a[i][pos]) -
                Interval(par.gamma()[k]) * point(pr.spectral.vectors[static_cast<std::size_t>(k)](i));
    }
    for (std::size_t pos = full.order_offset(2); pos < Sf; ++pos) {
      const CInterval ai = pos < S ? point(a[i][pos]) : CInterval(0.0, 0.0);
      Fi[pos] = interval_dot(full.exponents(pos), lambdas) * ai - comp[static_cast<std::size_t>(i)][pos];
    }
  }

  // v = A F(ā): dense finite block, diagonal 1/(α·λ) beyond.
  v_mid_abs_.assign(Sf * static_cast<std::size_t>(n_), 0.0);
  v_upper_.assign(Sf * static_cast<std::size_t>(n_), 0.0);
  Eigen::VectorXcd Fm(rho);
  Eigen::VectorXd Fabs(rho), Frad(rho);
  for (std::size_t pos = 0; pos < S; ++pos) {
    for (int i = 0; i < n_; ++i) {
      auto [m, r] = mid_rad(F[static_cast<std::size_t>(i)][pos]);
      const Eigen::Index k = static_cast<Eigen::Index>(pos) * n_ + i;
      Fm(k) = m;
      Fabs(k) = std::abs(m);
      Frad(k) = r;
    }
  }
  const Eigen::VectorXcd vm = A_ * Fm;
  const Eigen::VectorXd s1 = A_abs_ * Fabs;
  const Eigen::VectorXd s2 = A_abs_ * Frad;
  for (Eigen::Index k = 0; k < rho; ++k) {
    const double m = std::abs(vm(k));
    v_mid_abs_[static_cast<std::size_t>(k)] = m;
    v_upper_[static_cast<std::size_t>(k)] =
        round_up((m + (c_round * s1(k) + s2(k)) * inflate) * (1.0 + 4.0 * kUnit));
  }
  for (std::size_t pos = S; pos < Sf; ++pos) {
    const CInterval dot = interval_dot(full.exponents(pos), lambdas);
    const Complex dot_mid(dot.re().mid(), dot.im().mid());
    for (int i = 0; i < n_; ++i) {
      const CInterval& f = F[static_cast<std::size_t>(i)][pos];
      const std::size_t k = pos * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
      v_mid_abs_[k] = std::abs(Complex(f.re().mid(), f.im().mid()) / dot_mid);
      v_upper_[k] = abs(f / dot).hi();
    }
  }
}

Complex Validator::tail_multiplier(std::span<const int> alpha) const {
  return 1.0 / detail::alpha_dot_lambda(alpha, par_.problem().spectral.lambdas);
}

std::vector<Interval> Validator::powers(const Scaling& gamma, const GradedOrdering& ord) const {
  std::vector<Interval> w(ord.size());
  w[0] = Interval(1.0);
  for (std::size_t pos = 1; pos < w.size(); ++pos) {
    w[pos] = w[ord.parent(pos)] * Interval(gamma[ord.parent_var(pos)]);
  }
  return w;
}

std::vector<double> Validator::bound_Y(const Scaling& gamma, BoundMode mode) const {
  const auto& full = *ord_full_;
  std::vector<double> Y(static_cast<std::size_t>(n_), 0.0);
  if (mode == BoundMode::Floating) {
    const auto w = gamma.powers(full);
    for (std::size_t pos = 0; pos < full.size(); ++pos) {
      for (int i = 0; i < n_; ++i) {
        Y[static_cast<std::size_t>(i)] += v_mid_abs_[pos * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)] * w[pos];
      }
    }
    return Y;
  }
  const auto W = powers(gamma, full);
  std::vector<Interval> acc(static_cast<std::size_t>(n_), Interval(0.0));
  for (std::size_t pos = 0; pos < full.size(); ++pos) {
    for (int i = 0; i < n_; ++i) {
      const double v = v_upper_[pos * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)];
      if (v == 0.0) continue;
      acc[static_cast<std::size_t>(i)] += Interval(v) * W[pos];
    }
  }
  for (int i = 0; i < n_; ++i) Y[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)].hi();
  return Y;
}

std::vector<double> Validator::K_upper(const Eigen::MatrixXd& absM, const Scaling& gamma,
                                       BoundMode mode, bool /*is_B*/) const {
  const auto w = gamma.powers(*ord_);
  Eigen::MatrixXd K = weighted_operator_norm(absM, w, n_, true);
  std::vector<double> out(static_cast<std::size_t>(n_ * n_));
  // Powers carry at most 2N roundings each, the column sums at most ρ.
  const double factor =
      1.0 + 4.0 * kUnit * (static_cast<double>(absM.rows()) + 2.0 * N_ + 4.0);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double k = K(i, j);
      out[static_cast<std::size_t>(i * n_ + j)] = mode == BoundMode::Floating ? k : round_up(k * factor);
    }
  }
  return out;
}

std::vector<double> Validator::bound_Z0(const Scaling& gamma, BoundMode mode) const {
  const auto K = K_upper(mode == BoundMode::Floating ? B_mid_abs_ : B_upper_, gamma, mode, true);
  std::vector<double> Z0(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    std::vector<double> row(K.begin() + i * n_, K.begin() + (i + 1) * n_);
    if (mode == BoundMode::Floating) {
      double s = 0.0;
      for (double x : row) s += x;
      Z0[static_cast<std::size_t>(i)] = s;
    } else {
      Z0[static_cast<std::size_t>(i)] = sum_up(row);
    }
  }
  return Z0;
}

std::vector<double> Validator::bound_Z1(const Scaling& gamma, BoundMode mode) const {
  const auto& a = par_.coeffs();
  std::vector<double> norms(static_cast<std::size_t>(n_));
  if (mode == BoundMode::Floating) {
    const auto w = gamma.powers(*ord_);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t pos = 0; pos < w.size(); ++pos) s += std::abs(a[i][pos]) * w[pos];
      norms[static_cast<std::size_t>(i)] = s;
    }
  } else {
    const auto W = powers(gamma, *ord_);
    for (int i = 0; i < n_; ++i) {
      Interval s(0.0);
      for (std::size_t pos = 0; pos < W.size(); ++pos) s += abs(point(a[i][pos])) * W[pos];
      norms[static_cast<std::size_t>(i)] = s.hi();
    }
  }
  std::vector<double> Z1(static_cast<std::size_t>(n_));
  for (int k = 0; k < n_; ++k) {
    if (mode == BoundMode::Floating) {
      double s = linear_sum_[static_cast<std::size_t>(k)];
      for (int i = 0; i < n_; ++i) s += quad_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(i)];
      Z1[static_cast<std::size_t>(k)] = tail_ * s;
    } else {
      Interval s(linear_sum_[static_cast<std::size_t>(k)]);
      for (int i = 0; i < n_; ++i) {
        s += Interval(quad_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]) * Interval(norms[static_cast<std::size_t>(i)]);
      }
      Z1[static_cast<std::size_t>(k)] = (Interval(tail_) * s).hi();
    }
  }
  return Z1;
}

std::vector<double> Validator::bound_Z2(const Scaling& gamma, BoundMode mode) const {
  const auto K = K_upper(A_abs_, gamma, mode, false);
  std::vector<double> Z2(static_cast<std::size_t>(n_));
  for (int k = 0; k < n_; ++k) {
    if (mode == BoundMode::Floating) {
      double s = std::max(tail_, K[static_cast<std::size_t>(k * n_ + k)]) * quad_sum_[static_cast<std::size_t>(k)];
      for (int l = 0; l < n_; ++l) {
        if (l != k) s += K[static_cast<std::size_t>(k * n_ + l)] * quad_sum_[static_cast<std::size_t>(l)];
      }
      Z2[static_cast<std::size_t>(k)] = s;
    } else {
      Interval s = Interval(std::max(tail_, K[static_cast<std::size_t>(k * n_ + k)])) * Interval(quad_sum_[static_cast<std::size_t>(k)]);
      for (int l = 0; l < n_; ++l) {
        if (l != k) s += Interval(K[static_cast<std::size_t>(k * n_ + l)]) * Interval(quad_sum_[static_cast<std::size_t>(l)]);
      }
      Z2[static_cast<std::size_t>(k)] = s.hi();
    }
  }
  return Z2;
}

BoundSet Validator::bounds(const Scaling& gamma, BoundMode mode, bool allow_fallback) const {
  if (gamma.dims() != par_.problem().n_s()) throw InvalidArgument("Validator: gamma has wrong length");
  gamma.check_pairing(par_.problem().spectral.pairing);
  BoundSet b;
  b.gamma = gamma;
  b.mode = mode;
  b.Z0 = bound_Z0(gamma, mode);
  if (allow_fallback && *std::max_element(b.Z0.begin(), b.Z0.end()) > fallback_threshold) {
    BoundSet fresh = from_scratch(par_, gamma, mode);
    fresh.gamma = gamma;
    fresh.from_scratch = true;
    return fresh;
  }
  b.Y = bound_Y(gamma, mode);
  b.Z1 = bound_Z1(gamma, mode);
  b.Z2 = bound_Z2(gamma, mode);
  return b;
}

BoundSet Validator::from_scratch(const Parameterization& par, const Scaling& gamma, BoundMode mode) {
  const Validator fresh(par.rescaled(gamma));
  BoundSet b = fresh.bounds(Scaling::uniform(gamma.dims(), 1.0), mode, false);
  b.gamma = gamma;
  b.from_scratch = true;
  return b;
}

RadiiReport Validator::prove(const Scaling& gamma, BoundMode mode) const {
  RadiiReport rep;
  rep.bounds = bounds(gamma, mode);
  rep.r_max = par_.problem().r_max;
  rep.N = N_;
  const auto& b = rep.bounds;
  for (int i = 0; i < n_; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    rep.polynomials.push_back({b.Y[k], b.Z0[k] + b.Z1[k] - 1.0, b.Z2[k]});
  }
  rep.roots = radii_root_interval(b);
  if (!rep.roots) {
    rep.reason = "the radii polynomials have no common negative interval";
    return rep;
  }
  const double r0 = rep.roots->r0;
  const double r1 = rep.roots->r1;
  if (r0 > rep.r_max) {
    std::ostringstream msg;
    msg << "smallest radius " << r0 << " exceeds r_max " << rep.r_max;
    rep.reason = msg.str();
    return rep;
  }
  const double ymax = *std::max_element(b.Y.begin(), b.Y.end());
  double r = ymax == 0.0 ? std::min(rep.r_max, 0.5 * r1) : std::min(r0 * (1.0 + 1e-6), rep.r_max);
  if (!(r < r1) || !(r > r0)) r = 0.5 * (r0 + std::min(r1, rep.r_max));
  rep.r_used = r;
  for (int i = 0; i < n_; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const Interval R(r);
    const Interval P = Interval(b.Y[k]) + (Interval(b.Z0[k]) + Interval(b.Z1[k]) - Interval(1.0)) * R +
                       Interval(b.Z2[k]) * R * R;
    if (!(P.hi() < 0.0)) {
      std::ostringstream msg;
      msg << "P^(" << i << ")(r_used) is not certified negative";
      rep.reason = msg.str();
      return rep;
    }
    if (!(b.Z0[k] < 1.0)) {
      rep.reason = "Z0 >= 1: injectivity of A is not established";
      return rep;
    }
  }
  rep.valid = true;
  rep.reason = "proof-valid";
  return rep;
}

}  // namespace invman
