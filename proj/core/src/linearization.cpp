#include "linearization.hpp"

#include "invman/errors.hpp"

namespace invman::detail {

DivisorTable::DivisorTable(const GradedOrdering& ordering) : pairs_(ordering.size()) {
  const int N = ordering.max_order();
  for (std::size_t p = 0; p < ordering.size(); ++p) {
    const std::size_t qend = ordering.order_offset(N - ordering.order_of(p));
    for (std::size_t q = 0; q < qend; ++q) {
      pairs_[ordering.position_of_sum(p, q)].emplace_back(static_cast<std::uint32_t>(p),
                                                          static_cast<std::uint32_t>(q));
    }
  }
}

std::complex<double> alpha_dot_lambda(std::span<const int> alpha,
                                      const std::vector<std::complex<double>>& lambdas) {
  std::complex<double> s{};
  for (std::size_t k = 0; k < alpha.size(); ++k) s += static_cast<double>(alpha[k]) * lambdas[k];
  return s;
}

Linearization::Linearization(const PolyVectorField& g, const VectorSeq& a,
                             const std::vector<std::complex<double>>& lambdas)
    : n_(g.n()), ord_(a.ordering_ptr()), divisors_(*ord_) {
  if (static_cast<int>(lambdas.size()) != ord_->dims()) {
    throw InvalidArgument("Linearization: eigenvalue count does not match n_s");
  }
  const auto series = jacobian_series(g, a, ord_->max_order());
  const std::size_t S = ord_->size();
  R_.assign(S, Eigen::MatrixXcd::Zero(n_, n_));
  nonzero_.assign(S, false);
  dots_.resize(S);
  lu_.resize(S);
  for (std::size_t pos = 0; pos < S; ++pos) {
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        const auto v = series[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][pos];
        R_[pos](i, j) = v;
        if (v != std::complex<double>{}) nonzero_[pos] = true;
      }
    }
    dots_[pos] = alpha_dot_lambda(ord_->exponents(pos), lambdas);
  }
  for (std::size_t pos = ord_->order_offset(2); pos < S; ++pos) {
    lu_[pos].compute(diagonal_block(pos));
    if (!(lu_[pos].rcond() > 1e-14)) {
      throw SingularBlock("Linearization: diagonal block at position " + std::to_string(pos) +
                          " is numerically singular");
    }
  }
}

Eigen::MatrixXcd Linearization::diagonal_block(std::size_t pos) const {
  if (ord_->order_of(pos) <= 1) return Eigen::MatrixXcd::Identity(n_, n_);
  Eigen::MatrixXcd D = -R_[0];
  D.diagonal().array() += dots_[pos];
  return D;
}

Eigen::VectorXcd Linearization::solve(const Eigen::VectorXcd& rhs) const {
  const std::size_t S = ord_->size();
  if (rhs.size() != static_cast<Eigen::Index>(S) * n_) {
    throw InvalidArgument("Linearization::solve: right-hand side has wrong length");
  }
  Eigen::VectorXcd h(rhs.size());
  const std::size_t first = ord_->order_offset(2);
  h.head(static_cast<Eigen::Index>(first) * n_) = rhs.head(static_cast<Eigen::Index>(first) * n_);
  for (std::size_t pos = first; pos < S; ++pos) {
    Eigen::VectorXcd acc = rhs.segment(static_cast<Eigen::Index>(pos) * n_, n_);
    for (auto [eps, rest] : divisors_.pairs(pos)) {
      if (eps == 0 || !nonzero_[eps]) continue;
      acc.noalias() += R_[eps] * h.segment(static_cast<Eigen::Index>(rest) * n_, n_);
    }
    h.segment(static_cast<Eigen::Index>(pos) * n_, n_) = lu_[pos].solve(acc);
  }
  return h;
}

Eigen::MatrixXcd Linearization::inverse() const {
  const std::size_t S = ord_->size();
  const Eigen::Index rho = static_cast<Eigen::Index>(S) * n_;
  const int N = ord_->max_order();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rho, rho);
  std::vector<Eigen::MatrixXcd> X(S);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n_, n_);
  const Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(n_, n_);
  for (std::size_t beta = 0; beta < S; ++beta) {
    const std::size_t dend = ord_->order_offset(N - ord_->order_of(beta));
    for (std::size_t delta = 0; delta < dend; ++delta) {
      const std::size_t alpha = ord_->position_of_sum(beta, delta);
      if (ord_->order_of(alpha) <= 1) {
        X[delta] = delta == 0 ? I : Z;
      } else {
        Eigen::MatrixXcd acc = delta == 0 ? I : Z;
        for (auto [eps, rest] : divisors_.pairs(delta)) {
          if (eps == 0 || !nonzero_[eps]) continue;
          acc.noalias() += R_[eps] * X[rest];
        }
        X[delta] = lu_[alpha].solve(acc);
      }
      M.block(static_cast<Eigen::Index>(alpha) * n_, static_cast<Eigen::Index>(beta) * n_, n_, n_) =
          X[delta];
    }
  }
  return M;
}

}  // namespace invman::detail
