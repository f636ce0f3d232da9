#include "invman/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "invman/errors.hpp"

namespace invman {

CoeffSeq::CoeffSeq(OrderingPtr ordering)
    : ordering_(std::move(ordering)), values_(ordering_->size(), Complex{}) {}

CoeffSeq::CoeffSeq(OrderingPtr ordering, std::vector<Complex> values)
    : ordering_(std::move(ordering)), values_(std::move(values)) {
  if (values_.size() != ordering_->size()) {
    throw InvalidArgument("CoeffSeq: value count " + std::to_string(values_.size()) +
                          " does not match ordering size " +
                          std::to_string(ordering_->size()));
  }
}

CoeffSeq CoeffSeq::delta(OrderingPtr ordering, const MultiIndex& alpha, Complex value) {
  CoeffSeq u(std::move(ordering));
  if (alpha.dims() != u.dims()) throw InvalidArgument("CoeffSeq::delta: dims mismatch");
  if (alpha.order() >= u.max_order()) {
    throw InvalidArgument("CoeffSeq::delta: index order beyond truncation");
  }
  u[u.ordering().position(alpha)] = value;
  return u;
}

Complex CoeffSeq::at(const MultiIndex& alpha) const {
  if (alpha.order() >= max_order()) return {};
  return values_[ordering_->position(alpha)];
}

CoeffSeq CoeffSeq::truncated(int max_order) const {
  auto ord = GradedOrdering::make(dims(), max_order);
  CoeffSeq out(ord);
  const std::size_t n = std::min(out.size(), size());
  std::copy_n(values_.begin(), n, out.values_.begin());
  return out;
}

VectorSeq::VectorSeq(int n, OrderingPtr ordering) : ordering_(std::move(ordering)) {
  components_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) components_.emplace_back(ordering_);
}

VectorSeq::VectorSeq(std::vector<CoeffSeq> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("VectorSeq: no components");
  ordering_ = components_.front().ordering_ptr();
  for (const auto& c : components_) {
    if (c.ordering_ptr() != ordering_ &&
        (c.dims() != ordering_->dims() || c.max_order() != ordering_->max_order())) {
      throw InvalidArgument("VectorSeq: components use different orderings");
    }
  }
}

VectorSeq VectorSeq::truncated(int max_order) const {
  std::vector<CoeffSeq> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back(c.truncated(max_order));
  return VectorSeq(std::move(comps));
}

Scaling::Scaling(std::vector<double> gamma) : gamma_(std::move(gamma)) {
  if (gamma_.empty()) throw InvalidArgument("Scaling: empty");
  for (double g : gamma_) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw InvalidArgument("Scaling: every gamma must be positive and finite");
    }
  }
}

Scaling Scaling::uniform(int dims, double value) {
  return Scaling(std::vector<double>(static_cast<std::size_t>(dims), value));
}

Scaling Scaling::inverse() const {
  std::vector<double> inv(gamma_.size());
  std::transform(gamma_.begin(), gamma_.end(), inv.begin(), [](double g) { return 1.0 / g; });
  return Scaling(std::move(inv));
}

Scaling Scaling::times(double t) const {
  std::vector<double> out(gamma_.size());
  std::transform(gamma_.begin(), gamma_.end(), out.begin(), [t](double g) { return t * g; });
  return Scaling(std::move(out));
}

void Scaling::check_pairing(std::span<const std::pair<int, int>> pairs) const {
  for (auto [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= dims() || j >= dims()) {
      throw InvalidArgument("Scaling: pairing index out of range");
    }
    if (gamma_[static_cast<std::size_t>(i)] != gamma_[static_cast<std::size_t>(j)]) {
      throw InvalidArgument("Scaling: conjugate-paired directions need equal gamma");
    }
  }
}

std::vector<double> Scaling::powers(const GradedOrdering& ordering) const {
  if (ordering.dims() != dims()) throw InvalidArgument("Scaling::powers: dims mismatch");
  std::vector<double> out(ordering.size());
  if (out.empty()) return out;
  out[0] = 1.0;
  for (std::size_t pos = 1; pos < out.size(); ++pos) {
    out[pos] = out[ordering.parent(pos)] * gamma_[static_cast<std::size_t>(ordering.parent_var(pos))];
  }
  return out;
}

CoeffSeq cauchy_product(const CoeffSeq& u, const CoeffSeq& v, int out_order) {
  if (u.dims() != v.dims()) throw InvalidArgument("cauchy_product: mismatched n_s");
  if (out_order < 1) throw InvalidArgument("cauchy_product: out_order must be >= 1");
  if (out_order > u.max_order() + v.max_order()) {
    throw InvalidArgument("cauchy_product: out_order exceeds the sum of input orders");
  }
  auto ord = GradedOrdering::make(u.dims(), out_order);
  CoeffSeq out(ord);
  const GradedOrdering& o = *ord;
  const GradedOrdering& ou = u.ordering();
  for (std::size_t p = 0; p < u.size(); ++p) {
    const Complex up = u[p];
    if (up == Complex{}) continue;
    const int kp = ou.order_of(p);
    if (kp >= out_order) break;
    const std::size_t qend = std::min(v.size(), o.order_offset(out_order - kp));
    for (std::size_t q = 0; q < qend; ++q) {
      out[o.position_of_sum(p, q)] += up * v[q];
    }
  }
  return out;
}

double ell1_norm(const CoeffSeq& u, double nu) {
  if (!(nu > 0.0)) throw InvalidArgument("ell1_norm: nu must be positive");
  double s = 0.0;
  if (nu == 1.0) {
    for (const auto& c : u.values()) s += std::abs(c);
    return s;
  }
  const auto& o = u.ordering();
  for (std::size_t p = 0; p < u.size(); ++p) {
    s += std::abs(u[p]) * std::pow(nu, o.order_of(p));
  }
  return s;
}

double x_norm(const VectorSeq& a, double nu) {
  double m = 0.0;
  for (int i = 0; i < a.n(); ++i) m = std::max(m, ell1_norm(a[i], nu));
  return m;
}

CoeffSeq rescale(const CoeffSeq& u, const Scaling& gamma) {
  const auto w = gamma.powers(u.ordering());
  CoeffSeq out = u;
  for (std::size_t p = 0; p < out.size(); ++p) out[p] *= w[p];
  return out;
}

VectorSeq rescale(const VectorSeq& a, const Scaling& gamma) {
  const auto w = gamma.powers(a.ordering());
  VectorSeq out = a;
  for (int i = 0; i < out.n(); ++i) {
    auto vals = out[i].values();
    for (std::size_t p = 0; p < vals.size(); ++p) vals[p] *= w[p];
  }
  return out;
}

std::vector<Complex> monomials(const GradedOrdering& ordering,
                               std::span<const Complex> theta) {
  if (static_cast<int>(theta.size()) != ordering.dims()) {
    throw InvalidArgument("evaluate: theta has wrong dimension");
  }
  std::vector<Complex> m(ordering.size());
  if (m.empty()) return m;
  m[0] = 1.0;
  for (std::size_t pos = 1; pos < m.size(); ++pos) {
    m[pos] = m[ordering.parent(pos)] * theta[static_cast<std::size_t>(ordering.parent_var(pos))];
  }
  return m;
}

Complex evaluate(const CoeffSeq& u, std::span<const Complex> theta) {
  const auto m = monomials(u.ordering(), theta);
  Complex s{};
  for (std::size_t p = 0; p < m.size(); ++p) s += u[p] * m[p];
  return s;
}

std::vector<Complex> evaluate(const VectorSeq& a, std::span<const Complex> theta) {
  const auto m = monomials(a.ordering(), theta);
  std::vector<Complex> out(static_cast<std::size_t>(a.n()));
  for (int i = 0; i < a.n(); ++i) {
    Complex s{};
    const auto vals = a[i].values();
    for (std::size_t p = 0; p < m.size(); ++p) s += vals[p] * m[p];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

}  // namespace invman
