#pragma once

// Shared helpers for the unit tests: fixture loading, seeded random
// generators and naive reference implementations used as oracles.

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "invman/parameterization.hpp"
#include "invman/problem_io.hpp"
#include "invman/series.hpp"

namespace invman::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(INVMAN_FIXTURE_DIR) + "/" + name + ".json";
}

inline ManifoldProblem load_fixture(const std::string& name, int N,
                                    const ParameterOverrides& overrides = {}) {
  auto spec = load_problem_spec(fixture_path(name), overrides);
  spec.settings.N = N;
  return build_problem(spec);
}

// Newton solutions are reused across test cases of one binary.
inline const Parameterization& solved_fixture(const std::string& name, int N) {
  static std::map<std::pair<std::string, int>, Parameterization> cache;
  auto it = cache.find({name, N});
  if (it == cache.end()) it = cache.emplace(std::make_pair(name, N), newton_solve(load_fixture(name, N))).first;
  return it->second;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  Complex complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

  // Coefficients of size ~ decay^|α|, so long sequences stay summable.
  CoeffSeq seq(const OrderingPtr& ord, double decay = 0.7) {
    CoeffSeq u(ord);
    for (std::size_t pos = 0; pos < ord->size(); ++pos) {
      u[pos] = complex() * std::pow(decay, ord->order_of(pos));
    }
    return u;
  }

  VectorSeq vec(int n, const OrderingPtr& ord, double decay = 0.7) {
    std::vector<CoeffSeq> comps;
    for (int i = 0; i < n; ++i) comps.push_back(seq(ord, decay));
    return VectorSeq(std::move(comps));
  }

  Scaling scaling(int dims, double lo, double hi) {
    std::vector<double> g(static_cast<std::size_t>(dims));
    for (auto& x : g) x = log_uniform(lo, hi);
    return Scaling(std::move(g));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Sparse polynomial in θ keyed by exponent tuple; a slow but transparent
// stand-in for the dense graded sequences.
using NaivePoly = std::map<std::vector<int>, Complex>;

inline NaivePoly to_naive(const CoeffSeq& u) {
  NaivePoly p;
  const auto& ord = u.ordering();
  for (std::size_t pos = 0; pos < ord.size(); ++pos) {
    const auto e = ord.exponents(pos);
    p[std::vector<int>(e.begin(), e.end())] += u[pos];
  }
  return p;
}

inline int naive_order(const std::vector<int>& e) {
  int s = 0;
  for (int x : e) s += x;
  return s;
}

// Product truncated to total degree < out_order.
inline NaivePoly naive_mul(const NaivePoly& a, const NaivePoly& b, int out_order) {
  NaivePoly r;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      if (naive_order(e) < out_order) r[e] += ca * cb;
    }
  }
  return r;
}

inline Complex naive_coeff(const NaivePoly& p, const std::vector<int>& e) {
  auto it = p.find(e);
  return it == p.end() ? Complex(0.0) : it->second;
}

// Σ a_α θ^α with each monomial formed by std::pow.
inline Complex naive_eval(const NaivePoly& p, const std::vector<Complex>& theta) {
  Complex s = 0.0;
  for (const auto& [e, c] : p) {
    Complex m = 1.0;
    for (std::size_t k = 0; k < e.size(); ++k) m *= std::pow(theta[k], e[k]);
    s += c * m;
  }
  return s;
}

}  // namespace invman::testing
