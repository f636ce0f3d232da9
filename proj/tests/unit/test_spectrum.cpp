#include <doctest.h>

#include <algorithm>

#include "invman/errors.hpp"
#include "invman/spectrum.hpp"
#include "support.hpp"

using namespace invman;
using namespace invman::testing;

namespace {

bool has_eigenvalue(const std::vector<EigenPair>& eigs, std::complex<double> lambda, double tol) {
  return std::any_of(eigs.begin(), eigs.end(), [&](const EigenPair& e) { return std::abs(e.lambda - lambda) <= tol; });
}

double pair_residual(const Eigen::MatrixXd& J, const EigenPair& e) {
  return (J.cast<std::complex<double>>() * e.vector - e.lambda * e.vector).cwiseAbs().maxCoeff() /
         e.vector.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("diagonal matrix") {
  Eigen::Matrix3d J = Eigen::Vector3d(-1.0, 2.0, 3.0).asDiagonal();
  const auto eigs = eigenpairs(J);
  REQUIRE(eigs.size() == 3);
  for (double l : {-1.0, 2.0, 3.0}) CHECK(has_eigenvalue(eigs, l, 1e-13));
  for (const auto& e : eigs) {
    CHECK(pair_residual(J, e) <= 1e-10);
    // Canonical basis vector: a single non-negligible entry.
    int big = 0;
    for (int i = 0; i < 3; ++i) big += std::abs(e.vector(i)) > 1e-12;
    CHECK(big == 1);
  }
}

TEST_CASE("lorenz jacobian at the origin") {
  const double s = 10.0, b = 8.0 / 3.0, r = 28.0;
  Eigen::Matrix3d J;
  J << -s, s, 0, r, -1, 0, 0, 0, -b;
  const double root = std::sqrt((s - 1) * (s - 1) + 4 * s * r);
  const auto eigs = eigenpairs(J);
  CHECK(has_eigenvalue(eigs, -(s + 1 + root) / 2, 1e-12));
  CHECK(has_eigenvalue(eigs, -(s + 1 - root) / 2, 1e-12));
  CHECK(has_eigenvalue(eigs, -b, 1e-12));
  for (const auto& e : eigs) CHECK(pair_residual(J, e) <= 1e-10);
}

TEST_CASE("bridge jacobian at the origin has two conjugate pairs") {
  const auto spec = load_problem_spec(fixture_path("bridge"));
  const auto eigs = eigenpairs(jacobian(spec.field, Eigen::VectorXd(Eigen::VectorXd::Zero(4))));
  const double im = std::sqrt(3.0) / 2.0;
  for (double re : {-0.5, 0.5})
    for (double sg : {-1.0, 1.0}) CHECK(has_eigenvalue(eigs, {re, sg * im}, 1e-12));
}

TEST_CASE("characteristic polynomial and roots") {
  Eigen::Matrix2d J;
  J << 1, 2, 3, 4;
  const auto c = characteristic_polynomial(J);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(-2.0));
  CHECK(c[1] == doctest::Approx(-5.0));
  CHECK(c[2] == 1.0);
  const auto roots = polynomial_roots({6.0, -5.0, 1.0});
  REQUIRE(roots.size() == 2);
  std::vector<double> re{roots[0].real(), roots[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(2.0));
  CHECK(re[1] == doctest::Approx(3.0));
}

TEST_CASE("random matrices give accurate eigenpairs") {
  Gen gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(1, 6);
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = gen.uniform(-3.0, 3.0);
    const auto eigs = eigenpairs(J);
    REQUIRE(static_cast<int>(eigs.size()) == n);
    for (const auto& e : eigs) REQUIRE(pair_residual(J, e) <= 1e-9);
  }
}

TEST_CASE("selection on lorenz") {
  const auto problem = load_fixture("lorenz", 10);
  const auto& s = problem.spectral;
  REQUIRE(s.n_s() == 2);
  CHECK(s.lambdas[0].real() == doctest::Approx(-22.82772345).epsilon(1e-9));
  CHECK(std::abs(s.lambdas[1] - (-8.0 / 3.0)) <= 1e-13);
  CHECK(s.pairing.empty());
  CHECK(s.min_abs_re == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("selection on the bridge follows the closed form") {
  for (double beta : {0.5, 1.0, 1.5}) {
    const auto problem = load_fixture("bridge", 10, {{"beta", beta}});
    const auto& s = problem.spectral;
    REQUIRE(s.n_s() == 2);
    REQUIRE(s.pairing.size() == 1);
    CHECK(s.lambdas[0].real() == doctest::Approx(-std::sqrt(2.0 - beta) / 2.0).epsilon(1e-12));
    CHECK(std::abs(s.lambdas[1] - std::conj(s.lambdas[0])) <= 1e-12);
    CHECK((s.vectors[1] - s.vectors[0].conjugate()).cwiseAbs().maxCoeff() <= 1e-12);
    // Anchored normalization gives V = (1, λ, λ², λ³).
    const auto l = s.lambdas[0];
    const auto& V = s.vectors[0];
    CHECK(std::abs(V(0) - 1.0) <= 1e-12);
    CHECK(std::abs(V(1) - l) <= 1e-12);
    CHECK(std::abs(V(2) - l * l) <= 1e-12);
    CHECK(std::abs(V(3) - l * l * l) <= 1e-12);
  }
}

TEST_CASE("one dimensional stable line") {
  auto g = PolyVectorField::from_scalar_terms(1, {{0, {1}, -2.0}, {0, {2}, 1.0}});
  ProblemSettings st;
  st.N = 5;
  const auto problem = build_problem(g, Eigen::VectorXd::Zero(1), st);
  CHECK(problem.spectral.n_s() == 1);
  CHECK(problem.spectral.lambdas[0] == std::complex<double>(-2.0));
}

TEST_CASE("selection invariants on random stable spectra") {
  Gen gen(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(2, 6);
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = gen.uniform(-2.0, 2.0);
    const auto eigs = eigenpairs(J);
    int stable = 0;
    for (const auto& e : eigs) stable += e.lambda.real() < 0.0;
    if (stable == 0) continue;
    if (std::any_of(eigs.begin(), eigs.end(), [](const EigenPair& e) { return std::fabs(e.lambda.real()) < 1e-6; })) continue;
    const auto s = select_and_pair(eigs, Stability::Stable, Eigen::VectorXd::Zero(n));
    REQUIRE(s.n_s() == stable);
    for (int k = 0; k < s.n_s(); ++k) {
      const auto& V = s.vectors[static_cast<std::size_t>(k)];
      REQUIRE(s.lambdas[static_cast<std::size_t>(k)].real() < 0.0);
      REQUIRE(std::fabs(V.norm() - 1.0) <= 1e-13);
      REQUIRE((J.cast<std::complex<double>>() * V - s.lambdas[static_cast<std::size_t>(k)] * V).cwiseAbs().maxCoeff() <= 1e-10 * V.cwiseAbs().maxCoeff());
    }
    // Conjugation permutes the list.
    for (int k = 0; k < s.n_s(); ++k) {
      const auto lc = std::conj(s.lambdas[static_cast<std::size_t>(k)]);
      const Eigen::VectorXcd Vc = s.vectors[static_cast<std::size_t>(k)].conjugate();
      bool found = false;
      for (int l = 0; l < s.n_s(); ++l) {
        found |= std::abs(s.lambdas[static_cast<std::size_t>(l)] - lc) <= 1e-12 &&
                 (s.vectors[static_cast<std::size_t>(l)] - Vc).cwiseAbs().maxCoeff() <= 1e-12;
      }
      REQUIRE(found);
    }
    for (auto [k, l] : s.pairing) REQUIRE(l == k + 1);
  }
}

TEST_CASE("unstable selection negates the spectrum") {
  Eigen::Matrix2d J;
  J << 2, 0, 0, -1;
  const auto s = select_and_pair(eigenpairs(J), Stability::Unstable, Eigen::VectorXd::Zero(2));
  REQUIRE(s.n_s() == 1);
  CHECK(s.lambdas[0] == std::complex<double>(-2.0));
  CHECK(s.time_reversed);
}

TEST_CASE("non-hyperbolic spectra are rejected") {
  Eigen::Matrix2d J;
  J << 0, 1, -1, 0;
  CHECK_THROWS_AS(select_and_pair(eigenpairs(J), Stability::Stable, Eigen::VectorXd::Zero(2)), NonHyperbolic);
}

TEST_CASE("resonance detection") {
  try {
    check_nonresonance({-1.0, -2.0});
    FAIL("expected a resonance");
  } catch (const ResonanceDetected& e) {
    CHECK(e.alpha() == std::vector<int>{2, 0});
    CHECK(e.target() == 1);
  }
}

TEST_CASE("lorenz and bridge spectra are non-resonant") {
  const double s = 10.0, r = 28.0;
  const double l1 = -(s + 1 + std::sqrt((s - 1) * (s - 1) + 4 * s * r)) / 2;
  const auto res = check_nonresonance({l1, -8.0 / 3.0});
  CHECK(res.max_order == static_cast<int>(std::ceil(std::fabs(l1) / (8.0 / 3.0))) + 1);
  // Independent exhaustive loop up to |α| = 10.
  double closest = 1e300;
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; a + b <= 10; ++b)
      if (a + b >= 2)
        for (double target : {l1, -8.0 / 3.0}) closest = std::min(closest, std::fabs(a * l1 + b * (-8.0 / 3.0) - target));
  CHECK(closest > 1e-8);
  const std::complex<double> lb(-0.5, std::sqrt(3.0) / 2.0);
  CHECK_NOTHROW(check_nonresonance({lb, std::conj(lb)}));
}
