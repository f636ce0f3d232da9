#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "invman/errors.hpp"
#include "invman/geometry.hpp"
#include "support.hpp"

using namespace invman;
using namespace invman::testing;
namespace fs = std::filesystem;

namespace {

// Coefficients of an explicit polynomial map ℝ² → ℝⁿ.
VectorSeq poly_map(int n, int N, const std::vector<std::tuple<int, std::vector<int>, double>>& entries) {
  VectorSeq a(n, GradedOrdering::make(2, N));
  for (const auto& [i, e, c] : entries) a[i][a.ordering().position(e)] += c;
  return a;
}

SpectralData plane_spectrum(int n) {
  SpectralData s;
  s.p = Eigen::VectorXd::Zero(n);
  s.lambdas = {-1.0, -2.0};
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(n), e2 = Eigen::VectorXcd::Zero(n);
  e1(0) = 1.0;
  e2(1) = 1.0;
  s.vectors = {e1, e2};
  s.min_abs_re = 1.0;
  s.max_abs_re = 2.0;
  return s;
}

int count_prefix(const std::string& path, const std::string& prefix) {
  std::ifstream in(path);
  int count = 0;
  for (std::string line; std::getline(in, line);) count += line.rfind(prefix, 0) == 0;
  return count;
}

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / ("invman_geometry_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("constant series gives a constant map") {
  const auto a = poly_map(3, 4, {{0, {0, 0}, 1.5}, {1, {0, 0}, -2.0}, {2, {0, 0}, 0.25}});
  const RealMap f(a, {});
  const std::vector<double> th{0.3, -0.9};
  const auto y = f(th);
  CHECK(y(0) == 1.5);
  CHECK(y(1) == -2.0);
  CHECK(y(2) == 0.25);
}

TEST_CASE("real spectrum passes coordinates through") {
  const auto& par = solved_fixture("lorenz", 20);
  const RealMap f(par);
  const std::vector<double> th{0.4, -0.7};
  const auto z = f.complex_coordinates(th);
  CHECK(z[0] == Complex(0.4));
  CHECK(z[1] == Complex(-0.7));
  const auto y = f(th);
  const auto ref = evaluate(par.coeffs(), z);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(y(i) - ref[static_cast<std::size_t>(i)].real()) <= 1e-14 * std::max(1.0, std::abs(y(i))));
}

TEST_CASE("conjugate pair recovers the real manifold") {
  const auto& par = solved_fixture("bridge", 30);
  const RealMap f(par);
  Gen gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> th{gen.uniform(-0.7, 0.7), gen.uniform(-0.7, 0.7)};
    if (trial == 0) th = {0.1, 0.0};
    double imag = 0.0;
    const auto y = f(th, &imag);
    CHECK(imag <= 1e-10);
    // Direct complex evaluation at θ₁ ± iθ₂ by naive monomial sums.
    const std::vector<Complex> z{Complex(th[0], th[1]), Complex(th[0], -th[1])};
    for (int i = 0; i < 4; ++i) {
      const Complex ref = naive_eval(to_naive(par.coeffs()[i]), z);
      REQUIRE(std::abs(ref.imag()) <= 1e-10);
      REQUIRE(std::abs(y(i) - ref.real()) <= 1e-12);
    }
  }
}

TEST_CASE("broken symmetry is reported") {
  auto a = poly_map(2, 3, {{0, {1, 0}, 1.0}, {1, {0, 1}, 1.0}});
  const RealMap f(a, {{0, 1}});
  const std::vector<double> th{0.5, 0.5};
  CHECK_THROWS_AS(f(th), SymmetryViolated);
}

TEST_CASE("smallest mesh") {
  const RealMap f(poly_map(3, 2, {{0, {1, 0}, 1.0}, {1, {0, 1}, 1.0}}), {});
  const auto mesh = sample_surface(f, 2);
  CHECK(mesh.vertices.size() == 4);
  CHECK(mesh.triangles.size() == 2);
  CHECK(mesh.parameter_grid.size() == 4);
}

TEST_CASE("flat square has area four and stays planar") {
  const RealMap f(poly_map(3, 2, {{0, {1, 0}, 1.0}, {1, {0, 1}, 1.0}}), {});
  const auto mesh = sample_surface(f, 33);
  CHECK(mesh.vertices.size() == 33 * 33);
  CHECK(mesh.triangles.size() == 2 * 32 * 32);
  for (const auto& v : mesh.vertices) REQUIRE(v(2) == 0.0);
  for (const auto& t : mesh.triangles)
    for (int k : t) REQUIRE((k >= 0 && k < 33 * 33));
  CHECK(surface_area(mesh) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("sphere octant area converges to half pi") {
  // Reuse the triangulation of a flat mesh and move its vertices onto the
  // unit sphere: azimuth and polar angle both sweep [0, π/2].
  auto octant = [](int grid) {
    const RealMap flat(poly_map(3, 2, {{0, {1, 0}, 1.0}, {1, {0, 1}, 1.0}}), {});
    auto mesh = sample_surface(flat, grid);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      const double phi = (mesh.parameter_grid[v][0] + 1.0) * std::numbers::pi / 4.0;
      const double psi = (mesh.parameter_grid[v][1] + 1.0) * std::numbers::pi / 4.0;
      mesh.vertices[v] = Eigen::Vector3d(std::sin(psi) * std::cos(phi), std::sin(psi) * std::sin(phi), std::cos(psi));
    }
    return surface_area(mesh);
  };
  const double exact = std::numbers::pi / 2.0;
  CHECK(std::fabs(octant(129) - exact) <= 0.01 * exact);
  double prev_gap = INFINITY;
  for (int k = 8; k <= 64; k *= 2) {
    const double gap = std::fabs(octant(2 * k + 1) - octant(k + 1));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("disc domain samples a polar grid inside the radius") {
  const RealMap f(poly_map(3, 2, {{0, {1, 0}, 1.0}, {1, {0, 1}, 1.0}}), {});
  const auto mesh = sample_surface(f, 65, {DomainShape::Disc, 1.0});
  for (const auto& th : mesh.parameter_grid) REQUIRE(std::hypot(th[0], th[1]) <= 1.0 + 1e-15);
  CHECK(surface_area(mesh) == doctest::Approx(std::numbers::pi).epsilon(2e-3));
  CHECK(default_domain(solved_fixture("bridge", 10).problem().spectral).shape == DomainShape::Disc);
  CHECK(default_domain(solved_fixture("lorenz", 10).problem().spectral).shape == DomainShape::Box);
}

TEST_CASE("eigenplane projection recovers coordinates") {
  const auto& s = solved_fixture("lorenz", 10).problem().spectral;
  const EigenplaneProjection P(s);
  const Eigen::VectorXd x = s.p + 0.3 * s.vectors[0].real() - 1.7 * s.vectors[1].real();
  const auto c = P(x);
  CHECK(c(0) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(c(1) == doctest::Approx(-1.7).epsilon(1e-13));
}

TEST_CASE("fold detection") {
  const EigenplaneProjection P(plane_spectrum(3));
  // (θ₁², θ₂, θ₁) folds over the eigenplane along θ₁ = 0.
  const RealMap folded(poly_map(3, 3, {{0, {2, 0}, 1.0}, {1, {0, 1}, 1.0}, {2, {1, 0}, 1.0}}), {});
  const auto fw = find_fold(sample_surface(folded, 33), P);
  REQUIRE(fw.has_value());
  CHECK(fw->projection_distance <= 1e-3);
  CHECK(fw->phase_distance > 1e-2);
  // A graph over the eigenplane has no fold.
  const RealMap graph(poly_map(3, 3, {{0, {1, 0}, 1.0}, {1, {0, 1}, 1.0}, {2, {1, 1}, 1.0}}), {});
  CHECK_FALSE(find_fold(sample_surface(graph, 33), P).has_value());
}

TEST_CASE("edge extent along each eigendirection") {
  const EigenplaneProjection P(plane_spectrum(3));
  const RealMap f(poly_map(3, 2, {{0, {1, 0}, 1.0}, {1, {0, 1}, 2.0}}), {});
  const auto mesh = sample_surface(f, 17);
  CHECK(edge_extent(mesh, P, 0) == doctest::Approx(1.0));
  CHECK(edge_extent(mesh, P, 1) == doctest::Approx(2.0));
}

TEST_CASE("rk4 on a linear decay") {
  auto g = PolyVectorField::from_scalar_terms(1, {{0, {1}, -1.0}});
  const Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
  CHECK(std::fabs(rk4_flow(g, y0, 1.0, 64)(0) - std::exp(-1.0)) <= 1e-8);
  const auto r = rk4_flow_converged(g, y0, 1.0);
  CHECK(std::fabs(r.y(0) - std::exp(-1.0)) <= 1e-10);
  CHECK(r.steps >= 64);
  CHECK(r.change <= 1e-10);
}

TEST_CASE("conjugacy error at the equilibrium and on a linear field") {
  const auto& par = solved_fixture("lorenz", 30);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(conjugacy_error(par, zero, 0.5) <= 1e-12);

  auto g = PolyVectorField::from_scalar_terms(3, {{0, {1, 0, 0}, -1.0}, {1, {0, 1, 0}, -2.5}, {1, {0, 0, 1}, 0.5}, {2, {0, 0, 1}, 3.0}});
  ProblemSettings st;
  st.N = 6;
  const auto lin = newton_solve(build_problem(g, Eigen::VectorXd::Zero(3), st));
  Gen gen(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> th{gen.uniform(-0.7, 0.7), gen.uniform(-0.7, 0.7)};
    for (double t : {0.1, 0.5, 1.0}) REQUIRE(conjugacy_error(lin, th, t) <= 1e-10);
  }
}

TEST_CASE("conjugacy on lorenz and the bridge with small patches") {
  const auto& lor = solved_fixture("lorenz", 30);
  const auto s1 = check_conjugacy(lor.rescaled(Scaling({1.0, 1.0})), 30, 0.5, 1);
  CHECK(s1.samples == 30);
  CHECK(s1.max_error <= 1e-6);
  CHECK(s1.mean_error <= s1.max_error);
  const auto s2 = check_conjugacy(lor, 30, 0.5, 1);
  CHECK(s2.max_error == s1.max_error);
  const auto& br = solved_fixture("bridge", 30);
  CHECK(check_conjugacy(br, 20, 0.5, 3).max_error <= 1e-6);
}

TEST_CASE("obj export") {
  const auto dir = scratch_dir();
  const RealMap f(poly_map(3, 2, {{0, {1, 0}, 1.0}, {1, {0, 1}, 1.0}}), {});
  const auto path = (dir / "square.obj").string();
  std::vector<std::string> warnings;
  export_obj(sample_surface(f, 2), path, &warnings);
  CHECK(count_prefix(path, "v ") == 4);
  CHECK(count_prefix(path, "f ") == 2);
  CHECK(warnings.empty());
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("f ", 0) != 0) continue;
    std::istringstream ls(line.substr(2));
    for (int k; ls >> k;) CHECK((k >= 1 && k <= 4));
  }

  const auto& br = solved_fixture("bridge", 10);
  export_obj(sample_surface(RealMap(br), 5, default_domain(br.problem().spectral)), (dir / "bridge.obj").string(), &warnings);
  CHECK(warnings.size() == 1);

  // One parameter direction: a polyline.
  auto line_field = PolyVectorField::from_scalar_terms(3, {{0, {1, 0, 0}, -1.0}, {1, {0, 1, 0}, 2.0}, {2, {0, 0, 1}, 3.0}});
  ProblemSettings st;
  st.N = 4;
  const auto line = newton_solve(build_problem(line_field, Eigen::VectorXd::Zero(3), st));
  const auto poly = sample_surface(RealMap(line), 9);
  CHECK(poly.triangles.empty());
  export_obj(poly, (dir / "line.obj").string());
  CHECK(count_prefix((dir / "line.obj").string(), "v ") == 9);
  CHECK(count_prefix((dir / "line.obj").string(), "l ") >= 1);
  CHECK(count_prefix((dir / "line.obj").string(), "f ") == 0);
  fs::remove_all(dir);
}

TEST_CASE("csv round trip") {
  const auto dir = scratch_dir();
  const auto& par = solved_fixture("lorenz", 20);
  const auto mesh = sample_surface(RealMap(par.rescaled(Scaling({3.0, 1.5}))), 17);
  const auto path = (dir / "mesh.csv").string();
  export_csv(mesh, path);
  CHECK(fs::exists(triangles_path(path)));
  CHECK(count_prefix(triangles_path(path), "") >= static_cast<int>(mesh.triangles.size()));
  const auto back = read_vertices_csv(path);
  REQUIRE(back.size() == mesh.vertices.size());
  for (std::size_t v = 0; v < back.size(); ++v) {
    REQUIRE((back[v] - mesh.vertices[v]).cwiseAbs().maxCoeff() <= 1e-15 * std::max(1.0, mesh.vertices[v].cwiseAbs().maxCoeff()));
  }
  CHECK_THROWS_AS(read_vertices_csv((dir / "missing.csv").string()), IoError);
  fs::remove_all(dir);
}
