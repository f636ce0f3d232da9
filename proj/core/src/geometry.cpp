#include "invman/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "invman/errors.hpp"

namespace invman {

RealMap::RealMap(VectorSeq coeffs, std::vector<std::pair<int, int>> pairing)
    : coeffs_(std::move(coeffs)), pairing_(std::move(pairing)) {
  for (auto [k, l] : pairing_) {
    if (k < 0 || l < 0 || k >= coeffs_.dims() || l >= coeffs_.dims() || k == l) {
      throw InvalidArgument("RealMap: pairing refers to an invalid variable");
    }
  }
}

RealMap::RealMap(const Parameterization& par)
    : RealMap(par.coeffs(), par.problem().spectral.pairing) {}

std::vector<Complex> RealMap::complex_coordinates(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != dims()) throw InvalidArgument("RealMap: theta has wrong length");
  std::vector<Complex> z(theta.begin(), theta.end());
  for (auto [k, l] : pairing_) {
    const double x = theta[static_cast<std::size_t>(k)];
    const double y = theta[static_cast<std::size_t>(l)];
    z[static_cast<std::size_t>(k)] = Complex(x, y);
    z[static_cast<std::size_t>(l)] = Complex(x, -y);
  }
  return z;
}

std::vector<Complex> RealMap::evaluate_complex(std::span<const Complex> z) const {
  return evaluate(coeffs_, z);
}

Eigen::VectorXd RealMap::operator()(std::span<const double> theta, double* imag_residue) const {
  const auto z = complex_coordinates(theta);
  const auto v = evaluate(coeffs_, z);
  Eigen::VectorXd x(n());
  double imag = 0.0;
  double scale = 1.0;
  for (int i = 0; i < n(); ++i) {
    x(i) = v[static_cast<std::size_t>(i)].real();
    imag = std::max(imag, std::abs(v[static_cast<std::size_t>(i)].imag()));
    scale = std::max(scale, std::abs(x(i)));
  }
  if (imag > kImagTolerance * scale) {
    std::ostringstream msg;
    msg << "RealMap: imaginary residue " << imag << " exceeds tolerance; coefficients are not conjugate-symmetric";
    throw SymmetryViolated(msg.str());
  }
  if (imag_residue) *imag_residue = imag;
  return x;
}

SampleDomain default_domain(const SpectralData& spectral) {
  SampleDomain d;
  d.shape = spectral.pairing.empty() ? DomainShape::Box : DomainShape::Disc;
  return d;
}

SurfaceMesh sample_surface(const RealMap& f, int grid_n, const SampleDomain& domain) {
  if (grid_n < 2) throw InvalidArgument("sample_surface: grid_n must be >= 2");
  if (!(domain.radius > 0.0)) throw InvalidArgument("sample_surface: radius must be > 0");
  const int ns = f.dims();
  SurfaceMesh mesh;
  mesh.n = f.n();
  mesh.grid_n = grid_n;
  const double r = domain.radius;
  auto coord = [&](int i) { return -r + 2.0 * r * i / (grid_n - 1); };
  if (ns == 1) {
    for (int i = 0; i < grid_n; ++i) {
      const std::vector<double> th{coord(i)};
      mesh.vertices.push_back(f(th));
      mesh.parameter_grid.push_back(th);
    }
    return mesh;
  }
  if (ns != 2) throw InvalidArgument("sample_surface: meshes need n_s = 1 or 2");
  if (domain.shape == DomainShape::Disc) {
    for (int i = 0; i < grid_n; ++i) {
      const double rho = r * i / (grid_n - 1);
      for (int j = 0; j < grid_n; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / (grid_n - 1);
        const std::vector<double> th{rho * std::cos(phi), rho * std::sin(phi)};
        mesh.vertices.push_back(f(th));
        mesh.parameter_grid.push_back(th);
      }
    }
  } else {
    for (int i = 0; i < grid_n; ++i) {
      for (int j = 0; j < grid_n; ++j) {
        const std::vector<double> th{coord(i), coord(j)};
        mesh.vertices.push_back(f(th));
        mesh.parameter_grid.push_back(th);
      }
    }
  }
  for (int i = 0; i + 1 < grid_n; ++i) {
    for (int j = 0; j + 1 < grid_n; ++j) {
      const int v00 = i * grid_n + j;
      const int v01 = v00 + 1;
      const int v10 = v00 + grid_n;
      const int v11 = v10 + 1;
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

double surface_area(const SurfaceMesh& mesh) {
  double area = 0.0;
  for (const auto& t : mesh.triangles) {
    const Eigen::VectorXd e1 = mesh.vertices[static_cast<std::size_t>(t[1])] - mesh.vertices[static_cast<std::size_t>(t[0])];
    const Eigen::VectorXd e2 = mesh.vertices[static_cast<std::size_t>(t[2])] - mesh.vertices[static_cast<std::size_t>(t[0])];
    const double g = e1.squaredNorm() * e2.squaredNorm() - std::pow(e1.dot(e2), 2);
    area += 0.5 * std::sqrt(std::max(0.0, g));
  }
  return area;
}

EigenplaneProjection::EigenplaneProjection(const SpectralData& spectral) : p_(spectral.p) {
  const int ns = spectral.n_s();
  basis_.resize(spectral.n(), ns);
  for (int k = 0; k < ns; ++k) basis_.col(k) = spectral.vectors[static_cast<std::size_t>(k)].real();
  for (auto [k, l] : spectral.pairing) {
    const Eigen::VectorXcd& v = spectral.vectors[static_cast<std::size_t>(k)];
    basis_.col(k) = v.real();
    basis_.col(l) = v.imag();
  }
  qr_.compute(basis_);
  if (qr_.rank() < ns) throw InvalidArgument("EigenplaneProjection: eigenvectors are linearly dependent");
}

Eigen::VectorXd EigenplaneProjection::operator()(const Eigen::VectorXd& x) const {
  return qr_.solve(x - p_);
}

std::optional<FoldWitness> find_fold(const SurfaceMesh& mesh, const EigenplaneProjection& proj,
                                     double proj_tol, double dist_tol) {
  if (proj.basis().cols() != 2) throw InvalidArgument("find_fold: needs a two-dimensional eigenplane");
  const std::size_t V = mesh.vertices.size();
  std::vector<Eigen::Vector2d> c(V);
  std::map<std::pair<long long, long long>, std::vector<int>> cells;
  for (std::size_t v = 0; v < V; ++v) {
    c[v] = proj(mesh.vertices[v]);
    const auto key = std::make_pair(static_cast<long long>(std::floor(c[v](0) / proj_tol)),
                                    static_cast<long long>(std::floor(c[v](1) / proj_tol)));
    cells[key].push_back(static_cast<int>(v));
  }
  std::optional<FoldWitness> best;
  for (const auto& [key, members] : cells) {
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = cells.find({key.first + dx, key.second + dy});
        if (it == cells.end()) continue;
        for (int a : members) {
          for (int b : it->second) {
            if (b <= a) continue;
            const double pd = (c[static_cast<std::size_t>(a)] - c[static_cast<std::size_t>(b)]).norm();
            if (pd > proj_tol) continue;
            const double xd = (mesh.vertices[static_cast<std::size_t>(a)] - mesh.vertices[static_cast<std::size_t>(b)]).norm();
            if (xd > dist_tol && (!best || xd > best->phase_distance)) best = FoldWitness{a, b, pd, xd};
          }
        }
      }
    }
  }
  return best;
}

double edge_extent(const SurfaceMesh& mesh, const EigenplaneProjection& proj, int k) {
  if (mesh.parameter_grid.empty()) return 0.0;
  double r = 0.0;
  for (const auto& th : mesh.parameter_grid) r = std::max(r, std::abs(th.at(static_cast<std::size_t>(k))));
  double extent = 0.0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (std::abs(mesh.parameter_grid[v][static_cast<std::size_t>(k)]) < r) continue;
    extent = std::max(extent, std::abs(proj(mesh.vertices[v])(k)));
  }
  return extent;
}

Eigen::VectorXd rk4_flow(const PolyVectorField& g, const Eigen::VectorXd& y0, double t, int steps) {
  if (steps < 1) throw InvalidArgument("rk4_flow: steps must be >= 1");
  const double h = t / steps;
  Eigen::VectorXd y = y0;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = eval_field(g, y);
    const Eigen::VectorXd k2 = eval_field(g, Eigen::VectorXd(y + 0.5 * h * k1));
    const Eigen::VectorXd k3 = eval_field(g, Eigen::VectorXd(y + 0.5 * h * k2));
    const Eigen::VectorXd k4 = eval_field(g, Eigen::VectorXd(y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

FlowResult rk4_flow_converged(const PolyVectorField& g, const Eigen::VectorXd& y0, double t,
                              double tol, int max_steps) {
  FlowResult r;
  r.steps = std::max(64, static_cast<int>(std::ceil(64.0 * t)));
  r.y = rk4_flow(g, y0, t, r.steps);
  while (2 * r.steps <= max_steps) {
    const Eigen::VectorXd finer = rk4_flow(g, y0, t, 2 * r.steps);
    r.change = (finer - r.y).cwiseAbs().maxCoeff();
    r.steps *= 2;
    r.y = finer;
    if (r.change <= tol * std::max(1.0, r.y.cwiseAbs().maxCoeff())) return r;
  }
  throw NonConvergence("rk4_flow_converged: step doubling did not settle within " +
                       std::to_string(max_steps) + " steps");
}

double conjugacy_error(const Parameterization& par, std::span<const double> theta, double t) {
  if (t < 0.0) throw InvalidArgument("conjugacy_error: t must be >= 0");
  const RealMap f(par);
  const Eigen::VectorXd x0 = f(theta);
  const Eigen::VectorXd flowed = rk4_flow_converged(par.problem().field, x0, t).y;
  auto z = f.complex_coordinates(theta);
  const auto& lambdas = par.problem().spectral.lambdas;
  for (std::size_t k = 0; k < z.size(); ++k) z[k] *= std::exp(lambdas[k] * t);
  const auto target = f.evaluate_complex(z);
  double err = 0.0;
  for (int i = 0; i < f.n(); ++i) err = std::max(err, std::abs(flowed(i) - target[static_cast<std::size_t>(i)].real()));
  return err;
}

ConjugacySummary check_conjugacy(const Parameterization& par, int samples, double t,
                                 std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("check_conjugacy: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int ns = par.problem().n_s();
  ConjugacySummary s;
  std::vector<double> theta(static_cast<std::size_t>(ns));
  double total = 0.0;
  for (int k = 0; k < samples; ++k) {
    double r2;
    do {
      r2 = 0.0;
      for (auto& x : theta) {
        x = unit(rng);
        r2 += x * x;
      }
    } while (r2 > 1.0);
    const double e = conjugacy_error(par, theta, t);
    s.max_error = std::max(s.max_error, e);
    total += e;
  }
  s.samples = samples;
  s.mean_error = total / samples;
  return s;
}

std::string triangles_path(const std::string& vertex_path) {
  const auto dot = vertex_path.rfind('.');
  const auto slash = vertex_path.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? vertex_path.substr(0, dot) : vertex_path) + "_triangles.csv";
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void export_obj(const SurfaceMesh& mesh, const std::string& path, std::vector<std::string>* warnings) {
  if (mesh.n < 3) throw InvalidArgument("export_obj: OBJ needs at least three coordinates");
  if (mesh.n > 3 && warnings) {
    warnings->push_back("OBJ export keeps coordinates 1-3 of " + std::to_string(mesh.n));
  }
  auto out = open_out(path);
  for (const auto& v : mesh.vertices) out << "v " << v(0) << ' ' << v(1) << ' ' << v(2) << '\n';
  if (mesh.triangles.empty()) {
    for (std::size_t i = 1; i < mesh.vertices.size(); ++i) out << "l " << i << ' ' << i + 1 << '\n';
  }
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

void export_csv(const SurfaceMesh& mesh, const std::string& path) {
  {
    auto out = open_out(path);
    for (int i = 0; i < mesh.n; ++i) out << (i ? "," : "") << 'x' << i + 1;
    out << '\n';
    for (const auto& v : mesh.vertices) {
      for (int i = 0; i < mesh.n; ++i) out << (i ? "," : "") << v(i);
      out << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
  }
  if (mesh.triangles.empty()) return;
  const std::string tpath = triangles_path(path);
  auto out = open_out(tpath);
  out << "i,j,k\n";
  for (const auto& t : mesh.triangles) out << t[0] << ',' << t[1] << ',' << t[2] << '\n';
  if (!out) throw IoError("write failed for '" + tpath + "'");
}

std::vector<Eigen::VectorXd> read_vertices_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  std::vector<Eigen::VectorXd> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    out.push_back(Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size())));
  }
  return out;
}

}  // namespace invman
