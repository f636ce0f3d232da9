#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invman/parameterization.hpp"

namespace invman {

// θ ∈ ℝ^{n_s} ↦ f(θ) ∈ ℝⁿ. Each conjugate pair (k, l) is fed the complex
// coordinates θ_k ± iθ_l, so the series sums to a real vector.
class RealMap {
 public:
  RealMap(VectorSeq coeffs, std::vector<std::pair<int, int>> pairing);
  explicit RealMap(const Parameterization& par);

  int n() const { return coeffs_.n(); }
  int dims() const { return coeffs_.dims(); }

  // Throws SymmetryViolated when the imaginary part exceeds 1e-8 relative
  // to max(1, ‖f‖∞).
  Eigen::VectorXd operator()(std::span<const double> theta, double* imag_residue = nullptr) const;

  std::vector<Complex> complex_coordinates(std::span<const double> theta) const;
  // f at complex coordinates z, without the real-part projection.
  std::vector<Complex> evaluate_complex(std::span<const Complex> z) const;

  const VectorSeq& coeffs() const { return coeffs_; }
  const std::vector<std::pair<int, int>>& pairing() const { return pairing_; }

  static constexpr double kImagTolerance = 1e-8;

 private:
  VectorSeq coeffs_;
  std::vector<std::pair<int, int>> pairing_;
};

enum class DomainShape { Box, Disc };

// [−r, r]^{n_s} for Box; for Disc a polar grid of radius r in the (θ₁, θ₂)
// plane, matching the polydisc on which the defect of a conjugate pair is
// measured.
struct SampleDomain {
  DomainShape shape = DomainShape::Box;
  double radius = 1.0;
};

SampleDomain default_domain(const SpectralData& spectral);

struct SurfaceMesh {
  int n = 0;
  int grid_n = 0;
  std::vector<Eigen::VectorXd> vertices;
  std::vector<std::array<int, 3>> triangles;  // empty for a polyline (n_s = 1)
  std::vector<std::vector<double>> parameter_grid;
};

// grid_n^{n_s} vertices for n_s ∈ {1, 2}; row-major with two triangles per
// cell, split along the (i, j)–(i+1, j+1) diagonal.
SurfaceMesh sample_surface(const RealMap& f, int grid_n, const SampleDomain& domain = {});

// Σ over triangles of ½‖e₁ ∧ e₂‖ in ℝⁿ.
double surface_area(const SurfaceMesh& mesh);

// Coordinates of x − p in the real eigenplane: (V_k) for real eigenvalues,
// (Re V_k, Im V_k) for a conjugate pair. Least squares when n > n_s.
class EigenplaneProjection {
 public:
  explicit EigenplaneProjection(const SpectralData& spectral);
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  const Eigen::MatrixXd& basis() const { return basis_; }

 private:
  Eigen::VectorXd p_;
  Eigen::MatrixXd basis_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

struct FoldWitness {
  int i;
  int j;
  double projection_distance;
  double phase_distance;
};

// A pair of vertices whose eigenplane projections are within proj_tol while
// their phase-space distance exceeds dist_tol; the pair with the largest
// phase distance is returned.
std::optional<FoldWitness> find_fold(const SurfaceMesh& mesh, const EigenplaneProjection& proj,
                                     double proj_tol = 1e-3, double dist_tol = 1e-2);

// max |c_k| over the vertices on the edges θ_k = ±r of a box mesh, c the
// eigenplane coordinates.
double edge_extent(const SurfaceMesh& mesh, const EigenplaneProjection& proj, int k);

// Classical RK4 with a fixed number of steps.
Eigen::VectorXd rk4_flow(const PolyVectorField& g, const Eigen::VectorXd& y0, double t, int steps);

struct FlowResult {
  Eigen::VectorXd y;
  int steps = 0;
  double change = 0.0;  // ‖y(steps) − y(steps/2)‖∞ at acceptance
};

// RK4 starting from max(64, ⌈64t⌉) steps and doubling until two successive
// results agree to tol·max(1, ‖y‖∞), up to max_steps.
FlowResult rk4_flow_converged(const PolyVectorField& g, const Eigen::VectorXd& y0, double t,
                              double tol = 1e-10, int max_steps = 1 << 20);

// ‖φ(t, f(θ)) − f(e^{Λt}θ)‖∞ with φ from rk4_flow_converged.
double conjugacy_error(const Parameterization& par, std::span<const double> theta, double t);

struct ConjugacySummary {
  double max_error = 0.0;
  double mean_error = 0.0;
  int samples = 0;
};

// Uniform samples in the unit ball of ℝ^{n_s}, deterministic in `seed`.
ConjugacySummary check_conjugacy(const Parameterization& par, int samples, double t,
                                 std::uint64_t seed);

// OBJ keeps the first three coordinates and reports a warning when n > 3.
// For a polyline the "f" records become "l" records.
void export_obj(const SurfaceMesh& mesh, const std::string& path,
                std::vector<std::string>* warnings = nullptr);
// Vertices to `path`, triangles (0-based) to triangles_path(path).
void export_csv(const SurfaceMesh& mesh, const std::string& path);
std::string triangles_path(const std::string& vertex_path);
std::vector<Eigen::VectorXd> read_vertices_csv(const std::string& path);

}  // namespace invman
