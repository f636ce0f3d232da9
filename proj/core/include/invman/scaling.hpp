#pragma once

#include <functional>
#include <string>
#include <vector>

#include "invman/geometry.hpp"
#include "invman/parameterization.hpp"
#include "invman/validation.hpp"

namespace invman {

enum class ScalingCriterion { Defect, Proof };

struct ScalingSample {
  Scaling gamma;
  double metric = 0.0;  // defect, or r_used for proofs
  double area = 0.0;
};

struct ScalingResult {
  Scaling gamma_opt;
  ScalingCriterion criterion = ScalingCriterion::Defect;
  double achieved = 0.0;
  double area = 0.0;
  bool capped = false;  // the search hit gamma_cap while still valid
  std::vector<ScalingSample> samples;
};

struct SearchOptions {
  double rel_tol = 1e-3;
  double gamma_cap = 1e6;
  double gamma_floor = 1e-12;
  int area_grid = 33;
  int final_grid = 129;
  int method1_samples = 64;
  double method1_span = 32.0;
  int threads = 0;  // 0: hardware concurrency
};

struct BracketResult {
  double valid;    // largest accepted value found
  double invalid;  // smallest rejected value, or +inf when capped
  bool capped = false;
};

// Largest t in [floor, cap] with valid(t), for a predicate that is monotone
// (true below a threshold). Stops when invalid/valid ≤ 1 + rel_tol.
// Throws EmptyLevelSet if valid(floor) is false.
BracketResult bisect_largest(const std::function<bool(double)>& valid, double start,
                             const SearchOptions& options = {});

// Patch area of 𝓛_γ(ā) over the default domain.
double patch_area(const Parameterization& par, const Scaling& gamma, int grid_n);

// Maximal area on the level set {γ : defect(γ) = ε_max}, n_s = 2 with two
// real eigenvalues.
ScalingResult level_set_method1(const Parameterization& par, const SearchOptions& options = {});

// Largest t with defect(tω) < ε_max.
ScalingResult ray_method2(const Parameterization& par, const std::vector<double>& weights,
                          const SearchOptions& options = {});

// Largest uniform γ with a proof at r_max, re-verified in interval mode.
// Throws ProofImpossible when no γ ≥ gamma_floor works.
ScalingResult proof_dichotomy(const Validator& validator, const SearchOptions& options = {});

struct ContinuationRow {
  double param = 0.0;
  bool ok = false;
  Scaling gamma;
  double achieved = 0.0;
  double area = 0.0;
  std::string error;
};

struct ContinuationSettings {
  ScalingCriterion criterion = ScalingCriterion::Proof;
  std::vector<double> weights;  // defect mode; empty means uniform
  SearchOptions search;
};

using ProblemFamily = std::function<ManifoldProblem(double)>;

// One independent row per parameter value; failures are recorded on the row.
std::vector<ContinuationRow> continuation(const ProblemFamily& family,
                                          const std::vector<double>& params,
                                          const ContinuationSettings& settings = {});

// Runs f(0..count-1) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& f);

}  // namespace invman
