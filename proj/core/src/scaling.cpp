#include "invman/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "invman/errors.hpp"

namespace invman {

void parallel_for(int count, int threads, const std::function<void(int)>& f) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

BracketResult bisect_largest(const std::function<bool(double)>& valid, double start,
                             const SearchOptions& options) {
  double t = std::clamp(start, options.gamma_floor, options.gamma_cap);
  double lo, hi;
  if (valid(t)) {
    lo = t;
    hi = std::numeric_limits<double>::infinity();
    while (true) {
      if (lo >= options.gamma_cap) return {lo, hi, true};
      const double next = std::min(2.0 * lo, options.gamma_cap);
      if (valid(next)) {
        lo = next;
      } else {
        hi = next;
        break;
      }
    }
  } else {
    hi = t;
    while (true) {
      if (hi <= options.gamma_floor) {
        std::ostringstream msg;
        msg << "no valid scaling down to " << options.gamma_floor;
        throw EmptyLevelSet(msg.str());
      }
      const double next = std::max(0.5 * hi, options.gamma_floor);
      if (valid(next)) {
        lo = next;
        break;
      }
      hi = next;
    }
  }
  while (hi / lo > 1.0 + options.rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (valid(mid)) lo = mid; else hi = mid;
  }
  return {lo, hi, false};
}

double patch_area(const Parameterization& par, const Scaling& gamma, int grid_n) {
  const RealMap f(rescale(par.coeffs(), gamma), par.problem().spectral.pairing);
  return surface_area(sample_surface(f, grid_n, default_domain(par.problem().spectral)));
}

namespace {

Scaling pair_checked(const Parameterization& par, std::vector<double> g) {
  Scaling s(std::move(g));
  s.check_pairing(par.problem().spectral.pairing);
  return s;
}

}  // namespace

ScalingResult level_set_method1(const Parameterization& par, const SearchOptions& options) {
  const auto& pr = par.problem();
  if (pr.n_s() != 2) throw InvalidArgument("level_set_method1: needs n_s = 2");
  if (!pr.spectral.pairing.empty()) {
    throw InvalidArgument("level_set_method1: a conjugate pair forces gamma1 = gamma2; use the ray method");
  }
  const DefectEvaluator defect(par);
  const double eps = pr.epsilon_max;
  const auto uniform = bisect_largest([&](double t) { return defect(Scaling({t, t})) < eps; }, 1.0, options);

  ScalingResult result;
  result.criterion = ScalingCriterion::Defect;
  if (uniform.capped) {
    result.gamma_opt = Scaling({uniform.valid, uniform.valid});
    result.achieved = defect(result.gamma_opt);
    result.area = patch_area(par, result.gamma_opt, options.final_grid);
    result.capped = true;
    return result;
  }

  // Largest γ₂ on the level set above γ₁; nullopt when none exists.
  auto level_point = [&](double g1) -> std::optional<ScalingSample> {
    SearchOptions o = options;
    try {
      const auto b = bisect_largest([&](double t) { return defect(Scaling({g1, t})) < eps; }, uniform.valid, o);
      ScalingSample s;
      s.gamma = Scaling({g1, b.valid});
      s.metric = defect(s.gamma);
      s.area = patch_area(par, s.gamma, options.area_grid);
      return s;
    } catch (const EmptyLevelSet&) {
      return std::nullopt;
    }
  };

  const int m = options.method1_samples;
  const double lo = std::log(uniform.valid / options.method1_span);
  const double hi = std::log(uniform.valid * options.method1_span);
  std::vector<double> g1s(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) g1s[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (m - 1));
  std::vector<std::optional<ScalingSample>> column(static_cast<std::size_t>(m));
  parallel_for(m, options.threads, [&](int i) { column[static_cast<std::size_t>(i)] = level_point(g1s[static_cast<std::size_t>(i)]); });

  int best = -1;
  for (int i = 0; i < m; ++i) {
    const auto& s = column[static_cast<std::size_t>(i)];
    if (!s) continue;
    result.samples.push_back(*s);
    if (best < 0 || s->area > column[static_cast<std::size_t>(best)]->area) best = i;
  }
  if (best < 0) throw EmptyLevelSet("level_set_method1: no point of the level set was found");

  // Golden-section refinement of log γ₁ between the neighbours of the best sample.
  double a = std::log(g1s[static_cast<std::size_t>(std::max(best - 1, 0))]);
  double b = std::log(g1s[static_cast<std::size_t>(std::min(best + 1, m - 1))]);
  ScalingSample winner = *column[static_cast<std::size_t>(best)];
  auto area_at = [&](double x) {
    const auto s = level_point(std::exp(x));
    if (s && s->area > winner.area) winner = *s;
    return s ? s->area : -1.0;
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = area_at(x1), f2 = area_at(x2);
  while (b - a > options.rel_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = area_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = area_at(x1);
    }
  }
  result.gamma_opt = winner.gamma;
  result.achieved = winner.metric;
  result.area = patch_area(par, winner.gamma, options.final_grid);
  return result;
}

ScalingResult ray_method2(const Parameterization& par, const std::vector<double>& weights,
                          const SearchOptions& options) {
  const auto& pr = par.problem();
  if (static_cast<int>(weights.size()) != pr.n_s()) throw InvalidArgument("ray_method2: weights have wrong length");
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidArgument("ray_method2: weights must be positive");
  }
  pair_checked(par, weights);
  const DefectEvaluator defect(par);
  ScalingResult result;
  result.criterion = ScalingCriterion::Defect;
  auto gamma_at = [&](double t) { return Scaling(weights).times(t); };
  const auto b = bisect_largest(
      [&](double t) {
        const Scaling g = gamma_at(t);
        const double d = defect(g);
        result.samples.push_back({g, d, 0.0});
        return d < pr.epsilon_max;
      },
      1.0, options);
  result.gamma_opt = gamma_at(b.valid);
  result.achieved = defect(result.gamma_opt);
  result.capped = b.capped;
  result.area = pr.n_s() <= 2 ? patch_area(par, result.gamma_opt, options.final_grid) : 0.0;
  return result;
}

ScalingResult proof_dichotomy(const Validator& validator, const SearchOptions& options) {
  const auto& par = validator.parameterization();
  const int ns = par.problem().n_s();
  ScalingResult result;
  result.criterion = ScalingCriterion::Proof;
  std::string last_reason;
  auto probe = [&](double t, BoundMode mode) {
    const RadiiReport rep = validator.prove(Scaling::uniform(ns, t), mode);
    result.samples.push_back({rep.bounds.gamma, rep.valid ? rep.r_used : std::nan(""), 0.0});
    if (!rep.valid) last_reason = rep.reason;
    return rep;
  };
  BracketResult b;
  try {
    b = bisect_largest([&](double t) { return probe(t, BoundMode::Floating).valid; }, 1.0, options);
  } catch (const EmptyLevelSet&) {
    throw ProofImpossible("proof_dichotomy: no proof even for tiny gamma: " + last_reason);
  }
  // The floating probes choose γ*; the interval evaluation decides.
  double t = b.valid;
  RadiiReport rep = probe(t, BoundMode::Interval);
  while (!rep.valid) {
    t /= 1.0 + options.rel_tol;
    if (t < options.gamma_floor) throw ProofImpossible("proof_dichotomy: interval re-verification failed: " + last_reason);
    rep = probe(t, BoundMode::Interval);
  }
  result.gamma_opt = Scaling::uniform(ns, t);
  result.achieved = rep.r_used;
  result.capped = b.capped;
  result.area = ns <= 2 ? patch_area(par, result.gamma_opt, options.final_grid) : 0.0;
  return result;
}

std::vector<ContinuationRow> continuation(const ProblemFamily& family,
                                          const std::vector<double>& params,
                                          const ContinuationSettings& settings) {
  std::vector<ContinuationRow> rows(params.size());
  SearchOptions inner = settings.search;
  inner.threads = 1;
  parallel_for(static_cast<int>(params.size()), settings.search.threads, [&](int i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.param = params[static_cast<std::size_t>(i)];
    try {
      const ManifoldProblem problem = family(row.param);
      const Parameterization par = newton_solve(problem);
      ScalingResult r;
      if (settings.criterion == ScalingCriterion::Proof) {
        r = proof_dichotomy(Validator(par), inner);
      } else {
        const std::vector<double> w = settings.weights.empty()
                                          ? std::vector<double>(static_cast<std::size_t>(problem.n_s()), 1.0)
                                          : settings.weights;
        r = ray_method2(par, w, inner);
      }
      row.gamma = r.gamma_opt;
      row.achieved = r.achieved;
      row.area = r.area;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace invman
