#include "invman_cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "invman/coeff_io.hpp"
#include "invman/errors.hpp"
#include "invman/geometry.hpp"
#include "invman/problem_io.hpp"
#include "invman/scaling.hpp"
#include "invman/validation.hpp"
#include "invman_cli/reports.hpp"

namespace invman::cli {

using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return kUsage;
  if (dynamic_cast<const NonConvergence*>(&e)) return kNonConvergence;
  if (dynamic_cast<const ResonanceDetected*>(&e)) return kResonance;
  if (dynamic_cast<const ProofImpossible*>(&e)) return kProofImpossible;
  if (dynamic_cast<const UnsupportedDegree*>(&e)) return kUnsupportedDegree;
  return kError;
}

namespace {

struct Common {
  std::string problem;
  std::optional<int> N;
  std::optional<double> epsilon_max;
  std::optional<double> r_max;
  std::vector<std::string> sets;
  std::string out_dir;
  std::string coeffs;
  std::string solver = "newton";
  int threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("problem", c.problem, "Problem file (JSON, schema 1)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--N", c.N, "Truncation order (overrides the file)")->check(CLI::Range(2, 200));
  cmd->add_option("--eps-max", c.epsilon_max, "Defect threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--r-max", c.r_max, "Largest admissible proof radius")->check(CLI::PositiveNumber);
  cmd->add_option("--set", c.sets, "Override a parameter, name=value (repeatable)");
  cmd->add_option("--out", c.out_dir, "Output directory (default: $INVMAN_OUTPUT_DIR or .)");
  cmd->add_option("--coeffs", c.coeffs, "Reuse a coefficient file instead of solving")->check(CLI::ExistingFile);
  cmd->add_option("--solver", c.solver, "newton or homological")->check(CLI::IsMember({"newton", "homological"}));
  cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

ParameterOverrides parse_sets(const std::vector<std::string>& sets) {
  ParameterOverrides o;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw SchemaError("--set expects name=value, got '" + s + "'");
    try {
      o[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw SchemaError("--set: '" + s.substr(eq + 1) + "' is not a number");
    }
  }
  return o;
}

void apply_settings(const Common& c, ProblemSettings& s) {
  if (c.N) s.N = *c.N;
  if (c.epsilon_max) s.epsilon_max = *c.epsilon_max;
  if (c.r_max) s.r_max = *c.r_max;
}

ProblemSpec load_spec(const Common& c) {
  ProblemSpec spec = load_problem_spec(c.problem, parse_sets(c.sets));
  apply_settings(c, spec.settings);
  if (spec.name.empty()) spec.name = std::filesystem::path(c.problem).stem().string();
  return spec;
}

std::filesystem::path out_dir(const Common& c) {
  std::string dir = c.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("INVMAN_OUTPUT_DIR");
    dir = env ? env : ".";
  }
  std::filesystem::create_directories(dir);
  return dir;
}

Parameterization obtain(const Common& c, const ManifoldProblem& problem, NewtonStats* stats = nullptr) {
  if (!c.coeffs.empty()) {
    CoeffFile f = load_coeffs(c.coeffs);
    if (f.coeffs.max_order() != problem.N) {
      throw InvalidArgument("coefficient file has N = " + std::to_string(f.coeffs.max_order()) +
                            " but the problem uses N = " + std::to_string(problem.N));
    }
    return Parameterization(problem, std::move(f.coeffs),
                            f.gamma.value_or(Scaling::uniform(problem.n_s(), 1.0)));
  }
  if (c.solver == "homological") return solve_homological(problem);
  return newton_solve(problem, std::nullopt, std::nullopt, {}, stats);
}

Scaling gamma_or_unit(const std::vector<double>& g, int ns) {
  if (g.empty()) return Scaling::uniform(ns, 1.0);
  if (static_cast<int>(g.size()) != ns) {
    throw InvalidArgument("--gamma needs " + std::to_string(ns) + " values");
  }
  return Scaling(g);
}

std::ofstream open_csv(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw IoError("cannot open '" + p.string() + "' for writing");
  f << std::setprecision(17);
  return f;
}

void write_samples_csv(const std::filesystem::path& p, const ScalingResult& r, int ns) {
  auto f = open_csv(p);
  for (int k = 0; k < ns; ++k) f << "gamma" << k + 1 << ',';
  f << "metric,area\n";
  for (const auto& s : r.samples) {
    for (int k = 0; k < ns; ++k) f << s.gamma[k] << ',';
    f << s.metric << ',' << s.area << '\n';
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"invman: invariant manifolds of equilibria by the parameterization method"};
  app.require_subcommand(1);

  Common c;

  auto* solve = app.add_subcommand("solve", "Compute the Taylor coefficients and write a coefficient file");
  add_common(solve, c);

  auto* spectrum = app.add_subcommand("spectrum", "Equilibrium, eigenpairs and non-resonance report");
  add_common(spectrum, c);

  std::string mode = "defect";
  std::vector<double> gamma;
  bool floating = false;
  auto* validate = app.add_subcommand("validate", "Defect or proof verdict at a scaling");
  add_common(validate, c);
  validate->add_option("--mode", mode, "defect or proof")->check(CLI::IsMember({"defect", "proof"}));
  validate->add_option("--gamma", gamma, "Scaling, comma separated")->delimiter(',');
  validate->add_flag("--floating", floating, "Plain floating-point bounds instead of interval bounds");

  std::string method = "area";
  std::vector<double> weights;
  auto* optimize = app.add_subcommand("optimize", "Search for the best scaling");
  add_common(optimize, c);
  optimize->add_option("--method", method, "area, ray or proof")->check(CLI::IsMember({"area", "ray", "proof"}));
  optimize->add_option("--weights", weights, "Ray weights, comma separated")->delimiter(',');

  std::string param;
  double from = 0.0, to = 0.0;
  int steps = 1;
  std::string criterion = "proof";
  auto* cont = app.add_subcommand("continue", "Sweep a parameter and optimize each problem");
  add_common(cont, c);
  cont->add_option("--param", param, "Parameter name")->required();
  cont->add_option("--from", from, "First value")->required();
  cont->add_option("--to", to, "Last value")->required();
  cont->add_option("--steps", steps, "Number of values")->check(CLI::PositiveNumber)->required();
  cont->add_option("--criterion", criterion, "proof or defect")->check(CLI::IsMember({"proof", "defect"}));
  cont->add_option("--weights", weights, "Ray weights for defect mode")->delimiter(',');

  int grid = 65;
  std::string format = "obj";
  std::string out_file;
  std::string domain = "auto";
  auto* exp = app.add_subcommand("export", "Sample the real manifold patch and write a mesh");
  add_common(exp, c);
  exp->add_option("--grid", grid, "Samples per parameter direction")->check(CLI::Range(2, 4097));
  exp->add_option("--format", format, "obj or csv")->check(CLI::IsMember({"obj", "csv"}));
  exp->add_option("--file", out_file, "Mesh path (default: <out>/<name>.<format>)");
  exp->add_option("--gamma", gamma, "Scaling, comma separated")->delimiter(',');
  exp->add_option("--domain", domain, "auto, box or disc")->check(CLI::IsMember({"auto", "box", "disc"}));

  int samples = 100;
  double time = 0.5;
  std::uint64_t seed = 1;
  auto* conj = app.add_subcommand("check-conjugacy", "Compare the flow with the conjugated linear flow");
  add_common(conj, c);
  conj->add_option("--samples", samples, "Random parameter points in the unit ball")->check(CLI::PositiveNumber);
  conj->add_option("--time", time, "Flow time")->check(CLI::NonNegativeNumber);
  conj->add_option("--seed", seed, "Random seed");
  conj->add_option("--gamma", gamma, "Scaling, comma separated")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const ProblemSpec spec = load_spec(c);

    if (*cont) {
      if (steps < 1) throw InvalidArgument("--steps must be >= 1");
      std::vector<double> params;
      for (int i = 0; i < steps; ++i) params.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
      ContinuationSettings cs;
      cs.criterion = criterion == "proof" ? ScalingCriterion::Proof : ScalingCriterion::Defect;
      cs.weights = weights;
      cs.search.threads = c.threads;
      const Common cc = c;
      const auto family = problem_family(c.problem, param, parse_sets(c.sets),
                                         [cc](ProblemSettings& s) { apply_settings(cc, s); });
      const auto rows = continuation(family, params, cs);
      const auto path = out_dir(c) / (spec.name + "_continuation.csv");
      auto f = open_csv(path);
      std::ostringstream table;
      table << std::setprecision(17);
      int ns = 0;
      for (const auto& r : rows) ns = std::max(ns, r.gamma.dims());
      table << param << ",ok";
      for (int k = 0; k < ns; ++k) table << ",gamma" << k + 1;
      table << ",achieved,area,error\n";
      for (const auto& r : rows) {
        table << r.param << ',' << (r.ok ? 1 : 0);
        for (int k = 0; k < ns; ++k) {
          table << ',';
          if (r.ok) table << r.gamma[k];
        }
        std::string e = r.error;
        std::replace(e.begin(), e.end(), ',', ';');
        std::replace(e.begin(), e.end(), '\n', ' ');
        table << ',' << r.achieved << ',' << r.area << ',' << e << '\n';
      }
      f << table.str();
      out << table.str();
      return kOk;
    }

    const ManifoldProblem problem = build_problem(spec);

    if (*spectrum) {
      out << to_json(problem.spectral, problem.resonance).dump(2) << '\n';
      return kOk;
    }

    NewtonStats stats;
    const Parameterization par = obtain(c, problem, &stats);

    if (*solve) {
      const auto path = out_dir(c) / (spec.name + "_coeffs.json");
      save_coeffs(path.string(), par.coeffs(), par.gamma());
      json summary;
      summary["file"] = path.string();
      summary["n"] = problem.n();
      summary["n_s"] = problem.n_s();
      summary["N"] = problem.N;
      summary["solver"] = c.coeffs.empty() ? c.solver : "file";
      if (c.coeffs.empty() && c.solver == "newton") summary["newton_iterations"] = stats.iterations;
      summary["truncated_residual"] = x_norm(truncated_residual(par));
      summary["defect_at_unit_scaling"] = defect(par, Scaling::uniform(problem.n_s(), 1.0));
      summary["spectrum"] = to_json(problem.spectral, problem.resonance);
      out << summary.dump(2) << '\n';
      return kOk;
    }

    if (*validate) {
      const Scaling g = gamma_or_unit(gamma, problem.n_s());
      if (mode == "defect") {
        const double d = defect(par, g);
        const bool ok = d < problem.epsilon_max;
        out << json{{"mode", "defect"},
                    {"gamma", gamma.empty() ? std::vector<double>(static_cast<std::size_t>(problem.n_s()), 1.0) : gamma},
                    {"defect", d},
                    {"epsilon_max", problem.epsilon_max},
                    {"valid", ok}}
                   .dump(2)
            << '\n';
        return ok ? kOk : kNotValid;
      }
      const Validator v(par);
      const RadiiReport rep = v.prove(g, floating ? BoundMode::Floating : BoundMode::Interval);
      const json j = to_json(rep);
      std::ofstream(out_dir(c) / (spec.name + "_radii.json")) << j.dump(2) << '\n';
      out << j.dump(2) << '\n';
      return rep.valid ? kOk : kNotValid;
    }

    if (*optimize) {
      SearchOptions so;
      so.threads = c.threads;
      ScalingResult r;
      if (method == "area") {
        r = level_set_method1(par, so);
      } else if (method == "ray") {
        std::vector<double> w = weights.empty() ? std::vector<double>(static_cast<std::size_t>(problem.n_s()), 1.0) : weights;
        r = ray_method2(par, w, so);
      } else {
        r = proof_dichotomy(Validator(par), so);
      }
      const auto path = out_dir(c) / (spec.name + "_" + method + ".csv");
      write_samples_csv(path, r, problem.n_s());
      json j = to_json(r);
      j["samples_file"] = path.string();
      out << j.dump(2) << '\n';
      return kOk;
    }

    if (*exp) {
      const Scaling g = gamma_or_unit(gamma, problem.n_s());
      const RealMap f(rescale(par.coeffs(), g), problem.spectral.pairing);
      SampleDomain d = default_domain(problem.spectral);
      if (domain == "box") d.shape = DomainShape::Box;
      if (domain == "disc") d.shape = DomainShape::Disc;
      const SurfaceMesh mesh = sample_surface(f, grid, d);
      const std::string path = out_file.empty() ? (out_dir(c) / (spec.name + "." + format)).string() : out_file;
      std::vector<std::string> warnings;
      if (format == "obj") export_obj(mesh, path, &warnings);
      else export_csv(mesh, path);
      for (const auto& w : warnings) err << "warning: " << w << '\n';
      out << json{{"file", path}, {"vertices", mesh.vertices.size()}, {"triangles", mesh.triangles.size()},
                  {"area", surface_area(mesh)}}
                 .dump(2)
          << '\n';
      return kOk;
    }

    if (*conj) {
      const Parameterization scaled = par.rescaled(gamma_or_unit(gamma, problem.n_s()));
      const ConjugacySummary s = check_conjugacy(scaled, samples, time, seed);
      out << json{{"samples", s.samples}, {"time", time}, {"max_error", s.max_error}, {"mean_error", s.mean_error}}.dump(2)
          << '\n';
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kError;
}

}  // namespace invman::cli
