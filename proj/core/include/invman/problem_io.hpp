#pragma once

#include <map>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "invman/parameterization.hpp"
#include "invman/scaling.hpp"

namespace invman {

// Problem file, schema 1:
//   { "schema": 1, "name": str?, "n": int, "variables": [str]?,
//     "parameters": {name: number | expression}?,
//     "terms": [ { "target": int, "exponents": [int], "coeff": number | expression } ],
//     "equilibrium_guess": [number], "stability": "stable" | "unstable",
//     "normalization": "unit" | "max_entry"?, "N": int?, "epsilon_max": number?,
//     "r_max": number? }
// Parameter values given as strings may refer to numeric parameters.
struct ProblemSpec {
  std::string name;
  PolyVectorField field;
  Eigen::VectorXd guess;
  ProblemSettings settings;
};

using ParameterOverrides = std::map<std::string, double>;

// Throws SchemaError naming the offending field, or IoError.
ProblemSpec parse_problem_spec(std::string_view json_text, const ParameterOverrides& overrides = {},
                               const std::string& source = "<string>");
ProblemSpec load_problem_spec(const std::string& path, const ParameterOverrides& overrides = {});

ManifoldProblem build_problem(const ProblemSpec& spec);
ManifoldProblem load_problem(const std::string& path, const ParameterOverrides& overrides = {});

// value ↦ problem with `parameter` overridden, other settings as in `base`.
ProblemFamily problem_family(const std::string& path, const std::string& parameter,
                             const ParameterOverrides& base = {},
                             const std::function<void(ProblemSettings&)>& adjust = {});

}  // namespace invman
