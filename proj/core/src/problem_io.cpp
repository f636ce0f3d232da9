#include "invman/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "invman/errors.hpp"
#include "invman/expression.hpp"

namespace invman {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& source, const std::string& field, const std::string& what) {
  throw SchemaError(source + ": " + field + ": " + what);
}

double number_or_expression(const json& v, const std::map<std::string, double>& params,
                            const std::string& source, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return evaluate_expression(v.get<std::string>(), params);
    } catch (const SchemaError& e) {
      schema_fail(source, field, e.what());
    }
  }
  schema_fail(source, field, "expected a number or an expression string");
}

int require_int(const json& obj, const char* key, const std::string& source, const std::string& prefix = "") {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_fail(source, prefix + key, "missing");
  if (!it->is_number_integer()) schema_fail(source, prefix + key, "expected an integer");
  return it->get<int>();
}

}  // namespace

ProblemSpec parse_problem_spec(std::string_view json_text, const ParameterOverrides& overrides,
                               const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(source + ": invalid JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) schema_fail(source, "<root>", "expected an object");
  static const std::set<std::string> known{"schema", "name", "description", "n", "variables",
                                           "parameters", "terms", "equilibrium_guess", "stability",
                                           "normalization", "N", "epsilon_max", "r_max"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!known.count(key)) schema_fail(source, key, "unknown field");
  }
  if (require_int(doc, "schema", source) != 1) schema_fail(source, "schema", "only version 1 is supported");

  ProblemSpec spec;
  spec.name = doc.value("name", std::string());
  const int n = require_int(doc, "n", source);
  if (n < 1) schema_fail(source, "n", "must be >= 1");

  std::vector<std::string> variables;
  if (doc.contains("variables")) {
    const auto& vars = doc["variables"];
    if (!vars.is_array() || static_cast<int>(vars.size()) != n) schema_fail(source, "variables", "expected n names");
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!vars[i].is_string()) schema_fail(source, "variables[" + std::to_string(i) + "]", "expected a string");
      variables.push_back(vars[i].get<std::string>());
    }
  }

  std::map<std::string, double> params;
  if (doc.contains("parameters")) {
    const auto& ps = doc["parameters"];
    if (!ps.is_object()) schema_fail(source, "parameters", "expected an object");
    for (const auto& [key, value] : ps.items()) {
      if (value.is_number()) params[key] = value.get<double>();
      else if (!value.is_string()) schema_fail(source, "parameters." + key, "expected a number or an expression string");
    }
    for (const auto& [key, value] : overrides) {
      if (!ps.contains(key)) schema_fail(source, "parameters." + key, "cannot override an undeclared parameter");
      params[key] = value;
    }
    const std::map<std::string, double> numeric = params;
    for (const auto& [key, value] : ps.items()) {
      if (value.is_string() && !overrides.count(key)) {
        params[key] = number_or_expression(value, numeric, source, "parameters." + key);
      }
    }
  } else if (!overrides.empty()) {
    schema_fail(source, "parameters", "overrides given but the file declares no parameters");
  }

  if (!doc.contains("terms") || !doc["terms"].is_array()) schema_fail(source, "terms", "expected an array");
  std::vector<PolyVectorField::ScalarTerm> terms;
  const auto& ts = doc["terms"];
  for (std::size_t t = 0; t < ts.size(); ++t) {
    const std::string prefix = "terms[" + std::to_string(t) + "].";
    const auto& term = ts[t];
    if (!term.is_object()) schema_fail(source, "terms[" + std::to_string(t) + "]", "expected an object");
    const int target = require_int(term, "target", source, prefix);
    if (target < 0 || target >= n) schema_fail(source, prefix + "target", "out of range [0, n)");
    if (!term.contains("exponents") || !term["exponents"].is_array() ||
        static_cast<int>(term["exponents"].size()) != n) {
      schema_fail(source, prefix + "exponents", "expected n non-negative integers");
    }
    std::vector<int> exps;
    for (const auto& e : term["exponents"]) {
      if (!e.is_number_integer() || e.get<int>() < 0) schema_fail(source, prefix + "exponents", "expected n non-negative integers");
      exps.push_back(e.get<int>());
    }
    if (!term.contains("coeff")) schema_fail(source, prefix + "coeff", "missing");
    terms.push_back({target, std::move(exps), number_or_expression(term["coeff"], params, source, prefix + "coeff")});
  }
  spec.field = PolyVectorField::from_scalar_terms(n, terms, params, variables);

  if (!doc.contains("equilibrium_guess") || !doc["equilibrium_guess"].is_array() ||
      static_cast<int>(doc["equilibrium_guess"].size()) != n) {
    schema_fail(source, "equilibrium_guess", "expected n numbers");
  }
  spec.guess.resize(n);
  for (int i = 0; i < n; ++i) {
    spec.guess(i) = number_or_expression(doc["equilibrium_guess"][static_cast<std::size_t>(i)], params, source,
                                         "equilibrium_guess[" + std::to_string(i) + "]");
  }

  const std::string stability = doc.value("stability", std::string("stable"));
  if (stability == "stable") spec.settings.stability = Stability::Stable;
  else if (stability == "unstable") spec.settings.stability = Stability::Unstable;
  else schema_fail(source, "stability", "expected \"stable\" or \"unstable\"");

  const std::string normalization = doc.value("normalization", std::string("unit"));
  if (normalization == "unit") spec.settings.normalization = Normalization::Unit;
  else if (normalization == "max_entry") spec.settings.normalization = Normalization::MaxEntry;
  else schema_fail(source, "normalization", "expected \"unit\" or \"max_entry\"");

  if (doc.contains("N")) spec.settings.N = require_int(doc, "N", source);
  if (doc.contains("epsilon_max")) spec.settings.epsilon_max = number_or_expression(doc["epsilon_max"], params, source, "epsilon_max");
  if (doc.contains("r_max")) spec.settings.r_max = number_or_expression(doc["r_max"], params, source, "r_max");
  return spec;
}

ProblemSpec load_problem_spec(const std::string& path, const ParameterOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open problem file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem_spec(buf.str(), overrides, path);
}

ManifoldProblem build_problem(const ProblemSpec& spec) {
  return build_problem(spec.field, spec.guess, spec.settings);
}

ManifoldProblem load_problem(const std::string& path, const ParameterOverrides& overrides) {
  return build_problem(load_problem_spec(path, overrides));
}

ProblemFamily problem_family(const std::string& path, const std::string& parameter,
                             const ParameterOverrides& base,
                             const std::function<void(ProblemSettings&)>& adjust) {
  // Validate the file and the parameter name once, up front.
  ParameterOverrides probe = base;
  const ProblemSpec spec = load_problem_spec(path, probe);
  if (!spec.field.parameters().count(parameter)) {
    throw SchemaError(path + ": parameters." + parameter + ": not declared");
  }
  return [path, parameter, base, adjust](double value) {
    ParameterOverrides o = base;
    o[parameter] = value;
    ProblemSpec s = load_problem_spec(path, o);
    if (adjust) adjust(s.settings);
    return build_problem(s);
  };
}

}  // namespace invman
