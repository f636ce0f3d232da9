#include "invman/coeff_io.hpp"

#include <fstream>

#include <json.hpp>

#include "invman/errors.hpp"

namespace invman {

using nlohmann::json;

void write_coeffs(std::ostream& out, const VectorSeq& a, const std::optional<Scaling>& gamma) {
  const auto& ord = a.ordering();
  json doc;
  doc["n"] = a.n();
  doc["n_s"] = a.dims();
  doc["N"] = a.max_order();
  if (gamma) doc["gamma"] = std::vector<double>(gamma->values().begin(), gamma->values().end());
  json comps = json::array();
  for (int i = 0; i < a.n(); ++i) {
    json entries = json::array();
    for (std::size_t pos = 0; pos < ord.size(); ++pos) {
      const auto alpha = ord.exponents(pos);
      entries.push_back({{"alpha", std::vector<int>(alpha.begin(), alpha.end())},
                         {"re", a[i][pos].real()},
                         {"im", a[i][pos].imag()}});
    }
    comps.push_back(std::move(entries));
  }
  doc["components"] = std::move(comps);
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("write_coeffs: stream write failed");
}

void save_coeffs(const std::string& path, const VectorSeq& a, const std::optional<Scaling>& gamma) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_coeffs(out, a, gamma);
}

CoeffFile read_coeffs(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(source + ": invalid JSON (" + e.what() + ")");
  }
  auto need_int = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) throw SchemaError(source + ": " + key + ": expected an integer");
    return doc[key].get<int>();
  };
  const int n = need_int("n");
  const int ns = need_int("n_s");
  const int N = need_int("N");
  if (n < 1 || ns < 1 || N < 1) throw SchemaError(source + ": n, n_s and N must be positive");
  VectorSeq a(n, GradedOrdering::make(ns, N));
  const auto& ord = a.ordering();
  if (!doc.contains("components") || !doc["components"].is_array() || static_cast<int>(doc["components"].size()) != n) {
    throw SchemaError(source + ": components: expected n arrays");
  }
  for (int i = 0; i < n; ++i) {
    for (const auto& e : doc["components"][static_cast<std::size_t>(i)]) {
      const std::string where = source + ": components[" + std::to_string(i) + "]";
      if (!e.contains("alpha") || !e.contains("re") || !e.contains("im")) throw SchemaError(where + ": entry needs alpha, re, im");
      const auto alpha = e["alpha"].get<std::vector<int>>();
      if (static_cast<int>(alpha.size()) != ns) throw SchemaError(where + ": alpha has wrong length");
      int order = 0;
      for (int x : alpha) {
        if (x < 0) throw SchemaError(where + ": negative exponent");
        order += x;
      }
      if (order >= N) throw SchemaError(where + ": |alpha| >= N");
      a[i][ord.position(alpha)] = Complex(e["re"].get<double>(), e["im"].get<double>());
    }
  }
  CoeffFile f{std::move(a), std::nullopt};
  if (doc.contains("gamma")) f.gamma = Scaling(doc["gamma"].get<std::vector<double>>());
  return f;
}

CoeffFile load_coeffs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coefficient file '" + path + "'");
  return read_coeffs(in, path);
}

}  // namespace invman
