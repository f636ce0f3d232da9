#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "invman/series.hpp"

namespace invman {

// JSON coefficient file:
//   { "n": int, "n_s": int, "N": int, "gamma": [..]?,
//     "components": [ [ {"alpha": [..], "re": x, "im": y}, ... ], ... ] }
// Entries appear in graded order; doubles are written in shortest
// round-trip form.
struct CoeffFile {
  VectorSeq coeffs;
  std::optional<Scaling> gamma;
};

void write_coeffs(std::ostream& out, const VectorSeq& a, const std::optional<Scaling>& gamma = std::nullopt);
void save_coeffs(const std::string& path, const VectorSeq& a, const std::optional<Scaling>& gamma = std::nullopt);

// Throws SchemaError or IoError.
CoeffFile read_coeffs(std::istream& in, const std::string& source = "<stream>");
CoeffFile load_coeffs(const std::string& path);

}  // namespace invman
