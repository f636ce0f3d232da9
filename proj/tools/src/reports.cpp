#include "invman_cli/reports.hpp"

#include <cmath>

namespace invman::cli {

using nlohmann::json;

namespace {

json gamma_json(const Scaling& g) { return std::vector<double>(g.values().begin(), g.values().end()); }

// JSON has no infinity; null stands for an unbounded value.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const SpectralData& s, const ResonanceCheck& resonance) {
  json j;
  j["equilibrium"] = std::vector<double>(s.p.data(), s.p.data() + s.p.size());
  j["eigenvalues"] = json::array();
  j["eigenvectors"] = json::array();
  for (int k = 0; k < s.n_s(); ++k) {
    j["eigenvalues"].push_back(complex_json(s.lambdas[static_cast<std::size_t>(k)]));
    json v = json::array();
    for (int i = 0; i < s.n(); ++i) v.push_back(complex_json(s.vectors[static_cast<std::size_t>(k)](i)));
    j["eigenvectors"].push_back(std::move(v));
  }
  j["pairing"] = json::array();
  for (auto [k, l] : s.pairing) j["pairing"].push_back({k, l});
  j["time_reversed"] = s.time_reversed;
  j["nonresonance"] = {{"passed", true}, {"max_order", resonance.max_order}, {"closest", resonance.closest}};
  return j;
}

json to_json(const BoundSet& b) {
  return {{"Y", b.Y}, {"Z0", b.Z0}, {"Z1", b.Z1}, {"Z2", b.Z2}, {"gamma", gamma_json(b.gamma)},
          {"interval_mode", b.mode == BoundMode::Interval}, {"from_scratch", b.from_scratch}};
}

json to_json(const RadiiReport& r) {
  json j;
  j["bounds"] = to_json(r.bounds);
  j["polynomials"] = json::array();
  for (const auto& p : r.polynomials) j["polynomials"].push_back({{"c0", p[0]}, {"c1", p[1]}, {"c2", p[2]}});
  if (r.roots) {
    j["root_interval"] = {{"r0", r.roots->r0}, {"r1", finite_or_null(r.roots->r1)}};
  } else {
    j["root_interval"] = nullptr;
  }
  j["valid"] = r.valid;
  j["r_used"] = r.r_used;
  j["r_max"] = r.r_max;
  j["N"] = r.N;
  j["gamma"] = gamma_json(r.bounds.gamma);
  j["interval_mode"] = r.bounds.mode == BoundMode::Interval;
  j["injectivity"] = "Z0 < 1 on the finite block, nonzero tail diagonal by non-resonance";
  j["reason"] = r.reason;
  return j;
}

json to_json(const ScalingResult& r) {
  return {{"gamma", gamma_json(r.gamma_opt)},
          {"criterion", r.criterion == ScalingCriterion::Proof ? "proof" : "defect"},
          {"achieved", r.achieved},
          {"area", r.area},
          {"capped", r.capped},
          {"samples", r.samples.size()}};
}

}  // namespace invman::cli
