#pragma once

#include <json.hpp>

#include "invman/scaling.hpp"
#include "invman/spectrum.hpp"
#include "invman/validation.hpp"

namespace invman::cli {

nlohmann::json to_json(const SpectralData& s, const ResonanceCheck& resonance);
nlohmann::json to_json(const BoundSet& b);
nlohmann::json to_json(const RadiiReport& r);
nlohmann::json to_json(const ScalingResult& r);
nlohmann::json complex_json(Complex z);

}  // namespace invman::cli
