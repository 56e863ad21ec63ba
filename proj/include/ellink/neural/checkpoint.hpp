#pragma once

#include <json.hpp>

#include "ellink/neural/encoder.hpp"

namespace ellink::neural {

// Self-describing checkpoint pieces; model files embed these next to a
// mandatory format_version and kind field.

nlohmann::json config_to_json(const EncoderConfig& cfg);
EncoderConfig config_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const EncoderParams& params);

// Shapes come from `cfg`; tensor mismatches raise ParseError.
EncoderParams params_from_json(const nlohmann::json& j, const EncoderConfig& cfg);

nlohmann::json model_to_json(const EncoderModel& model);
EncoderModel model_from_json(const nlohmann::json& j);

}  // namespace ellink::neural
