#pragma once

#include <cvdyn/gravity.hpp>
#include <cvdyn/lindblad.hpp>
#include <cvdyn/symplectic.hpp>

#include <json.hpp>

#include <string>

namespace cvdyn::io {

// JSON wire format: real matrices are arrays of row arrays of finite
// numbers; complex matrices use [re, im] pairs (plain numbers are accepted
// on input as purely real). Objects reject unknown fields outright so a
// typo in a config never silently falls back to a default.

nlohmann::json to_json(const Mat& m);
nlohmann::json to_json(const CMat& m);
nlohmann::json to_json(const GaussianState& state);
nlohmann::json to_json(const QuadraticGenerator& gen);
nlohmann::json to_json(const gravity::Scenario& s);

Mat mat_from_json(const nlohmann::json& j, const std::string& what = "matrix");
CMat cmat_from_json(const nlohmann::json& j, const std::string& what = "matrix");
GaussianState state_from_json(const nlohmann::json& j);
QuadraticGenerator generator_from_json(const nlohmann::json& j);

// every scenario field is optional and defaults to the reference setup
gravity::Scenario scenario_from_json(const nlohmann::json& j);

std::string to_string(gravity::Model m);
gravity::Model model_from_string(const std::string& name);

} // namespace cvdyn::io
