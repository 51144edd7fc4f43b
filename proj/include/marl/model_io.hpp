#pragma once

#include <string>

#include "marl/model.hpp"

namespace marl {

/// JSON document with dimensions, flat row-major probability arrays, reward
/// array, gamma and horizon. Load validates stochastic rows at 1e-9.
std::string model_to_json(const DecPomdpModel& model);
DecPomdpModel model_from_json(const std::string& text);

void save_model(const DecPomdpModel& model, const std::string& path);
DecPomdpModel load_model(const std::string& path);

} // namespace marl
