#pragma once

// Internal: JSON codecs shared by the learner and stacking serializers.

#include "json.hpp"
#include "sevstack/learners/learner.hpp"

namespace sevstack::detail {

using Json = nlohmann::ordered_json;

Json model_to_json(const LearnerModel& model);
LearnerModel model_from_json(const nlohmann::json& j);

Json spec_to_json(const LearnerSpec& spec);
LearnerSpec spec_from_json(const nlohmann::json& j);

}  // namespace sevstack::detail
