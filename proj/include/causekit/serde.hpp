#pragma once

#include "json.hpp"

#include "causekit/learn.hpp"

namespace causekit {

nlohmann::ordered_json feature_config_to_ordered_json(const FeatureConfig& config);
FeatureConfig feature_config_from_json_value(const nlohmann::json& j);
nlohmann::ordered_json cv_report_to_json(const CVReport& report);

}  // namespace causekit
