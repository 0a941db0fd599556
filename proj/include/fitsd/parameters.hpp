#pragma once

#include "fitsd/fit_model.hpp"

#include <string>
#include <vector>

namespace fitsd {

struct ParameterInfo {
    std::string section;  // parameters | trends | effects
    std::string key;
};

// All numeric model parameters addressable by name, in config order.
const std::vector<ParameterInfo>& parameter_catalog();

bool is_model_parameter(const std::string& key);

// Throws InputError for unknown names.
double& parameter_ref(ModelParameters& params, const std::string& key);
double parameter_value(const ModelParameters& params, const std::string& key);

// Policy keys shared by every scenario ([policy] section).
const std::vector<std::string>& policy_keys();
bool is_policy_key(const std::string& key);
void set_policy_value(PolicyControl& control, const std::string& key, const std::string& text);
std::string policy_value(const PolicyControl& control, const std::string& key);

}  // namespace fitsd
