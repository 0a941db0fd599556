#pragma once

#include <optional>
#include <string>

namespace fitsd {

enum class PolicyId { base, p1_higher_fit, p2_budget_adjusted_fit, p3_budget_adjusted_tax };

std::string to_string(PolicyId id);
PolicyId parse_policy_id(const std::string& s);

// How the policy-1 price increase is read. The model's prices sit on the
// same scale as the paper's payment figures, where "$0.03" read per kWh
// maps one to one onto the configured price unit.
enum class DeltaReading { per_kwh, per_mwh };

struct PolicyControl {
    PolicyId id = PolicyId::base;
    double fit_price_delta = 0.03;
    DeltaReading delta_reading = DeltaReading::per_kwh;
    double fit_controller_gain = 0.0;   // p2, dimensionless
    double tax_controller_gain = 0.0;   // p3, ($/kWh) per dollar of perceived gap
    double tax_floor = 0.001;           // $/kWh
    double tax_cap = 0.1;               // $/kWh
    double perception_time = 1.0;       // years, smoothing of the budget signal

    void validate() const;
    double effective_delta() const;
};

struct PolicySignals {
    double perceived_gap = 0.0;           // dollars
    double perceived_gap_relative = 0.0;  // gap over total obligations
};

struct PolicyOverrides {
    std::optional<double> fit_price;  // model price unit
    std::optional<double> res_tax;    // $/kWh
};

PolicyOverrides apply_policy(const PolicyControl& control,
                             double base_fit_price,
                             double base_res_tax,
                             const PolicySignals& signals);

}  // namespace fitsd
