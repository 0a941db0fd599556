#pragma once

#include "fitsd/fit_model.hpp"
#include "fitsd/policy_control.hpp"

#include <map>
#include <string>
#include <vector>

namespace fitsd {

struct Scenario {
    std::string name;
    SimulationClock clock;
    std::map<std::string, double> overrides;  // model parameter name -> value
    PolicyControl policy;
};

struct ScenarioRun {
    std::string name;
    PolicyId policy;
    RunResult result;
};

struct ComparisonRow {
    std::string scenario;
    PolicyId policy;
    double installed_capacity;
    double penetration_rate;
    double tendency_to_invest;
    double suna_debt;
    double delay_in_debt_payment;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::vector<ScenarioRun> runs;

    // First run using the given policy, or nullptr.
    const ScenarioRun* find(PolicyId id) const;
};

ModelParameters with_overrides(const ModelParameters& base, const std::map<std::string, double>& overrides);

RunResult run_scenario(const ModelParameters& base, const Scenario& scenario);

// Scenarios run concurrently; the report keeps input order.
ComparisonReport run_scenario_suite(const ModelParameters& base, const std::vector<Scenario>& scenarios);

struct Finding {
    std::string id;
    std::string description;
    bool passed;
    std::string detail;
};

bool all_passed(const std::vector<Finding>& findings);

struct QualitativeOptions {
    double debt_onset_after = 2021.0;  // year
    double timing_tolerance = 3.0;     // years, for the capacity peak
};

std::vector<Finding> qualitative_checks(const ComparisonReport& report, const QualitativeOptions& opt = {});

}  // namespace fitsd
