#pragma once

#include "fitsd/fit_model.hpp"
#include "fitsd/policy.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fitsd {

// Raised when a statistic has no value for the given data (zero MSE etc.).
class UndefinedMetric : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Moments { population, sample };

struct TheilDecomposition {
    double um;
    double us;
    double uc;
};

struct ErrorReport {
    double r_squared;
    double mse;
    double rmspe;  // percent
    bool theil_defined;
    TheilDecomposition theil;
};

TheilDecomposition theil_decomposition(const std::vector<double>& simulated,
                                       const std::vector<double>& historical,
                                       Moments moments = Moments::population);

// The Theil fields are zero and theil_defined false when MSE is zero.
ErrorReport error_metrics(const std::vector<double>& simulated,
                          const std::vector<double>& historical,
                          Moments moments = Moments::population);

struct BehaviorSignature {
    int local_maxima = 0;   // capacity, after 3-point smoothing
    int final_slope = 0;    // -1, 0, +1
    bool debt_emerges = false;
    double debt_onset_year = 0;  // meaningful only when debt_emerges
};

int count_local_maxima(const std::vector<double>& v);
int final_slope_sign(const std::vector<double>& v);

BehaviorSignature classify_behavior(const std::vector<double>& time,
                                    const std::vector<double>& capacity,
                                    const std::vector<double>& debt);

// Same mode: maxima count, final slope and debt emergence agree. Onset years
// are compared only when a finite tolerance is given.
bool same_mode(const BehaviorSignature& a, const BehaviorSignature& b, double onset_tolerance = INFINITY);

struct ValidationFinding {
    enum class Status { pass, fail, out_of_band };
    std::string id;
    std::string description;
    Status status;
    std::string detail;
};

std::string to_string(ValidationFinding::Status s);

std::vector<ValidationFinding> extreme_condition_suite(const ModelParameters& base, const SimulationClock& clock);

struct Perturbation {
    std::string parameter;
    double relative_change;  // +0.7 means +70 %
};

using PerturbationSet = std::vector<Perturbation>;

// build time +70 %, lifetime +30 %, remuneration +20 %, initial price -10 %,
// learning exponent -50 %
PerturbationSet table5_perturbations();

ModelParameters perturb(const ModelParameters& base, const PerturbationSet& set);

struct SensitivityOptions {
    bool each_alone = true;  // also run every perturbation on its own
    double onset_tolerance = INFINITY;
};

// First finding is the joint perturbation; out-of-band marks a perturbed run
// whose capacity never rises above its start (an extreme case, not noise).
std::vector<ValidationFinding> sensitivity_suite(const ModelParameters& base,
                                                 const SimulationClock& clock,
                                                 const PerturbationSet& set,
                                                 const SensitivityOptions& opt = {});

bool findings_ok(const std::vector<ValidationFinding>& findings);

}  // namespace fitsd
