#pragma once

#include "fitsd/engine.hpp"
#include "fitsd/policy_control.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fitsd {

inline constexpr double hours_per_year = 8760.0;
inline constexpr double unset = std::numeric_limits<double>::quiet_NaN();

// Values the paper states carry their defaults here. Calibration constants
// the paper leaves out are unset and come from the shipped config.
struct EconomicParameters {
    double capacity_factor = unset;
    double initial_fit_price = unset;      // price unit per MWh
    double om_cost = unset;                // price unit per MWh
    double interest_rate = unset;
    double remuneration_period = 20.0;     // years
    double initial_capital_cost = unset;   // price unit per MW
    double learning_exponent = unset;
    double time_to_build = unset;          // years
    double normal_equipment_lifetime = unset;
    double rejection_fraction = 0.5;
    double capacity_target = 5000.0;       // MW
    double res_tax_base = 0.001;           // $/kWh
    double initial_annual_requests = unset;  // MW
    double price_floor = unset;            // minimum price multiplier
    double acceptance_gain = unset;        // k_pen
};

struct SocialEffectSet {
    SigmoidEffect social_tolerance{1.0, 0.05, 7.0};
    SigmoidEffect investor_trust{1.0, 5.0, 4.0};
    SigmoidEffect om_activity{1.0, 5.0, 6.0};
};

struct ExogenousInputs {
    LinearTrend total_generation_capacity{unset, unset, unset};  // MW
    LinearTrend electricity_consumption{unset, unset, unset};    // MWh/year
};

struct InitialStocks {
    double installed_capacity = 120.0;
    double depreciated_capacity = 0.0;
    double suna_debt = 0.0;
    double budget = 2.5e6;
    double total_electricity_production = 0.0;
    double total_fit_payment = 0.0;
};

struct ModelParameters {
    EconomicParameters econ;
    SocialEffectSet effects;
    ExogenousInputs exogenous;
    InitialStocks initial;
    double delay_epsilon = 1.0;        // dollars/year
    bool legacy_average_price = false; // production over payment, as printed

    void validate(const SimulationClock& clock) const;
};

// Annuity present-value factor; n when i == 0.
double annuity_factor(double interest_rate, double periods);

double compute_roi(const EconomicParameters& econ, double fit_price, double capital_cost);

double compute_capital_cost(double cumulative_capacity,
                            const EconomicParameters& econ,
                            double reference_capacity = 120.0);

// Goal-gap rule; an override, when given, replaces it.
double compute_fit_price(double installed,
                         const EconomicParameters& econ,
                         std::optional<double> override_price = std::nullopt);

double compute_social_acceptance(double penetration,
                                 double res_tax,
                                 const SocialEffectSet& effects,
                                 double acceptance_gain);

double compute_delay_in_debt_payment(double suna_debt, double desired_payment, double epsilon = 1.0);

double compute_tendency_to_invest(double roi, double acceptance, double trust);

struct RequestPipeline {
    double annual_requests;
    double approved;
    double construction_rate;
};

RequestPipeline compute_request_pipeline(double prev_requests, double tendency, const EconomicParameters& econ);

struct Depreciation {
    double effective_lifetime;
    double rate;
};

Depreciation compute_depreciation(double installed,
                                  double delay,
                                  const EconomicParameters& econ,
                                  const SocialEffectSet& effects);

struct PaymentAllocation {
    double whole_desired_payment;
    double available_whole_payment;
    double debt_payment;
    double actual_production_payment;
    double debt_creation;
};

PaymentAllocation allocate_payments(double budget, double suna_debt, double desired_payment);

struct ProductionAndPrice {
    double production;        // MWh/year
    double average_price;
    double desired_payment;   // dollars/year
    double payment_inflow;    // into total_fit_payment
};

ProductionAndPrice compute_production_and_price(double installed,
                                                double total_production,
                                                double total_payment,
                                                double current_fit_price,
                                                const EconomicParameters& econ,
                                                bool legacy_average_price = false);

struct ModelState {
    double installed_capacity = 0;
    double depreciated_capacity = 0;
    double suna_debt = 0;
    double budget = 0;
    double total_electricity_production = 0;
    double total_fit_payment = 0;
    double perceived_funding_gap = 0;
};

// Every quantity computed in one evaluation.
struct Derivatives {
    double total_generation_capacity, electricity_consumption;
    double cumulative_capacity, capital_cost;
    double base_fit_price, fit_price, res_tax;
    double roi, penetration_rate, delay_in_debt_payment;
    double social_tolerance, investor_trust, om_activity;
    double social_acceptance, tendency_to_invest;
    double lagged_fit_requests, annual_fit_requests, approved_fit_requests, construction_rate;
    double effective_lifetime, depreciation;
    double electricity_production, average_fit_price, desired_production_payment, fit_payment_inflow;
    PaymentAllocation allocation;
    double budget_increase, budget_decrease;
    double funding_gap, perceived_funding_gap_relative, perception_adjustment;
    bool generation_capacity_exceeded;
};

Derivatives derivatives(const ModelState& state,
                        const ModelParameters& params,
                        const PolicyControl& control,
                        double lagged_requests,
                        double t);

class FitModel : public Model {
public:
    FitModel(ModelParameters params, PolicyControl control);

    std::vector<StockSpec> stocks() const override;
    std::vector<std::string> flow_names() const override;
    std::vector<std::string> auxiliary_names() const override;
    void reset(const SimulationClock& clock) override;
    Evaluation evaluate(int step, double t, const std::vector<double>& stocks) override;
    void commit(int step, double t, const Evaluation& ev) override;

    const ModelParameters& parameters() const { return params_; }
    const PolicyControl& control() const { return control_; }

private:
    ModelParameters params_;
    PolicyControl control_;
    LaggedSeries requests_;
    bool warned_capacity_ = false;
};

RunResult run_fit_model(const ModelParameters& params, const PolicyControl& control, const SimulationClock& clock);

}  // namespace fitsd
