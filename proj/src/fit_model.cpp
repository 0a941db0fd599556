#include "fitsd/fit_model.hpp"

#include <algorithm>
#include <cmath>

namespace fitsd {

namespace {

void require(bool ok, const std::string& key, const std::string& what)
{
    if (!ok)
        throw InputError(key + ": " + what);
}

void require_set(double v, const std::string& key)
{
    require(std::isfinite(v), key, "missing or non-finite value");
}

}  // namespace

void ModelParameters::validate(const SimulationClock& clock) const
{
    const auto& e = econ;
    for (auto [v, key] : {std::pair{e.capacity_factor, "capacity_factor"},
                          {e.initial_fit_price, "initial_fit_price"},
                          {e.om_cost, "om_cost"},
                          {e.interest_rate, "interest_rate"},
                          {e.remuneration_period, "remuneration_period"},
                          {e.initial_capital_cost, "initial_capital_cost"},
                          {e.learning_exponent, "learning_exponent"},
                          {e.time_to_build, "time_to_build"},
                          {e.normal_equipment_lifetime, "normal_equipment_lifetime"},
                          {e.rejection_fraction, "rejection_fraction"},
                          {e.capacity_target, "capacity_target"},
                          {e.res_tax_base, "res_tax_base"},
                          {e.initial_annual_requests, "initial_annual_requests"},
                          {e.price_floor, "price_floor"},
                          {e.acceptance_gain, "acceptance_gain"},
                          {delay_epsilon, "delay_epsilon"}})
        require_set(v, key);

    require(e.capacity_factor > 0 && e.capacity_factor <= 1, "capacity_factor", "must be in (0, 1]");
    require(e.initial_fit_price > 0, "initial_fit_price", "must be positive");
    require(e.om_cost > 0, "om_cost", "must be positive");
    require(e.interest_rate >= 0, "interest_rate", "must be non-negative");
    require(e.remuneration_period >= 1, "remuneration_period", "must be at least 1");
    require(e.initial_capital_cost > 0, "initial_capital_cost", "must be positive");
    require(e.learning_exponent >= 0, "learning_exponent", "must be non-negative");
    require(e.time_to_build > 0, "time_to_build", "must be positive");
    require(e.normal_equipment_lifetime > 0, "normal_equipment_lifetime", "must be positive");
    require(e.rejection_fraction >= 0 && e.rejection_fraction <= 1, "rejection_fraction", "must be in [0, 1]");
    require(e.capacity_target > 0, "capacity_target", "must be positive");
    require(e.res_tax_base >= 0, "res_tax_base", "must be non-negative");
    require(e.initial_annual_requests >= 0, "initial_annual_requests", "must be non-negative");
    require(e.price_floor >= 0 && e.price_floor <= 1, "price_floor", "must be in [0, 1]");
    require(e.acceptance_gain >= 0, "acceptance_gain", "must be non-negative");
    require(delay_epsilon > 0, "delay_epsilon", "must be positive");

    effects.social_tolerance.validate();
    effects.investor_trust.validate();
    effects.om_activity.validate();

    for (auto [tr, name] : {std::pair{&exogenous.total_generation_capacity, "generation_capacity"},
                            {&exogenous.electricity_consumption, "consumption"}}) {
        require_set(tr->intercept, std::string(name) + "_intercept");
        require_set(tr->slope, std::string(name) + "_slope");
        require_set(tr->reference_year, std::string(name) + "_reference_year");
        tr->check_positive(clock, name);
    }

    const auto& s = initial;
    for (auto [v, key] : {std::pair{s.installed_capacity, "initial_installed_capacity"},
                          {s.depreciated_capacity, "initial_depreciated_capacity"},
                          {s.suna_debt, "initial_suna_debt"},
                          {s.budget, "initial_budget"},
                          {s.total_electricity_production, "initial_total_electricity_production"},
                          {s.total_fit_payment, "initial_total_fit_payment"}}) {
        require_set(v, key);
        require(v >= 0, key, "must be non-negative");
    }
    require(s.installed_capacity + s.depreciated_capacity > 0, "initial_installed_capacity",
            "cumulative capacity must be positive");
}

double annuity_factor(double i, double n)
{
    if (i == 0)
        return n;
    double g = std::pow(1 + i, n);
    return (g - 1) / (i * g);
}

double compute_roi(const EconomicParameters& econ, double fit_price, double capital_cost)
{
    if (!(capital_cost > 0))
        throw InputError("compute_roi: capital cost must be positive");
    if (econ.remuneration_period < 1)
        throw InputError("compute_roi: remuneration period must be at least 1");
    double a = annuity_factor(econ.interest_rate, econ.remuneration_period);
    double revenue = econ.capacity_factor * hours_per_year * (fit_price - econ.om_cost);
    return (revenue * a - capital_cost) / capital_cost;
}

double compute_capital_cost(double cumulative, const EconomicParameters& econ, double reference)
{
    if (!(cumulative > 0))
        throw InputError("compute_capital_cost: cumulative capacity must be positive");
    return econ.initial_capital_cost * std::pow(cumulative / reference, -econ.learning_exponent);
}

double compute_fit_price(double installed, const EconomicParameters& econ, std::optional<double> override_price)
{
    if (override_price)
        return *override_price;
    double gap = std::max(0.0, (econ.capacity_target - installed) / econ.capacity_target);
    return econ.initial_fit_price * std::min(std::max(gap, econ.price_floor), 1.0);
}

double compute_social_acceptance(double penetration, double res_tax, const SocialEffectSet& effects, double gain)
{
    if (penetration < 0 || penetration > 1)
        throw InputError("compute_social_acceptance: penetration outside [0, 1]");
    return (1 + gain * penetration) * eval_inverted_sigmoid(effects.social_tolerance, res_tax);
}

double compute_delay_in_debt_payment(double debt, double desired, double epsilon)
{
    if (debt < 0 || desired < 0)
        throw InputError("compute_delay_in_debt_payment: negative input");
    return debt / std::max(desired, epsilon);
}

double compute_tendency_to_invest(double roi, double acceptance, double trust)
{
    return std::max(0.0, roi) * acceptance * trust;
}

RequestPipeline compute_request_pipeline(double prev, double tendency, const EconomicParameters& econ)
{
    if (prev < 0 || tendency < 0)
        throw InputError("compute_request_pipeline: negative input");
    RequestPipeline r{};
    r.annual_requests = prev * tendency;
    r.approved = r.annual_requests * (1 - econ.rejection_fraction);
    r.construction_rate = r.approved / econ.time_to_build;
    return r;
}

Depreciation compute_depreciation(double installed, double delay, const EconomicParameters& econ,
                                  const SocialEffectSet& effects)
{
    if (installed < 0 || delay < 0)
        throw InputError("compute_depreciation: negative input");
    double life = std::max(1.0, econ.normal_equipment_lifetime * eval_inverted_sigmoid(effects.om_activity, delay));
    return {life, installed / life};
}

PaymentAllocation allocate_payments(double budget, double debt, double desired)
{
    if (budget < 0 || debt < 0 || desired < 0)
        throw InputError("allocate_payments: negative input");
    PaymentAllocation a{};
    a.whole_desired_payment = debt + desired;
    a.available_whole_payment = std::min(budget, a.whole_desired_payment);
    a.debt_payment = std::min(a.available_whole_payment, debt);
    // debt is served first; what is left goes to current production
    a.actual_production_payment = std::min(std::max(a.available_whole_payment - debt, 0.0), desired);
    a.debt_creation = desired - a.actual_production_payment;
    return a;
}

ProductionAndPrice compute_production_and_price(double installed, double total_production, double total_payment,
                                                double price, const EconomicParameters& econ, bool legacy)
{
    if (installed < 0)
        throw InputError("compute_production_and_price: negative capacity");
    ProductionAndPrice r{};
    r.production = installed * econ.capacity_factor * hours_per_year;
    if (legacy)
        r.average_price = total_payment > 0 ? total_production / total_payment : price;
    else
        r.average_price = total_production > 0 ? total_payment / total_production : price;
    r.desired_payment = r.production * r.average_price;
    r.payment_inflow = r.production * price;
    return r;
}

Derivatives derivatives(const ModelState& s, const ModelParameters& params, const PolicyControl& control,
                        double lagged_requests, double t)
{
    const auto& econ = params.econ;
    const auto& fx = params.effects;
    Derivatives d{};

    d.total_generation_capacity = eval_linear_trend(params.exogenous.total_generation_capacity, t);
    d.electricity_consumption = eval_linear_trend(params.exogenous.electricity_consumption, t);

    d.cumulative_capacity = s.installed_capacity + s.depreciated_capacity;
    const double reference = params.initial.installed_capacity + params.initial.depreciated_capacity;
    d.capital_cost = compute_capital_cost(d.cumulative_capacity, econ, reference);

    d.base_fit_price = compute_fit_price(s.installed_capacity, econ);
    const double production = s.installed_capacity * econ.capacity_factor * hours_per_year;
    const double prior_avg = s.total_electricity_production > 0
        ? s.total_fit_payment / s.total_electricity_production : d.base_fit_price;
    d.perceived_funding_gap_relative = s.perceived_funding_gap / std::max(s.suna_debt + production * prior_avg, 1.0);

    PolicySignals sig{s.perceived_funding_gap, d.perceived_funding_gap_relative};
    PolicyOverrides ov = apply_policy(control, d.base_fit_price, econ.res_tax_base, sig);
    d.fit_price = compute_fit_price(s.installed_capacity, econ, ov.fit_price);
    d.res_tax = ov.res_tax.value_or(econ.res_tax_base);

    d.roi = compute_roi(econ, d.fit_price, d.capital_cost);
    d.generation_capacity_exceeded = s.installed_capacity > d.total_generation_capacity;
    d.penetration_rate = std::min(1.0, s.installed_capacity / d.total_generation_capacity);

    auto pp = compute_production_and_price(s.installed_capacity, s.total_electricity_production,
                                           s.total_fit_payment, d.fit_price, econ, params.legacy_average_price);
    d.electricity_production = pp.production;
    d.average_fit_price = pp.average_price;
    d.desired_production_payment = pp.desired_payment;
    d.fit_payment_inflow = pp.payment_inflow;

    d.delay_in_debt_payment = compute_delay_in_debt_payment(s.suna_debt, d.desired_production_payment,
                                                            params.delay_epsilon);
    d.investor_trust = eval_inverted_sigmoid(fx.investor_trust, d.delay_in_debt_payment);
    d.om_activity = eval_inverted_sigmoid(fx.om_activity, d.delay_in_debt_payment);
    d.social_tolerance = eval_inverted_sigmoid(fx.social_tolerance, d.res_tax);
    d.social_acceptance = compute_social_acceptance(d.penetration_rate, d.res_tax, fx, econ.acceptance_gain);
    d.tendency_to_invest = compute_tendency_to_invest(d.roi, d.social_acceptance, d.investor_trust);

    d.lagged_fit_requests = lagged_requests;
    auto rp = compute_request_pipeline(lagged_requests, d.tendency_to_invest, econ);
    d.annual_fit_requests = rp.annual_requests;
    d.approved_fit_requests = rp.approved;
    d.construction_rate = rp.construction_rate;

    auto dep = compute_depreciation(s.installed_capacity, d.delay_in_debt_payment, econ, fx);
    d.effective_lifetime = dep.effective_lifetime;
    d.depreciation = dep.rate;

    d.allocation = allocate_payments(s.budget, s.suna_debt, d.desired_production_payment);
    d.budget_increase = d.electricity_consumption * d.res_tax * 1000.0;
    d.budget_decrease = d.allocation.debt_payment + d.allocation.actual_production_payment;

    d.funding_gap = std::max(0.0, d.allocation.whole_desired_payment - d.budget_increase);
    d.perception_adjustment = (d.funding_gap - s.perceived_funding_gap) / control.perception_time;
    return d;
}

FitModel::FitModel(ModelParameters params, PolicyControl control)
    : params_(std::move(params)), control_(control)
{
    control_.validate();
}

std::vector<StockSpec> FitModel::stocks() const
{
    const auto& i = params_.initial;
    return {
        {"installed_capacity", i.installed_capacity, true},
        {"depreciated_capacity", i.depreciated_capacity, true},
        {"suna_debt", i.suna_debt, true},
        {"budget", i.budget, true},
        {"total_electricity_production", i.total_electricity_production, true},
        {"total_fit_payment", i.total_fit_payment, true},
        {"perceived_funding_gap", 0.0, true},
    };
}

std::vector<std::string> FitModel::flow_names() const
{
    return {"construction_rate", "depreciation", "debt_creation", "debt_payment",
            "budget_increase", "budget_decrease", "electricity_production", "fit_payment_inflow",
            "perception_adjustment"};
}

std::vector<std::string> FitModel::auxiliary_names() const
{
    return {"actual_production_payment", "annual_fit_requests", "approved_fit_requests",
            "available_whole_payment", "average_fit_price", "base_fit_price", "capital_cost",
            "cumulative_capacity", "delay_in_debt_payment", "desired_production_payment",
            "effective_lifetime", "electricity_consumption", "fit_price", "funding_gap",
            "investor_trust", "lagged_fit_requests", "om_activity", "penetration_rate",
            "perceived_funding_gap_relative", "res_tax", "roi", "social_acceptance",
            "social_tolerance", "tendency_to_invest", "total_generation_capacity",
            "whole_desired_payment"};
}

void FitModel::reset(const SimulationClock& clock)
{
    params_.validate(clock);
    requests_ = LaggedSeries(1.0, params_.econ.initial_annual_requests, clock.start_year, clock.dt);
    warned_capacity_ = false;
}

Evaluation FitModel::evaluate(int step, double t, const std::vector<double>& v)
{
    (void)step;
    ModelState s{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    Derivatives d = derivatives(s, params_, control_, requests_.lookup(t), t);

    Evaluation ev;
    ev.rates = {
        d.construction_rate - d.depreciation,
        d.depreciation,
        d.allocation.debt_creation - d.allocation.debt_payment,
        d.budget_increase - d.budget_decrease,
        d.electricity_production,
        d.fit_payment_inflow,
        d.perception_adjustment,
    };
    ev.flows = {d.construction_rate, d.depreciation, d.allocation.debt_creation, d.allocation.debt_payment,
                d.budget_increase, d.budget_decrease, d.electricity_production, d.fit_payment_inflow,
                d.perception_adjustment};
    ev.auxiliaries = {d.allocation.actual_production_payment, d.annual_fit_requests, d.approved_fit_requests,
                      d.allocation.available_whole_payment, d.average_fit_price, d.base_fit_price,
                      d.capital_cost, d.cumulative_capacity, d.delay_in_debt_payment,
                      d.desired_production_payment, d.effective_lifetime, d.electricity_consumption,
                      d.fit_price, d.funding_gap, d.investor_trust, d.lagged_fit_requests, d.om_activity,
                      d.penetration_rate, d.perceived_funding_gap_relative, d.res_tax, d.roi,
                      d.social_acceptance, d.social_tolerance, d.tendency_to_invest,
                      d.total_generation_capacity, d.allocation.whole_desired_payment};
    if (d.generation_capacity_exceeded && !warned_capacity_) {
        warned_capacity_ = true;
        ev.notices.push_back({t, "installed_capacity", "exceeds total generation capacity; penetration capped at 1"});
    }
    return ev;
}

void FitModel::commit(int step, double t, const Evaluation& ev)
{
    (void)t;
    constexpr std::size_t annual_requests_index = 1;  // see auxiliary_names()
    requests_.record(step, ev.auxiliaries[annual_requests_index]);
}

RunResult run_fit_model(const ModelParameters& params, const PolicyControl& control, const SimulationClock& clock)
{
    FitModel model(params, control);
    return run_simulation(model, clock);
}

}  // namespace fitsd
