#include "fitsd/parameters.hpp"

#include "fitsd/numfmt.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace fitsd {

namespace {

using Getter = std::function<double&(ModelParameters&)>;

struct Entry {
    ParameterInfo info;
    Getter get;
};

const std::vector<Entry>& entries()
{
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        auto add = [&t](const char* section, const char* key, Getter g) {
            t.push_back({{section, key}, std::move(g)});
        };
#define FIT_ECON(name) add("parameters", #name, [](ModelParameters& p) -> double& { return p.econ.name; })
        FIT_ECON(capacity_factor);
        FIT_ECON(initial_fit_price);
        FIT_ECON(om_cost);
        FIT_ECON(interest_rate);
        FIT_ECON(remuneration_period);
        FIT_ECON(initial_capital_cost);
        FIT_ECON(learning_exponent);
        FIT_ECON(time_to_build);
        FIT_ECON(normal_equipment_lifetime);
        FIT_ECON(rejection_fraction);
        FIT_ECON(capacity_target);
        FIT_ECON(res_tax_base);
        FIT_ECON(initial_annual_requests);
        FIT_ECON(price_floor);
        FIT_ECON(acceptance_gain);
#undef FIT_ECON
#define FIT_INIT(name) \
    add("parameters", "initial_" #name, [](ModelParameters& p) -> double& { return p.initial.name; })
        FIT_INIT(installed_capacity);
        FIT_INIT(depreciated_capacity);
        FIT_INIT(suna_debt);
        FIT_INIT(budget);
        FIT_INIT(total_electricity_production);
        FIT_INIT(total_fit_payment);
#undef FIT_INIT
        add("parameters", "delay_epsilon", [](ModelParameters& p) -> double& { return p.delay_epsilon; });

#define FIT_TREND(prefix, member)                                                                          \
    add("trends", prefix "_intercept", [](ModelParameters& p) -> double& { return p.exogenous.member.intercept; }); \
    add("trends", prefix "_slope", [](ModelParameters& p) -> double& { return p.exogenous.member.slope; });         \
    add("trends", prefix "_reference_year",                                                                \
        [](ModelParameters& p) -> double& { return p.exogenous.member.reference_year; })
        FIT_TREND("generation_capacity", total_generation_capacity);
        FIT_TREND("consumption", electricity_consumption);
#undef FIT_TREND

#define FIT_EFFECT(name)                                                                                  \
    add("effects", #name "_y_max", [](ModelParameters& p) -> double& { return p.effects.name.y_max; });  \
    add("effects", #name "_x_50", [](ModelParameters& p) -> double& { return p.effects.name.x_50; });    \
    add("effects", #name "_p", [](ModelParameters& p) -> double& { return p.effects.name.p; })
        FIT_EFFECT(social_tolerance);
        FIT_EFFECT(investor_trust);
        FIT_EFFECT(om_activity);
#undef FIT_EFFECT
        return t;
    }();
    return table;
}

const Entry* find(const std::string& key)
{
    for (const auto& e : entries())
        if (e.info.key == key)
            return &e;
    return nullptr;
}

}  // namespace

const std::vector<ParameterInfo>& parameter_catalog()
{
    static const std::vector<ParameterInfo> infos = [] {
        std::vector<ParameterInfo> v;
        for (const auto& e : entries())
            v.push_back(e.info);
        return v;
    }();
    return infos;
}

bool is_model_parameter(const std::string& key)
{
    return find(key) != nullptr;
}

double& parameter_ref(ModelParameters& params, const std::string& key)
{
    const Entry* e = find(key);
    if (!e)
        throw InputError("unknown parameter '" + key + "'");
    return e->get(params);
}

double parameter_value(const ModelParameters& params, const std::string& key)
{
    return parameter_ref(const_cast<ModelParameters&>(params), key);
}

const std::vector<std::string>& policy_keys()
{
    static const std::vector<std::string> keys{"fit_price_delta", "fit_price_delta_reading",
                                               "fit_controller_gain", "tax_controller_gain",
                                               "tax_floor", "tax_cap", "perception_time"};
    return keys;
}

bool is_policy_key(const std::string& key)
{
    const auto& k = policy_keys();
    return std::find(k.begin(), k.end(), key) != k.end();
}

void set_policy_value(PolicyControl& c, const std::string& key, const std::string& text)
{
    if (key == "fit_price_delta_reading") {
        if (text == "per_kwh")
            c.delta_reading = DeltaReading::per_kwh;
        else if (text == "per_mwh")
            c.delta_reading = DeltaReading::per_mwh;
        else
            throw InputError(key + ": expected per_kwh or per_mwh, got '" + text + "'");
        return;
    }
    double v = parse_number(text, key);
    if (key == "fit_price_delta")
        c.fit_price_delta = v;
    else if (key == "fit_controller_gain")
        c.fit_controller_gain = v;
    else if (key == "tax_controller_gain")
        c.tax_controller_gain = v;
    else if (key == "tax_floor")
        c.tax_floor = v;
    else if (key == "tax_cap")
        c.tax_cap = v;
    else if (key == "perception_time")
        c.perception_time = v;
    else
        throw InputError("unknown policy key '" + key + "'");
}

std::string policy_value(const PolicyControl& c, const std::string& key)
{
    if (key == "fit_price_delta_reading")
        return c.delta_reading == DeltaReading::per_kwh ? "per_kwh" : "per_mwh";
    if (key == "fit_price_delta")
        return format_number(c.fit_price_delta);
    if (key == "fit_controller_gain")
        return format_number(c.fit_controller_gain);
    if (key == "tax_controller_gain")
        return format_number(c.tax_controller_gain);
    if (key == "tax_floor")
        return format_number(c.tax_floor);
    if (key == "tax_cap")
        return format_number(c.tax_cap);
    if (key == "perception_time")
        return format_number(c.perception_time);
    throw InputError("unknown policy key '" + key + "'");
}

}  // namespace fitsd
