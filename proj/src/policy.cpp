#include "fitsd/policy.hpp"

#include "fitsd/numfmt.hpp"
#include "fitsd/parameters.hpp"
#include "fitsd/validation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace fitsd {

std::string to_string(PolicyId id)
{
    switch (id) {
    case PolicyId::base: return "base";
    case PolicyId::p1_higher_fit: return "p1_higher_fit";
    case PolicyId::p2_budget_adjusted_fit: return "p2_budget_adjusted_fit";
    case PolicyId::p3_budget_adjusted_tax: return "p3_budget_adjusted_tax";
    }
    return "unknown";
}

PolicyId parse_policy_id(const std::string& s)
{
    for (auto id : {PolicyId::base, PolicyId::p1_higher_fit, PolicyId::p2_budget_adjusted_fit,
                    PolicyId::p3_budget_adjusted_tax})
        if (s == to_string(id))
            return id;
    throw InputError("unknown policy '" + s + "'");
}

void PolicyControl::validate() const
{
    for (auto [v, key] : {std::pair{fit_price_delta, "fit_price_delta"},
                          {fit_controller_gain, "fit_controller_gain"},
                          {tax_controller_gain, "tax_controller_gain"},
                          {tax_floor, "tax_floor"},
                          {tax_cap, "tax_cap"},
                          {perception_time, "perception_time"}})
        if (!std::isfinite(v))
            throw InputError(std::string(key) + ": non-finite value");
    if (fit_controller_gain < 0 || tax_controller_gain < 0)
        throw InputError("policy gains must be non-negative");
    if (tax_floor < 0 || tax_floor > tax_cap)
        throw InputError("tax_floor must lie in [0, tax_cap]");
    if (tax_cap > 0.1)
        throw InputError("tax_cap must not exceed 0.1 $/kWh");
    if (!(perception_time > 0))
        throw InputError("perception_time must be positive");
}

double PolicyControl::effective_delta() const
{
    return delta_reading == DeltaReading::per_kwh ? fit_price_delta : fit_price_delta / 1000.0;
}

PolicyOverrides apply_policy(const PolicyControl& c, double base_price, double base_tax, const PolicySignals& s)
{
    if (s.perceived_gap < 0 || s.perceived_gap_relative < 0)
        throw InputError("apply_policy: negative budget signal");
    PolicyOverrides o;
    switch (c.id) {
    case PolicyId::base:
        break;
    case PolicyId::p1_higher_fit:
        o.fit_price = base_price + c.effective_delta();
        break;
    case PolicyId::p2_budget_adjusted_fit:
        // multiplier in (0, 1]; back to 1 once the perceived gap clears
        o.fit_price = base_price * (1.0 / (1.0 + c.fit_controller_gain * s.perceived_gap_relative));
        break;
    case PolicyId::p3_budget_adjusted_tax:
        o.res_tax = std::clamp(base_tax + c.tax_controller_gain * s.perceived_gap, c.tax_floor, c.tax_cap);
        break;
    }
    return o;
}

const ScenarioRun* ComparisonReport::find(PolicyId id) const
{
    for (const auto& r : runs)
        if (r.policy == id)
            return &r;
    return nullptr;
}

ModelParameters with_overrides(const ModelParameters& base, const std::map<std::string, double>& overrides)
{
    ModelParameters p = base;
    for (const auto& [k, v] : overrides)
        parameter_ref(p, k) = v;
    return p;
}

RunResult run_scenario(const ModelParameters& base, const Scenario& s)
{
    try {
        return run_fit_model(with_overrides(base, s.overrides), s.policy, s.clock);
    } catch (const InputError& e) {
        throw InputError("scenario '" + s.name + "': " + e.what());
    } catch (const SimulationError& e) {
        throw SimulationError(e.variable(), e.time(), "scenario '" + s.name + "': " + e.what());
    }
}

ComparisonReport run_scenario_suite(const ModelParameters& base, const std::vector<Scenario>& scenarios)
{
    std::vector<std::future<RunResult>> jobs;
    for (const auto& s : scenarios)
        jobs.push_back(std::async(std::launch::async, [&base, &s] { return run_scenario(base, s); }));

    ComparisonReport rep;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        RunResult r = jobs[i].get();
        ComparisonRow row{scenarios[i].name,
                          scenarios[i].policy.id,
                          r.final_value("installed_capacity"),
                          r.final_value("penetration_rate"),
                          r.final_value("tendency_to_invest"),
                          r.final_value("suna_debt"),
                          r.final_value("delay_in_debt_payment")};
        rep.rows.push_back(row);
        rep.runs.push_back({scenarios[i].name, scenarios[i].policy.id, std::move(r)});
    }
    return rep;
}

bool all_passed(const std::vector<Finding>& findings)
{
    return std::all_of(findings.begin(), findings.end(), [](const Finding& f) { return f.passed; });
}

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double first_time_at_least(const RunResult& r, const std::string& var, double level)
{
    const auto& v = r.series(var);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] >= level)
            return r.time[i];
    return INFINITY;
}

}  // namespace

std::vector<Finding> qualitative_checks(const ComparisonReport& rep, const QualitativeOptions& opt)
{
    std::vector<Finding> out;
    const ScenarioRun* b = rep.find(PolicyId::base);
    const ScenarioRun* p1 = rep.find(PolicyId::p1_higher_fit);
    const ScenarioRun* p2 = rep.find(PolicyId::p2_budget_adjusted_fit);
    const ScenarioRun* p3 = rep.find(PolicyId::p3_budget_adjusted_tax);
    if (!b || !p1 || !p2 || !p3) {
        out.push_back({"suite", "report holds base, p1, p2 and p3", false, "missing scenario"});
        return out;
    }
    auto fin = [](const ScenarioRun* s, const char* var) { return s->result.final_value(var); };

    {
        double c0 = fin(p3, "installed_capacity"), c1 = fin(b, "installed_capacity"),
               c2 = fin(p2, "installed_capacity"), c3 = fin(p1, "installed_capacity");
        out.push_back({"a", "final installed capacity: p3 > base > p2 > p1", c0 > c1 && c1 > c2 && c2 > c3,
                       "p3=" + num(c0) + " base=" + num(c1) + " p2=" + num(c2) + " p1=" + num(c3)});
    }
    {
        double d1 = fin(p1, "suna_debt"), d0 = fin(b, "suna_debt"), d2 = fin(p2, "suna_debt"),
               d3 = fin(p3, "suna_debt");
        const auto& s3 = p3->result.series("suna_debt");
        bool p3_clear = std::all_of(s3.begin(), s3.end(), [](double v) { return v == 0; });
        out.push_back({"b", "final debt: p1 > base > p2 >= p3, p3 debt zero throughout",
                       d1 > d0 && d0 > d2 && d2 >= d3 && p3_clear,
                       "p1=" + num(d1) + " base=" + num(d0) + " p2=" + num(d2) + " p3=" + num(d3)
                           + (p3_clear ? "" : " (p3 carried debt)")});
    }
    {
        const RunResult& r = b->result;
        BehaviorSignature sig = classify_behavior(r.time, r.series("installed_capacity"), r.series("suna_debt"));
        bool debt_ok = sig.debt_emerges && sig.debt_onset_year > opt.debt_onset_after;
        out.push_back({"c1", "base: debt emerges after " + num(opt.debt_onset_after), debt_ok,
                       sig.debt_emerges ? "onset " + num(sig.debt_onset_year) : "no debt"});

        const auto& cap = r.series("installed_capacity");
        auto peak = std::max_element(cap.begin(), cap.end());
        std::size_t ip = static_cast<std::size_t>(peak - cap.begin());
        double t_peak = r.time[ip];
        bool peak_ok = sig.local_maxima >= 1 && sig.final_slope < 0 && ip + 1 < cap.size()
            && t_peak >= opt.debt_onset_after - opt.timing_tolerance && cap.back() < *peak;
        out.push_back({"c2", "base: installed capacity peaks, then declines before the horizon ends", peak_ok,
                       "peak " + num(*peak) + " MW at " + num(t_peak) + ", final " + num(cap.back())});

        const auto& bud = r.series("budget");
        auto bpeak = std::max_element(bud.begin(), bud.end());
        bool rise_fall = bpeak != bud.begin() && bpeak + 1 != bud.end() && bud.back() < *bpeak;
        out.push_back({"c3", "base: budget rises, then falls", rise_fall,
                       "start " + num(bud.front()) + ", max " + num(*bpeak) + ", final " + num(bud.back())});

        double debt = r.final_value("suna_debt"), budget = bud.back();
        out.push_back({"c4", "base: final debt exceeds final budget", debt > budget,
                       "debt " + num(debt) + ", budget " + num(budget)});
    }
    {
        double t1 = first_time_at_least(p1->result, "installed_capacity", 5000.0);
        double t0 = first_time_at_least(b->result, "installed_capacity", 5000.0);
        out.push_back({"d", "p1 reaches 5000 MW no later than base", std::isfinite(t1) && t1 <= t0,
                       "p1 " + num(t1) + ", base " + num(t0)});
    }
    {
        const auto& tend = p2->result.series("tendency_to_invest");
        auto trough = std::min_element(tend.begin(), tend.end());
        bool dipped = *trough < 0.5 * tend.front();
        bool recovered = trough + 1 != tend.end() && tend.back() - *trough > 0.05 * tend.front();
        out.push_back({"e", "p2 tendency recovers after its trough", dipped && recovered,
                       "start " + num(tend.front()) + ", trough " + num(*trough) + ", final " + num(tend.back())});
    }
    {
        const auto& t3 = p3->result.series("tendency_to_invest");
        out.push_back({"f", "p3 final tendency exceeds its starting value", t3.back() > t3.front(),
                       "start " + num(t3.front()) + ", final " + num(t3.back())});
        const auto& t1 = p1->result.series("tendency_to_invest");
        out.push_back({"g", "p1 final tendency below 0.1 of its starting value", t1.back() < 0.1 * t1.front(),
                       "start " + num(t1.front()) + ", final " + num(t1.back())});
    }
    return out;
}

}  // namespace fitsd
