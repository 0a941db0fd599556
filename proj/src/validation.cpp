#include "fitsd/validation.hpp"

#include "fitsd/parameters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fitsd {

namespace {

void check_pair(const std::vector<double>& s, const std::vector<double>& h)
{
    if (s.size() != h.size())
        throw InputError("series lengths differ (" + std::to_string(s.size()) + " vs "
                         + std::to_string(h.size()) + ")");
    if (s.size() < 2)
        throw InputError("need at least two observations");
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!std::isfinite(s[i]) || !std::isfinite(h[i]))
            throw InputError("non-finite value at index " + std::to_string(i));
}

double mean(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double mse_of(const std::vector<double>& s, const std::vector<double>& h)
{
    double acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        acc += (s[i] - h[i]) * (s[i] - h[i]);
    return acc / static_cast<double>(s.size());
}

std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

TheilDecomposition theil_decomposition(const std::vector<double>& s, const std::vector<double>& h, Moments m)
{
    check_pair(s, h);
    const double n = static_cast<double>(s.size());
    const double mse = mse_of(s, h);
    if (mse == 0)
        throw UndefinedMetric("Theil decomposition undefined: MSE is zero");

    const double ms = mean(s), mh = mean(h);
    double vs = 0, vh = 0, cov = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        vs += (s[i] - ms) * (s[i] - ms);
        vh += (h[i] - mh) * (h[i] - mh);
        cov += (s[i] - ms) * (h[i] - mh);
    }
    const double denom = m == Moments::population ? n : n - 1;
    const double ss = std::sqrt(vs / denom), sh = std::sqrt(vh / denom);
    // 2(1-r) ss sh = 2(ss sh - cov); avoids dividing by a zero deviation
    const double c = cov / denom;

    TheilDecomposition t{};
    t.um = (ms - mh) * (ms - mh) / mse;
    t.us = (ss - sh) * (ss - sh) / mse;
    t.uc = 2 * (ss * sh - c) / mse;
    return t;
}

ErrorReport error_metrics(const std::vector<double>& s, const std::vector<double>& h, Moments m)
{
    check_pair(s, h);
    const double n = static_cast<double>(s.size());
    ErrorReport r{};
    r.mse = mse_of(s, h);

    double pct = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (h[i] == 0)
            throw UndefinedMetric("RMSPE undefined: historical value is zero at index " + std::to_string(i));
        double e = (s[i] - h[i]) / h[i];
        pct += e * e;
    }
    r.rmspe = 100.0 * std::sqrt(pct / n);

    const double mh = mean(h);
    double ss_tot = 0;
    for (double v : h)
        ss_tot += (v - mh) * (v - mh);
    if (ss_tot == 0)
        throw UndefinedMetric("R-squared undefined: historical series is constant");
    r.r_squared = 1.0 - r.mse * n / ss_tot;

    if (r.mse > 0) {
        r.theil = theil_decomposition(s, h, m);
        r.theil_defined = true;
    }
    return r;
}

int count_local_maxima(const std::vector<double>& v)
{
    if (v.size() < 3)
        return 0;
    std::vector<double> s(v.size());
    s.front() = v.front();
    s.back() = v.back();
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        s[i] = (v[i - 1] + v[i] + v[i + 1]) / 3.0;
    double scale = 0;
    for (double x : s)
        scale = std::max(scale, std::fabs(x));
    if (scale == 0)
        return 0;
    int count = 0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
        if (s[i] > s[i - 1] && s[i] >= s[i + 1] && s[i] > 1e-9 * scale)
            ++count;
    return count;
}

int final_slope_sign(const std::vector<double>& v)
{
    if (v.size() < 2)
        return 0;
    double scale = 0;
    for (double x : v)
        scale = std::max(scale, std::fabs(x));
    double d = v[v.size() - 1] - v[v.size() - 2];
    if (std::fabs(d) <= 1e-9 * scale)
        return 0;
    return d > 0 ? 1 : -1;
}

BehaviorSignature classify_behavior(const std::vector<double>& time,
                                    const std::vector<double>& capacity,
                                    const std::vector<double>& debt)
{
    if (time.size() != capacity.size() || time.size() != debt.size())
        throw InputError("classify_behavior: series lengths differ");
    BehaviorSignature sig;
    sig.local_maxima = count_local_maxima(capacity);
    sig.final_slope = final_slope_sign(capacity);
    for (std::size_t i = 0; i < debt.size(); ++i)
        if (debt[i] > 0) {
            sig.debt_emerges = true;
            sig.debt_onset_year = time[i];
            break;
        }
    return sig;
}

bool same_mode(const BehaviorSignature& a, const BehaviorSignature& b, double tol)
{
    if (a.local_maxima != b.local_maxima || a.final_slope != b.final_slope || a.debt_emerges != b.debt_emerges)
        return false;
    if (a.debt_emerges && std::isfinite(tol))
        return std::fabs(a.debt_onset_year - b.debt_onset_year) <= tol;
    return true;
}

std::string to_string(ValidationFinding::Status s)
{
    switch (s) {
    case ValidationFinding::Status::pass: return "pass";
    case ValidationFinding::Status::fail: return "fail";
    case ValidationFinding::Status::out_of_band: return "out-of-band";
    }
    return "?";
}

bool findings_ok(const std::vector<ValidationFinding>& f)
{
    return std::none_of(f.begin(), f.end(),
                        [](const ValidationFinding& x) { return x.status == ValidationFinding::Status::fail; });
}

namespace {

using Status = ValidationFinding::Status;

Status verdict(bool ok)
{
    return ok ? Status::pass : Status::fail;
}

std::size_t step_at(const RunResult& r, double years_after_start)
{
    double t = r.time.front() + years_after_start;
    std::size_t best = 0;
    for (std::size_t i = 0; i < r.time.size(); ++i)
        if (std::fabs(r.time[i] - t) < std::fabs(r.time[best] - t))
            best = i;
    return best;
}

}  // namespace

std::vector<ValidationFinding> extreme_condition_suite(const ModelParameters& base, const SimulationClock& clock)
{
    std::vector<ValidationFinding> out;
    PolicyControl none;

    {
        ModelParameters p = base;
        p.econ.remuneration_period = 1;
        RunResult r = run_fit_model(p, none, clock);
        const auto& cap = r.series("installed_capacity");
        const auto& tend = r.series("tendency_to_invest");
        const auto& bud = r.series("budget");
        out.push_back({"extreme-a1", "one-year remuneration: installed capacity declines",
                       verdict(cap.back() < cap.front()),
                       "start " + num(cap.front()) + ", final " + num(cap.back())});
        out.push_back({"extreme-a2", "one-year remuneration: tendency to invest falls to about zero",
                       verdict(tend.back() < 0.01), "final " + num(tend.back())});
        bool monotone = true;
        for (std::size_t i = 1; i + 1 < bud.size(); ++i)
            monotone = monotone && bud[i + 1] >= bud[i];
        out.push_back({"extreme-a3", "one-year remuneration: budget grows steadily, ending above its start",
                       verdict(monotone && bud.back() > bud.front()),
                       "start " + num(bud.front()) + ", final " + num(bud.back())
                           + (monotone ? "" : ", not monotone")});
    }
    {
        ModelParameters p = base;
        p.initial.suna_debt = 1e8;
        RunResult r = run_fit_model(p, none, clock);
        const auto& tend = r.series("tendency_to_invest");
        const auto& bud = r.series("budget");
        std::size_t k3 = step_at(r, 3.0), k1 = step_at(r, 1.0);
        out.push_back({"extreme-b1", "initial debt 1e8: tendency at year 3 below its starting value, near zero",
                       verdict(tend[k3] < tend[0] && tend[k3] < 0.01),
                       "start " + num(tend[0]) + ", year 3 " + num(tend[k3])});
        out.push_back({"extreme-b2", "initial debt 1e8: budget drops steeply in the first year",
                       verdict(bud[k1] < bud[0]), "start " + num(bud[0]) + ", year 1 " + num(bud[k1])});
    }
    return out;
}

PerturbationSet table5_perturbations()
{
    return {{"time_to_build", 0.7},
            {"normal_equipment_lifetime", 0.3},
            {"remuneration_period", 0.2},
            {"initial_fit_price", -0.1},
            {"learning_exponent", -0.5}};
}

ModelParameters perturb(const ModelParameters& base, const PerturbationSet& set)
{
    ModelParameters p = base;
    for (const auto& x : set)
        parameter_ref(p, x.parameter) *= 1.0 + x.relative_change;
    return p;
}

namespace {

std::string describe(const BehaviorSignature& s)
{
    std::string out = std::to_string(s.local_maxima) + " peak(s), final slope "
        + (s.final_slope > 0 ? "+" : s.final_slope < 0 ? "-" : "0");
    out += s.debt_emerges ? ", debt from " + num(s.debt_onset_year) : ", no debt";
    return out;
}

BehaviorSignature signature_of(const RunResult& r)
{
    return classify_behavior(r.time, r.series("installed_capacity"), r.series("suna_debt"));
}

}  // namespace

std::vector<ValidationFinding> sensitivity_suite(const ModelParameters& base,
                                                 const SimulationClock& clock,
                                                 const PerturbationSet& set,
                                                 const SensitivityOptions& opt)
{
    for (const auto& x : set)
        if (!is_model_parameter(x.parameter))
            throw InputError("perturbation names unknown parameter '" + x.parameter + "'");

    PolicyControl none;
    const BehaviorSignature ref = signature_of(run_fit_model(base, none, clock));

    auto judge = [&](const std::string& id, const std::string& what, const PerturbationSet& ps) {
        RunResult r = run_fit_model(perturb(base, ps), none, clock);
        BehaviorSignature sig = signature_of(r);
        const auto& cap = r.series("installed_capacity");
        Status st = Status::pass;
        if (!same_mode(ref, sig, opt.onset_tolerance)) {
            bool grew = *std::max_element(cap.begin(), cap.end()) > cap.front();
            st = grew ? Status::fail : Status::out_of_band;
        }
        return ValidationFinding{id, what, st, "base: " + describe(ref) + "; perturbed: " + describe(sig)};
    };

    std::vector<ValidationFinding> out;
    out.push_back(judge("sensitivity-joint", "joint perturbation keeps the behavior mode", set));
    if (opt.each_alone && set.size() > 1)
        for (const auto& x : set) {
            std::string pct = num(x.relative_change * 100) + "%";
            out.push_back(judge("sensitivity-" + x.parameter, x.parameter + " " + pct + " keeps the behavior mode",
                                {x}));
        }
    return out;
}

}  // namespace fitsd
