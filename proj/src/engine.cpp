#include "fitsd/engine.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace fitsd {

namespace {

std::string fmt_time(double t)
{
    std::ostringstream os;
    os << t;
    return os.str();
}

}  // namespace

SimulationError::SimulationError(const std::string& variable, double t, const std::string& what)
    : std::runtime_error("t=" + fmt_time(t) + " " + variable + ": " + what), variable_(variable), time_(t)
{
}

void SimulationClock::validate() const
{
    if (!std::isfinite(start_year) || !std::isfinite(end_year) || !std::isfinite(dt))
        throw InputError("clock: non-finite value");
    if (end_year <= start_year)
        throw InputError("clock: end_year must be after start_year");
    if (dt <= 0)
        throw InputError("clock: dt must be positive");
    double n = (end_year - start_year) / dt;
    if (std::fabs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
        throw InputError("clock: horizon is not a whole number of dt steps");
}

int SimulationClock::steps() const
{
    return static_cast<int>(std::lround((end_year - start_year) / dt));
}

void SigmoidEffect::validate() const
{
    if (!(y_max > 0) || !(x_50 > 0) || !(p > 0))
        throw InputError("sigmoid effect: y_max, x_50 and p must be positive");
}

double eval_inverted_sigmoid(const SigmoidEffect& e, double x)
{
    if (!std::isfinite(x))
        throw InputError("sigmoid effect: non-finite input");
    if (x < 0)
        throw InputError("sigmoid effect: negative input");
    if (x == 0)
        return e.y_max;
    return e.y_max / (1.0 + std::pow(x / e.x_50, e.p));
}

double eval_linear_trend(const LinearTrend& trend, double t)
{
    return trend.intercept + trend.slope * (t - trend.reference_year);
}

void LinearTrend::check_positive(const SimulationClock& clock, const std::string& name) const
{
    // linear, so the endpoints decide
    for (double t : {clock.start_year, clock.end_year}) {
        double v = eval_linear_trend(*this, t);
        if (!(v > 0) || !std::isfinite(v))
            throw InputError("trend " + name + " is not positive at t=" + fmt_time(t));
    }
}

LaggedSeries::LaggedSeries(double lag, double initial_value, double start_year, double dt)
    : lag_(lag), initial_(initial_value), start_(start_year), dt_(dt)
{
    if (!(lag > 0))
        throw InputError("lagged series: lag must be positive");
    if (!(dt > 0))
        throw InputError("lagged series: dt must be positive");
}

void LaggedSeries::record(int step, double value)
{
    if (step != static_cast<int>(history_.size()))
        throw SimulationError("lagged series", start_ + step * dt_, "out-of-order record");
    history_.push_back(value);
}

double LaggedSeries::lookup(double t) const
{
    const double target = t - lag_;
    const double eps = 1e-9 * dt_;
    if (target < start_ - eps)
        return initial_;
    // nearest grid step, ties go to the earlier one
    double x = (target - start_) / dt_;
    long idx = static_cast<long>(std::ceil(x - 0.5 - 1e-9));
    if (idx < 0)
        idx = 0;
    if (idx >= static_cast<long>(history_.size()))
        throw SimulationError("lagged series", t, "lookup before value was recorded");
    return history_[static_cast<std::size_t>(idx)];
}

std::vector<double> integrate_step(const std::vector<double>& stocks,
                                   const std::vector<double>& rates,
                                   double dt,
                                   const std::vector<bool>& non_negative,
                                   std::vector<ClampEvent>* events,
                                   const std::vector<std::string>& names,
                                   double t)
{
    if (stocks.size() != rates.size())
        throw InputError("integrate_step: stock and rate vectors differ in length");
    if (!(dt > 0))
        throw InputError("integrate_step: dt must be positive");
    auto name_of = [&](std::size_t i) {
        return i < names.size() ? names[i] : "stock[" + std::to_string(i) + "]";
    };
    std::vector<double> out(stocks.size());
    for (std::size_t i = 0; i < stocks.size(); ++i) {
        if (!std::isfinite(rates[i]))
            throw SimulationError(name_of(i), t, "non-finite rate");
        double v = stocks[i] + rates[i] * dt;
        if (i < non_negative.size() && non_negative[i] && v < 0) {
            if (events)
                events->push_back({t + dt, name_of(i), v});
            v = 0;
        }
        out[i] = v;
    }
    return out;
}

const std::vector<double>& RunResult::series(const std::string& name) const
{
    auto it = values.find(name);
    if (it == values.end())
        throw InputError("unknown variable '" + name + "'");
    return it->second;
}

RunResult run_simulation(Model& model, const SimulationClock& clock)
{
    clock.validate();
    const auto specs = model.stocks();
    RunResult r;
    r.flow_names = model.flow_names();
    r.auxiliary_names = model.auxiliary_names();

    std::vector<double> state;
    std::vector<bool> nonneg;
    std::set<std::string> seen{"time"};
    for (const auto& s : specs) {
        r.stock_names.push_back(s.name);
        state.push_back(s.initial);
        nonneg.push_back(s.non_negative);
    }
    for (const auto* group : {&r.stock_names, &r.flow_names, &r.auxiliary_names})
        for (const auto& n : *group)
            if (!seen.insert(n).second)
                throw InputError("duplicate variable name '" + n + "'");

    const int n = clock.steps();
    for (const auto* group : {&r.stock_names, &r.flow_names, &r.auxiliary_names})
        for (const auto& name : *group)
            r.values[name].reserve(static_cast<std::size_t>(n) + 1);

    model.reset(clock);
    for (int k = 0; k <= n; ++k) {
        const double t = clock.time_at(k);
        Evaluation ev = model.evaluate(k, t, state);
        if (ev.rates.size() != state.size() || ev.flows.size() != r.flow_names.size()
            || ev.auxiliaries.size() != r.auxiliary_names.size())
            throw SimulationError("model", t, "evaluation size mismatch");

        r.time.push_back(t);
        for (std::size_t i = 0; i < state.size(); ++i) {
            if (!std::isfinite(state[i]))
                throw SimulationError(r.stock_names[i], t, "non-finite stock");
            r.values[r.stock_names[i]].push_back(state[i]);
        }
        for (std::size_t i = 0; i < ev.flows.size(); ++i)
            r.values[r.flow_names[i]].push_back(ev.flows[i]);
        for (std::size_t i = 0; i < ev.auxiliaries.size(); ++i)
            r.values[r.auxiliary_names[i]].push_back(ev.auxiliaries[i]);
        for (auto& notice : ev.notices)
            r.notices.push_back(std::move(notice));

        model.commit(k, t, ev);
        if (k < n)
            state = integrate_step(state, ev.rates, clock.dt, nonneg, &r.clamp_events, r.stock_names, t);
    }
    return r;
}

}  // namespace fitsd
