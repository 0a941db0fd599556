#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fitsd {

// Raised for bad inputs or configuration (bad parameters, malformed trends).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a run cannot continue (non-finite rate, sequencing fault).
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& variable, double t, const std::string& what);
    const std::string& variable() const { return variable_; }
    double time() const { return time_; }

private:
    std::string variable_;
    double time_;
};

struct SimulationClock {
    double start_year = 2015.0;
    double end_year = 2035.0;
    double dt = 0.25;

    void validate() const;
    int steps() const;
    double time_at(int step) const { return start_year + step * dt; }
};

struct SigmoidEffect {
    double y_max = 1.0;
    double x_50 = 1.0;
    double p = 1.0;

    void validate() const;
};

// y_max / (1 + (x/x_50)^p)
double eval_inverted_sigmoid(const SigmoidEffect& effect, double x);

struct LinearTrend {
    double intercept = 0.0;
    double slope = 0.0;
    double reference_year = 2015.0;

    // Throws InputError if the trend is not strictly positive on the clock.
    void check_positive(const SimulationClock& clock, const std::string& name) const;
};

double eval_linear_trend(const LinearTrend& trend, double t);

// Values recorded on the simulation grid, read back one lag later.
class LaggedSeries {
public:
    LaggedSeries() = default;
    LaggedSeries(double lag, double initial_value, double start_year, double dt);

    void record(int step, double value);
    double lookup(double t) const;

    double lag() const { return lag_; }
    double initial_value() const { return initial_; }
    const std::vector<double>& history() const { return history_; }

private:
    double lag_ = 1.0;
    double initial_ = 0.0;
    double start_ = 0.0;
    double dt_ = 1.0;
    std::vector<double> history_;
};

struct ClampEvent {
    double time;
    std::string variable;
    double unclamped;
};

struct Notice {
    double time;
    std::string variable;
    std::string message;
};

// stock_i + rate_i * dt, clamping flagged stocks at zero. Events are appended
// with the given time and names; names may be empty when not needed.
std::vector<double> integrate_step(const std::vector<double>& stocks,
                                   const std::vector<double>& rates,
                                   double dt,
                                   const std::vector<bool>& non_negative = {},
                                   std::vector<ClampEvent>* events = nullptr,
                                   const std::vector<std::string>& names = {},
                                   double t = 0.0);

struct StockSpec {
    std::string name;
    double initial = 0.0;
    bool non_negative = true;
};

struct Evaluation {
    std::vector<double> rates;  // net rate per stock
    std::vector<double> flows;
    std::vector<double> auxiliaries;
    std::vector<Notice> notices;
};

class Model {
public:
    virtual ~Model() = default;

    virtual std::vector<StockSpec> stocks() const = 0;
    virtual std::vector<std::string> flow_names() const = 0;
    virtual std::vector<std::string> auxiliary_names() const = 0;

    // Called once before the first evaluation.
    virtual void reset(const SimulationClock& clock) { (void)clock; }
    virtual Evaluation evaluate(int step, double t, const std::vector<double>& stocks) = 0;
    // Called after the step has been recorded, before integration.
    virtual void commit(int step, double t, const Evaluation& ev) { (void)step; (void)t; (void)ev; }
};

class RunResult {
public:
    std::vector<double> time;
    std::vector<std::string> stock_names;
    std::vector<std::string> flow_names;
    std::vector<std::string> auxiliary_names;
    std::map<std::string, std::vector<double>> values;
    std::vector<ClampEvent> clamp_events;
    std::vector<Notice> notices;

    const std::vector<double>& series(const std::string& name) const;
    bool has(const std::string& name) const { return values.count(name) != 0; }
    double final_value(const std::string& name) const { return series(name).back(); }
    std::size_t records() const { return time.size(); }
};

RunResult run_simulation(Model& model, const SimulationClock& clock);

}  // namespace fitsd
