// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "fitsd/cli.hpp"
#include "fitsd/config.hpp"
#include "fitsd/output.hpp"
#include "fitsd/policy.hpp"
#include "fitsd/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace fitsd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

bool close(double a, double b, double tol = 1e-9)
{
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Collects failed expectations without stopping at the first one.
struct Checks {
    Outcome out;
    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            out.ok = false;
            out.detail += (out.detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(double v, int prec = 4)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

const Finding& find(const std::vector<Finding>& f, const std::string& id)
{
    for (const auto& x : f)
        if (x.id == id)
            return x;
    throw std::runtime_error("missing finding " + id);
}

Outcome equation_oracles()
{
    Checks c;
    EconomicParameters e;
    e.capacity_factor = 0.25;
    e.om_cost = 10;
    e.interest_rate = 0.1;
    e.remuneration_period = 20;
    c.expect(compute_roi(e, 10, 1.5e6) == -1, "ROI at price = O&M");
    c.expect(close(compute_roi(e, 100, 1.5e6), 0.1186822727762752), "ROI annuity example");
    double pv = 0;
    for (int k = 1; k <= 20; ++k)
        pv += 0.25 * 8760 * 90 / std::pow(1.1, k);
    c.expect(close(compute_roi(e, 100, 1.5e6), (pv - 1.5e6) / 1.5e6), "ROI vs discounted cash flow");
    e.interest_rate = 0;
    c.expect(close(compute_roi(e, 100, 1.5e6), 1.628), "ROI at zero interest");

    e.initial_capital_cost = 1.5e6;
    e.learning_exponent = 0.15;
    c.expect(compute_capital_cost(120, e) == 1.5e6, "capital cost at start");
    c.expect(close(compute_capital_cost(240, e), 1.5e6 * std::pow(2.0, -0.15)), "capital cost doubling");

    e.initial_fit_price = 200;
    e.price_floor = 0.25;
    c.expect(compute_fit_price(0, e) == 200 && compute_fit_price(5000, e) == 50 && compute_fit_price(2500, e) == 100,
             "FiT price rule");

    SocialEffectSet fx;
    c.expect(compute_social_acceptance(0, 0, fx, 5) == 1, "acceptance neutral");
    c.expect(close(compute_social_acceptance(0, 0.05, fx, 5), 0.5), "acceptance at tax 0.05");
    c.expect(close(compute_social_acceptance(0.1, 0, fx, 5), 1.5), "acceptance at 10 % penetration");
    c.expect(compute_delay_in_debt_payment(0, 9) == 0 && compute_delay_in_debt_payment(50, 50) == 1, "delay");
    c.expect(compute_tendency_to_invest(-0.5, 1, 1) == 0 && close(compute_tendency_to_invest(0.1, 1.5, 0.8), 0.12),
             "tendency");

    EconomicParameters q;
    q.time_to_build = 2;
    auto r = compute_request_pipeline(100, 1, q);
    c.expect(r.annual_requests == 100 && r.approved == 50 && r.construction_rate == 25, "request pipeline");
    q.normal_equipment_lifetime = 20;
    c.expect(compute_depreciation(120, 0, q, fx).rate == 6, "depreciation, no delay");
    c.expect(close(compute_depreciation(120, 5, q, fx).rate, 12), "depreciation, 5-year delay");

    struct Case { double b, d, w, avail, dp, act, cr; };
    for (const Case& k : {Case{100, 30, 50, 80, 30, 50, 0}, Case{40, 30, 50, 40, 30, 10, 40},
                          Case{20, 30, 50, 20, 20, 0, 50}}) {
        auto a = allocate_payments(k.b, k.d, k.w);
        c.expect(a.available_whole_payment == k.avail && a.debt_payment == k.dp
                     && a.actual_production_payment == k.act && a.debt_creation == k.cr,
                 "allocation budget=" + fmt(k.b));
    }
    q.capacity_factor = 0.25;
    c.expect(compute_production_and_price(120, 0, 0, 100, q).production == 262800, "production");
    return c.out;
}

Outcome sigmoid_suite()
{
    Checks c;
    SocialEffectSet fx;
    std::mt19937_64 rng(42);
    int points = 0;
    for (const auto& e : {fx.social_tolerance, fx.investor_trust, fx.om_activity}) {
        c.expect(eval_inverted_sigmoid(e, 0) == e.y_max, "Y(0)");
        c.expect(close(eval_inverted_sigmoid(e, e.x_50), e.y_max / 2), "Y(X50)");
        std::uniform_real_distribution<double> x(0, 20 * e.x_50);
        for (int i = 0; i < 1000; ++i, ++points) {
            double a = x(rng), b = x(rng);
            if (a > b)
                std::swap(a, b);
            double ya = eval_inverted_sigmoid(e, a), yb = eval_inverted_sigmoid(e, b);
            if (!(yb <= ya && ya <= e.y_max && yb >= 0)) {
                c.expect(false, "monotone at x=" + fmt(a));
                break;
            }
        }
    }
    if (c.out.ok)
        c.out.detail = std::to_string(points) + " random points";
    return c.out;
}

Outcome conservation()
{
    Checks c;
    Config cfg = shipped_config();
    RunResult r = run_scenario(cfg.params, cfg.scenario("base"));
    const auto& budget = r.series("budget");
    const auto& debt = r.series("suna_debt");
    const auto& inc = r.series("budget_increase");
    const auto& dec = r.series("budget_decrease");
    const auto& dp = r.series("debt_payment");
    const auto& dc = r.series("debt_creation");
    const auto& act = r.series("actual_production_payment");
    const auto& inst = r.series("installed_capacity");
    const auto& dep = r.series("depreciated_capacity");
    const auto& cum = r.series("cumulative_capacity");
    c.expect(r.clamp_events.empty(), "clamp events present");
    double b = budget[0], s = debt[0], worst = 0;
    for (std::size_t k = 0; k < r.records(); ++k) {
        worst = std::max({worst, std::fabs(budget[k] - b) / std::max(1.0, std::fabs(b)),
                          std::fabs(debt[k] - s) / std::max(1.0, std::fabs(s))});
        c.expect(cum[k] == inst[k] + dep[k], "cumulative identity at step " + std::to_string(k));
        c.expect(dec[k] == dp[k] + act[k], "budget decrease identity");
        c.expect(dp[k] <= debt[k], "debt payment above debt");
        b += (inc[k] - dec[k]) * cfg.clock.dt;
        s += (dc[k] - dp[k]) * cfg.clock.dt;
    }
    c.expect(worst <= 1e-9, "ledger drift " + fmt(worst));
    if (c.out.ok)
        c.out.detail = "max ledger drift " + fmt(worst, 3);
    return c.out;
}

Outcome theil_identity()
{
    Checks c;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> z(0, 1);
    std::uniform_int_distribution<int> len(2, 80);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        int n = len(rng);
        std::vector<double> s(n), h(n);
        for (int i = 0; i < n; ++i) {
            h[i] = 100 + 10 * z(rng);
            s[i] = 95 + 12 * z(rng);
        }
        auto d = theil_decomposition(s, h);
        worst = std::max(worst, std::fabs(d.um + d.us + d.uc - 1));
    }
    c.expect(worst < 1e-9, "sum off by " + fmt(worst));

    std::vector<double> h{3, 7, 4, 9, 12, 8, 15, 11}, bias = h, scaled = h;
    double m = 0;
    for (double x : h)
        m += x / h.size();
    for (std::size_t i = 0; i < h.size(); ++i) {
        bias[i] += 2;
        scaled[i] = m + 2 * (h[i] - m);
    }
    auto a = theil_decomposition(bias, h);
    c.expect(std::fabs(a.um - 1) < 1e-9 && std::fabs(a.us) < 1e-9 && std::fabs(a.uc) < 1e-9, "pure bias case");
    auto v = theil_decomposition(scaled, h);
    c.expect(std::fabs(v.um) < 1e-9 && std::fabs(v.us - 1) < 1e-9 && std::fabs(v.uc) < 1e-9, "pure variance case");
    if (c.out.ok)
        c.out.detail = "1000 pairs, max |sum - 1| " + fmt(worst, 3);
    return c.out;
}

ComparisonReport suite()
{
    Config cfg = shipped_config();
    return run_scenario_suite(cfg.params, cfg.scenarios);
}

Outcome from_findings(const std::vector<Finding>& f, std::initializer_list<const char*> ids)
{
    Checks c;
    std::string detail;
    for (const char* id : ids) {
        const Finding& x = find(f, id);
        c.expect(x.passed, std::string(id) + ": " + x.detail);
        if (x.passed)
            detail += (detail.empty() ? "" : "; ") + x.detail;
    }
    if (c.out.ok)
        c.out.detail = detail;
    return c.out;
}

Outcome base_modes()
{
    return from_findings(qualitative_checks(suite()), {"c1", "c2", "c3", "c4"});
}

Outcome table7_ordering()
{
    return from_findings(qualitative_checks(suite()), {"a", "b", "f", "g"});
}

Outcome from_validation(const std::vector<ValidationFinding>& f, bool first_only)
{
    Checks c;
    for (std::size_t i = 0; i < (first_only ? 1 : f.size()); ++i)
        c.expect(f[i].status == ValidationFinding::Status::pass, f[i].id + ": " + f[i].detail);
    if (c.out.ok)
        c.out.detail = first_only ? f[0].detail : std::to_string(f.size()) + " assertions";
    return c.out;
}

Outcome extreme()
{
    Config cfg = shipped_config();
    return from_validation(extreme_condition_suite(cfg.params, cfg.clock), false);
}

Outcome sensitivity()
{
    Config cfg = shipped_config();
    SensitivityOptions opt;
    opt.each_alone = false;
    return from_validation(sensitivity_suite(cfg.params, cfg.clock, table5_perturbations(), opt), true);
}

Outcome convergence()
{
    Checks c;
    Config cfg = shipped_config();
    SimulationClock fine = cfg.clock;
    fine.dt = cfg.clock.dt / 2;
    PolicyControl base;
    RunResult a = run_fit_model(cfg.params, base, cfg.clock);
    RunResult b = run_fit_model(cfg.params, base, fine);
    double worst = 0;
    std::string worst_name;
    for (const char* s : {"installed_capacity", "depreciated_capacity", "suna_debt", "budget",
                          "total_electricity_production", "total_fit_payment"}) {
        const auto& x = a.series(s);
        const auto& y = b.series(s);
        double peak = 0;
        for (double v : x)
            peak = std::max(peak, std::fabs(v));
        for (std::size_t k = 0; k < x.size(); ++k) {
            double e = std::fabs(x[k] - y[2 * k]) / std::max(peak, 1e-12);
            if (e > worst) {
                worst = e;
                worst_name = s;
            }
        }
    }
    c.expect(worst < 0.05, "max relative difference " + fmt(worst) + " in " + worst_name);
    if (c.out.ok)
        c.out.detail = "max relative difference " + fmt(worst, 3) + " (" + worst_name + ")";
    return c.out;
}

Outcome determinism(const fs::path& work)
{
    Checks c;
    fs::remove_all(work);
    for (const char* run : {"a", "b"}) {
        std::string out = (work / run).string();
        const char* argv[] = {"fitsim", "compare", "--out", out.c_str()};
        std::ostringstream o, e;
        int code = cli_main(4, argv, o, e);
        c.expect(code == 0, std::string("compare ") + run + " exited " + std::to_string(code) + " " + e.str());
    }
    int files = 0;
    for (const auto& entry : fs::directory_iterator(work / "a")) {
        ++files;
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        fs::path other = work / "b" / entry.path().filename();
        c.expect(fs::exists(other) && slurp(entry.path()) == slurp(other),
                 entry.path().filename().string() + " differs");
    }
    c.expect(files > 0, "no output files");
    if (c.out.ok)
        c.out.detail = std::to_string(files) + " files byte-identical";
    return c.out;
}

}  // namespace

int main(int argc, char** argv)
{
    fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "fitsd_acceptance";

    struct Criterion {
        int id;
        const char* name;
        double budget_s;  // runtime bound, 0 for none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "equation oracles", 1, equation_oracles},
        {2, "sigmoid suite", 1, sigmoid_suite},
        {3, "money and capacity conservation", 1, conservation},
        {4, "Theil identity", 0, theil_identity},
        {5, "base-run behavior modes", 0, base_modes},
        {6, "policy ordering", 10, table7_ordering},
        {7, "extreme-condition suite", 5, extreme},
        {8, "sensitivity suite", 10, sensitivity},
        {9, "numerical convergence", 0, convergence},
        {10, "determinism of compare", 0, [&work] { return determinism(work); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs >= c.budget_s) {
            o.ok = false;
            o.detail += " (took " + fmt(secs) + " s, limit " + fmt(c.budget_s) + " s)";
        }
        failed += !o.ok;
        std::printf("%s %2d %-32s %8.3f s  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
