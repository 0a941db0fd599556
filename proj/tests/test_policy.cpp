#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fitsd/config.hpp"
#include "fitsd/policy.hpp"
#include "fitsd/validation.hpp"

#include <algorithm>
#include <random>

using namespace fitsd;

namespace {

const Finding& by_id(const std::vector<Finding>& f, const std::string& id)
{
    for (const auto& x : f)
        if (x.id == id)
            return x;
    throw std::runtime_error("no finding " + id);
}

ComparisonReport shipped_report()
{
    Config cfg = shipped_config();
    return run_scenario_suite(cfg.params, cfg.scenarios);
}

}  // namespace

TEST_CASE("apply_policy contracts")
{
    PolicyControl c;
    c.fit_controller_gain = 4;
    c.tax_controller_gain = 1e-6;
    PolicySignals busy{5e4, 0.3};

    c.id = PolicyId::base;
    auto o = apply_policy(c, 0.12, 0.001, busy);
    CHECK_FALSE(o.fit_price);
    CHECK_FALSE(o.res_tax);

    c.id = PolicyId::p1_higher_fit;
    c.fit_price_delta = 30;
    o = apply_policy(c, 150, 0.001, busy);
    CHECK(*o.fit_price == 180);
    c.delta_reading = DeltaReading::per_mwh;
    o = apply_policy(c, 150, 0.001, busy);
    CHECK(*o.fit_price == doctest::Approx(150.03));

    c.id = PolicyId::p2_budget_adjusted_fit;
    o = apply_policy(c, 100, 0.001, busy);
    CHECK(*o.fit_price == doctest::Approx(100 / 2.2));
    o = apply_policy(c, 100, 0.001, {});
    CHECK(*o.fit_price == 100);

    c.id = PolicyId::p3_budget_adjusted_tax;
    o = apply_policy(c, 100, 0.001, {});
    CHECK(*o.res_tax == 0.001);
    o = apply_policy(c, 100, 0.001, busy);
    CHECK(*o.res_tax == doctest::Approx(0.051));
    o = apply_policy(c, 100, 0.001, {1e9, 0});
    CHECK(*o.res_tax == c.tax_cap);

    CHECK_THROWS_AS(apply_policy(c, 100, 0.001, {-1, 0}), InputError);
    CHECK_THROWS_AS(parse_policy_id("p4"), InputError);
    PolicyControl bad;
    bad.tax_cap = 0.2;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = PolicyControl{};
    bad.tax_floor = 0.05;
    bad.tax_cap = 0.01;
    CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("p2 multiplier stays in (0, 1] of the base price")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> g(0, 1e3), s(0, 1e3), p(0.01, 500);
    PolicyControl c;
    c.id = PolicyId::p2_budget_adjusted_fit;
    for (int i = 0; i < 2000; ++i) {
        c.fit_controller_gain = g(rng);
        double base = p(rng);
        double v = *apply_policy(c, base, 0.001, {0, s(rng)}).fit_price;
        REQUIRE(v > 0);
        REQUIRE(v <= base);
    }
}

TEST_CASE("with zero gains every policy reproduces the base run")
{
    Config cfg = shipped_config();
    PolicyControl c = cfg.policy;
    c.fit_price_delta = 0;
    c.fit_controller_gain = 0;
    c.tax_controller_gain = 0;
    c.id = PolicyId::base;
    RunResult ref = run_fit_model(cfg.params, c, cfg.clock);
    for (auto id : {PolicyId::p1_higher_fit, PolicyId::p2_budget_adjusted_fit, PolicyId::p3_budget_adjusted_tax}) {
        c.id = id;
        RunResult r = run_fit_model(cfg.params, c, cfg.clock);
        CAPTURE(to_string(id));
        CHECK(r.values == ref.values);
    }
}

TEST_CASE("p3 tax never exceeds the cap")
{
    Config cfg = shipped_config();
    PolicyControl c = cfg.policy;
    c.id = PolicyId::p3_budget_adjusted_tax;
    c.tax_controller_gain = 1e-3;  // saturates immediately
    RunResult r = run_fit_model(cfg.params, c, cfg.clock);
    const double floor_tolerance = eval_inverted_sigmoid(cfg.params.effects.social_tolerance, c.tax_cap);
    for (std::size_t k = 0; k < r.records(); ++k) {
        CHECK(r.series("res_tax")[k] <= c.tax_cap);
        CHECK(r.series("social_tolerance")[k] >= floor_tolerance);
    }
}

TEST_CASE("scenario suite shapes")
{
    Config cfg = shipped_config();
    CHECK(run_scenario_suite(cfg.params, {}).rows.empty());

    auto one = run_scenario_suite(cfg.params, {cfg.scenario("base")});
    REQUIRE(one.rows.size() == 1);
    CHECK(one.runs[0].result.records() == 81);
    CHECK(one.rows[0].installed_capacity == one.runs[0].result.final_value("installed_capacity"));

    auto a = shipped_report();
    auto b = shipped_report();
    REQUIRE(a.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.rows[i].scenario == cfg.scenarios[i].name);
        CHECK(a.runs[i].result.values == b.runs[i].result.values);
    }

    Scenario broken = cfg.scenario("base");
    broken.name = "broken";
    broken.overrides["rejection_fraction"] = 2;
    CHECK_THROWS_WITH_AS(run_scenario_suite(cfg.params, {broken}), doctest::Contains("broken"), InputError);
}

TEST_CASE("qualitative findings on the shipped calibration")
{
    auto f = qualitative_checks(shipped_report());
    for (const auto& x : f) {
        CAPTURE(x.id);
        CAPTURE(x.detail);
        CHECK(x.passed);
    }
    CHECK(f.size() == 10);
}

TEST_CASE("qualitative findings catch broken trajectories")
{
    auto rep = shipped_report();
    for (auto& run : rep.runs)
        if (run.policy == PolicyId::p3_budget_adjusted_tax)
            run.result.values["suna_debt"][40] = 1.0;
    CHECK_FALSE(by_id(qualitative_checks(rep), "b").passed);

    rep = shipped_report();
    for (auto& run : rep.runs)
        if (run.policy == PolicyId::base) {
            auto& cap = run.result.values["installed_capacity"];
            for (std::size_t k = 0; k < cap.size(); ++k)
                cap[k] = 120 + 10.0 * k;
        }
    CHECK_FALSE(by_id(qualitative_checks(rep), "c2").passed);

    rep.runs.pop_back();
    auto missing = qualitative_checks(rep);
    REQUIRE(missing.size() == 1);
    CHECK_FALSE(missing[0].passed);
}
