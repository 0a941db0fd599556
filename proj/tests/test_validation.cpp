#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fitsd/config.hpp"
#include "fitsd/validation.hpp"

#include <cmath>
#include <random>

using namespace fitsd;

namespace {

std::vector<double> ramp(int n, double a, double b)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(a + b * i + 3 * std::sin(i));
    return v;
}

}  // namespace

TEST_CASE("error metrics, perfect fit and constant offset")
{
    auto h = ramp(12, 50, 4);
    auto r = error_metrics(h, h);
    CHECK(r.mse == 0);
    CHECK(r.rmspe == 0);
    CHECK(r.r_squared == 1);
    CHECK_FALSE(r.theil_defined);

    const double c = 2.5;
    std::vector<double> s = h;
    for (auto& x : s)
        x += c;
    r = error_metrics(s, h);
    double mean = 0, ss = 0;
    for (double x : h)
        mean += x / h.size();
    for (double x : h)
        ss += (x - mean) * (x - mean);
    CHECK(r.mse == doctest::Approx(c * c).epsilon(1e-12));
    CHECK(r.r_squared == doctest::Approx(1 - 12 * c * c / ss).epsilon(1e-12));
    double pct = 0;
    for (double x : h)
        pct += (c / x) * (c / x);
    CHECK(r.rmspe == doctest::Approx(100 * std::sqrt(pct / 12)).epsilon(1e-12));

    CHECK_THROWS_AS(error_metrics({1, 2, 3}, {1, 2}), InputError);
    CHECK_THROWS_AS(error_metrics({1}, {1}), InputError);
    CHECK_THROWS_AS(error_metrics({1, 2}, {0, 2}), UndefinedMetric);
}

TEST_CASE("Theil constructed cases")
{
    auto h = ramp(20, 10, 1.5);
    std::vector<double> bias = h, scaled = h;
    double mean = 0;
    for (double x : h)
        mean += x / h.size();
    for (std::size_t i = 0; i < h.size(); ++i) {
        bias[i] += 4;
        scaled[i] = mean + 2 * (h[i] - mean);
    }
    auto t = theil_decomposition(bias, h);
    CHECK(std::fabs(t.um - 1) < 1e-9);
    CHECK(std::fabs(t.us) < 1e-9);
    CHECK(std::fabs(t.uc) < 1e-9);
    t = theil_decomposition(scaled, h);
    CHECK(std::fabs(t.um) < 1e-9);
    CHECK(std::fabs(t.us - 1) < 1e-9);
    CHECK(std::fabs(t.uc) < 1e-9);
    CHECK_THROWS_AS(theil_decomposition(h, h), UndefinedMetric);
}

TEST_CASE("Theil components sum to one")
{
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> len(2, 60);
    std::normal_distribution<double> z(0, 1);
    std::uniform_real_distribution<double> scale(0.01, 1e4);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = len(rng);
        double sc = scale(rng);
        std::vector<double> s(n), h(n);
        for (int i = 0; i < n; ++i) {
            h[i] = sc * z(rng);
            s[i] = sc * z(rng);
        }
        auto t = theil_decomposition(s, h);
        REQUIRE(std::fabs(t.um + t.us + t.uc - 1) < 1e-9);
        REQUIRE(t.um >= 0);
        REQUIRE(t.us >= 0);
        REQUIRE(t.uc >= -1e-12);
    }
}

TEST_CASE("sample moments differ from population moments")
{
    auto h = ramp(8, 1, 1);
    auto s = ramp(8, 2, 1.3);
    auto p = theil_decomposition(s, h, Moments::population);
    auto q = theil_decomposition(s, h, Moments::sample);
    CHECK(p.um == q.um);
    CHECK(q.us != p.us);
}

TEST_CASE("behavior classifier")
{
    std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<double> hump{1, 3, 6, 9, 8, 6, 4, 3};
    std::vector<double> debt{0, 0, 0, 0, 1, 2, 3, 4};
    auto sig = classify_behavior(t, hump, debt);
    CHECK(sig.local_maxima == 1);
    CHECK(sig.final_slope == -1);
    CHECK(sig.debt_emerges);
    CHECK(sig.debt_onset_year == 4);

    std::vector<double> big = hump, big_debt = debt;
    for (auto& x : big)
        x *= 1e5;
    for (auto& x : big_debt)
        x *= 3e3;
    auto sig2 = classify_behavior(t, big, big_debt);
    CHECK(same_mode(sig, sig2, 0.0));

    std::vector<double> up{1, 2, 3, 4, 5, 6, 7, 8};
    auto mono = classify_behavior(t, up, std::vector<double>(8, 0.0));
    CHECK(mono.local_maxima == 0);
    CHECK(mono.final_slope == 1);
    CHECK_FALSE(mono.debt_emerges);
    CHECK_FALSE(same_mode(sig, mono));

    BehaviorSignature late = sig;
    late.debt_onset_year = 9;
    CHECK(same_mode(sig, late));
    CHECK_FALSE(same_mode(sig, late, 2.0));
}

TEST_CASE("extreme-condition suite on the shipped calibration")
{
    Config cfg = shipped_config();
    auto f = extreme_condition_suite(cfg.params, cfg.clock);
    CHECK(f.size() == 5);
    for (const auto& x : f) {
        CAPTURE(x.id);
        CAPTURE(x.detail);
        CHECK(x.status == ValidationFinding::Status::pass);
    }
}

TEST_CASE("sensitivity suite")
{
    Config cfg = shipped_config();

    PerturbationSet none{{"time_to_build", 0.0}, {"learning_exponent", 0.0}};
    CHECK(perturb(cfg.params, none).econ.time_to_build == cfg.params.econ.time_to_build);
    auto f0 = sensitivity_suite(cfg.params, cfg.clock, none);
    for (const auto& x : f0)
        CHECK(x.status == ValidationFinding::Status::pass);

    auto set = table5_perturbations();
    ModelParameters p = perturb(cfg.params, set);
    CHECK(p.econ.remuneration_period == doctest::Approx(24));
    CHECK(p.econ.learning_exponent == doctest::Approx(cfg.params.econ.learning_exponent / 2));
    auto f = sensitivity_suite(cfg.params, cfg.clock, set);
    REQUIRE(f.size() == 6);
    for (const auto& x : f) {
        CAPTURE(x.id);
        CAPTURE(x.detail);
        CHECK(x.status == ValidationFinding::Status::pass);
    }

    // remuneration driven to one year is an extreme case, not a sensitivity failure
    auto ext = sensitivity_suite(cfg.params, cfg.clock, {{"remuneration_period", -0.95}});
    REQUIRE(ext.size() == 1);
    CHECK(ext[0].status == ValidationFinding::Status::out_of_band);
    CHECK(findings_ok(ext));

    CHECK_THROWS_AS(sensitivity_suite(cfg.params, cfg.clock, {{"no_such_thing", 0.1}}), InputError);
}
