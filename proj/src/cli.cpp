#include "fitsd/cli.hpp"

#include "fitsd/config.hpp"
#include "fitsd/numfmt.hpp"
#include "fitsd/output.hpp"
#include "fitsd/validation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

namespace fitsd {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string config;
    std::optional<double> dt;
    std::optional<double> horizon;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config, "Config file (default: the shipped calibration)");
    sub->add_option("--dt", c.dt, "Override the time step, years")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", c.horizon, "Override the horizon length, years after start_year")
        ->check(CLI::PositiveNumber);
}

Config load(const Common& c, std::ostream& err)
{
    Config cfg = c.config.empty() ? shipped_config() : load_config(c.config);
    override_clock(cfg, c.dt, c.horizon);
    for (const auto& n : cfg.notices)
        err << "notice: " << n << "\n";
    return cfg;
}

fs::path prepare_dir(const std::string& dir)
{
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec)
        throw InputError("cannot create output directory '" + dir + "': " + ec.message());
    return p;
}

ModelParameters scenario_params(const Config& cfg, const std::string& name)
{
    return with_overrides(cfg.params, cfg.scenario(name).overrides);
}

int do_run(const Common& c, const std::string& scenario, const std::string& out_dir, std::ostream& out,
           std::ostream& err)
{
    Config cfg = load(c, err);
    const Scenario& sc = cfg.scenario(scenario);
    RunResult r = run_scenario(cfg.params, sc);
    fs::path dir = prepare_dir(out_dir);
    fs::path csv = dir / (sc.name + ".csv");
    emit_csv(r, csv.string());
    out << "wrote " << csv.string() << " (" << r.records() << " records)\n";

    if (!r.clamp_events.empty() || !r.notices.empty()) {
        std::string log;
        for (const auto& e : r.clamp_events)
            log += "clamp t=" + format_number(e.time) + " " + e.variable + " " + format_number(e.unclamped) + "\n";
        for (const auto& n : r.notices)
            log += "notice t=" + format_number(n.time) + " " + n.variable + " " + n.message + "\n";
        fs::path ev = dir / (sc.name + "_events.txt");
        write_text_file(ev.string(), log);
        out << "wrote " << ev.string() << " (" << r.clamp_events.size() << " clamp events, " << r.notices.size()
            << " notices)\n";
    }
    return 0;
}

int do_compare(const Common& c, const std::string& out_dir, bool svg, std::ostream& out, std::ostream& err)
{
    Config cfg = load(c, err);
    ComparisonReport rep = run_scenario_suite(cfg.params, cfg.scenarios);
    fs::path dir = prepare_dir(out_dir);

    write_text_file((dir / "comparison.csv").string(), comparison_csv(rep));
    for (const auto& run : rep.runs)
        emit_csv(run.result, (dir / (run.name + ".csv")).string());
    for (const auto& var : plotted_variables()) {
        write_text_file((dir / ("plot_" + var + ".csv")).string(), plot_data_csv(rep, var));
        if (svg)
            write_text_file((dir / ("plot_" + var + ".svg")).string(), plot_svg(rep, var));
    }

    out << comparison_csv(rep);
    bool canonical = rep.find(PolicyId::base) && rep.find(PolicyId::p1_higher_fit)
        && rep.find(PolicyId::p2_budget_adjusted_fit) && rep.find(PolicyId::p3_budget_adjusted_tax);
    if (!canonical) {
        out << "qualitative checks skipped: config lacks one of base, p1, p2, p3\n";
        return 0;
    }
    auto findings = qualitative_checks(rep);
    std::string text = format_findings(findings);
    write_text_file((dir / "findings.txt").string(), text);
    out << text;
    return all_passed(findings) ? 0 : 1;
}

std::size_t nearest_step(const RunResult& r, double year, double dt)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.time.size(); ++i)
        if (std::fabs(r.time[i] - year) < std::fabs(r.time[best] - year))
            best = i;
    if (std::fabs(r.time[best] - year) > dt / 2 + 1e-9)
        throw InputError("historical year " + format_number(year) + " lies outside the simulated horizon");
    return best;
}

int do_validate(const Common& c, const std::string& scenario, const std::string& historical,
                const std::string& variable, bool sample_moments, const std::string& out_dir, std::ostream& out,
                std::ostream& err)
{
    Config cfg = load(c, err);
    ModelParameters params = scenario_params(cfg, scenario);

    auto extreme = extreme_condition_suite(params, cfg.clock);
    auto sens = sensitivity_suite(params, cfg.clock, table5_perturbations());
    std::string text = format_findings(extreme) + format_findings(sens);

    if (!historical.empty()) {
        auto rows = read_historical_csv(historical);
        RunResult r = run_scenario(cfg.params, cfg.scenario(scenario));
        const auto& series = r.series(variable);
        std::vector<double> sim, hist;
        for (const auto& [year, value] : rows) {
            sim.push_back(series[nearest_step(r, year, cfg.clock.dt)]);
            hist.push_back(value);
        }
        ErrorReport m = error_metrics(sim, hist, sample_moments ? Moments::sample : Moments::population);
        text += "metrics " + variable + " n=" + std::to_string(sim.size()) + "\n";
        text += "  r_squared " + format_number(m.r_squared) + "\n";
        text += "  mse " + format_number(m.mse) + "\n";
        text += "  rmspe_percent " + format_number(m.rmspe) + "\n";
        if (m.theil_defined)
            text += "  theil_um " + format_number(m.theil.um) + "\n  theil_us " + format_number(m.theil.us)
                + "\n  theil_uc " + format_number(m.theil.uc) + "\n";
        else
            text += "  theil undefined (perfect fit)\n";
    }
    out << text;
    if (!out_dir.empty())
        write_text_file((prepare_dir(out_dir) / "validation.txt").string(), text);
    return findings_ok(extreme) && findings_ok(sens) ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"System-dynamics model of feed-in tariffs for renewables in Iran"};
    app.require_subcommand(1);

    Common run_c, cmp_c, val_c;
    std::string run_scenario_name = "base", run_out = ".";
    auto* run = app.add_subcommand("run", "Simulate one scenario and write its CSV");
    add_common(run, run_c);
    run->add_option("--scenario", run_scenario_name, "Scenario name")->capture_default_str();
    run->add_option("--out", run_out, "Output directory")->capture_default_str();

    std::string cmp_out = ".";
    bool no_svg = false;
    auto* cmp = app.add_subcommand("compare", "Run every scenario, write the comparison report and plot data");
    add_common(cmp, cmp_c);
    cmp->add_option("--out", cmp_out, "Output directory")->capture_default_str();
    cmp->add_flag("--no-svg", no_svg, "Skip the SVG charts");

    std::string val_scenario = "base", historical, variable = "installed_capacity", val_out;
    bool sample = false;
    auto* val = app.add_subcommand("validate", "Extreme-condition and sensitivity tests, optional error metrics");
    add_common(val, val_c);
    val->add_option("--scenario", val_scenario, "Scenario supplying the parameters")->capture_default_str();
    val->add_option("--historical", historical, "CSV of year,value observations");
    val->add_option("--variable", variable, "Simulated variable compared with --historical")->capture_default_str();
    val->add_flag("--sample-moments", sample, "Theil statistics with n-1 moments");
    val->add_option("--out", val_out, "Also write validation.txt here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*run)
            return do_run(run_c, run_scenario_name, run_out, out, err);
        if (*cmp)
            return do_compare(cmp_c, cmp_out, !no_svg, out, err);
        return do_validate(val_c, val_scenario, historical, variable, sample, val_out, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace fitsd
