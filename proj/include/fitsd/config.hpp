#pragma once

#include "fitsd/fit_model.hpp"
#include "fitsd/policy.hpp"

#include <map>
#include <string>
#include <vector>

namespace fitsd {

class ConfigError : public InputError {
public:
    ConfigError(const std::string& origin, int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

enum class Provenance { paper, derived, assumed };

std::string to_string(Provenance p);

struct Config {
    SimulationClock clock;
    ModelParameters params;
    PolicyControl policy;  // shared controller settings; scenarios pick the id
    std::vector<Scenario> scenarios;
    std::map<std::string, Provenance> provenance;  // "section.key" -> note
    std::vector<std::string> notices;              // defaults applied etc.

    const Scenario& scenario(const std::string& name) const;
};

// Values missing from `text` are taken from the shipped default config and
// reported in Config::notices. With no [scenario] section a single base
// scenario is created.
Config parse_config(const std::string& text, const std::string& origin = "<config>");
Config load_config(const std::string& path);

// Text that parses back to an equivalent Config.
std::string serialize_config(const Config& config);

const std::string& shipped_config_text();
Config shipped_config();

// --dt / --horizon style overrides applied to the clock and every scenario.
void override_clock(Config& config, std::optional<double> dt, std::optional<double> horizon_years);

}  // namespace fitsd
