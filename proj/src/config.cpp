#include "fitsd/config.hpp"

#include "fitsd/numfmt.hpp"
#include "fitsd/parameters.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace fitsd {

namespace {

const char* shipped_text =
#include "shipped_config.inc"
    ;

const std::vector<std::string> clock_keys{"start_year", "end_year", "dt"};
const std::string avg_key = "average_price_formula";

struct Value {
    std::string text;
    std::optional<Provenance> prov;
    int line;
};

struct Section {
    std::string name;  // clock, parameters, ..., or scenario
    std::string scenario;
    int line;
    std::vector<std::pair<std::string, Value>> entries;
};

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-';
    });
}

std::optional<Provenance> parse_provenance(const std::string& s)
{
    if (s == "paper")
        return Provenance::paper;
    if (s == "derived")
        return Provenance::derived;
    if (s == "assumed")
        return Provenance::assumed;
    return std::nullopt;
}

bool in_catalog_section(const std::string& key, const std::string& section)
{
    for (const auto& p : parameter_catalog())
        if (p.key == key && p.section == section)
            return true;
    return false;
}

bool key_allowed(const Section& s, const std::string& key)
{
    if (s.name == "clock")
        return std::find(clock_keys.begin(), clock_keys.end(), key) != clock_keys.end();
    if (s.name == "parameters")
        return in_catalog_section(key, "parameters") || key == avg_key;
    if (s.name == "trends" || s.name == "effects")
        return in_catalog_section(key, s.name);
    if (s.name == "policy")
        return is_policy_key(key);
    // scenario
    return key == "policy" || is_model_parameter(key) || is_policy_key(key);
}

bool needs_provenance(const Section& s, const std::string& key)
{
    if (s.name == "clock")
        return false;
    if (s.name == "scenario")
        return key != "policy";
    return true;
}

std::vector<Section> lex(const std::string& text, const std::string& origin)
{
    std::vector<Section> out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty())
            continue;

        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError(origin, line, "unterminated section header");
            std::string body = trim(s.substr(1, s.size() - 2));
            Section sec{body, "", line, {}};
            if (body.rfind("scenario", 0) == 0 && body.size() > 8 && (body[8] == ' ' || body[8] == '\t')) {
                sec.name = "scenario";
                sec.scenario = trim(body.substr(9));
                if (!valid_name(sec.scenario))
                    throw ConfigError(origin, line, "bad scenario name '" + sec.scenario + "'");
            } else if (body != "clock" && body != "parameters" && body != "trends" && body != "effects"
                       && body != "policy") {
                throw ConfigError(origin, line, "unknown section [" + body + "]");
            }
            for (const auto& prev : out)
                if (prev.name == sec.name && prev.scenario == sec.scenario)
                    throw ConfigError(origin, line,
                                      sec.name == "scenario" ? "duplicate scenario '" + sec.scenario + "'"
                                                             : "duplicate section [" + sec.name + "]");
            out.push_back(std::move(sec));
            continue;
        }

        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin, line, "expected 'key = value'");
        if (out.empty())
            throw ConfigError(origin, line, "entry before any section header");
        Section& sec = out.back();
        std::string key = trim(s.substr(0, eq));
        std::string rest = trim(s.substr(eq + 1));
        if (!valid_name(key))
            throw ConfigError(origin, line, "bad key '" + key + "'");
        if (!key_allowed(sec, key))
            throw ConfigError(origin, line, "unknown key '" + key + "' in [" + sec.name + "]");
        for (const auto& [k, v] : sec.entries)
            if (k == key)
                throw ConfigError(origin, line, "duplicate key '" + key + "' (first set on line "
                                                    + std::to_string(v.line) + ")");

        Value v{rest, std::nullopt, line};
        auto bar = rest.rfind('|');
        if (bar != std::string::npos) {
            v.text = trim(rest.substr(0, bar));
            std::string p = trim(rest.substr(bar + 1));
            v.prov = parse_provenance(p);
            if (!v.prov)
                throw ConfigError(origin, line, "provenance must be paper, derived or assumed, got '" + p + "'");
        }
        if (v.text.empty())
            throw ConfigError(origin, line, "missing value for '" + key + "'");
        if (!v.prov && needs_provenance(sec, key))
            throw ConfigError(origin, line, "value for '" + key + "' lacks a provenance note (| paper, derived or assumed)");
        sec.entries.emplace_back(key, std::move(v));
    }
    return out;
}

double number(const Value& v, const std::string& key, const std::string& origin)
{
    try {
        return parse_number(v.text, key);
    } catch (const InputError& e) {
        throw ConfigError(origin, v.line, e.what());
    }
}

bool parse_avg_formula(const Value& v, const std::string& origin)
{
    if (v.text == "payment_over_production")
        return false;
    if (v.text == "production_over_payment")
        return true;
    throw ConfigError(origin, v.line, avg_key + ": expected payment_over_production or production_over_payment");
}

// Re-throw a validation failure at the line where the offending key was set.
[[noreturn]] void rethrow_at_line(const InputError& e, const std::map<std::string, int>& lines,
                                  const std::string& origin, int fallback)
{
    std::string msg = e.what();
    int line = fallback;
    std::size_t best = 0;
    for (const auto& [key, l] : lines) {
        auto us = key.rfind('_');
        bool hit = msg.find(key) != std::string::npos
            || (us != std::string::npos && msg.find(" " + key.substr(0, us) + " ") != std::string::npos);
        if (hit && key.size() > best) {
            best = key.size();
            line = l;
        }
    }
    throw ConfigError(origin, line, msg);
}

Config build(const std::string& text, const std::string& origin, const Config* base)
{
    auto sections = lex(text, origin);
    Config cfg;
    if (base) {
        cfg.clock = base->clock;
        cfg.params = base->params;
        cfg.policy = base->policy;
        cfg.provenance = base->provenance;
    }

    std::map<std::string, int> lines;  // key -> line, for error reporting
    std::set<std::string> seen;
    for (const auto& sec : sections) {
        if (sec.name == "scenario")
            continue;
        for (const auto& [key, v] : sec.entries) {
            lines[key] = v.line;
            seen.insert(sec.name + "." + key);
            if (v.prov)
                cfg.provenance[sec.name + "." + key] = *v.prov;
            if (sec.name == "clock") {
                double x = number(v, key, origin);
                if (key == "start_year")
                    cfg.clock.start_year = x;
                else if (key == "end_year")
                    cfg.clock.end_year = x;
                else
                    cfg.clock.dt = x;
            } else if (sec.name == "policy") {
                try {
                    set_policy_value(cfg.policy, key, v.text);
                } catch (const InputError& e) {
                    throw ConfigError(origin, v.line, e.what());
                }
            } else if (key == avg_key) {
                cfg.params.legacy_average_price = parse_avg_formula(v, origin);
            } else {
                parameter_ref(cfg.params, key) = number(v, key, origin);
            }
        }
    }

    if (base) {
        auto note = [&](const std::string& section, const std::string& key, const std::string& value) {
            if (seen.count(section + "." + key))
                return;
            std::string prov;
            auto it = cfg.provenance.find(section + "." + key);
            if (it != cfg.provenance.end())
                prov = " (" + to_string(it->second) + ")";
            cfg.notices.push_back(section + "." + key + " not set; using shipped default " + value + prov);
        };
        note("clock", "start_year", format_number(cfg.clock.start_year));
        note("clock", "end_year", format_number(cfg.clock.end_year));
        note("clock", "dt", format_number(cfg.clock.dt));
        for (const auto& p : parameter_catalog())
            note(p.section, p.key, format_number(parameter_value(cfg.params, p.key)));
        note("parameters", avg_key,
             cfg.params.legacy_average_price ? "production_over_payment" : "payment_over_production");
        for (const auto& k : policy_keys())
            note("policy", k, policy_value(cfg.policy, k));
    }

    int first_line = sections.empty() ? 0 : sections.front().line;
    try {
        cfg.clock.validate();
    } catch (const InputError& e) {
        rethrow_at_line(e, lines, origin, first_line);
    }
    try {
        cfg.params.validate(cfg.clock);
        cfg.policy.validate();
    } catch (const InputError& e) {
        rethrow_at_line(e, lines, origin, first_line);
    }

    for (const auto& sec : sections) {
        if (sec.name != "scenario")
            continue;
        Scenario sc{sec.scenario, cfg.clock, {}, cfg.policy};
        std::map<std::string, int> sl;
        bool has_policy = false;
        for (const auto& [key, v] : sec.entries) {
            sl[key] = v.line;
            std::string pk = "scenario." + sec.scenario + "." + key;
            if (v.prov)
                cfg.provenance[pk] = *v.prov;
            try {
                if (key == "policy") {
                    sc.policy.id = parse_policy_id(v.text);
                    has_policy = true;
                } else if (is_policy_key(key)) {
                    set_policy_value(sc.policy, key, v.text);
                } else {
                    sc.overrides[key] = parse_number(v.text, key);
                }
            } catch (const InputError& e) {
                throw ConfigError(origin, v.line, e.what());
            }
        }
        if (!has_policy)
            throw ConfigError(origin, sec.line, "scenario '" + sec.scenario + "' has no policy");
        try {
            with_overrides(cfg.params, sc.overrides).validate(sc.clock);
            sc.policy.validate();
        } catch (const InputError& e) {
            rethrow_at_line(e, sl, origin, sec.line);
        }
        cfg.scenarios.push_back(std::move(sc));
    }
    if (cfg.scenarios.empty()) {
        Scenario sc{"base", cfg.clock, {}, cfg.policy};
        sc.policy.id = PolicyId::base;
        cfg.scenarios.push_back(sc);
        if (base)
            cfg.notices.push_back("no [scenario] section; running a single base scenario");
    }
    return cfg;
}

}  // namespace

ConfigError::ConfigError(const std::string& origin, int line, const std::string& what)
    : InputError(origin + ":" + std::to_string(line) + ": " + what), line_(line)
{
}

std::string to_string(Provenance p)
{
    switch (p) {
    case Provenance::paper: return "paper";
    case Provenance::derived: return "derived";
    case Provenance::assumed: return "assumed";
    }
    return "assumed";
}

const Scenario& Config::scenario(const std::string& name) const
{
    for (const auto& s : scenarios)
        if (s.name == name)
            return s;
    std::string known;
    for (const auto& s : scenarios)
        known += (known.empty() ? "" : ", ") + s.name;
    throw InputError("no scenario named '" + name + "' (have: " + known + ")");
}

const std::string& shipped_config_text()
{
    static const std::string text(shipped_text);
    return text;
}

Config shipped_config()
{
    static const Config cfg = build(shipped_config_text(), "<shipped config>", nullptr);
    return cfg;
}

Config parse_config(const std::string& text, const std::string& origin)
{
    Config base = shipped_config();
    return build(text, origin, &base);
}

Config load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string serialize_config(const Config& c)
{
    std::ostringstream os;
    auto prov = [&](const std::string& k) {
        auto it = c.provenance.find(k);
        return to_string(it == c.provenance.end() ? Provenance::assumed : it->second);
    };
    os << "[clock]\n"
       << "start_year = " << format_number(c.clock.start_year) << "\n"
       << "end_year = " << format_number(c.clock.end_year) << "\n"
       << "dt = " << format_number(c.clock.dt) << "\n";
    for (const char* section : {"parameters", "trends", "effects"}) {
        os << "\n[" << section << "]\n";
        for (const auto& p : parameter_catalog())
            if (p.section == section)
                os << p.key << " = " << format_number(parameter_value(c.params, p.key)) << " | "
                   << prov(p.section + "." + p.key) << "\n";
        if (std::string(section) == "parameters")
            os << avg_key << " = "
               << (c.params.legacy_average_price ? "production_over_payment" : "payment_over_production") << " | "
               << prov("parameters." + avg_key) << "\n";
    }
    os << "\n[policy]\n";
    for (const auto& k : policy_keys())
        os << k << " = " << policy_value(c.policy, k) << " | " << prov("policy." + k) << "\n";
    for (const auto& s : c.scenarios) {
        os << "\n[scenario " << s.name << "]\n"
           << "policy = " << to_string(s.policy.id) << "\n";
        for (const auto& k : policy_keys())
            if (policy_value(s.policy, k) != policy_value(c.policy, k))
                os << k << " = " << policy_value(s.policy, k) << " | " << prov("scenario." + s.name + "." + k)
                   << "\n";
        for (const auto& [k, v] : s.overrides)
            os << k << " = " << format_number(v) << " | " << prov("scenario." + s.name + "." + k) << "\n";
    }
    return os.str();
}

void override_clock(Config& c, std::optional<double> dt, std::optional<double> horizon)
{
    if (dt)
        c.clock.dt = *dt;
    if (horizon)
        c.clock.end_year = c.clock.start_year + *horizon;
    c.clock.validate();
    c.params.validate(c.clock);
    for (auto& s : c.scenarios) {
        s.clock = c.clock;
        with_overrides(c.params, s.overrides).validate(s.clock);
    }
}

}  // namespace fitsd
