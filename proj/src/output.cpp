#include "fitsd/output.hpp"

#include "fitsd/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fitsd {

namespace {

std::vector<std::string> sorted(std::vector<std::string> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> csv_columns(const RunResult& r)
{
    std::vector<std::string> cols{"time"};
    for (const auto* g : {&r.stock_names, &r.flow_names, &r.auxiliary_names})
        for (const auto& n : sorted(*g))
            cols.push_back(n);
    return cols;
}

std::string to_csv(const RunResult& r)
{
    auto cols = csv_columns(r);
    std::vector<const std::vector<double>*> data;
    for (std::size_t i = 1; i < cols.size(); ++i)
        data.push_back(&r.series(cols[i]));

    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i)
        out += (i ? "," : "") + cols[i];
    out += '\n';
    for (std::size_t k = 0; k < r.time.size(); ++k) {
        out += format_number(r.time[k]);
        for (const auto* d : data) {
            out += ',';
            out += format_number((*d)[k]);
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw InputError("cannot write '" + path + "'");
    f << content;
    if (!f)
        throw InputError("write failed for '" + path + "'");
}

void emit_csv(const RunResult& r, const std::string& path)
{
    write_text_file(path, to_csv(r));
}

std::string comparison_csv(const ComparisonReport& rep)
{
    std::string out = "scenario,policy,installed_capacity,penetration_rate,tendency_to_invest,suna_debt,"
                      "delay_in_debt_payment\n";
    for (const auto& row : rep.rows)
        out += row.scenario + "," + to_string(row.policy) + "," + format_number(row.installed_capacity) + ","
            + format_number(row.penetration_rate) + "," + format_number(row.tendency_to_invest) + ","
            + format_number(row.suna_debt) + "," + format_number(row.delay_in_debt_payment) + "\n";
    return out;
}

const std::vector<std::string>& plotted_variables()
{
    static const std::vector<std::string> vars{
        "installed_capacity", "penetration_rate", "tendency_to_invest", "budget", "suna_debt",
        "delay_in_debt_payment", "fit_price", "res_tax", "roi", "social_acceptance", "investor_trust",
        "annual_fit_requests"};
    return vars;
}

std::string plot_data_csv(const ComparisonReport& rep, const std::string& var)
{
    std::string out = "time";
    for (const auto& run : rep.runs)
        out += "," + run.name;
    out += '\n';
    if (rep.runs.empty())
        return out;
    const auto& time = rep.runs.front().result.time;
    for (const auto& run : rep.runs)
        if (run.result.time != time)
            throw InputError("plot data: scenarios use different clocks");
    for (std::size_t k = 0; k < time.size(); ++k) {
        out += format_number(time[k]);
        for (const auto& run : rep.runs)
            out += "," + format_number(run.result.series(var)[k]);
        out += '\n';
    }
    return out;
}

std::string plot_svg(const ComparisonReport& rep, const std::string& var)
{
    const double W = 720, H = 420, left = 80, right = 150, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double t0 = 0, t1 = 1, lo = 0, hi = 0;
    bool first = true;
    for (const auto& run : rep.runs) {
        const auto& t = run.result.time;
        const auto& v = run.result.series(var);
        if (first) {
            t0 = t.front();
            t1 = t.back();
            first = false;
        }
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (hi == lo)
        hi = lo + 1;
    auto X = [&](double t) { return left + (t - t0) / (t1 - t0) * pw; };
    auto Y = [&](double v) { return top + (1 - (v - lo) / (hi - lo)) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left << "\" y=\"24\" font-size=\"15\">" << xml_escape(var) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double v = lo + (hi - lo) * i / 4.0;
        os << "<text x=\"" << left - 6 << "\" y=\"" << fixed(Y(v) + 4, 1) << "\" text-anchor=\"end\">"
           << xml_escape(format_number(std::round(v * 1e4) / 1e4)) << "</text>\n";
        double t = t0 + (t1 - t0) * i / 4.0;
        os << "<text x=\"" << fixed(X(t), 1) << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">"
           << format_number(t) << "</text>\n";
    }
    std::size_t ci = 0;
    for (const auto& run : rep.runs) {
        const auto& t = run.result.time;
        const auto& v = run.result.series(var);
        const char* col = colors[ci % (sizeof colors / sizeof *colors)];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < t.size(); ++k)
            os << (k ? " " : "") << fixed(X(t[k]), 2) << "," << fixed(Y(v[k]), 2);
        os << "\"/>\n";
        double ly = top + 16 + 18 * static_cast<double>(ci);
        os << "<line x1=\"" << W - right + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 36 << "\" y2=\""
           << ly << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - right + 42 << "\" y=\"" << ly + 4 << "\">" << xml_escape(run.name) << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    return os.str();
}

std::string format_findings(const std::vector<Finding>& findings)
{
    std::string out;
    for (const auto& f : findings)
        out += std::string(f.passed ? "PASS" : "FAIL") + " [" + f.id + "] " + f.description + ": " + f.detail + "\n";
    return out;
}

std::string format_findings(const std::vector<ValidationFinding>& findings)
{
    std::string out;
    for (const auto& f : findings) {
        std::string tag = f.status == ValidationFinding::Status::pass ? "PASS"
            : f.status == ValidationFinding::Status::fail               ? "FAIL"
                                                                        : "OUT-OF-BAND";
        out += tag + " [" + f.id + "] " + f.description + ": " + f.detail + "\n";
    }
    return out;
}

std::vector<std::pair<double, double>> read_historical_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read historical data '" + path + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw InputError(path + ":" + std::to_string(n) + ": expected two columns year,value");
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string a = strip(line.substr(0, comma)), b = strip(line.substr(comma + 1));
        try {
            rows.emplace_back(parse_number(a, "year"), parse_number(b, "value"));
        } catch (const InputError& e) {
            if (rows.empty() && n == 1)
                continue;  // header
            throw InputError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    if (rows.size() < 2)
        throw InputError(path + ": need at least two observations");
    return rows;
}

}  // namespace fitsd
