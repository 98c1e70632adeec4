#include "rsfem/errors.hpp"
#include "rsfem/harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rsfem {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double to_double(const std::string& key, const std::string& s)
{
    // allow simple fractions such as 1/80
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        return to_double(key, s.substr(0, slash)) / to_double(key, s.substr(slash + 1));
    }
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) {
        throw InvalidArgument("setting '" + key + "': '" + s + "' is not a number");
    }
    return v;
}

int to_int(const std::string& key, const std::string& s)
{
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InvalidArgument("setting '" + key + "': '" + s + "' is not an integer");
    }
    return v;
}

std::vector<double> double_list(const std::string& key, const std::string& s)
{
    std::vector<double> out;
    for (const auto& item : split(s, ',')) {
        out.push_back(to_double(key, item));
    }
    if (out.empty()) {
        throw InvalidArgument("setting '" + key + "' needs at least one value");
    }
    return out;
}

// Comma-separated integers; "a..b" expands to the inclusive range.
std::vector<int> int_list(const std::string& key, const std::string& s)
{
    std::vector<int> out;
    for (const auto& item : split(s, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_int(key, item));
            continue;
        }
        const int a = to_int(key, trim(item.substr(0, dots)));
        const int b = to_int(key, trim(item.substr(dots + 2)));
        if (b < a || b - a > 100000) {
            throw InvalidArgument("setting '" + key + "': bad range '" + item + "'");
        }
        for (int i = a; i <= b; ++i) {
            out.push_back(i);
        }
    }
    if (out.empty()) {
        throw InvalidArgument("setting '" + key + "' needs at least one value");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& s)
{
    const std::string l = lower(s);
    if (l == "true" || l == "1" || l == "yes" || l == "on") {
        return true;
    }
    if (l == "false" || l == "0" || l == "no" || l == "off") {
        return false;
    }
    throw InvalidArgument("setting '" + key + "': '" + s + "' is not a boolean");
}

} // namespace

std::string example_name(Example e)
{
    switch (e) {
    case Example::A: return "a";
    case Example::B: return "b";
    case Example::C: return "c";
    case Example::D: return "d";
    }
    return "?";
}

Example parse_example(const std::string& s)
{
    const std::string l = lower(trim(s));
    if (l == "a") return Example::A;
    if (l == "b") return Example::B;
    if (l == "c") return Example::C;
    if (l == "d") return Example::D;
    throw InvalidArgument("unknown example '" + s + "' (expected a, b, c or d)");
}

std::string study_name(Study s)
{
    switch (s) {
    case Study::Temporal: return "temporal";
    case Study::Spatial: return "spatial";
    case Study::Blowup: return "blowup";
    }
    return "?";
}

Study parse_study(const std::string& s)
{
    const std::string l = lower(trim(s));
    if (l == "temporal") return Study::Temporal;
    if (l == "spatial") return Study::Spatial;
    if (l == "blowup") return Study::Blowup;
    throw InvalidArgument("unknown study '" + s + "' (expected temporal, spatial or blowup)");
}

std::string reference_name(Reference r)
{
    switch (r) {
    case Reference::Automatic: return "auto";
    case Reference::Exact: return "exact";
    case Reference::TimeDiscrete: return "time_discrete";
    case Reference::FineStep: return "fine_step";
    }
    return "?";
}

Reference parse_reference(const std::string& s)
{
    std::string l = lower(trim(s));
    std::replace(l.begin(), l.end(), '-', '_');
    if (l == "auto" || l == "automatic") return Reference::Automatic;
    if (l == "exact") return Reference::Exact;
    if (l == "time_discrete" || l == "discrete") return Reference::TimeDiscrete;
    if (l == "fine_step" || l == "fine") return Reference::FineStep;
    throw InvalidArgument("unknown reference '" + s + "' (expected auto, exact, time_discrete or fine_step)");
}

ReportFormat parse_format(const std::string& s)
{
    const std::string l = lower(trim(s));
    if (l == "csv") return ReportFormat::Csv;
    if (l == "text" || l == "txt") return ReportFormat::Text;
    throw InvalidArgument("unknown format '" + s + "' (expected csv or text)");
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value)
{
    std::string key = trim(raw_key);
    while (!key.empty() && key.front() == '-') {
        key.erase(key.begin());
    }
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(raw_value);

    if (key == "example") {
        cfg.example = parse_example(value);
    } else if (key == "scheme") {
        cfg.scheme = parse_scheme(value);
    } else if (key == "alpha") {
        cfg.alpha = double_list(key, value);
    } else if (key == "gamma") {
        cfg.gamma = to_double(key, value);
    } else if (key == "k") {
        cfg.k = int_list(key, value);
    } else if (key == "K") {
        cfg.K = int_list(key, value);
    } else if (key == "N") {
        cfg.N = int_list(key, value);
    } else if (key == "t") {
        cfg.t = double_list(key, value);
    } else if (key == "projection") {
        cfg.projection = parse_projection(value);
    } else if (key == "study") {
        cfg.study = parse_study(value);
    } else if (key == "include-history-origin") {
        cfg.include_history_origin = to_bool(key, value);
    } else if (key == "reference") {
        cfg.reference = parse_reference(value);
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "format") {
        (void)parse_format(value);
        cfg.format = lower(value);
    } else if (key == "fine-step-factor") {
        cfg.fine_step_factor = to_int(key, value);
    } else if (key == "l2-tol") {
        cfg.tolerances.l2_tol = to_double(key, value);
    } else if (key == "h1-tol") {
        cfg.tolerances.h1_tol = to_double(key, value);
    } else {
        throw InvalidArgument("unknown setting '" + raw_key + "'");
    }
}

void apply_config_text(ExperimentConfig& cfg, const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key=value");
        }
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

} // namespace rsfem
