#include "sfas/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <istream>
#include <map>
#include <sstream>

namespace sfas {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

double to_double(const std::string& text) {
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
        throw ConfigError("not a number: '" + t + "'");
    }
    return v;
}

long long to_integer(const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
        throw ConfigError("not an integer: '" + t + "'");
    }
    return v;
}

int to_int(const std::string& text) {
    const long long v = to_integer(text);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError("integer out of range: '" + trim(text) + "'");
    }
    return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    if (!t.empty() && t[0] == '-') {
        throw ConfigError("seed must be non-negative: '" + t + "'");
    }
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
        throw ConfigError("not an unsigned integer: '" + t + "'");
    }
    return v;
}

std::string format_double(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer the shortest representation that round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) {
            return shorter;
        }
    }
    return buf;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += fmt(values[i]);
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"m", [](ExperimentConfig& c, const std::string& v) { c.m = to_int(v); }},
        {"p", [](ExperimentConfig& c, const std::string& v) { c.p = to_int(v); }},
        {"alpha", [](ExperimentConfig& c, const std::string& v) { c.alpha = to_double(v); }},
        {"d0_wavelengths",
         [](ExperimentConfig& c, const std::string& v) { c.d0_wavelengths = to_double(v); }},
        {"m_e", [](ExperimentConfig& c, const std::string& v) { c.m_e = to_int(v); }},
        {"alpha_e", [](ExperimentConfig& c, const std::string& v) { c.alpha_e = to_double(v); }},
        {"c1", [](ExperimentConfig& c, const std::string& v) { c.c1 = to_double(v); }},
        {"coupling_phase",
         [](ExperimentConfig& c, const std::string& v) { c.coupling_phase = to_double(v); }},
        {"band_limit", [](ExperimentConfig& c, const std::string& v) { c.band_limit = to_int(v); }},
        {"snr_db", [](ExperimentConfig& c, const std::string& v) { c.snr_db = parse_double_list(v); }},
        {"snapshots",
         [](ExperimentConfig& c, const std::string& v) { c.snapshots = parse_int_list(v); }},
        {"k", [](ExperimentConfig& c, const std::string& v) { c.k = parse_int_list(v); }},
        {"p_list", [](ExperimentConfig& c, const std::string& v) { c.p_list = parse_int_list(v); }},
        {"spacing_list",
         [](ExperimentConfig& c, const std::string& v) { c.spacing_list = parse_double_list(v); }},
        {"scenes",
         [](ExperimentConfig& c, const std::string& v) {
             c.scenes.clear();
             for (const std::string& s : split(v, ',')) {
                 if (s != "far_field" && s != "mixed_field") {
                     throw ConfigError("scene must be far_field or mixed_field, got '" + s + "'");
                 }
                 c.scenes.push_back(s);
             }
         }},
        {"angle_min", [](ExperimentConfig& c, const std::string& v) { c.angle_min = to_double(v); }},
        {"angle_max", [](ExperimentConfig& c, const std::string& v) { c.angle_max = to_double(v); }},
        {"range_min", [](ExperimentConfig& c, const std::string& v) { c.range_min = to_double(v); }},
        {"range_max", [](ExperimentConfig& c, const std::string& v) { c.range_max = to_double(v); }},
        {"grid_step", [](ExperimentConfig& c, const std::string& v) { c.grid_step = to_double(v); }},
        {"separation_deg",
         [](ExperimentConfig& c, const std::string& v) { c.separation_deg = to_double(v); }},
        {"center_jitter_deg",
         [](ExperimentConfig& c, const std::string& v) { c.center_jitter_deg = to_double(v); }},
        {"failure_threshold_deg",
         [](ExperimentConfig& c, const std::string& v) { c.failure_threshold_deg = to_double(v); }},
        {"trials", [](ExperimentConfig& c, const std::string& v) { c.trials = to_int(v); }},
        {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = to_u64(v); }},
    };
    return table;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : split(text, ',')) {
        if (item.empty()) {
            throw ConfigError("empty list item in '" + text + "'");
        }
        const std::vector<std::string> parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_double(parts[0]));
            continue;
        }
        if (parts.size() > 3) {
            throw ConfigError("bad range '" + item + "'");
        }
        const double start = to_double(parts[0]);
        const double step = parts.size() == 3 ? to_double(parts[1]) : 1.0;
        const double stop = to_double(parts.back());
        if (!(step > 0.0) || stop < start) {
            throw ConfigError("bad range '" + item + "' (need step > 0 and start <= stop)");
        }
        const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
        for (long long i = 0; i <= n; ++i) {
            out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
        }
    }
    if (out.empty()) {
        throw ConfigError("empty list");
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& item : split(text, ',')) {
        if (item.empty()) {
            throw ConfigError("empty list item in '" + text + "'");
        }
        const std::vector<std::string> parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_int(parts[0]));
            continue;
        }
        if (parts.size() > 3) {
            throw ConfigError("bad range '" + item + "'");
        }
        const int start = to_int(parts[0]);
        const int step = parts.size() == 3 ? to_int(parts[1]) : 1;
        const int stop = to_int(parts.back());
        if (step <= 0 || stop < start) {
            throw ConfigError("bad range '" + item + "' (need step > 0 and start <= stop)");
        }
        for (int v = start; v <= stop; v += step) {
            out.push_back(v);
        }
    }
    if (out.empty()) {
        throw ConfigError("empty list");
    }
    return out;
}

void apply_config_text(ExperimentConfig& config, std::istream& in, const std::string& source) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(number);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
        try {
            it->second(config, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + key + ": " + e.what());
        }
    }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    apply_config_text(config, in, path);
}

std::string config_to_text(const ExperimentConfig& c) {
    const auto d = [](double v) { return format_double(v); };
    const auto i = [](int v) { return std::to_string(v); };
    const auto s = [](const std::string& v) { return v; };
    std::ostringstream out;
    out << "m = " << c.m << '\n'
        << "p = " << c.p << '\n'
        << "alpha = " << d(c.alpha) << '\n'
        << "d0_wavelengths = " << d(c.d0_wavelengths) << '\n'
        << "m_e = " << c.m_e << '\n'
        << "alpha_e = " << d(c.alpha_e) << '\n'
        << "c1 = " << d(c.c1) << '\n'
        << "coupling_phase = " << d(c.coupling_phase) << '\n'
        << "band_limit = " << c.band_limit << '\n'
        << "snr_db = " << join(c.snr_db, d) << '\n'
        << "snapshots = " << join(c.snapshots, i) << '\n'
        << "k = " << join(c.k, i) << '\n';
    if (!c.p_list.empty()) {
        out << "p_list = " << join(c.p_list, i) << '\n';
    }
    if (!c.spacing_list.empty()) {
        out << "spacing_list = " << join(c.spacing_list, d) << '\n';
    }
    out << "scenes = " << join(c.scenes, s) << '\n'
        << "angle_min = " << d(c.angle_min) << '\n'
        << "angle_max = " << d(c.angle_max) << '\n'
        << "range_min = " << d(c.range_min) << '\n'
        << "range_max = " << d(c.range_max) << '\n'
        << "grid_step = " << d(c.grid_step) << '\n'
        << "separation_deg = " << d(c.separation_deg) << '\n'
        << "center_jitter_deg = " << d(c.center_jitter_deg) << '\n'
        << "failure_threshold_deg = " << d(c.failure_threshold_deg) << '\n'
        << "trials = " << c.trials << '\n'
        << "seed = " << c.seed << '\n';
    return out.str();
}

void validate_config(const ExperimentConfig& c) {
    const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (c.m < 1 || c.m_e < 1) fail("m and m_e must be positive");
    if (c.p < 0 || 2 * c.p >= c.m) fail("p must satisfy 0 <= 2p < m");
    if (!(c.alpha > 0.0) || !(c.alpha_e > 0.0) || !(c.d0_wavelengths > 0.0)) {
        fail("alpha, alpha_e and d0_wavelengths must be positive");
    }
    if (c.c1 < 0.0 || c.c1 >= 1.0) fail("c1 must lie in [0, 1)");
    if (c.snapshots.empty() || c.snr_db.empty() || c.k.empty()) {
        fail("snr_db, snapshots and k must be non-empty");
    }
    for (int n : c.snapshots) {
        if (n < 2) fail("snapshots must be >= 2");
    }
    for (int k : c.k) {
        if (k < 0) fail("k must be non-negative");
    }
    for (int p : c.p_list) {
        if (p < 0 || 2 * p >= c.m) fail("p_list entries must satisfy 0 <= 2p < m");
    }
    for (double s : c.spacing_list) {
        if (!(s > 0.0)) fail("spacing_list entries must be positive");
    }
    if (!(c.angle_min > -90.0 && c.angle_max < 90.0 && c.angle_min <= c.angle_max)) {
        fail("need -90 < angle_min <= angle_max < 90");
    }
    if (!(c.range_min > 0.0 && c.range_max >= c.range_min)) fail("need 0 < range_min <= range_max");
    if (!(c.grid_step > 0.0 && c.grid_step < 90.0)) fail("grid_step must lie in (0, 90)");
    if (c.trials < 0) fail("trials must be non-negative");
    if (c.threads < 0) fail("threads must be non-negative");
}

}  // namespace sfas
