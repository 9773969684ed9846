#pragma once

// Material configuration files.
//
//   # comment
//   [electric]
//   omega_p = 0.75
//   omega_t = 1.03
//   gamma   = 0.001
//   [magnetic]
//   omega_p = 0.43
//   omega_t = 1.0
//   gamma   = 0.001
//
// Both sections and all three keys per section are required; anything
// else is rejected.

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "lhmdecay/errors.hpp"
#include "lhmdecay/materials.hpp"

namespace lhm {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(where + ": not a finite number: '" + text + "'");
    }
    return v;
}

}  // namespace detail

inline MaterialParams parse_material_config(std::istream& in, const std::string& source = "config") {
    static const std::array<std::string, 3> kKeys{"omega_p", "omega_t", "gamma"};
    std::map<std::string, std::map<std::string, double>> sections;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(where + ": malformed section header");
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "electric" && section != "magnetic") {
                throw ConfigError(where + ": unknown section '" + section + "'");
            }
            if (sections.count(section) != 0) {
                throw ConfigError(where + ": duplicate section '" + section + "'");
            }
            sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError(where + ": key outside of a section");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
        auto& sec = sections[section];
        if (sec.count(key) != 0) {
            throw ConfigError(where + ": duplicate key '" + key + "'");
        }
        sec[key] = detail::parse_number(value, where);
    }
    for (const char* name : {"electric", "magnetic"}) {
        if (sections.count(name) == 0) {
            throw ConfigError(source + ": missing section [" + name + "]");
        }
        for (const auto& key : kKeys) {
            if (sections[name].count(key) == 0) {
                throw ConfigError(source + ": missing key '" + key + "' in [" + name + "]");
            }
        }
    }
    MaterialParams p;
    p.omega_pe = sections["electric"]["omega_p"];
    p.omega_te = sections["electric"]["omega_t"];
    p.gamma_e = sections["electric"]["gamma"];
    p.omega_pm = sections["magnetic"]["omega_p"];
    p.omega_tm = sections["magnetic"]["omega_t"];
    p.gamma_m = sections["magnetic"]["gamma"];
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return p;
}

inline MaterialParams load_material_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    return parse_material_config(in, path);
}

inline std::string format_material_config(const MaterialParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "[electric]\nomega_p = " << p.omega_pe << "\nomega_t = " << p.omega_te
       << "\ngamma = " << p.gamma_e << "\n\n[magnetic]\nomega_p = " << p.omega_pm
       << "\nomega_t = " << p.omega_tm << "\ngamma = " << p.gamma_m << "\n";
    return os.str();
}

}  // namespace lhm
