#ifndef KNOTFAIR_CONFIG_HPP
#define KNOTFAIR_CONFIG_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "knotfair/badness.hpp"
#include "knotfair/base.hpp"
#include "knotfair/render.hpp"
#include "knotfair/symmetry.hpp"

namespace knotfair {

// key = value files, '#' comments. Schema documented in the README; unknown
// keys are rejected so typos fail loudly.
using ConfigMap = std::map<std::string, std::string>;

namespace cfgdetail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline int parse_int(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw Error(Errc::MalformedPath, "bad integer '" + s + "' in " + what);
    return static_cast<int>(v);
}

inline double parse_real(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw Error(Errc::MalformedPath, "bad number '" + s + "' in " + what);
    return v;
}

}  // namespace cfgdetail

inline ConfigMap parse_config(std::istream& in) {
    ConfigMap map;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = cfgdetail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::MalformedPath,
                        "config line " + std::to_string(lineno) + " has no '='");
        map[cfgdetail::trim(line.substr(0, eq))] = cfgdetail::trim(line.substr(eq + 1));
    }
    return map;
}

inline ConfigMap read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open config " + path);
    return parse_config(in);
}

// Weight file keys mirror the BadnessWeights fields.
inline BadnessWeights weights_from_config(const ConfigMap& cfg) {
    BadnessWeights w;
    for (const auto& [key, value] : cfg) {
        double* slot = nullptr;
        if (key == "w_angle") slot = &w.w_angle;
        else if (key == "w_bend") slot = &w.w_bend;
        else if (key == "w_cross_sep") slot = &w.w_cross_sep;
        else if (key == "w_repel") slot = &w.w_repel;
        else if (key == "w_topology") slot = &w.w_topology;
        else if (key == "repel_radius") slot = &w.repel_radius;
        else if (key == "cross_sep_radius") slot = &w.cross_sep_radius;
        else if (key == "b_topo") slot = &w.b_topo;
        else throw Error(Errc::MalformedPath, "unknown weight key '" + key + "'");
        *slot = cfgdetail::parse_real(value, key);
    }
    if (!w.valid())
        throw Error(Errc::MalformedPath, "weights must be nonnegative with at least one positive");
    return w;
}

// Symmetry file:
//   mver = 2:3, 9:7, 5:11, 10:6
//   xver = 8
//   mrot = 12,4,16,8,20 ; 13,5,17,9,1 ; 11,3,15,7,19 ; 2,14,6,18,10
inline SymmetrySpec symmetry_from_config(const ConfigMap& cfg) {
    SymmetrySpec spec;
    for (const auto& [key, value] : cfg) {
        if (key == "mver") {
            for (const std::string& pair : cfgdetail::split(value, ',')) {
                const auto colon = pair.find(':');
                if (colon == std::string::npos)
                    throw Error(Errc::MalformedPath, "mver entries look like a:b, got '" + pair + "'");
                spec.mver.emplace_back(
                    cfgdetail::parse_int(cfgdetail::trim(pair.substr(0, colon)), "mver"),
                    cfgdetail::parse_int(cfgdetail::trim(pair.substr(colon + 1)), "mver"));
            }
        } else if (key == "xver") {
            for (const std::string& s : cfgdetail::split(value, ','))
                spec.xver.push_back(cfgdetail::parse_int(s, "xver"));
        } else if (key == "mrot") {
            for (const std::string& orbit_text : cfgdetail::split(value, ';')) {
                std::vector<int> orbit;
                for (const std::string& s : cfgdetail::split(orbit_text, ','))
                    orbit.push_back(cfgdetail::parse_int(s, "mrot"));
                if (orbit.size() < 2)
                    throw Error(Errc::MalformedPath, "mrot orbit needs at least 2 nodes");
                spec.mrot.push_back(std::move(orbit));
            }
        } else {
            throw Error(Errc::MalformedPath, "unknown symmetry key '" + key + "'");
        }
    }
    if (!spec.mrot.empty()) spec.rotation_order = static_cast<int>(spec.mrot.front().size());
    return spec;
}

// Over/under table: one "over under" pair of segment labels per line.
inline OverUnderSpec overunder_from_text(std::istream& in) {
    OverUnderSpec ou;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = cfgdetail::trim(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        int over = 0, under = 0;
        if (!(ss >> over >> under))
            throw Error(Errc::MalformedPath,
                        "over/under line " + std::to_string(lineno) + " needs two labels");
        std::string extra;
        if (ss >> extra)
            throw Error(Errc::MalformedPath,
                        "over/under line " + std::to_string(lineno) + " has trailing text");
        ou.rows.emplace_back(over, under);
    }
    return ou;
}

inline OverUnderSpec read_overunder(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open over/under file " + path);
    return overunder_from_text(in);
}

}  // namespace knotfair

#endif  // KNOTFAIR_CONFIG_HPP
