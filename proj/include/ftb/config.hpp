#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ftb/errors.hpp"
#include "ftb/metrics.hpp"

namespace ftb {

// Flat dotted-key config, one `key = value` per line, '#' comments.
//
//   metric.name = randers_const
//   metric.n = 2
//   metric.b = 0.1
//   sample.seed = 7
//   sample.count = 20
//   sample.point.1 = 0.1 0.2 ; 1.0 0.5     # explicit points override sampling
//   suites = brackets, connection
//   tol.koszul = 1e-8
//   out = report.json
struct RunConfig {
    std::string metric_name = "euclidean";
    MetricParams params;
    std::uint64_t seed = 1;
    int count = 10;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> explicit_points;
    std::vector<std::string> suites = {"brackets", "connection", "foliation", "contact", "curvature"};
    std::map<std::string, double> tolerances; // overrides only; defaults live in the runner
    std::string out_path;
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_reals(const std::string& s) {
    std::istringstream is(s);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    if (!is.eof()) throw ConfigError("malformed number list: '" + s + "'");
    return out;
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool suites_given = false;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> points;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        try {
            if (key == "metric.name") {
                cfg.metric_name = value;
            } else if (key == "metric.n") {
                cfg.params.n = std::stoi(value);
                if (cfg.params.n < 2) throw ConfigError("metric.n must be >= 2");
            } else if (key == "metric.b") {
                cfg.params.b = std::stod(value);
            } else if (key == "sample.seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "sample.count") {
                cfg.count = std::stoi(value);
                if (cfg.count < 1) throw ConfigError("sample.count must be positive");
            } else if (key.rfind("sample.point.", 0) == 0) {
                int idx = std::stoi(key.substr(13));
                auto semi = value.find(';');
                if (semi == std::string::npos)
                    throw ConfigError("sample.point wants 'x... ; y...'");
                points[idx] = {detail::parse_reals(value.substr(0, semi)),
                               detail::parse_reals(value.substr(semi + 1))};
            } else if (key == "suites") {
                cfg.suites.clear();
                suites_given = true;
                std::istringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    tok = detail::trim(tok);
                    if (!tok.empty()) cfg.suites.push_back(tok);
                }
            } else if (key.rfind("tol.", 0) == 0) {
                double tol = std::stod(value);
                if (!(tol > 0.0)) throw ConfigError("tolerances must be positive");
                cfg.tolerances[key.substr(4)] = tol;
            } else if (key == "out") {
                cfg.out_path = value;
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    (void)suites_given;
    for (auto& [idx, xy] : points) cfg.explicit_points.push_back(std::move(xy));
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace ftb
