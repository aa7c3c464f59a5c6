#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ftb/errors.hpp"

namespace ftb {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1";

namespace detail {

inline void dump_stable(const ordered_json& j, std::string& out, int indent, int depth) {
    auto pad = [&](int d) { out.append(size_t(indent) * size_t(d), ' '); };
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                pad(depth + 1);
                out += ordered_json(it.key()).dump();
                out += ": ";
                dump_stable(it.value(), out, indent, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            pad(depth);
            out += '}';
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                pad(depth + 1);
                dump_stable(j[i], out, indent, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            pad(depth);
            out += ']';
            return;
        }
        case ordered_json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            // keep the value a JSON number even when %.17g prints an integer
            if (out.find_first_of(".eE", out.size() - std::char_traits<char>::length(buf)) ==
                std::string::npos)
                out += ".0";
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

} // namespace detail

// Serialization contract: stable key order (insertion order) and floating
// point numbers at 17 significant digits, so identical runs yield identical
// bytes.
inline std::string dump_report(const ordered_json& j, int indent = 2) {
    std::string out;
    detail::dump_stable(j, out, indent, 0);
    out += '\n';
    return out;
}

inline void emit_report(const ordered_json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open report path '" + path + "' for writing");
    auto text = dump_report(j);
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) throw ConfigError("failed writing report to '" + path + "'");
}

} // namespace ftb
