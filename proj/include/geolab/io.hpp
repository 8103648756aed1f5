#pragma once

// Experiment plumbing: flat dotted-key config files, shortest
// round-trip decimal rendering, CSV tables, and run manifests.

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "geolab/surface.hpp"

namespace geolab {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string render_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct Config {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw GeolabError("config: bad number for key " + key);
        }
    }

    long get_int(const std::string& key, long fallback) const {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        try {
            return std::stol(it->second);
        } catch (const std::exception&) {
            throw GeolabError("config: bad integer for key " + key);
        }
    }

    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw GeolabError("config: bad list entry for key " + key);
            }
        }
        if (out.empty()) throw GeolabError("config: empty list for key " + key);
        return out;
    }

    /// Canonical text form: sorted key = value lines. Round-trips.
    std::string serialize() const {
        std::string out;
        for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
        return out;
    }
};

inline Config parse_config_text(const std::string& text) {
    Config cfg;
    std::stringstream ss(text);
    std::string line;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw GeolabError("config: missing '=' on line " + std::to_string(lineno));
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw GeolabError("config: empty key on line " + std::to_string(lineno));
        cfg.kv[key] = val;
    }
    return cfg;
}

inline Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GeolabError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Surface model from config keys model.kind (constant | collar) and,
/// for the collar, model.c, model.w, model.s.
inline SurfaceModel model_from_config(const Config& cfg) {
    std::string kind = cfg.get("model.kind", "constant");
    if (kind == "constant") return make_constant_negative();
    if (kind == "collar")
        return build_collar(cfg.get_double("model.c", 1.0), cfg.get_double("model.w", 0.5),
                            cfg.get_double("model.s", 0.5));
    throw GeolabError("config: unknown model.kind '" + kind + "'");
}

/// FNV-1a over the canonical serialized form; stable under key
/// reordering in the source file because serialization sorts.
inline std::string config_hash(const Config& cfg) {
    std::string s = cfg.serialize();
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != header.size())
            throw GeolabError("csv: row width does not match header");
        rows.push_back(std::move(row));
    }

    std::string serialize() const {
        std::string out;
        auto emit = [&out](const std::vector<std::string>& cells) {
            for (size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        emit(header);
        for (const auto& r : rows) emit(r);
        return out;
    }
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GeolabError("io: cannot write " + path);
    out << content;
}

} // namespace geolab
