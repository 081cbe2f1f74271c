#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "udwcp/bec.hpp"
#include "udwcp/config.hpp"
#include "udwcp/fidelity_map.hpp"
#include "udwcp/observables.hpp"
#include "udwcp/series.hpp"

namespace udwcp {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Run configuration

struct GridSpec {
    double start = 0.0;
    double stop = 1.0;
    long points = 101;

    [[nodiscard]] std::vector<double> build() const { return linear_grid(start, stop, points); }
};

/// Cloud parameters as read from a config file; r_tf may list several radii.
struct BECSettings {
    double n_atoms = 1.0;
    std::vector<double> r_tf;
};

enum class OutputFormat { csv, json };

struct OutputSpec {
    std::filesystem::path dir = ".";
    OutputFormat format = OutputFormat::csv;
};

struct RunConfig {
    PhysicsConfig physics;
    TruncationPolicy policy;
    std::optional<BECSettings> bec;
    GridSpec grid;
    OutputSpec output;
};

namespace detail {

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

inline double get_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a number");
    return v.get<double>();
}

inline long get_integer(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError("'" + std::string(key) + "' in " + where + " must be an integer");
    return v.get<long>();
}

}  // namespace detail

/// Parses the config schema
///   {"L", "m", "lambda", "Omega", "alpha", "a0",
///    "policy": {"fidelity_tol", "min_terms", "max_terms", "consecutive_hits"},
///    "grid": {"start", "stop", "points"},
///    "bec": {"n_atoms", "r_tf"}}
/// The six physics keys are required; the sections and their keys are
/// optional. Unknown keys are rejected. Throws ConfigError.
inline RunConfig parse_run_config(const json& j) {
    detail::reject_unknown_keys(j, {"L", "m", "lambda", "Omega", "alpha", "a0", "policy", "grid", "bec"},
                                "config");
    RunConfig rc;
    rc.physics.L = detail::get_number(j, "L", "config");
    rc.physics.m = detail::get_number(j, "m", "config");
    rc.physics.lambda = detail::get_number(j, "lambda", "config");
    rc.physics.Omega = detail::get_number(j, "Omega", "config");
    rc.physics.alpha = detail::get_number(j, "alpha", "config");
    rc.physics.a0 = detail::get_number(j, "a0", "config");
    rc.physics.validate();

    if (j.contains("policy")) {
        const json& p = j.at("policy");
        detail::reject_unknown_keys(p, {"fidelity_tol", "min_terms", "max_terms", "consecutive_hits"},
                                    "policy");
        if (p.contains("fidelity_tol")) rc.policy.fidelity_tol = detail::get_number(p, "fidelity_tol", "policy");
        if (p.contains("min_terms")) rc.policy.min_terms = detail::get_integer(p, "min_terms", "policy");
        if (p.contains("max_terms")) rc.policy.max_terms = detail::get_integer(p, "max_terms", "policy");
        if (p.contains("consecutive_hits"))
            rc.policy.consecutive_hits = static_cast<int>(detail::get_integer(p, "consecutive_hits", "policy"));
    }
    rc.policy.validate();

    rc.grid.stop = rc.physics.L;
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        detail::reject_unknown_keys(g, {"start", "stop", "points"}, "grid");
        if (g.contains("start")) rc.grid.start = detail::get_number(g, "start", "grid");
        if (g.contains("stop")) rc.grid.stop = detail::get_number(g, "stop", "grid");
        if (g.contains("points")) rc.grid.points = detail::get_integer(g, "points", "grid");
    }
    if (rc.grid.points < 1) throw ConfigError("grid: points must be >= 1");
    if (rc.grid.points > 1 && !(rc.grid.start < rc.grid.stop))
        throw ConfigError("grid: start must be < stop");

    if (j.contains("bec")) {
        const json& b = j.at("bec");
        detail::reject_unknown_keys(b, {"n_atoms", "r_tf"}, "bec");
        BECSettings s;
        if (b.contains("n_atoms")) s.n_atoms = detail::get_number(b, "n_atoms", "bec");
        if (!b.contains("r_tf")) throw ConfigError("missing key 'r_tf' in bec");
        const json& r = b.at("r_tf");
        if (r.is_number()) {
            s.r_tf.push_back(r.get<double>());
        } else if (r.is_array() && !r.empty()) {
            for (const json& v : r) {
                if (!v.is_number()) throw ConfigError("'r_tf' entries must be numbers");
                s.r_tf.push_back(v.get<double>());
            }
        } else {
            throw ConfigError("'r_tf' must be a number or a nonempty array of numbers");
        }
        for (double radius : s.r_tf) BECConfig{s.n_atoms, radius, 0.0}.validate();
        rc.bec = s;
    }
    return rc;
}

inline RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

/// The resolved config in the input schema; parse_run_config(to_json(rc)) == rc.
inline json to_json(const RunConfig& rc) {
    const PhysicsConfig& p = rc.physics;
    json j = {{"L", p.L},         {"m", p.m},         {"lambda", p.lambda},
              {"Omega", p.Omega}, {"alpha", p.alpha}, {"a0", p.a0}};
    j["policy"] = {{"fidelity_tol", rc.policy.fidelity_tol},
                   {"min_terms", rc.policy.min_terms},
                   {"max_terms", rc.policy.max_terms},
                   {"consecutive_hits", rc.policy.consecutive_hits}};
    j["grid"] = {{"start", rc.grid.start}, {"stop", rc.grid.stop}, {"points", rc.grid.points}};
    if (rc.bec) {
        json r = rc.bec->r_tf.size() == 1 ? json(rc.bec->r_tf.front()) : json(rc.bec->r_tf);
        j["bec"] = {{"n_atoms", rc.bec->n_atoms}, {"r_tf", r}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// Text output

/// 17 significant digits in scientific notation.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

/// A CSV table of preformatted cells.
struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::string to_csv() const {
        std::string out;
        auto line = [&out](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(headers);
        for (const auto& r : rows) line(r);
        return out;
    }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// CSV of a single profile: header `x,<label>`.
inline Table profile_table(const SpatialProfile& p) {
    Table t{{"x", p.label}, {}};
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        t.rows.push_back({format_number(p.grid[i]), format_number(p.values[i])});
    return t;
}

/// Sidecar metadata for a set of profiles sharing one grid.
inline json profiles_metadata(const std::vector<const SpatialProfile*>& profiles) {
    json cols = json::array();
    for (const auto* p : profiles) {
        json conv = json::array(), terms = json::array();
        for (const auto& s : p->status) {
            conv.push_back(s.converged);
            terms.push_back(s.terms_used);
        }
        cols.push_back({{"label", p->label}, {"converged", conv}, {"terms_used", terms},
                        {"all_converged", p->all_converged()}});
    }
    return cols;
}

/// Long-format CSV: N,K,fidelity.
inline Table fidelity_table(const FidelityMap& map) {
    Table t{{"N", "K", "fidelity"}, {}};
    for (std::size_t i = 0; i < map.n_axis.size(); ++i)
        for (std::size_t j = 0; j < map.k_axis.size(); ++j)
            t.rows.push_back({std::to_string(map.n_axis[i]), std::to_string(map.k_axis[j]),
                              format_number(map.values[i][j])});
    return t;
}

inline json to_json(const FidelityMap& map) {
    return {{"panel", std::string(panel_name(map.panel))},
            {"n_axis", map.n_axis},
            {"k_axis", map.k_axis},
            {"values", map.values}};
}

}  // namespace udwcp
