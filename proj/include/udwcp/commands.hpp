#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "udwcp/bec.hpp"
#include "udwcp/fidelity_map.hpp"
#include "udwcp/io.hpp"
#include "udwcp/observables.hpp"

namespace udwcp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitUnconverged = 4;

/// Per-command flags. Unused fields are ignored by commands that do not read them.
struct CommandOptions {
    bool split = false;                      // potential
    std::optional<double> sigma;             // excite
    double tolerance = 0.2;                  // proportionality
    FidelityPanel panel = FidelityPanel::excitation;
    std::pair<long, long> n_range{1, 25};    // fidelity-map
    std::pair<long, long> k_range{1, 25};
    bool abs_fidelity = false;
    std::vector<double> r_tf;                // bec; overrides the config radii
    QuadratureSpec quad;
    long terms = 0;                          // oracle
};

namespace detail {

inline std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json base_metadata(std::string_view command, const RunConfig& rc, json options) {
    return {{"command", std::string(command)}, {"options", std::move(options)}, {"config", to_json(rc)}};
}

/// Writes <stem>.csv plus the <stem>.json sidecar, or only <stem>.json with
/// the data embedded when the format is json.
inline void emit(const RunConfig& rc, const std::string& stem, const Table& table, json meta) {
    meta["columns"] = table.headers;
    if (rc.output.format == OutputFormat::csv) {
        write_text(rc.output.dir / (stem + ".csv"), table.to_csv());
    } else {
        json rows = json::array();
        for (const auto& r : table.rows) rows.push_back(r);
        meta["rows"] = rows;
    }
    write_text(rc.output.dir / (stem + ".json"), dump(meta));
}

inline Table merge_profiles(const std::vector<const SpatialProfile*>& profiles) {
    Table t{{"x"}, {}};
    for (const auto* p : profiles) t.headers.push_back(p->label);
    const auto& grid = profiles.front()->grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row{format_number(grid[i])};
        for (const auto* p : profiles) row.push_back(format_number(p->values[i]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline int profiles_exit(const std::vector<const SpatialProfile*>& profiles, std::ostream& err) {
    long bad = 0;
    for (const auto* p : profiles)
        for (const auto& s : p->status) bad += s.converged ? 0 : 1;
    if (bad == 0) return kExitOk;
    err << "warning: " << bad << " grid evaluation(s) hit max_terms without converging\n";
    return kExitUnconverged;
}

inline int emit_profiles(const RunConfig& rc, std::string_view command, json options,
                         const std::vector<const SpatialProfile*>& profiles, std::ostream& err) {
    json meta = base_metadata(command, rc, std::move(options));
    meta["convergence"] = profiles_metadata(profiles);
    emit(rc, std::string(command), merge_profiles(profiles), std::move(meta));
    return profiles_exit(profiles, err);
}

}  // namespace detail

/// E_CP over the grid; with split, also the E1 and E2 columns.
inline int cmd_potential(const RunConfig& rc, const CommandOptions& opt, std::ostream& err) {
    const auto grid = rc.grid.build();
    const auto total = sweep(Observable::casimir_polder_energy, grid, rc.physics, rc.policy);
    std::vector<const SpatialProfile*> cols{&total};
    SpatialProfile e1, e2;
    if (opt.split) {
        e1 = sweep(Observable::first_order_energy, grid, rc.physics, rc.policy);
        e2 = sweep(Observable::second_order_energy, grid, rc.physics, rc.policy);
        cols.push_back(&e1);
        cols.push_back(&e2);
    }
    return detail::emit_profiles(rc, "potential", {{"split", opt.split}}, cols, err);
}

/// Finite-time excitation probability with a sigma, else its sigma average.
inline int cmd_excite(const RunConfig& rc, const CommandOptions& opt, std::ostream& err) {
    const auto grid = rc.grid.build();
    json options = json::object();
    SpatialProfile p;
    if (opt.sigma) {
        if (!(*opt.sigma >= 0.0)) throw DomainError("--sigma must be >= 0");
        p = sweep(Observable::excitation_probability, grid, rc.physics, rc.policy, *opt.sigma);
        options["sigma"] = *opt.sigma;
    } else {
        p = sweep(Observable::averaged_excitation, grid, rc.physics, rc.policy);
        options["sigma"] = nullptr;
    }
    return detail::emit_profiles(rc, "excite", options, {&p}, err);
}

/// Force on the open interval: grid points on the walls are dropped.
inline int cmd_force(const RunConfig& rc, const CommandOptions&, std::ostream& err) {
    std::vector<double> grid;
    for (double x : rc.grid.build())
        if (x != 0.0 && x != rc.physics.L) grid.push_back(x);
    if (grid.empty()) throw DomainError("force: grid has no interior points");
    const auto f = sweep(Observable::cp_force, grid, rc.physics, rc.policy);
    return detail::emit_profiles(rc, "force", json::object(), {&f}, err);
}

inline int cmd_universal(const RunConfig& rc, const CommandOptions&, std::ostream& err) {
    const auto grid = rc.grid.build();
    const auto f = sweep(Observable::universal_function, grid, rc.physics, rc.policy);
    return detail::emit_profiles(rc, "universal", json::object(), {&f}, err);
}

/// Gridwise E_CP / p_av against Omega (alpha - 1) / 2. Always writes
/// proportionality.json. Points where p_av vanishes (the walls) carry a null ratio.
inline int cmd_proportionality(const RunConfig& rc, const CommandOptions& opt, std::ostream& err) {
    const auto grid = rc.grid.build();
    const auto ecp = sweep(Observable::casimir_polder_energy, grid, rc.physics, rc.policy);
    const auto pav = sweep(Observable::averaged_excitation, grid, rc.physics, rc.policy);
    const double c = proportionality_constant(rc.physics);
    const bool degenerate = c == 0.0;
    if (degenerate)
        err << "warning: alpha = 1 makes the proportionality constant vanish; the check is vacuous\n";

    json points = json::array();
    double max_dev = 0.0;
    long compared = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        json pt = {{"x", grid[i]}, {"E_CP", ecp.values[i]}, {"p_av", pav.values[i]}};
        if (pav.values[i] != 0.0) {
            const double ratio = ecp.values[i] / pav.values[i];
            pt["ratio"] = ratio;
            if (!degenerate) {
                const double dev = std::abs(ratio / c - 1.0);
                pt["relative_deviation"] = dev;
                max_dev = std::max(max_dev, dev);
                ++compared;
            }
        } else {
            pt["ratio"] = nullptr;
        }
        points.push_back(std::move(pt));
    }
    const bool pass = !degenerate && compared > 0 && max_dev < opt.tolerance;
    json report = detail::base_metadata("proportionality", rc, {{"tolerance", opt.tolerance}});
    report["constant"] = c;
    report["degenerate"] = degenerate;
    report["points"] = points;
    report["max_relative_deviation"] = degenerate || compared == 0 ? json(nullptr) : json(max_dev);
    report["pass"] = pass;
    report["convergence"] = profiles_metadata({&ecp, &pav});
    write_text(rc.output.dir / "proportionality.json", dump(report));
    if (!degenerate) err << (pass ? "PASS" : "FAIL") << ": max relative deviation " << max_dev
                         << " (tolerance " << opt.tolerance << ")\n";
    return detail::profiles_exit({&ecp, &pav}, err);
}

inline int cmd_fidelity_map(const RunConfig& rc, const CommandOptions& opt, std::ostream&) {
    auto axis = [](std::pair<long, long> r, const char* name) {
        if (r.first < 1 || r.second < r.first)
            throw DomainError(std::string("invalid ") + name + " range");
        std::vector<long> a;
        for (long v = r.first; v <= r.second; ++v) a.push_back(v);
        return a;
    };
    const auto map = fidelity_map(opt.panel, axis(opt.n_range, "N"), axis(opt.k_range, "K"), rc.physics,
                                  opt.abs_fidelity ? FidelitySign::absolute : FidelitySign::signed_ratio);
    json options = {{"panel", std::string(panel_name(opt.panel))},
                    {"n_range", {opt.n_range.first, opt.n_range.second}},
                    {"k_range", {opt.k_range.first, opt.k_range.second}},
                    {"abs_fidelity", opt.abs_fidelity}};
    json meta = detail::base_metadata("fidelity-map", rc, options);
    meta["map"] = to_json(map);
    detail::emit(rc, "fidelity_map_" + std::string(panel_name(opt.panel)), fidelity_table(map), meta);
    return kExitOk;
}

/// N_exc / N per cloud radius over the config grid, next to the pointlike
/// p_av reference. Centers where the cloud does not fit get nan and a 0 flag.
inline int cmd_bec(const RunConfig& rc, const CommandOptions& opt, std::ostream& err) {
    std::vector<double> radii = opt.r_tf;
    double n_atoms = 1.0;
    if (rc.bec) {
        n_atoms = rc.bec->n_atoms;
        if (radii.empty()) radii = rc.bec->r_tf;
    }
    if (radii.empty()) throw ConfigError("bec: no Thomas-Fermi radius given (config 'bec' or --r-tf)");
    for (double r : radii) BECConfig{n_atoms, r, 0.0}.validate();

    const auto grid = rc.grid.build();
    const auto ref = sweep(Observable::averaged_excitation, grid, rc.physics, rc.policy);

    Table t{{"x0", "p_av"}, {}};
    for (double r : radii) {
        t.headers.push_back("N_exc/N[r_tf=" + detail::format_g(r) + "]");
        t.headers.push_back("in_cavity[r_tf=" + detail::format_g(r) + "]");
    }
    json per_radius = json::array();
    long skipped = 0, unconverged = 0;
    std::vector<std::vector<std::string>> cells(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        cells[i] = {format_number(grid[i]), format_number(ref.values[i])};
    for (double r : radii) {
        const BECConfig bec{n_atoms, r, 0.0};
        json conv = json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!cloud_fits(grid[i], r, rc.physics)) {
                cells[i].push_back("nan");
                cells[i].push_back("0");
                conv.push_back(nullptr);
                ++skipped;
                continue;
            }
            const auto pop = excited_population(grid[i], bec, rc.physics, rc.policy, opt.quad);
            cells[i].push_back(format_number(pop.value / n_atoms));
            cells[i].push_back("1");
            conv.push_back(pop.converged);
            unconverged += pop.converged ? 0 : 1;
        }
        per_radius.push_back({{"r_tf", r}, {"converged", conv}});
    }
    t.rows = std::move(cells);

    json options = {{"r_tf", radii},
                    {"quadrature", {{"order", opt.quad.order}, {"panels", opt.quad.panels}}}};
    json meta = detail::base_metadata("bec", rc, options);
    meta["bec"] = {{"n_atoms", n_atoms}, {"r_tf", radii}};
    meta["convergence"] = profiles_metadata({&ref});
    meta["population_convergence"] = per_radius;
    detail::emit(rc, "bec", t, meta);
    if (skipped > 0)
        err << "note: " << skipped << " (center, radius) pair(s) skipped: cloud outside the cavity\n";
    if (unconverged > 0 || !ref.all_converged()) {
        err << "warning: some series hit max_terms without converging\n";
        return kExitUnconverged;
    }
    return kExitOk;
}

/// Fixed-length long double sums of every observable with no early stopping.
/// Columns that diverge for the configuration are omitted.
inline int cmd_oracle(const RunConfig& rc, const CommandOptions& opt, std::ostream& err) {
    if (opt.terms < 1) throw DomainError("oracle: --terms must be >= 1");
    if (opt.terms > kDefaultModeCap)
        throw DomainError("oracle: --terms exceeds the mode cap " + std::to_string(kDefaultModeCap));
    const auto grid = rc.grid.build();
    const Observable all[] = {Observable::first_order_energy, Observable::second_order_energy,
                              Observable::casimir_polder_energy, Observable::averaged_excitation,
                              Observable::universal_function};
    std::vector<Observable> cols;
    for (Observable q : all) {
        if (udwcp::detail::diverges(q, rc.physics))
            err << "note: column " << label(q) << " omitted (diverges for a0 = 0)\n";
        else
            cols.push_back(q);
    }
    Table t{{"x"}, {}};
    for (Observable q : cols) t.headers.emplace_back(label(q));
    for (double x : grid) {
        std::vector<std::string> row{format_number(x)};
        for (Observable q : cols) {
            check_domain(q, x, rc.physics);
            const long double xl = x;
            const long double v = brute_force_sum<long double>(
                [&](long n) { return series_term<long double>(q, n, xl, rc.physics); }, opt.terms);
            row.push_back(format_number(static_cast<double>(v)));
        }
        t.rows.push_back(std::move(row));
    }
    detail::emit(rc, "oracle", t, detail::base_metadata("oracle", rc, {{"terms", opt.terms}}));
    return kExitOk;
}

/// Dispatches by subcommand name, mapping exceptions onto the exit-code
/// contract: 2 config, 3 domain, 4 unconverged.
inline int run_command(std::string_view name, const RunConfig& rc, const CommandOptions& opt,
                       std::ostream& err) {
    try {
        if (name == "potential") return cmd_potential(rc, opt, err);
        if (name == "excite") return cmd_excite(rc, opt, err);
        if (name == "force") return cmd_force(rc, opt, err);
        if (name == "universal") return cmd_universal(rc, opt, err);
        if (name == "proportionality") return cmd_proportionality(rc, opt, err);
        if (name == "fidelity-map") return cmd_fidelity_map(rc, opt, err);
        if (name == "bec") return cmd_bec(rc, opt, err);
        if (name == "oracle") return cmd_oracle(rc, opt, err);
        err << "error: unknown command '" << name << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const NonFiniteTermError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace udwcp::cli
