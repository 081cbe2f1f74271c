// Acceptance run: one PASS/FAIL line per criterion, each with its runtime budget.
// usage: acceptance <path to udwcp cli> <scratch dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "udwcp/commands.hpp"
#include "udwcp/udwcp.hpp"

using namespace udwcp;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

PhysicsConfig reference(double alpha, double Omega = 1.0) {
    return PhysicsConfig::make(1.0, 1e-3, 1e-2, Omega, alpha, 1e-2);
}

// 1 -------------------------------------------------------------------------
Verdict shape_of_F_and_force() {
    Verdict v;
    const auto cfg = reference(2.0);
    const auto grid = linear_grid(0.0, 1.0, 201);
    const auto F = sweep(Observable::universal_function, grid, cfg);
    double sym = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sym = std::max(sym, rel_diff(F.values[i], F.values[200 - i]));
    const auto peak = std::max_element(F.values.begin(), F.values.end()) - F.values.begin();
    const bool ends = F.values.front() == 0.0 && F.values.back() == 0.0;

    const std::vector<double> inner(grid.begin() + 1, grid.end() - 1);
    const auto force = sweep(Observable::cp_force, inner, cfg);
    double anti = 0.0;
    for (std::size_t i = 0; i < inner.size(); ++i)
        anti = std::max(anti, rel_diff(force.values[i], -force.values[inner.size() - 1 - i]));
    const double mid = force.values[99];

    v.pass = sym < 1e-10 && ends && peak == 100 && anti < 1e-10 && mid == 0.0 && F.all_converged() &&
             force.all_converged();
    v.detail = "F symmetry " + fmt("%.2e", sym) + ", F argmax x=" + fmt("%.3f", grid[peak]) +
               ", force antisymmetry " + fmt("%.2e", anti) + ", force(L/2)=" + fmt("%g", mid);
    return v;
}

// 2 -------------------------------------------------------------------------
Verdict consistency_identity() {
    Verdict v;
    double worst = 0.0;
    for (double alpha : {0.0, 0.0025, 2.0}) {
        const auto cfg = reference(alpha);
        double gap = 0.0, at = 0.0;
        for (double x : linear_grid(0.0, 1.0, 201)) {
            const double total = casimir_polder_energy(x, cfg).value;
            const double parts = first_order_energy(x, cfg).value + second_order_energy(x, cfg).value;
            if (rel_diff(total, parts) > gap) gap = rel_diff(total, parts), at = x;
        }
        worst = std::max(worst, gap);
        v.detail += "alpha=" + fmt("%g", alpha) + ": " + fmt("%.2e", gap) + " at x=" + fmt("%g", at) + "; ";
    }
    v.pass = worst < 1e-10;
    v.detail += "max relative |E_CP - (E1 + E2)| over 201 points, default policy";
    return v;
}

// 3 -------------------------------------------------------------------------
// Written out from the mode formulas, independently of series_term.
struct Oracle {
    long double ecp = 0, pav = 0, F = 0;
};

Oracle brute_force(double x_in, const PhysicsConfig& c, long terms) {
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double x = x_in, L = c.L, m = c.m, lam = c.lambda, W = c.Omega, a = c.alpha, a0 = c.a0;
    long double ecp = 0, pav = 0, F = 0;
    for (long n = terms; n >= 1; --n) {  // smallest terms first
        const long double k = n * pi / L;
        const long double w = std::sqrt(k * k + m * m);
        const long double f = 2.0L / ((a0 * k) * (a0 * k) + 1.0L);
        const long double s = std::sin(k * x);
        const long double base = lam * lam * f * f * s * s / (w * L);
        ecp += base / (w + W) * ((a - 1.0L) + a * w / W);
        pav += 2.0L * base / ((w + W) * (w + W));
        F += base / (W * W);
    }
    return {ecp, pav, F};
}

Verdict oracle_equivalence() {
    Verdict v;
    const auto cfg = reference(2.0);
    double worst = 0.0;
    for (double x : linear_grid(0.05, 0.95, 11)) {
        const Oracle o = brute_force(x, cfg, 1'000'000);
        worst = std::max(worst, rel_diff(casimir_polder_energy(x, cfg).value, double(o.ecp)));
        worst = std::max(worst, rel_diff(averaged_excitation_probability(x, cfg).value, double(o.pav)));
        worst = std::max(worst, rel_diff(universal_function(x, cfg).value, double(o.F)));
    }
    v.pass = worst < 1e-8;
    v.detail = "max relative gap to 1e6-term long double sums = " + fmt("%.2e", worst);
    return v;
}

// 4 -------------------------------------------------------------------------
Verdict sigma_average() {
    Verdict v;
    const auto cfg = reference(2.0);
    const double x = 0.5;
    const double T = 200.0 * M_PI / (frequency(1, cfg) + cfg.Omega);
    const QuadratureSpec quad{16, 2000};
    const double mean =
        integrate_panels([&](double s) { return excitation_probability(x, s, cfg).value; }, 0.0, T, quad) / T;
    const double pav = averaged_excitation_probability(x, cfg).value;
    const double err = rel_diff(mean, pav);
    v.pass = err < 1e-3;
    v.detail = "window mean " + fmt("%.10e", mean) + " vs p_av " + fmt("%.10e", pav) + ", relative " +
               fmt("%.2e", err);
    return v;
}

// 5 -------------------------------------------------------------------------
Verdict proportionality() {
    Verdict v;
    auto deviation = [](double Omega) {
        const auto cfg = reference(2.0, Omega);
        const double c = proportionality_constant(cfg);
        double worst = 0.0;
        for (double x : linear_grid(0.05, 0.95, 21)) {
            const double ratio = casimir_polder_energy(x, cfg).value / averaged_excitation_probability(x, cfg).value;
            worst = std::max(worst, std::abs(ratio / c - 1.0));
        }
        return worst;
    };
    const double d3 = deviation(1e3), d4 = deviation(1e4);
    v.pass = d3 < 0.2 && d4 < d3;
    v.detail = "max deviation " + fmt("%.4f", d3) + " at Omega=1e3, " + fmt("%.4f", d4) + " at Omega=1e4";
    return v;
}

// 6 -------------------------------------------------------------------------
Verdict sign_dichotomy() {
    Verdict v;
    long wrong = 0;
    double max0 = -INFINITY, min2 = INFINITY;
    for (double x : linear_grid(0.0, 1.0, 201)) {
        if (x == 0.0 || x == 1.0) continue;
        const double e0 = casimir_polder_energy(x, reference(0.0)).value;
        const double e2 = casimir_polder_energy(x, reference(2.0)).value;
        wrong += (e0 < 0.0 ? 0 : 1) + (e2 > 0.0 ? 0 : 1);
        max0 = std::max(max0, e0);
        min2 = std::min(min2, e2);
    }
    v.pass = wrong == 0;
    v.detail = "alpha=0 max " + fmt("%.3e", max0) + ", alpha=2 min " + fmt("%.3e", min2) + ", " +
               std::to_string(wrong) + " sign violations";
    return v;
}

// 7 -------------------------------------------------------------------------
// E_CP is differenced at a fixed mode count so that it is smooth in x. The
// adaptive sums change N between x - h and x + h, which leaves jumps of about
// N * fidelity_tol * |E_CP| that swamp the h^2 error; those ratios are printed too.
Verdict force_derivative() {
    Verdict v;
    std::string ratios, adaptive;
    bool ok = true;
    for (double alpha : {0.0, 2.0}) {
        const auto cfg = reference(alpha);
        auto fixed = [&](double x) {
            return static_cast<double>(brute_force_sum<long double>(
                [&](long n) { return series_term<long double>(Observable::casimir_polder_energy, n, x, cfg); },
                100'000));
        };
        auto adapt = [&](double x) { return casimir_polder_energy(x, cfg).value; };
        for (double x : {0.1, 0.2, 0.3, 0.4}) {
            const double force = cp_force(x, cfg).value;
            auto ratio = [&](auto&& E) {
                auto err = [&](double h) { return std::abs(-(E(x + h) - E(x - h)) / (2.0 * h) - force); };
                const double h = 1e-4 * cfg.L;
                return err(h) / err(h / 2);
            };
            const double r = ratio(fixed);
            ok = ok && r >= 3.5 && r <= 4.5;
            ratios += (ratios.empty() ? "" : " ") + fmt("%.3f", r);
            adaptive += (adaptive.empty() ? "" : " ") + fmt("%.2f", ratio(adapt));
        }
    }
    v.pass = ok;
    v.detail = "error ratios at 1e5 modes (alpha=0 then 2, x=0.1..0.4): " + ratios +
               "; with adaptive E_CP: " + adaptive;
    return v;
}

// 8 -------------------------------------------------------------------------
Verdict bec_profiles() {
    Verdict v;
    const auto cfg = reference(0.0025);
    const auto grid = linear_grid(0.0, 1.0, 201);
    bool ok = true;
    std::string d;
    for (double r : {0.05, 0.01}) {
        const auto centers = admissible_centers(grid, r, cfg);
        const auto pop = population_sweep(centers, BECConfig{1.0, r, 0.5}, cfg);
        double peak = 0.0, max_abs = 0.0, max_point = 0.0;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const double p = averaged_excitation_probability(centers[i], cfg).value;
            peak = std::max(peak, std::abs(p));
            max_abs = std::max(max_abs, std::abs(pop.values[i] - p));
            max_point = std::max(max_point, std::abs(pop.values[i] / p - 1.0));
        }
        const double dev = max_abs / peak;
        const bool starts = std::abs(centers.front() - r) < 1e-12;
        ok = ok && starts && dev < 0.02 && pop.all_converged();
        d += "R=" + fmt("%g", r) + ": first x0=" + fmt("%.4f", centers.front()) + ", peak-normalized deviation " +
             fmt("%.3e", dev) + " (pointwise max " + fmt("%.3e", max_point) + "); ";
    }
    const double tiny = excited_population(0.5, BECConfig{1.0, 1e-4, 0.5}, cfg).value;
    const double mid = averaged_excitation_probability(0.5, cfg).value;
    const double tiny_err = rel_diff(tiny, mid);
    double norm_err = 0.0;
    for (double n_atoms : {1.0, 1e3, 1e5}) {
        const BECConfig bec{n_atoms, 0.05, 0.5};
        const double total = integrate_panels([&](double u) { return tf_density(u, bec); }, 0.45, 0.55,
                                              QuadratureSpec{});
        norm_err = std::max(norm_err, rel_diff(total, n_atoms));
    }
    ok = ok && tiny_err < 1e-4 && norm_err < 1e-10;
    v.pass = ok;
    v.detail = d + "R=1e-4 at L/2 relative " + fmt("%.2e", tiny_err) + "; density normalization " +
               fmt("%.2e", norm_err);
    return v;
}

// 9 -------------------------------------------------------------------------
std::vector<long> range(long lo, long hi) {
    std::vector<long> out;
    for (long i = lo; i <= hi; ++i) out.push_back(i);
    return out;
}

Verdict fidelity_maps() {
    Verdict v;
    const auto pexc = fidelity_map(FidelityPanel::excitation, range(1, 25), range(1, 25), reference(0.0));
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& row : pexc.values)
        for (double f : row) lo = std::min(lo, f), hi = std::max(hi, f);
    const double a = pexc.values[6][6], b = pexc.values[11][19];
    const double contour = std::abs(a - b) / (hi - lo);

    // Monotone rows are checked where every summed mode lies below the gap.
    auto violations = [](const FidelityMap& m) {
        long bad = 0;
        for (const auto& row : m.values)
            for (std::size_t j = 1; j < row.size(); ++j) bad += row[j] > row[j - 1] ? 1 : 0;
        return bad;
    };
    const auto ecp = fidelity_map(FidelityPanel::casimir_polder, range(1, 12), range(12, 40), reference(2.0));
    const long bad = violations(ecp);
    const long bad_full =
        violations(fidelity_map(FidelityPanel::casimir_polder, range(1, 25), range(1, 25), reference(2.0)));

    v.pass = contour < 0.1 && bad == 0;
    v.detail = "pexc F(7,7)=" + fmt("%.5f", a) + " F(12,20)=" + fmt("%.5f", b) + ", |dF|/range " +
               fmt("%.3f", contour) + "; ecp alpha=2 increases in K: " + std::to_string(bad) +
               " on N 1..12 x K 12..40 (" + std::to_string(bad_full) + " on the full 25x25 grid)";
    return v;
}

// 10 ------------------------------------------------------------------------
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[e.path().filename().string()] = ss.str();
    }
    return files;
}

Verdict determinism(const std::string& cli, const fs::path& scratch) {
    Verdict v;
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    const fs::path cfg = scratch / "config.json";
    std::ofstream(cfg) << R"({"L": 1, "m": 1e-3, "lambda": 1e-2, "Omega": 1, "alpha": 0.0025, "a0": 1e-2,
  "grid": {"start": 0, "stop": 1, "points": 41},
  "bec": {"n_atoms": 1, "r_tf": [0.05, 0.01]}})";
    const std::vector<std::string> commands = {
        "potential --split", "excite", "excite --sigma 3.5", "force", "universal", "proportionality",
        "fidelity-map --panel pexc --n-range 1:8 --k-range 1:8", "fidelity-map --panel ecp --n-range 1:8 --k-range 1:8",
        "bec", "oracle --terms 20000"};
    long differing = 0, failed = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::map<std::string, std::string> runs[2];
        for (int r = 0; r < 2; ++r) {
            const fs::path out = scratch / ("cmd" + std::to_string(i) + "_run" + std::to_string(r));
            fs::create_directories(out);
            const std::string line = cli + " --config " + cfg.string() + " --output " + out.string() + " " +
                                     commands[i] + " > /dev/null 2>&1";
            if (std::system(line.c_str()) != 0) ++failed;
            runs[r] = snapshot(out);
        }
        if (runs[0] != runs[1] || runs[0].empty()) {
            ++differing;
            v.detail += "[" + commands[i] + " differs] ";
        }
    }
    v.pass = differing == 0 && failed == 0;
    v.detail += std::to_string(commands.size()) + " commands run twice, " + std::to_string(differing) +
                " with differing output, " + std::to_string(failed) + " nonzero exits";
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <udwcp cli> <scratch dir>\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path scratch = argv[2];

    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "F and force shape on 201 points", 10, shape_of_F_and_force},
        {2, "E_CP equals E1 + E2", 5, consistency_identity},
        {3, "adaptive sums match brute-force oracle", 60, oracle_equivalence},
        {4, "sigma average recovers p_av", 30, sigma_average},
        {5, "E_CP proportional to p_av at large gap", 60, proportionality},
        {6, "sign of E_CP set by alpha", 5, sign_dichotomy},
        {7, "force is second-order FD derivative", 10, force_derivative},
        {8, "condensate profiles track p_av", 60, bec_profiles},
        {9, "fidelity maps", 120, fidelity_maps},
        {10, "byte-identical reruns", 600, [&] { return determinism(cli, scratch); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = v.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s criterion %d: %s (%.2f s of %.0f s%s) -- %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    secs, c.budget_s, in_time ? "" : ", over budget", v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
