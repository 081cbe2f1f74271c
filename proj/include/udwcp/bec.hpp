#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "udwcp/config.hpp"
#include "udwcp/observables.hpp"
#include "udwcp/quadrature.hpp"
#include "udwcp/series.hpp"

namespace udwcp {

/// Thomas-Fermi cloud: N atoms within radius r_tf of `center`.
struct BECConfig {
    double n_atoms = 1.0;
    double r_tf = 0.05;
    double center = 0.5;

    void validate() const {
        if (!(n_atoms > 0.0 && std::isfinite(n_atoms))) throw ConfigError("bec: n_atoms must be > 0");
        if (!(r_tf > 0.0 && std::isfinite(r_tf))) throw ConfigError("bec: r_tf must be > 0");
    }
};

/// Linear density (15N / 16R)[1 - ((u - x0)/R)^2]^2 on |u - x0| <= R, zero elsewhere.
inline double tf_density(double u, const BECConfig& bec) {
    const double t = (u - bec.center) / bec.r_tf;
    if (std::abs(t) >= 1.0) return 0.0;
    const double g = 1.0 - t * t;
    return 15.0 * bec.n_atoms / (16.0 * bec.r_tf) * g * g;
}

namespace detail {
// Slack for centers read off a grid, e.g. x0 = 0.99 with R = 0.01 in L = 1.
inline constexpr double kSupportSlack = 1e-12;
}

/// True when [x0 - R, x0 + R] lies inside [0, L] up to rounding.
inline bool cloud_fits(double x0, double r_tf, const PhysicsConfig& cfg) {
    const double eps = detail::kSupportSlack * cfg.L;
    return x0 - r_tf >= -eps && x0 + r_tf <= cfg.L + eps;
}

struct PopulationResult {
    double value = 0.0;       ///< expected number of excited atoms
    bool converged = true;    ///< every p_av evaluation converged
    long max_terms_used = 0;
};

/// Expected excited-atom count of a cloud centred at x0:
/// integral of p_av(u) n(u; x0) du by composite Gauss-Legendre.
inline PopulationResult excited_population(double x0, BECConfig bec, const PhysicsConfig& cfg,
                                           const TruncationPolicy& policy = {},
                                           const QuadratureSpec& quad = {}) {
    bec.validate();
    quad.validate();
    bec.center = x0;
    if (!cloud_fits(x0, bec.r_tf, cfg))
        throw DomainError("cloud [" + detail::format_x(x0 - bec.r_tf) + ", " +
                          detail::format_x(x0 + bec.r_tf) + "] sticks out of the cavity");
    const double lo = std::max(0.0, x0 - bec.r_tf);
    const double hi = std::min(cfg.L, x0 + bec.r_tf);

    PopulationResult out;
    const GaussLegendreRule rule(quad.order);
    out.value = integrate_panels(
        [&](double u) {
            const SeriesResult p = averaged_excitation_probability(u, cfg, policy);
            out.converged = out.converged && p.converged;
            out.max_terms_used = std::max(out.max_terms_used, p.terms_used);
            return p.value * tf_density(u, bec);
        },
        lo, hi, rule, quad.panels);
    return out;
}

/// excited_population at every center of `grid`, in order.
inline SpatialProfile population_sweep(std::span<const double> grid, const BECConfig& bec,
                                       const PhysicsConfig& cfg,
                                       const TruncationPolicy& policy = {},
                                       const QuadratureSpec& quad = {}) {
    SpatialProfile out;
    out.label = "N_exc";
    out.cfg = cfg;
    out.policy = policy;
    out.grid.assign(grid.begin(), grid.end());
    for (double x0 : grid) {
        PopulationResult r;
        try {
            r = excited_population(x0, bec, cfg, policy, quad);
        } catch (const DomainError& e) {
            throw DomainError("N_exc at x0=" + detail::format_x(x0) + ": " + e.what());
        }
        out.values.push_back(r.value);
        out.status.push_back({r.converged, r.max_terms_used, 0.0});
    }
    return out;
}

/// Centers of `grid` at which a cloud of radius r_tf fits inside the cavity.
inline std::vector<double> admissible_centers(std::span<const double> grid, double r_tf,
                                              const PhysicsConfig& cfg) {
    std::vector<double> out;
    for (double x0 : grid)
        if (cloud_fits(x0, r_tf, cfg)) out.push_back(x0);
    return out;
}

}  // namespace udwcp
