#pragma once

#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "udwcp/config.hpp"
#include "udwcp/modes.hpp"
#include "udwcp/series.hpp"

namespace udwcp {

/// Position-dependent quantities of a detector in the cavity, each a mode
/// series sum_n a_n(x).
enum class Observable {
    first_order_energy,       ///< diamagnetic vacuum shift E1
    second_order_energy,      ///< paramagnetic second-order shift E2
    casimir_polder_energy,    ///< E_CP = E1 + E2, summed term by term
    excitation_probability,   ///< finite interaction time sigma
    averaged_excitation,      ///< sigma-averaged excitation probability p_av
    universal_function,       ///< F(x) = sum_n p_n(x)
    cp_force,                 ///< -dE_CP/dx
    low_freq_cp,              ///< E_CP to first subleading order in omega_n / Omega
    low_freq_pav,             ///< p_av to first subleading order in omega_n / Omega
};

inline std::string_view label(Observable q) {
    switch (q) {
        case Observable::first_order_energy: return "E1";
        case Observable::second_order_energy: return "E2";
        case Observable::casimir_polder_energy: return "E_CP";
        case Observable::excitation_probability: return "p";
        case Observable::averaged_excitation: return "p_av";
        case Observable::universal_function: return "F";
        case Observable::cp_force: return "force";
        case Observable::low_freq_cp: return "E_CP_lowfreq";
        case Observable::low_freq_pav: return "p_av_lowfreq";
    }
    return "?";
}

namespace detail {

inline std::string format_x(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline bool diverges(Observable q, const PhysicsConfig& cfg) {
    // f_n^2 / omega_n ~ 1/n without smearing.
    const bool needs_smearing = q == Observable::first_order_energy ||
                                q == Observable::casimir_polder_energy ||
                                q == Observable::cp_force || q == Observable::low_freq_cp ||
                                q == Observable::low_freq_pav ||
                                q == Observable::universal_function;
    if (!needs_smearing || cfg.a0 > 0.0) return false;
    switch (q) {
        case Observable::first_order_energy:
        case Observable::casimir_polder_energy: return cfg.alpha != 0.0;
        // sin(2 k_n x) / n at alpha = 0: only conditionally convergent.
        default: return true;
    }
}

}  // namespace detail

/// Throws DomainError / DivergenceError when q cannot be evaluated at x.
inline void check_domain(Observable q, double x, const PhysicsConfig& cfg, double sigma = 0.0) {
    if (detail::diverges(q, cfg))
        throw DivergenceError(std::string(label(q)) + " diverges for a pointlike detector (a0 = 0)" +
                              (cfg.alpha != 0.0 ? " with alpha != 0" : ""));
    if (q == Observable::cp_force) {
        if (!(x > 0.0 && x < cfg.L))
            throw DomainError("force is defined on the open interval (0, L); got x=" +
                              detail::format_x(x));
    } else if (!(x >= 0.0 && x <= cfg.L)) {
        throw DomainError("position x=" + detail::format_x(x) + " outside [0, L]");
    }
    if (q == Observable::excitation_probability && !(sigma >= 0.0 && std::isfinite(sigma)))
        throw DomainError("interaction time sigma must be >= 0");
}

/// n-th term of the series for q at position x. No domain checks; the
/// caller runs check_domain first.
template <class Real>
Real series_term(Observable q, long n, Real x, const PhysicsConfig& cfg, Real sigma = Real(0)) {
    const Real L = static_cast<Real>(cfg.L);
    const Real Omega = static_cast<Real>(cfg.Omega);
    const Real alpha = static_cast<Real>(cfg.alpha);
    const Real lam2 = static_cast<Real>(cfg.lambda) * static_cast<Real>(cfg.lambda);
    const Real k = detail::wavenumber<Real>(n, cfg);
    const Real w = detail::frequency<Real>(n, cfg);
    const Real f = detail::smearing_factor<Real>(n, cfg);

    if (q == Observable::cp_force) {
        const Real s2x = detail::sin_pi(Real(2) * static_cast<Real>(n) * (x / L));
        const Real bracket = (alpha - Real(1)) + alpha * w / Omega;
        return -lam2 * f * f * k * s2x / (w * L * (w + Omega)) * bracket;
    }

    const Real s = detail::mode_sin(n, x, L);
    const Real base = f * f * s * s / (w * L);
    switch (q) {
        case Observable::first_order_energy: return alpha * lam2 / Omega * base;
        case Observable::second_order_energy: return -lam2 * base / (w + Omega);
        case Observable::casimir_polder_energy:
            return lam2 * base / (w + Omega) * ((alpha - Real(1)) + alpha * w / Omega);
        case Observable::excitation_probability: {
            const Real st = std::sin(sigma * (w + Omega) / Real(2));
            return Real(4) * lam2 * base * st * st / ((w + Omega) * (w + Omega));
        }
        case Observable::averaged_excitation:
            return Real(2) * lam2 * base / ((w + Omega) * (w + Omega));
        case Observable::universal_function: return lam2 * base / (Omega * Omega);
        case Observable::low_freq_cp:
            return Omega * (lam2 * base / (Omega * Omega)) * ((alpha - Real(1)) + w / Omega);
        case Observable::low_freq_pav:
            return Real(2) * (lam2 * base / (Omega * Omega)) * (Real(1) - Real(2) * w / Omega);
        case Observable::cp_force: break;
    }
    return Real(0);
}

/// Adaptive evaluation of observable q at x.
inline SeriesResult evaluate(Observable q, double x, const PhysicsConfig& cfg,
                             const TruncationPolicy& policy = {}, double sigma = 0.0) {
    check_domain(q, x, cfg, sigma);
    return sum_series([&](long n) { return series_term<double>(q, n, x, cfg, sigma); }, policy);
}

/// E1 = (alpha lambda^2 / Omega L) sum f_n^2 sin^2(k_n x) / omega_n.
inline SeriesResult first_order_energy(double x, const PhysicsConfig& cfg,
                                       const TruncationPolicy& policy = {}) {
    return evaluate(Observable::first_order_energy, x, cfg, policy);
}

/// E2 = -lambda^2 sum f_n^2 sin^2(k_n x) / (omega_n L (omega_n + Omega)); never positive.
inline SeriesResult second_order_energy(double x, const PhysicsConfig& cfg,
                                        const TruncationPolicy& policy = {}) {
    return evaluate(Observable::second_order_energy, x, cfg, policy);
}

/// Casimir-Polder potential
///   lambda^2 sum f_n^2 sin^2(k_n x) / (omega_n L (omega_n + Omega)) [(alpha-1) + alpha omega_n/Omega].
/// Positive everywhere inside the cavity for alpha >= 1, negative for alpha = 0.
inline SeriesResult casimir_polder_energy(double x, const PhysicsConfig& cfg,
                                          const TruncationPolicy& policy = {}) {
    return evaluate(Observable::casimir_polder_energy, x, cfg, policy);
}

/// Excitation probability after a sudden switch-on of duration sigma.
inline SeriesResult excitation_probability(double x, double sigma, const PhysicsConfig& cfg,
                                           const TruncationPolicy& policy = {}) {
    return evaluate(Observable::excitation_probability, x, cfg, policy, sigma);
}

/// Long-time mean of excitation_probability over sigma (sin^2 -> 1/2).
/// Finite for a pointlike detector as well.
inline SeriesResult averaged_excitation_probability(double x, const PhysicsConfig& cfg,
                                                    const TruncationPolicy& policy = {}) {
    return evaluate(Observable::averaged_excitation, x, cfg, policy);
}

inline SeriesResult universal_function(double x, const PhysicsConfig& cfg,
                                       const TruncationPolicy& policy = {}) {
    return evaluate(Observable::universal_function, x, cfg, policy);
}

/// -dE_CP/dx, differentiated term by term.
inline SeriesResult cp_force(double x, const PhysicsConfig& cfg,
                             const TruncationPolicy& policy = {}) {
    return evaluate(Observable::cp_force, x, cfg, policy);
}

inline SeriesResult low_freq_cp(double x, const PhysicsConfig& cfg,
                                const TruncationPolicy& policy = {}) {
    return evaluate(Observable::low_freq_cp, x, cfg, policy);
}

inline SeriesResult low_freq_pav(double x, const PhysicsConfig& cfg,
                                 const TruncationPolicy& policy = {}) {
    return evaluate(Observable::low_freq_pav, x, cfg, policy);
}

/// Omega (alpha - 1) / 2, the leading-order ratio E_CP / p_av.
inline double proportionality_constant(const PhysicsConfig& cfg) {
    return cfg.Omega * (cfg.alpha - 1.0) / 2.0;
}

/// Reconstructs the Casimir-Polder energy from a measured averaged
/// excitation probability.
inline double estimate_cp_from_pav(double p_av, const PhysicsConfig& cfg) {
    return proportionality_constant(cfg) * p_av;
}

struct PointStatus {
    bool converged = false;
    long terms_used = 0;
    double fidelity = 0.0;
};

/// A sampled function of detector position.
struct SpatialProfile {
    std::string label;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<PointStatus> status;
    PhysicsConfig cfg;
    TruncationPolicy policy;

    [[nodiscard]] bool all_converged() const {
        for (const auto& s : status)
            if (!s.converged) return false;
        return true;
    }
};

/// Evaluates q at every grid point, in grid order. A DomainError at one point
/// is rethrown with the offending x in its message.
inline SpatialProfile sweep(Observable q, std::span<const double> grid, const PhysicsConfig& cfg,
                            const TruncationPolicy& policy = {}, double sigma = 0.0) {
    SpatialProfile out;
    out.label = std::string(label(q));
    out.cfg = cfg;
    out.policy = policy;
    out.grid.assign(grid.begin(), grid.end());
    out.values.reserve(grid.size());
    out.status.reserve(grid.size());
    for (double x : grid) {
        SeriesResult r;
        try {
            r = evaluate(q, x, cfg, policy, sigma);
        } catch (const DivergenceError&) {
            throw;
        } catch (const DomainError& e) {
            throw DomainError(out.label + " at x=" + detail::format_x(x) + ": " + e.what());
        }
        out.values.push_back(r.value);
        out.status.push_back({r.converged, r.terms_used, r.fidelity});
    }
    return out;
}

/// start + (stop - start) i / (points - 1), i = 0..points-1.
inline std::vector<double> linear_grid(double start, double stop, long points) {
    if (points < 1) throw ConfigError("grid: points must be >= 1");
    if (!(start < stop) && points > 1) throw ConfigError("grid: start must be < stop");
    std::vector<double> g(static_cast<std::size_t>(points));
    if (points == 1) {
        g[0] = start;
        return g;
    }
    const double span = stop - start;
    for (long i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] =
            start + span * static_cast<double>(i) / static_cast<double>(points - 1);
    g.back() = stop;
    return g;
}

}  // namespace udwcp
