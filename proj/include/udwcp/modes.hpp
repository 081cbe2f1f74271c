#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "udwcp/config.hpp"

namespace udwcp {

/// Default upper bound on the number of modes a table may hold.
inline constexpr long kDefaultModeCap = 10'000'000;

/// One Dirichlet mode sin(k_n x) of the cavity field.
struct Mode {
    long n = 1;
    double k = 0.0;      ///< n pi / L
    double omega = 0.0;  ///< sqrt(k^2 + m^2)
    double f = 2.0;      ///< smearing factor 2 / ((a0 k)^2 + 1)
};

namespace detail {

inline void require_mode_index(long n) {
    if (n <= 0) throw DomainError("mode index must be >= 1, got " + std::to_string(n));
}

/// sin(pi * y) with the argument reduced exactly to [-1, 1], so integer y gives
/// an exact zero and half-integer y an exact +-1.
template <class Real>
Real sin_pi(Real y) {
    const Real r = y - Real(2) * std::nearbyint(y / Real(2));
    if (r == Real(0) || r == Real(1) || r == Real(-1)) return Real(0);
    if (r == Real(0.5)) return Real(1);
    if (r == Real(-0.5)) return Real(-1);
    return std::sin(std::numbers::pi_v<Real> * r);
}

/// sin(k_n x) for k_n = n pi / L, evaluated through the reduced phase n x / L.
template <class Real>
Real mode_sin(long n, Real x, Real L) {
    return sin_pi(static_cast<Real>(n) * (x / L));
}

template <class Real>
Real wavenumber(long n, const PhysicsConfig& cfg) {
    return static_cast<Real>(n) * std::numbers::pi_v<Real> / static_cast<Real>(cfg.L);
}

template <class Real>
Real frequency(long n, const PhysicsConfig& cfg) {
    const Real k = wavenumber<Real>(n, cfg);
    const Real m = static_cast<Real>(cfg.m);
    return std::sqrt(k * k + m * m);
}

template <class Real>
Real smearing_factor(long n, const PhysicsConfig& cfg) {
    const Real ak = static_cast<Real>(cfg.a0) * wavenumber<Real>(n, cfg);
    return Real(2) / (ak * ak + Real(1));
}

}  // namespace detail

/// k_n = n pi / L.
inline double wavenumber(long n, const PhysicsConfig& cfg) {
    detail::require_mode_index(n);
    return detail::wavenumber<double>(n, cfg);
}

/// omega_n = sqrt(k_n^2 + m^2).
inline double frequency(long n, const PhysicsConfig& cfg) {
    detail::require_mode_index(n);
    return detail::frequency<double>(n, cfg);
}

/// Fourier transform of the exponential atomic profile at k_n:
/// f_n = 2 / ((a0 k_n)^2 + 1). Equals 2 for a pointlike detector.
inline double smearing_factor(long n, const PhysicsConfig& cfg) {
    detail::require_mode_index(n);
    return detail::smearing_factor<double>(n, cfg);
}

inline Mode make_mode(long n, const PhysicsConfig& cfg) {
    detail::require_mode_index(n);
    return Mode{n, detail::wavenumber<double>(n, cfg), detail::frequency<double>(n, cfg),
                detail::smearing_factor<double>(n, cfg)};
}

/// Modes n = 1..n_max.
inline std::vector<Mode> mode_table(const PhysicsConfig& cfg, long n_max,
                                    long cap = kDefaultModeCap) {
    if (n_max <= 0) throw DomainError("mode_table: n_max must be >= 1");
    if (n_max > cap)
        throw DomainError("mode_table: n_max=" + std::to_string(n_max) + " exceeds cap " +
                          std::to_string(cap));
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(n_max));
    for (long n = 1; n <= n_max; ++n) modes.push_back(make_mode(n, cfg));
    return modes;
}

}  // namespace udwcp
