#pragma once

#include <cmath>
#include <string>

#include "udwcp/errors.hpp"

namespace udwcp {

/// Cavity and detector parameters in natural units (hbar = c = e = 1).
///
/// The detector levels are Omega_g = 0 and Omega_e = Omega. `alpha` weighs the
/// diamagnetic (field-squared) coupling against the paramagnetic one and may
/// take any real value. `a0` is the length of the exponential atomic profile;
/// a0 = 0 is a pointlike detector, which some observables reject.
struct PhysicsConfig {
    double L = 1.0;
    double m = 0.0;
    double lambda = 0.0;
    double Omega = 1.0;
    double alpha = 0.0;
    double a0 = 0.0;

    /// Throws ConfigError unless L > 0, Omega > 0, m >= 0, lambda >= 0, a0 >= 0
    /// and every field is finite.
    void validate() const {
        auto require = [](bool ok, const std::string& what) {
            if (!ok) throw ConfigError("invalid physics config: " + what);
        };
        require(std::isfinite(L) && std::isfinite(m) && std::isfinite(lambda) &&
                    std::isfinite(Omega) && std::isfinite(alpha) && std::isfinite(a0),
                "all parameters must be finite");
        require(L > 0.0, "L must be > 0");
        require(Omega > 0.0, "Omega must be > 0");
        require(m >= 0.0, "m must be >= 0");
        require(lambda >= 0.0, "lambda must be >= 0");
        require(a0 >= 0.0, "a0 must be >= 0");
    }

    /// Validated construction.
    static PhysicsConfig make(double L, double m, double lambda, double Omega, double alpha,
                              double a0) {
        PhysicsConfig cfg{L, m, lambda, Omega, alpha, a0};
        cfg.validate();
        return cfg;
    }

    /// L = 1, m = 1e-3, lambda = 1e-2, Omega = 1, a0 = 1e-2.
    static PhysicsConfig reference(double alpha = 0.0) {
        return make(1.0, 1e-3, 1e-2, 1.0, alpha, 1e-2);
    }

    friend bool operator==(const PhysicsConfig&, const PhysicsConfig&) = default;
};

}  // namespace udwcp
