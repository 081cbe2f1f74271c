#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "udwcp/errors.hpp"

namespace udwcp {

struct QuadratureSpec {
    int order = 64;   ///< Gauss-Legendre nodes per panel
    int panels = 8;

    void validate() const {
        if (order < 2) throw ConfigError("quadrature: order must be >= 2");
        if (panels < 1) throw ConfigError("quadrature: panels must be >= 1");
    }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendreRule(int order) : nodes(order), weights(order) {
        if (order < 1) throw ConfigError("Gauss-Legendre order must be >= 1");
        if (order == 1) {
            nodes[0] = 0.0;
            weights[0] = 2.0;
            return;
        }
        for (int i = 0; i < (order + 1) / 2; ++i) {
            // Tricomi's initial guess, then Newton on P_order.
            double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            double dp = 1.0;
            for (int iter = 0; iter < 100; ++iter) {
                const auto [p, d] = legendre(order, z);
                dp = d;
                const double dz = p / d;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            dp = legendre(order, z).second;
            const double w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[order - 1 - i] = z;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if (order % 2 == 1) nodes[order / 2] = 0.0;
    }

private:
    /// (P_n(z), P_n'(z)) by the three-term recurrence.
    static std::pair<double, double> legendre(int n, double z) {
        double p0 = 1.0, p1 = z;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
    }
};

/// Composite Gauss-Legendre: `panels` equal subintervals of [a, b].
template <class F>
double integrate_panels(F&& f, double a, double b, const GaussLegendreRule& rule, int panels) {
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + width * p;
        const double hi = p + 1 == panels ? b : a + width * (p + 1);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * f(mid + half * rule.nodes[i]);
        total += half * s;
    }
    return total;
}

template <class F>
double integrate_panels(F&& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    return integrate_panels(std::forward<F>(f), a, b, GaussLegendreRule(spec.order), spec.panels);
}

}  // namespace udwcp
