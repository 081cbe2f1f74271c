#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "udwcp/config.hpp"
#include "udwcp/modes.hpp"
#include "udwcp/observables.hpp"
#include "udwcp/series.hpp"

namespace udwcp {

/// Which series a fidelity map diagnoses.
enum class FidelityPanel {
    excitation,      ///< averaged excitation probability terms
    casimir_polder,  ///< E_CP terms at the configured alpha
};

inline std::string_view panel_name(FidelityPanel p) {
    return p == FidelityPanel::excitation ? "pexc" : "ecp";
}

/// Truncation fidelity of a mode series at the cavity center.
///
/// values[i][j] is the fidelity after summing the first n_axis[i] odd modes
/// (n = 1, 3, ..., 2N-1) with the gap set to Omega = omega_{2K+1}, K = k_axis[j].
/// Even modes vanish at x = L/2 and are skipped.
struct FidelityMap {
    FidelityPanel panel = FidelityPanel::excitation;
    std::vector<long> n_axis;
    std::vector<long> k_axis;
    std::vector<std::vector<double>> values;
};

namespace detail {

inline void require_axis(const std::vector<long>& axis, const char* name) {
    if (axis.empty()) throw DomainError(std::string("fidelity map: empty ") + name + " axis");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (axis[i] < 1) throw DomainError(std::string("fidelity map: ") + name + " values must be >= 1");
        if (i > 0 && axis[i] <= axis[i - 1])
            throw DomainError(std::string("fidelity map: ") + name + " axis must be ascending");
    }
}

}  // namespace detail

/// Fidelity of a single (N, K) cell.
inline double fidelity_cell(FidelityPanel panel, long n_terms, long k_index,
                            const PhysicsConfig& cfg,
                            FidelitySign sign = FidelitySign::signed_ratio) {
    PhysicsConfig at = cfg;
    at.Omega = detail::frequency<double>(2 * k_index + 1, cfg);
    if (panel == FidelityPanel::casimir_polder) check_domain(Observable::casimir_polder_energy, 0.5 * cfg.L, at);
    const Observable q = panel == FidelityPanel::excitation ? Observable::averaged_excitation
                                                            : Observable::casimir_polder_energy;
    const double x = 0.5 * cfg.L;
    CompensatedSum<double> acc;
    double last = 0.0;
    for (long j = 1; j <= n_terms; ++j) {
        last = series_term<double>(q, 2 * j - 1, x, at);
        if (!std::isfinite(last)) throw NonFiniteTermError(2 * j - 1, last);
        acc += last;
    }
    return fidelity(acc.value(), last, sign);
}

inline FidelityMap fidelity_map(FidelityPanel panel, const std::vector<long>& n_axis,
                                const std::vector<long>& k_axis, const PhysicsConfig& cfg,
                                FidelitySign sign = FidelitySign::signed_ratio,
                                long mode_cap = kDefaultModeCap) {
    cfg.validate();
    detail::require_axis(n_axis, "N");
    detail::require_axis(k_axis, "K");
    if (2 * k_axis.back() + 1 > mode_cap || 2 * n_axis.back() - 1 > mode_cap)
        throw DomainError("fidelity map: mode index exceeds cap " + std::to_string(mode_cap));

    FidelityMap map{panel, n_axis, k_axis, {}};
    map.values.reserve(n_axis.size());
    for (long n : n_axis) {
        std::vector<double> row;
        row.reserve(k_axis.size());
        for (long k : k_axis) row.push_back(fidelity_cell(panel, n, k, cfg, sign));
        map.values.push_back(std::move(row));
    }
    return map;
}

}  // namespace udwcp
