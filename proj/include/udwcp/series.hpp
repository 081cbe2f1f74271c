#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "udwcp/errors.hpp"

namespace udwcp {

/// Neumaier's variant of Kahan summation. Order-dependent but bit-reproducible
/// for a fixed sequence of addends.
template <std::floating_point Real>
class CompensatedSum {
public:
    CompensatedSum& operator+=(Real v) {
        const Real t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
        return *this;
    }

    [[nodiscard]] Real value() const { return sum_ + comp_; }

private:
    Real sum_ = 0;
    Real comp_ = 0;
};

enum class FidelitySign { signed_ratio, absolute };

/// Stopping rule for streamed mode sums.
struct TruncationPolicy {
    double fidelity_tol = 1e-12;
    int consecutive_hits = 3;
    long min_terms = 16;
    long max_terms = 1'000'000;
    /// Only changes the reported fidelity; the stop test always uses |a_n / S_n|.
    FidelitySign sign = FidelitySign::signed_ratio;

    void validate() const {
        if (!(fidelity_tol > 0.0 && fidelity_tol < 1.0))
            throw ConfigError("policy: fidelity_tol must lie in (0, 1)");
        if (consecutive_hits < 1) throw ConfigError("policy: consecutive_hits must be >= 1");
        if (min_terms < 1) throw ConfigError("policy: min_terms must be >= 1");
        if (max_terms < min_terms) throw ConfigError("policy: max_terms must be >= min_terms");
    }

    friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

struct SeriesResult {
    double value = 0.0;
    long terms_used = 0;
    double last_term = 0.0;
    double fidelity = 0.0;
    bool converged = false;
};

/// a_N / S_N, or |a_N| / |S_N| with FidelitySign::absolute.
inline double fidelity(double partial_sum, double last_term,
                       FidelitySign sign = FidelitySign::signed_ratio) {
    if (partial_sum == 0.0)
        throw UndefinedFidelityError("fidelity undefined for a vanishing partial sum");
    const double f = last_term / partial_sum;
    return sign == FidelitySign::absolute ? std::abs(f) : f;
}

template <class F, class Real>
concept TermGenerator = requires(F f, long n) {
    { f(n) } -> std::convertible_to<Real>;
};

/// Sums term(1), term(2), ... in ascending order with compensated accumulation.
///
/// A term counts as a hit when it is exactly zero or when |a_n| < tol |S_n|.
/// The sum stops at the first n >= min_terms preceded by `consecutive_hits`
/// successive hits; it reports converged = false when max_terms is reached
/// first. Throws NonFiniteTermError on a NaN or infinite term.
template <class Gen>
    requires TermGenerator<Gen, double>
SeriesResult sum_series(Gen&& term, const TruncationPolicy& policy) {
    CompensatedSum<double> acc;
    SeriesResult res;
    int hits = 0;
    for (long n = 1; n <= policy.max_terms; ++n) {
        const double a = static_cast<double>(term(n));
        if (!std::isfinite(a)) throw NonFiniteTermError(n, a);
        acc += a;
        const double s = acc.value();
        res.terms_used = n;
        res.last_term = a;
        const bool hit = a == 0.0 || (s != 0.0 && std::abs(a) < policy.fidelity_tol * std::abs(s));
        hits = hit ? hits + 1 : 0;
        if (n >= policy.min_terms && hits >= policy.consecutive_hits) {
            res.converged = true;
            break;
        }
    }
    res.value = acc.value();
    res.fidelity = res.value == 0.0 ? 0.0 : fidelity(res.value, res.last_term, policy.sign);
    return res;
}

/// Fixed-length sum of term(1..n_terms) without early stopping, accumulated
/// in `Real` (long double gives the extended-precision oracle path).
template <std::floating_point Real, class Gen>
    requires TermGenerator<Gen, Real>
Real brute_force_sum(Gen&& term, long n_terms) {
    CompensatedSum<Real> acc;
    for (long n = 1; n <= n_terms; ++n) {
        const Real a = static_cast<Real>(term(n));
        if (!std::isfinite(a)) throw NonFiniteTermError(n, static_cast<double>(a));
        acc += a;
    }
    return acc.value();
}

}  // namespace udwcp
