#pragma once

// Weibull remaining-useful-life math: conditional CDF, inverse-transform
// failure sampling and reliability-based maintenance intervals.

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace railmaint {

struct WeibullParams {
    double alpha = 50.0;  // scale, in periods
    double beta = 5.0;    // shape

    void validate() const {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("WeibullParams: alpha and beta must be positive");
    }
};

/// Preferred maintenance window [due, end] for the deterministic model.
struct MaintenanceInterval {
    int due = 1;
    int end = 1;
    friend bool operator==(const MaintenanceInterval&, const MaintenanceInterval&) = default;
};

namespace detail {
// Ceiling that ignores floating-point noise just above an integer,
// e.g. 1 + 2e-16 from -log(exp(-1)).
inline double ceil_tol(double x) {
    return std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)));
}
}  // namespace detail

/// F(y | y') = 1 - exp((y'/alpha)^beta - (y/alpha)^beta), for y >= y' >= 0.
inline double conditional_failure_cdf(const WeibullParams& w, double y, double y_prime) {
    w.validate();
    if (y_prime < 0.0 || y < y_prime)
        throw std::invalid_argument("conditional_failure_cdf: need y >= y_prime >= 0");
    const double a = std::pow(y_prime / w.alpha, w.beta);
    const double b = std::pow(y / w.alpha, w.beta);
    return -std::expm1(a - b);
}

/// Unrounded inverse of conditional_failure_cdf: the age x with F(x | y') = u.
inline double conditional_failure_quantile(const WeibullParams& w, double y_prime, double u) {
    return w.alpha * std::pow(std::pow(y_prime / w.alpha, w.beta) - std::log1p(-u), 1.0 / w.beta);
}

/// Failure period counted from the start of the horizon, clamped to
/// [1, horizon_len + 1]; horizon_len + 1 means no failure within the horizon.
inline int sample_failure_time(const WeibullParams& w, double y_prime, int horizon_len, double u) {
    w.validate();
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("sample_failure_time: u must lie in (0, 1)");
    if (y_prime < 0.0) throw std::invalid_argument("sample_failure_time: negative age");
    if (horizon_len < 1) throw std::invalid_argument("sample_failure_time: horizon_len must be >= 1");
    const double age_at_failure = detail::ceil_tol(conditional_failure_quantile(w, y_prime, u));
    const double raw = age_at_failure - y_prime;
    const double capped = std::min(raw, static_cast<double>(horizon_len + 1));
    return static_cast<int>(std::max(1.0, capped));
}

/// Smallest integer age by which an unused railcar fails with probability r.
inline int reliability_time(const WeibullParams& w, double r) {
    w.validate();
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("reliability_time: r must lie in (0, 1)");
    return static_cast<int>(detail::ceil_tol(w.alpha * std::pow(-std::log1p(-r), 1.0 / w.beta)));
}

/// Window [ceil(tau + h/2) - y', tau + h - y'] with tau = reliability_time and
/// half-length h = ceil(0.1 tau). Clamped so that 1 <= due <= end.
inline MaintenanceInterval maintenance_interval(const WeibullParams& w, double r, int y_prime) {
    if (y_prime < 0) throw std::invalid_argument("maintenance_interval: negative age");
    const int tau = reliability_time(w, r);
    const int half_length = static_cast<int>(detail::ceil_tol(0.1 * tau));
    const int due_raw = static_cast<int>(detail::ceil_tol(tau + 0.5 * half_length)) - y_prime;
    MaintenanceInterval iv;
    iv.due = std::max(1, due_raw);
    iv.end = std::max(iv.due, tau + half_length - y_prime);
    return iv;
}

}  // namespace railmaint
