#pragma once

// Sample statistics and the normal / Student-t confidence intervals used for
// the SAA bounds.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace railmaint {

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.95;  // 1 - theta

    [[nodiscard]] double mid() const noexcept { return 0.5 * (lo + hi); }
    [[nodiscard]] double half_width() const noexcept { return 0.5 * (hi - lo); }
};

/// Upper theta/2 quantile of the standard normal, z_{theta/2}.
inline double normal_upper_quantile(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
    return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>(), theta / 2.0));
}

/// Upper theta/2 quantile of Student's t with `dof` degrees of freedom.
inline double student_t_upper_quantile(double theta, double dof) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
    if (!(dof > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
    return boost::math::quantile(boost::math::complement(boost::math::students_t_distribution<double>(dof), theta / 2.0));
}

/// Sum in ascending order, so the result does not depend on input order.
inline double ordered_sum(std::span<const double> xs) {
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

inline double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("sample_mean: empty sample");
    return ordered_sum(xs) / static_cast<double>(xs.size());
}

/// Variance of the sample mean: sum (x - mean)^2 / (n (n - 1)).
inline double variance_of_mean(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance_of_mean: need at least 2 values");
    const double mu = sample_mean(xs);
    std::vector<double> sq;
    sq.reserve(xs.size());
    for (double x : xs) sq.push_back((x - mu) * (x - mu));
    const double n = static_cast<double>(xs.size());
    return ordered_sum(sq) / (n * (n - 1.0));
}

/// mean +- z_{theta/2} * sqrt(variance_of_mean)
inline ConfidenceInterval normal_mean_interval(std::span<const double> xs, double theta) {
    if (xs.size() < 2) throw std::invalid_argument("confidence interval: need at least 2 values");
    const double mu = sample_mean(xs);
    const double half = normal_upper_quantile(theta) * std::sqrt(variance_of_mean(xs));
    return {mu - half, mu + half, 1.0 - theta};
}

/// mean +- t_{theta/2, n-1} * sqrt(variance_of_mean)
inline ConfidenceInterval student_t_mean_interval(std::span<const double> xs, double theta) {
    if (xs.size() < 2) throw std::invalid_argument("confidence interval: need at least 2 values");
    const double mu = sample_mean(xs);
    const double t = student_t_upper_quantile(theta, static_cast<double>(xs.size() - 1));
    const double half = t * std::sqrt(variance_of_mean(xs));
    return {mu - half, mu + half, 1.0 - theta};
}

}  // namespace railmaint
