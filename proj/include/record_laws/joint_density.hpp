#pragma once

#include "distribution.hpp"
#include "joint_point.hpp"

#include <array>
#include <stdexcept>

namespace record_laws {

namespace detail {

inline void require_kind(const DistributionModel& d, bool discrete,
                         const char* fn) {
    if (d.is_discrete() != discrete)
        throw std::invalid_argument(std::string(fn) + ": wrong model kind");
}

inline void require_records(const JointPoint& p, int n, const char* fn) {
    if (p.n != n || !p.well_formed())
        throw std::invalid_argument(std::string(fn) + ": point is not a Z_" +
                                    std::to_string(n) + " point");
}

} // namespace detail

// Joint density of (Y1, second lower record, second upper record) for a
// continuous law: f(y1) f(y2) f(y3) (1/(1-F(y1)) + 1/F(y1)) on y2 < y1 < y3.
inline double density_z2_continuous(const DistributionModel& d,
                                    const JointPoint& p) {
    detail::require_kind(d, false, "density_z2_continuous");
    detail::require_records(p, 2, "density_z2_continuous");
    if (!p.ordered()) return 0.0;
    const double prod = d.mass_or_density(p.x) * d.mass_or_density(p.lower[0]) *
                        d.mass_or_density(p.upper[0]);
    if (!(prod > 0.0)) return 0.0;
    const double F1 = d.cdf(p.x);
    const double S1 = d.survival(p.x);
    if (F1 <= 0.0 || !(S1 > 0.0))
        throw std::domain_error(
            "density_z2_continuous: F at the first observation is 0 or 1 on an in-domain point");
    return prod * (1.0 / S1 + 1.0 / F1);
}

// The six summands of the additive function L(x, y1, z1) for three records,
// continuous case, in the O1..O6 order.
inline std::array<double, 6> l_terms(const DistributionModel& d, double x,
                                     double y1, double z1) {
    detail::require_kind(d, false, "l_terms");
    if (!(y1 < x && x < z1))
        throw std::invalid_argument("l_terms: need y1 < x < z1");
    const double Fx = d.cdf(x);
    const double Fy = d.cdf(y1);
    const double Fz = d.cdf(z1);
    const double Sx = d.survival(x);
    const double Sz = d.survival(z1);
    const double wait_zx = 1.0 - (Fz - Fx); // both chains short, bounds x and z1
    const double wait_zy = 1.0 - (Fz - Fy); // bounds y1 and z1
    const double wait_xy = 1.0 - (Fx - Fy); // bounds y1 and x
    auto inv = [](double a, double b, double c) {
        const double den = a * b * c;
        if (!(den > 0.0))
            throw std::domain_error("l_terms: zero denominator inside the ordered domain");
        return 1.0 / den;
    };
    return {inv(wait_zx, Fx, Fy),
            inv(wait_zx, wait_zy, Sz),
            inv(wait_zx, wait_zy, Fy),
            inv(wait_xy, wait_zy, Sz),
            inv(wait_xy, wait_zy, Fy),
            inv(wait_xy, Sx, Sz)};
}

// Joint density of Z3 for a continuous law: the five density factors times
// the sum of the six L summands; zero off y2 < y1 < x < z1 < z2.
inline double density_z3_continuous(const DistributionModel& d,
                                    const JointPoint& p) {
    detail::require_kind(d, false, "density_z3_continuous");
    detail::require_records(p, 3, "density_z3_continuous");
    if (!p.ordered()) return 0.0;
    double prod = d.mass_or_density(p.x);
    prod *= d.mass_or_density(p.lower[0]) * d.mass_or_density(p.lower[1]);
    prod *= d.mass_or_density(p.upper[0]) * d.mass_or_density(p.upper[1]);
    if (!(prod > 0.0)) return 0.0;
    const std::array<double, 6> t = l_terms(d, p.x, p.lower[0], p.upper[0]);
    return prod * (t[0] + t[1] + t[2] + t[3] + t[4] + t[5]);
}

// Discrete two-record law: f(y1) f(y2) f(y3) / (F*(y1) (1 - F(y1))) on
// support triples with y2 < y1 < y3, zero elsewhere.  On-support ordered
// triples cannot produce zero denominators: F*(y1) >= f(y2) > 0 and
// 1 - F(y1) >= f(y3) > 0.
inline double density_z2_discrete(const DistributionModel& d,
                                  const JointPoint& p) {
    detail::require_kind(d, true, "density_z2_discrete");
    detail::require_records(p, 2, "density_z2_discrete");
    if (!p.ordered()) return 0.0;
    const double f1 = d.mass_or_density(p.x);
    const double f2 = d.mass_or_density(p.lower[0]);
    const double f3 = d.mass_or_density(p.upper[0]);
    if (!(f1 > 0.0) || !(f2 > 0.0) || !(f3 > 0.0)) return 0.0;
    return f1 * f2 * f3 / (d.strict_cdf(p.x) * d.survival(p.x));
}

// Discrete three-record law.  Same six-summand shape as the continuous L,
// with every summand carrying the tie factor 1 - f(x) and the strict CDF F*
// at the lower bounds (ties with the running minimum stay admissible).
inline double density_z3_discrete(const DistributionModel& d,
                                  const JointPoint& p) {
    detail::require_kind(d, true, "density_z3_discrete");
    detail::require_records(p, 3, "density_z3_discrete");
    if (!p.ordered()) return 0.0;
    const double fx = d.mass_or_density(p.x);
    const double fy1 = d.mass_or_density(p.lower[0]);
    const double fy2 = d.mass_or_density(p.lower[1]);
    const double fz1 = d.mass_or_density(p.upper[0]);
    const double fz2 = d.mass_or_density(p.upper[1]);
    const double prod = fx * fy1 * fy2 * fz1 * fz2;
    if (!(prod > 0.0)) return 0.0;
    const double Fx = d.cdf(p.x);
    const double Fz = d.cdf(p.upper[0]);
    const double Fsx = d.strict_cdf(p.x);
    const double Fsy = d.strict_cdf(p.lower[0]);
    const double Sx = d.survival(p.x);
    const double Sz = d.survival(p.upper[0]);
    const double tie = 1.0 - fx;
    const double wait_zx = 1.0 - (Fz - Fsx);
    const double wait_zy = 1.0 - (Fz - Fsy);
    const double wait_xy = 1.0 - (Fx - Fsy);
    const double L = 1.0 / (tie * wait_zx * Fsx * Fsy) +
                     1.0 / (tie * wait_zx * wait_zy * Sz) +
                     1.0 / (tie * wait_zx * wait_zy * Fsy) +
                     1.0 / (tie * wait_xy * wait_zy * Sz) +
                     1.0 / (tie * wait_xy * wait_zy * Fsy) +
                     1.0 / (tie * wait_xy * Sx * Sz);
    return prod * L;
}

// Dispatch helpers used by the CLI and the cross-checking suites.
inline double density_closed_form(const DistributionModel& d,
                                  const JointPoint& p) {
    if (p.n == 2)
        return d.is_discrete() ? density_z2_discrete(d, p)
                               : density_z2_continuous(d, p);
    if (p.n == 3)
        return d.is_discrete() ? density_z3_discrete(d, p)
                               : density_z3_continuous(d, p);
    throw std::invalid_argument("closed form only for n <= 3");
}

} // namespace record_laws
