#pragma once

#include "distribution.hpp"
#include "joint_point.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace record_laws {

// Joint density of the p-th lower and q-th upper record values, p, q in
// {2, 3}, continuous case.  (2,2) is closed form; the other three keep their
// one-dimensional integral, evaluated after the substitution u = F(x) which
// absorbs f(x) dx and leaves integrands on (F(y), F(z)) with log endpoint
// singularities.
inline double pair_density_continuous(const DistributionModel& d, int p, int q,
                                      double y, double z,
                                      double rel_tol = 1e-8) {
    if (d.is_discrete())
        throw std::invalid_argument("pair_density_continuous: continuous model required");
    if (p < 2 || p > 3 || q < 2 || q > 3)
        throw std::invalid_argument("pair_density_continuous: record ranks are 2 or 3");
    if (!(y < z)) return 0.0;
    const double fy = d.mass_or_density(y);
    const double fz = d.mass_or_density(z);
    if (!(fy > 0.0) || !(fz > 0.0)) return 0.0;
    const double Fy = d.cdf(y);
    const double Fz = d.cdf(z);
    const double Sy = d.survival(y);
    const double Sz = d.survival(z);
    if (p == 2 && q == 2)
        return fy * fz * (std::log(Fz / Fy) + std::log(Sy / Sz));

    double sign = -1.0;
    std::function<double(double)> integrand;
    if (p == 2 && q == 3) {
        integrand = [Sz](double u) {
            return std::log(Sz / (1.0 - u)) / (u * (1.0 - u));
        };
    } else if (p == 3 && q == 2) {
        integrand = [Fy](double u) {
            return std::log(Fy / u) / (u * (1.0 - u));
        };
    } else {
        sign = 1.0;
        integrand = [Fy, Sz](double u) {
            return std::log(Fy / u) * std::log(Sz / (1.0 - u)) /
                   (u * (1.0 - u));
        };
    }
    const QuadratureResult r = integrate_1d(integrand, Fy, Fz, rel_tol, 1e-13);
    if (!r.converged)
        throw numeric_error("pair density integral did not converge",
                            r.error_estimate);
    return sign * fy * fz * r.value;
}

// Discrete counterpart: finite sums over support atoms strictly between the
// arguments, with the strict CDF at lower-record positions.
inline double pair_density_discrete(const DistributionModel& d, int p, int q,
                                    double y, double z) {
    if (!d.is_discrete())
        throw std::invalid_argument("pair_density_discrete: discrete model required");
    if (p < 2 || p > 3 || q < 2 || q > 3)
        throw std::invalid_argument("pair_density_discrete: record ranks are 2 or 3");
    if (!(y < z)) return 0.0;
    const double fy = d.mass_or_density(y);
    const double fz = d.mass_or_density(z);
    if (!(fy > 0.0) || !(fz > 0.0)) return 0.0;
    const std::vector<double>& sup = d.support();
    double outer = 0.0;
    for (double x : sup) {
        if (!(x > y)) continue;
        if (!(x < z)) break;
        double weight = d.mass_or_density(x) /
                        (d.strict_cdf(x) * d.survival(x));
        if (p == 3) {
            double inner = 0.0;
            for (double y1 : sup) {
                if (!(y1 > y)) continue;
                if (!(y1 < x)) break;
                inner += d.mass_or_density(y1) / d.strict_cdf(y1);
            }
            weight *= inner;
        }
        if (q == 3) {
            double inner = 0.0;
            for (double z1 : sup) {
                if (!(z1 > x)) continue;
                if (!(z1 < z)) break;
                inner += d.mass_or_density(z1) / d.survival(z1);
            }
            weight *= inner;
        }
        outer += weight;
    }
    return fy * fz * outer;
}

// Known marginal of the upper record values alone: the product of hazards
// over all but the last value times the density at the last.
inline double upper_records_density(const DistributionModel& d,
                                    const std::vector<double>& values) {
    if (values.empty())
        throw std::invalid_argument("upper_records_density: need at least one value");
    for (size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] < values[i + 1]))
            throw std::invalid_argument("upper_records_density: values must increase strictly");
    double prod = 1.0;
    for (size_t i = 0; i + 1 < values.size(); ++i) prod *= d.hazard(values[i]);
    return prod * d.mass_or_density(values.back());
}

// Density over coordinates listed in ascending order (the section layout
// integrate_section uses).
using SectionDensity = std::function<double(const std::vector<double>&)>;

namespace detail {

inline double sum_section(const SectionDensity& fn, const DistributionModel& d,
                          const SectionRegion& region) {
    const size_t m = region.coordinates.size();
    std::vector<double> coords(m, 0.0);
    std::vector<size_t> free_idx;
    for (size_t i = 0; i < m; ++i) {
        if (region.coordinates[i])
            coords[i] = *region.coordinates[i];
        else
            free_idx.push_back(i);
    }
    if (free_idx.empty()) return fn(coords);
    const std::vector<double>& sup = d.support();
    double total = 0.0;
    // Positions left of a free coordinate are bound by the time it runs, so
    // its range is (left neighbour, nearest fixed coordinate to the right).
    std::function<void(size_t)> walk = [&](size_t k) {
        const size_t i = free_idx[k];
        double hi = std::numeric_limits<double>::infinity();
        for (size_t j = i + 1; j < m; ++j)
            if (region.coordinates[j]) {
                hi = *region.coordinates[j];
                break;
            }
        const double lo = i == 0 ? -std::numeric_limits<double>::infinity()
                                 : coords[i - 1];
        for (double v : sup) {
            if (!(v > lo)) continue;
            if (!(v < hi)) break;
            coords[i] = v;
            if (k + 1 < free_idx.size())
                walk(k + 1);
            else
                total += fn(coords);
        }
    };
    walk(0);
    return total;
}

} // namespace detail

// Integrates (continuous) or sums (discrete) a joint density over the
// coordinates the section leaves free, giving the marginal density at the
// fixed ones.  Sections follow the ascending layout y_{n-1} .. y_1 x z_1 ..
inline double numeric_marginal(const SectionDensity& density,
                               const DistributionModel& d,
                               const SectionRegion& section,
                               double rel_tol = 1e-8) {
    if (d.is_discrete()) return detail::sum_section(density, d, section);
    const QuadratureResult r =
        integrate_section(density, d, section, rel_tol, 1e-13);
    if (!r.converged)
        throw numeric_error("marginalization did not converge at level " +
                                std::to_string(r.failed_level),
                            r.error_estimate);
    return r.value;
}

// Convenience wrapper: marginal of a Z_n joint density with the kept
// coordinates given in ascending positions (0-based over 2n-1 slots).
inline double numeric_marginal_at(
    const std::function<double(const JointPoint&)>& joint,
    const DistributionModel& d, int n, const std::vector<size_t>& keep,
    const std::vector<double>& at, double rel_tol = 1e-8) {
    if (keep.size() != at.size())
        throw std::invalid_argument("numeric_marginal_at: keep/at size mismatch");
    SectionRegion region;
    region.coordinates.assign(size_t(2 * n - 1), std::nullopt);
    for (size_t k = 0; k < keep.size(); ++k) {
        if (keep[k] >= region.coordinates.size())
            throw std::invalid_argument("numeric_marginal_at: keep index out of range");
        region.coordinates[keep[k]] = at[k];
    }
    SectionDensity fn = [&joint, n](const std::vector<double>& c) {
        return joint(JointPoint::from_ascending(n, c));
    };
    return numeric_marginal(fn, d, region, rel_tol);
}

} // namespace record_laws
