#pragma once

#include <cmath>
#include <stdexcept>

namespace record_laws {

// Regularized upper incomplete gamma Q(a, x): series for the lower tail when
// x < a + 1, modified Lentz continued fraction otherwise.
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double log_pre = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int k = 1; k < 1000; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return 1.0 - std::exp(log_pre) * sum;
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double dd = 1.0 / b;
    double h = dd;
    for (int i = 1; i < 1000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        dd = an * dd + b;
        if (std::fabs(dd) < tiny) dd = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        dd = 1.0 / dd;
        const double delta = dd * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return std::exp(log_pre) * h;
}

// P(X >= statistic) for a chi-square variable with dof degrees of freedom.
inline double chi_square_survival(double statistic, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_square_survival: dof >= 1");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * statistic);
}

} // namespace record_laws
