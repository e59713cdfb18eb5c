// Adaptive numerical integration on finite intervals, plus iterated
// integration over ordered-simplex sections in CDF-transformed coordinates.
//
// The base rule is Gauss-Kronrod 7-15: all nodes are interior, so integrands
// with integrable endpoint singularities (the corollaries' log terms at
// F in {0,1}) are evaluated safely.  Panels are refined depth-first in a
// fixed order, which keeps results bit-identical from run to run.
#pragma once

#include "record_laws/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace record_laws {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
    int failed_level = -1; // nesting level that failed to converge, -1 if none
};

struct numeric_error : std::runtime_error {
    double error_estimate;
    numeric_error(const std::string& what, double err)
        : std::runtime_error(what), error_estimate(err) {}
};

namespace gk {

// Gauss-Kronrod 7-15 abscissae on [0,1]; odd indices are the Gauss-7 nodes.
inline constexpr double nodes[15] = {
    0.0042723144395936940576063989283284,
    0.025446043828620756865888097308925,
    0.067567788320115451661251881887438,
    0.12923440720030276995800022632466,
    0.20695638226615442611944217787823,
    0.29707742431130140792205907018797,
    0.3961075224960507457083735971537,
    0.5,
    0.6038924775039492542916264028463,
    0.7029225756886985365667896985542,
    0.79304361773384557388055782212177,
    0.87076559279969723004199977367534,
    0.93243221167988454833874811811256,
    0.97455395617137918762296067143325,
    0.99572768556040625043124236981384,
};

inline constexpr double kronrod_weights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};

inline constexpr double gauss_weights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

struct PanelEstimate {
    double kronrod;
    double error; // |kronrod - gauss|
};

template <class F>
PanelEstimate panel(F&& fn, double a, double b) {
    // Nodes live on [0,1]; the weights keep their reference [-1,1]
    // normalization (they sum to 2), hence the half-length factor.
    const double h = 0.5 * (b - a);
    double k15 = 0.0, g7 = 0.0;
    for (int j = 0; j < 15; ++j) {
        const double y = fn(a + (b - a) * nodes[j]);
        k15 += kronrod_weights[j] * y;
        if (j % 2 == 1) g7 += gauss_weights[j / 2] * y;
    }
    return {h * k15, std::abs(h * (k15 - g7))};
}

} // namespace gk

inline constexpr int quadrature_panel_cap = 16384; // subdivision cap per call

// Globally adaptive bisection on [a,b]: always split the panel carrying the
// largest error until the summed error meets the tolerance.  Power-law
// endpoint singularities settle this way because each split of the endpoint
// panel shrinks its error geometrically; a genuinely divergent integrand
// keeps growing instead and runs into the panel cap, reported as
// non-convergence.  Everything is sequential and the final sum runs left to
// right over the panels, so results are bit-identical from run to run.
template <class F>
QuadratureResult integrate_1d(F&& fn, double a, double b,
                              double rel_tol = 1e-8, double abs_tol = 1e-12) {
    if (!(a < b)) throw std::invalid_argument("integrate_1d: need a < b");
    struct Seg {
        double a, b, value, error;
    };
    const auto by_error = [](const Seg& s, const Seg& t) { return s.error < t.error; };

    QuadratureResult out;
    const auto first = gk::panel(fn, a, b);
    out.evaluations = 15;
    std::vector<Seg> segs{{a, b, first.kronrod, first.error}};
    double value = first.kronrod;
    double error = first.error;
    bool stuck = false;

    while (std::isfinite(error) && std::isfinite(value) &&
           error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (segs.size() >= static_cast<std::size_t>(quadrature_panel_cap)) {
            stuck = true;
            break;
        }
        std::pop_heap(segs.begin(), segs.end(), by_error);
        const Seg seg = segs.back();
        segs.pop_back();
        const double mid = 0.5 * (seg.a + seg.b);
        if (!(seg.a < mid) || !(mid < seg.b)) {
            // interval no longer splittable in double precision
            stuck = true;
            segs.push_back(seg);
            break;
        }
        const auto left = gk::panel(fn, seg.a, mid);
        const auto right = gk::panel(fn, mid, seg.b);
        out.evaluations += 30;
        value += left.kronrod + right.kronrod - seg.value;
        error += left.error + right.error - seg.error;
        segs.push_back({seg.a, mid, left.kronrod, left.error});
        std::push_heap(segs.begin(), segs.end(), by_error);
        segs.push_back({mid, seg.b, right.kronrod, right.error});
        std::push_heap(segs.begin(), segs.end(), by_error);
    }

    // Re-sum in interval order: the incremental value above accumulates
    // cancellation over many splits.
    std::sort(segs.begin(), segs.end(),
              [](const Seg& s, const Seg& t) { return s.a < t.a; });
    value = 0.0;
    error = 0.0;
    for (const Seg& s : segs) {
        value += s.value;
        error += s.error;
    }

    out.value = value;
    out.error_estimate = error;
    out.converged = !stuck && std::isfinite(value) && std::isfinite(error) &&
                    error <= std::max(abs_tol, rel_tol * std::abs(value));
    return out;
}

// A coordinate section of an ordered chain c_0 < c_1 < ... < c_{m-1}.
// Fixed entries hold the section's pinned coordinates (original space);
// unset entries are integrated out.
struct SectionRegion {
    std::vector<std::optional<double>> coordinates;
};

// Iterated integration of `fn` (a function of all m original-space
// coordinates, densities included) over the free coordinates of an ordered
// section.  Every leg is transformed by u = F(x), so f(x) dx = du: the
// integrand is divided by f at each integrated coordinate and infinite legs
// become finite.  Levels run outermost = leftmost free coordinate; each
// level gets tolerance rel_tol / (levels + 1).
template <class F>
QuadratureResult integrate_section(F&& fn, const DistributionModel& d,
                                   const SectionRegion& region,
                                   double rel_tol = 1e-8,
                                   double abs_tol = 1e-12) {
    const size_t m = region.coordinates.size();
    std::vector<size_t> free_idx;
    for (size_t i = 0; i < m; ++i)
        if (!region.coordinates[i]) free_idx.push_back(i);
    if (free_idx.empty())
        throw std::invalid_argument("integrate_section: nothing to integrate");

    const double level_tol = rel_tol / double(free_idx.size() + 1);
    std::vector<double> coords(m, 0.0);
    std::vector<double> u_now(m, 0.0); // current u of already-bound free coords
    for (size_t i = 0; i < m; ++i)
        if (region.coordinates[i]) coords[i] = *region.coordinates[i];

    QuadratureResult out;
    out.converged = true;

    // u-bounds for the free coordinate at position i.  Below: the nearest
    // coordinate to the left that is already bound (fixed, or a free one
    // belonging to an outer level).  Above: the nearest fixed coordinate to
    // the right (free ones further right nest inside and share this bound).
    auto lower_u = [&](size_t i) {
        for (size_t j = i; j-- > 0;) {
            if (region.coordinates[j]) return d.cdf(*region.coordinates[j]);
            return u_now[j];
        }
        return 0.0;
    };
    auto upper_u = [&](size_t i) {
        for (size_t j = i + 1; j < m; ++j)
            if (region.coordinates[j]) return d.cdf(*region.coordinates[j]);
        return 1.0;
    };

    std::function<double(size_t)> level = [&](size_t k) -> double {
        const size_t i = free_idx[k];
        const double lo = lower_u(i), hi = upper_u(i);
        if (!(lo < hi)) return 0.0;
        auto integrand = [&](double u) -> double {
            const double x = d.quantile(u);
            coords[i] = x;
            u_now[i] = u;
            const double fx = d.mass_or_density(x);
            if (!(fx > 0.0)) return 0.0;
            const double rest =
                (k + 1 < free_idx.size()) ? level(k + 1) : fn(coords);
            return rest / fx;
        };
        QuadratureResult r = integrate_1d(integrand, lo, hi, level_tol, abs_tol);
        out.evaluations += r.evaluations;
        if (!r.converged) {
            out.converged = false;
            if (out.failed_level < 0) out.failed_level = int(k);
        }
        if (k == 0) {
            out.value = r.value;
            out.error_estimate = r.error_estimate;
        }
        return r.value;
    };

    level(0);
    return out;
}

} // namespace record_laws
