#pragma once

// Verification suites. Every closed-form evaluator in the library is checked
// here against an independent route: iterated quadrature, exhaustive
// summation, the dynamic-programming oracle, or Monte Carlo. The suites
// return structured reports so the CLI can serialize them and so the
// acceptance tests can reuse the same checks with pinned tolerances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "record_laws/distribution.hpp"
#include "record_laws/interleaving.hpp"
#include "record_laws/joint_density.hpp"
#include "record_laws/joint_point.hpp"
#include "record_laws/marginals.hpp"
#include "record_laws/oracle.hpp"
#include "record_laws/quadrature.hpp"
#include "record_laws/rng.hpp"
#include "record_laws/simulation.hpp"
#include "record_laws/special.hpp"

namespace record_laws {

inline constexpr const char* tool_version = "1.0.0";

struct CheckRecord {
    std::string check_id;
    std::string inputs;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string suite;
    std::string model;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::size_t failures() const {
        std::size_t k = 0;
        for (const auto& c : checks)
            if (!c.pass) ++k;
        return k;
    }
};

namespace detail {

inline double rel_gap(double actual, double expected) {
    const double scale = std::max(std::fabs(expected), std::fabs(actual));
    if (scale == 0.0) return 0.0;
    return std::fabs(actual - expected) / scale;
}

inline std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return std::string(buf);
}

inline CheckRecord rel_check(std::string id, std::string inputs, double expected,
                             double actual, double tol) {
    CheckRecord r;
    r.check_id = std::move(id);
    r.inputs = std::move(inputs);
    r.expected = expected;
    r.actual = actual;
    r.tolerance = tol;
    r.pass = rel_gap(actual, expected) <= tol;
    return r;
}

inline CheckRecord abs_check(std::string id, std::string inputs, double expected,
                             double actual, double tol) {
    CheckRecord r;
    r.check_id = std::move(id);
    r.inputs = std::move(inputs);
    r.expected = expected;
    r.actual = actual;
    r.tolerance = tol;
    r.pass = std::fabs(actual - expected) <= tol;
    return r;
}

// Strictly increasing draws from the interior of the CDF range. The padding
// keeps quadrature away from the support endpoints where several closed
// forms are genuinely singular.
inline std::vector<double> ordered_quantile_points(const DistributionModel& d,
                                                   RandomStream& stream,
                                                   std::size_t count,
                                                   double pad = 0.04) {
    std::vector<double> u(count);
    for (auto& v : u) v = pad + (1.0 - 2.0 * pad) * stream.next();
    std::sort(u.begin(), u.end());
    for (std::size_t i = 1; i < count; ++i)
        if (u[i] <= u[i - 1]) u[i] = std::nextafter(u[i - 1], 1.0);
    std::vector<double> x(count);
    for (std::size_t i = 0; i < count; ++i) x[i] = d.quantile(u[i]);
    return x;
}

// Distinct support atoms in increasing order, chosen uniformly.
inline std::vector<double> ordered_support_atoms(const DistributionModel& d,
                                                 RandomStream& stream,
                                                 std::size_t count) {
    const auto& sup = d.support();
    if (sup.size() < count)
        throw std::invalid_argument("ordered_support_atoms: support smaller than request");
    std::vector<std::size_t> picked;
    while (picked.size() < count) {
        auto i = static_cast<std::size_t>(stream.next() * static_cast<double>(sup.size()));
        if (i >= sup.size()) i = sup.size() - 1;
        if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
    }
    std::sort(picked.begin(), picked.end());
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = sup[picked[k]];
    return out;
}

}  // namespace detail

// Total mass of the three-record law by five nested quadrature levels in CDF
// coordinates. The three middle coordinates carry all the structure, so they
// nest outermost; the extreme records have flat unit integrands after the
// substitution and sit innermost where a single panel settles them. The
// second-lower-record leg depends only on y1 and hoists out of the two inner
// levels. `middle` receives real coordinates (x, y1, z1) and should return
// the density with the five density factors divided out, i.e. the sum (or a
// single one) of the geometric-sum terms.
inline double z3_ordered_integral(const DistributionModel& d,
                                  const std::function<double(double x, double y1, double z1)>& middle,
                                  double rel_tol = 1e-8) {
    if (d.is_discrete())
        throw std::invalid_argument("z3_ordered_integral: continuous models only");
    const double level_tol = rel_tol / 6.0;
    const double abs_floor = 1e-14;
    bool settled = true;

    auto flat_leg = [&](double lo, double hi) {
        auto r = integrate_1d([](double) { return 1.0; }, lo, hi, level_tol, abs_floor);
        settled = settled && r.converged;
        return r.value;
    };

    auto outer = integrate_1d(
        [&](double w) {
            const double y1 = d.quantile(w);
            const double lower_leg = flat_leg(0.0, w);
            auto mid = integrate_1d(
                [&](double t) {
                    const double x = d.quantile(t);
                    auto inner = integrate_1d(
                        [&](double s) {
                            const double z1 = d.quantile(s);
                            return flat_leg(s, 1.0) * middle(x, y1, z1);
                        },
                        t, 1.0, level_tol, abs_floor);
                    settled = settled && inner.converged;
                    return inner.value;
                },
                w, 1.0, level_tol, abs_floor);
            settled = settled && mid.converged;
            return lower_leg * mid.value;
        },
        0.0, 1.0, level_tol, abs_floor);

    if (!outer.converged || !settled)
        throw numeric_error("z3_ordered_integral did not converge", outer.error_estimate);
    return outer.value;
}

// Probability that a completed three-record history realizes one specific
// interleaving. Integrates that term's contribution over the whole domain.
// The value does not depend on the model: mapping every observation through
// its own CDF turns any continuous model into Uniform(0,1) without touching
// record times, so these six numbers are universal constants of the law.
inline double ordering_probability_z3(const DistributionModel& d,
                                      const DensityTerm& term,
                                      double rel_tol = 1e-6) {
    return z3_ordered_integral(
        d,
        [&](double x, double y1, double z1) {
            JointPoint p;
            p.n = 3;
            p.x = x;
            p.lower = {y1, y1};
            p.upper = {z1, z1};
            // The last records never enter a stay-region denominator, so any
            // in-order placeholders work; the real extreme coordinates were
            // integrated out by the flat legs.
            p.lower[1] = std::nextafter(y1, -1e308);
            p.upper[1] = std::nextafter(z1, 1e308);
            return term_inverse_denominators(term, d, p);
        },
        rel_tol);
}

// --- normalization ---------------------------------------------------------

// Continuous: the two- and three-record laws integrate to one over their
// ordered domains. Discrete: the two-record law carries all mass except the
// histories started at a support endpoint, where one of the sides can never
// produce a second record.
inline VerificationReport verify_normalization(const DistributionModel& d) {
    VerificationReport rep;
    rep.suite = "normalization";
    rep.model = d.descriptor();

    if (!d.is_discrete()) {
        SectionRegion all_free;
        all_free.coordinates = {std::nullopt, std::nullopt, std::nullopt};
        auto z2 = numeric_marginal(
            [&](const std::vector<double>& c) {
                JointPoint p = JointPoint::from_ascending(2, c);
                return density_z2_continuous(d, p);
            },
            d, all_free, 1e-9);
        rep.checks.push_back(detail::abs_check("z2_total_mass", "full ordered domain", 1.0,
                                               z2, 1e-6));

        auto z3 = z3_ordered_integral(
            d, [&](double x, double y1, double z1) {
                const auto terms = l_terms(d, x, y1, z1);
                double s = 0.0;
                for (double t : terms) s += t;
                return s;
            },
            2e-4);
        rep.checks.push_back(detail::abs_check("z3_total_mass", "full ordered domain", 1.0,
                                               z3, 1e-4));
        return rep;
    }

    const auto& sup = d.support();
    SectionRegion all_free;
    all_free.coordinates = {std::nullopt, std::nullopt, std::nullopt};
    auto z2 = numeric_marginal(
        [&](const std::vector<double>& c) {
            JointPoint p = JointPoint::from_ascending(2, c);
            return density_z2_discrete(d, p);
        },
        d, all_free);
    const double expected = 1.0 - d.mass_or_density(sup.front()) - d.mass_or_density(sup.back());
    rep.checks.push_back(detail::abs_check("z2_total_mass", "all ordered support triples",
                                           expected, z2, 1e-12));
    return rep;
}

// --- marginals --------------------------------------------------------------

// Closed-form pair densities and the upper-records marginal against numeric
// marginalization of the full three-record law.
inline VerificationReport verify_marginals(const DistributionModel& d, std::uint64_t seed,
                                           std::size_t points_per_pair = 20,
                                           std::optional<std::pair<int, int>> only_pair = {},
                                           double tol_override = 0.0) {
    VerificationReport rep;
    rep.suite = "marginals";
    rep.model = d.descriptor();
    rep.seed = seed;
    RandomStream stream(seed, 0, 3);

    const bool discrete = d.is_discrete();
    auto z3_density = [&](const JointPoint& p) { return density_closed_form(d, p); };
    auto z2_density = [&](const JointPoint& p) {
        return discrete ? density_z2_discrete(d, p) : density_z2_continuous(d, p);
    };

    struct PairSpec {
        int p, q;
        std::size_t keep_lo, keep_hi;  // ascending slots of the kept pair in (y2,y1,x,z1,z2)
    };
    const PairSpec specs[] = {{2, 2, 1, 3}, {2, 3, 1, 4}, {3, 2, 0, 3}, {3, 3, 0, 4}};
    const double pair_tol = tol_override > 0.0 ? tol_override : (discrete ? 1e-12 : 1e-5);

    for (const auto& s : specs) {
        if (only_pair && (only_pair->first != s.p || only_pair->second != s.q)) continue;
        for (std::size_t k = 0; k < points_per_pair; ++k) {
            std::vector<double> yz;
            if (discrete) {
                // Stay inside the region where the closed form and the
                // marginal of the three-record law agree: a lower index of 2
                // needs room below its value, an upper index of 2 room above.
                const auto& sup = d.support();
                std::size_t lo_min = (s.p == 2) ? 1 : 0;
                std::size_t hi_max = sup.size() - ((s.q == 2) ? 2 : 1);
                std::vector<double> box(sup.begin() + static_cast<std::ptrdiff_t>(lo_min),
                                        sup.begin() + static_cast<std::ptrdiff_t>(hi_max) + 1);
                if (box.size() < 2)
                    throw std::invalid_argument("verify_marginals: support too small");
                auto pick = [&](std::size_t limit) {
                    auto i = static_cast<std::size_t>(stream.next() * static_cast<double>(limit));
                    return i >= limit ? limit - 1 : i;
                };
                std::size_t a = pick(box.size()), b = pick(box.size());
                while (a == b) b = pick(box.size());
                yz = {box[std::min(a, b)], box[std::max(a, b)]};
            } else {
                yz = detail::ordered_quantile_points(d, stream, 2);
            }

            const double closed = discrete
                                      ? pair_density_discrete(d, s.p, s.q, yz[0], yz[1])
                                      : pair_density_continuous(d, s.p, s.q, yz[0], yz[1]);
            const double numeric =
                numeric_marginal_at(z3_density, d, 3, {s.keep_lo, s.keep_hi}, yz, 1e-8);

            char id[32];
            std::snprintf(id, sizeof(id), "pair_%d_%d", s.p, s.q);
            rep.checks.push_back(
                discrete ? detail::abs_check(id, detail::fmt("y=%.6g z=%.6g", yz[0], yz[1]),
                                             numeric, closed, pair_tol)
                         : detail::rel_check(id, detail::fmt("y=%.6g z=%.6g", yz[0], yz[1]),
                                             numeric, closed, pair_tol));

            // The (2,2) pair also sits inside the two-record law, one
            // marginalization away. Both routes must land on the same value.
            if (s.p == 2 && s.q == 2) {
                const double via_z2 =
                    numeric_marginal_at(z2_density, d, 2, {0, 2}, yz, 1e-8);
                rep.checks.push_back(
                    discrete ? detail::abs_check("pair_2_2_via_z2",
                                                 detail::fmt("y=%.6g z=%.6g", yz[0], yz[1]),
                                                 via_z2, closed, 1e-12)
                             : detail::rel_check("pair_2_2_via_z2",
                                                 detail::fmt("y=%.6g z=%.6g", yz[0], yz[1]),
                                                 via_z2, closed, 1e-6));
            }
        }
    }

    // Upper-chain marginal: integrating the lower coordinates out of the
    // three-record law leaves the classical record density
    // r(x) r(z1) f(z2). Continuous only; on atoms the bottom of the support
    // retains histories whose lower chain never completes.
    if (!discrete && !only_pair) {
        for (std::size_t k = 0; k < points_per_pair; ++k) {
            auto xs = detail::ordered_quantile_points(d, stream, 3);
            const double expected = upper_records_density(d, xs);
            const double numeric =
                numeric_marginal_at(z3_density, d, 3, {2, 3, 4}, xs, 1e-8);
            rep.checks.push_back(detail::rel_check(
                "upper_records", detail::fmt("x=%.6g z1=%.6g z2=%.6g", xs[0], xs[1], xs[2]),
                expected, numeric, 1e-6));
        }
    }
    return rep;
}

// --- generator --------------------------------------------------------------

// The interleaving-driven evaluator against the hand-coded closed forms, the
// enumeration counts, and the reflection duality that swaps the two chains.
inline VerificationReport verify_generator(const DistributionModel& d, std::uint64_t seed,
                                           std::size_t points_per_n = 1000,
                                           std::size_t duality_points = 100,
                                           int only_n = 0) {
    VerificationReport rep;
    rep.suite = "generator";
    rep.model = d.descriptor();
    rep.seed = seed;
    RandomStream stream(seed, 0, 3);

    static const std::uint64_t counts[] = {2, 6, 20, 70, 252, 924};
    for (int n = 2; n <= 7; ++n) {
        char id[32];
        std::snprintf(id, sizeof(id), "interleaving_count_n%d", n);
        rep.checks.push_back(detail::abs_check(
            id, detail::fmt("n=%.0f", static_cast<double>(n)),
            static_cast<double>(counts[n - 2]),
            static_cast<double>(enumerate_interleavings(n).size()), 0.0));
    }

    const bool discrete = d.is_discrete();
    for (int n = 2; n <= 3; ++n) {
        if (only_n && n != only_n) continue;
        double worst = 0.0;
        std::vector<double> worst_point;
        for (std::size_t k = 0; k < points_per_n; ++k) {
            std::vector<double> coords =
                discrete ? detail::ordered_support_atoms(d, stream, static_cast<std::size_t>(2 * n - 1))
                         : detail::ordered_quantile_points(d, stream, static_cast<std::size_t>(2 * n - 1));
            JointPoint p = JointPoint::from_ascending(n, coords);
            const double closed = density_closed_form(d, p);
            const double generated = evaluate_general_density(d, p, n);
            const double gap = detail::rel_gap(generated, closed);
            if (gap > worst) {
                worst = gap;
                worst_point = coords;
            }
        }
        char id[40];
        std::snprintf(id, sizeof(id), "generator_matches_closed_n%d", n);
        CheckRecord r;
        r.check_id = id;
        r.inputs = detail::fmt("%.0f random points, worst at x=%.6g", static_cast<double>(points_per_n),
                               worst_point.empty() ? 0.0 : worst_point[static_cast<std::size_t>(n - 1)]);
        r.expected = 0.0;
        r.actual = worst;
        r.tolerance = 1e-12;
        r.pass = worst <= 1e-12;
        rep.checks.push_back(r);
    }

    // Negating every observation swaps lower and upper records, so the
    // density at a point equals the reflected model's density at the
    // reflected point.
    const DistributionModel mirrored = DistributionModel::reflected(d);
    for (int n = 2; n <= 3; ++n) {
        if (only_n && n != only_n) continue;
        double worst = 0.0;
        for (std::size_t k = 0; k < duality_points; ++k) {
            std::vector<double> coords =
                discrete ? detail::ordered_support_atoms(d, stream, static_cast<std::size_t>(2 * n - 1))
                         : detail::ordered_quantile_points(d, stream, static_cast<std::size_t>(2 * n - 1));
            JointPoint p = JointPoint::from_ascending(n, coords);
            const double direct = density_closed_form(d, p);
            const double dual = density_closed_form(mirrored, p.reflected());
            worst = std::max(worst, detail::rel_gap(dual, direct));
        }
        char id[40];
        std::snprintf(id, sizeof(id), "reflection_duality_n%d", n);
        CheckRecord r;
        r.check_id = id;
        r.inputs = detail::fmt("%.0f random points", static_cast<double>(duality_points));
        r.expected = 0.0;
        r.actual = worst;
        r.tolerance = 1e-12;
        r.pass = worst <= 1e-12;
        rep.checks.push_back(r);
    }
    return rep;
}

// --- oracle -----------------------------------------------------------------

// Every fully ordered support tuple of a finite discrete model, closed form
// against the dynamic-programming bracket. Also the two-record total-mass
// identity, accumulated from the same sweep.
inline VerificationReport verify_oracle(const DistributionModel& d, int n, int horizon) {
    if (!d.is_discrete())
        throw std::invalid_argument("verify_oracle: discrete models only");
    VerificationReport rep;
    rep.suite = "oracle";
    rep.model = d.descriptor();

    const auto& sup = d.support();
    const auto m = sup.size();
    double closed_total = 0.0, dp_total_low = 0.0, dp_total_high = 0.0;

    std::vector<std::size_t> idx(static_cast<std::size_t>(2 * n - 1));
    std::function<void(std::size_t, std::size_t)> sweep = [&](std::size_t slot, std::size_t from) {
        if (slot == idx.size()) {
            std::vector<double> coords(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) coords[i] = sup[idx[i]];
            JointPoint p = JointPoint::from_ascending(n, coords);
            const double closed = density_closed_form(d, p);
            const auto dp = dp_probability_discrete(d, p, n, horizon);
            closed_total += closed;
            dp_total_low += dp.value_lower;
            dp_total_high += dp.value_lower + dp.tail_bound;

            CheckRecord r;
            r.check_id = detail::fmt("dp_bracket_n%.0f", static_cast<double>(n));
            r.inputs = detail::fmt("x=%.6g low=%.6g high=%.6g", coords[static_cast<std::size_t>(n - 1)],
                                   coords.front(), coords.back());
            r.expected = dp.value_lower;
            r.actual = closed;
            r.tolerance = dp.tail_bound + 1e-13;
            r.pass = closed >= dp.value_lower - 1e-13 &&
                     closed <= dp.value_lower + dp.tail_bound + 1e-13 && dp.tail_bound <= 1e-12;
            rep.checks.push_back(r);
            return;
        }
        for (std::size_t i = from; i + (idx.size() - slot - 1) < m; ++i) {
            idx[slot] = i;
            sweep(slot + 1, i + 1);
        }
    };
    sweep(0, 0);

    if (n == 2) {
        const double expected = 1.0 - d.mass_or_density(sup.front()) - d.mass_or_density(sup.back());
        rep.checks.push_back(detail::abs_check("z2_total_vs_endpoint_deficit",
                                               "sum over all ordered triples", expected,
                                               closed_total, 1e-12));
        CheckRecord r;
        r.check_id = "z2_total_inside_dp_bracket";
        r.inputs = detail::fmt("dp total in [%.17g, %.17g]", dp_total_low, dp_total_high);
        r.expected = dp_total_low;
        r.actual = closed_total;
        r.tolerance = dp_total_high - dp_total_low + 1e-12;
        r.pass = closed_total >= dp_total_low - 1e-12 && closed_total <= dp_total_high + 1e-12;
        rep.checks.push_back(r);
    }
    return rep;
}

// --- monte carlo ------------------------------------------------------------

// A large simulated batch against the closed forms: censoring stays
// negligible, the (2,2) pair histogram passes a chi-square fit, and each
// interleaving shows up at the frequency its own term integrates to.
inline VerificationReport verify_mc(const DistributionModel& d, std::uint64_t runs,
                                    std::uint64_t seed, std::uint64_t max_draws,
                                    unsigned workers = 0) {
    if (d.is_discrete())
        throw std::invalid_argument("verify_mc: continuous models only");
    VerificationReport rep;
    rep.suite = "mc";
    rep.model = d.descriptor();
    rep.seed = seed;

    const int n = 3;
    EmpiricalSummary summary = run_batch(d, n, runs, seed, max_draws, 20, workers);

    rep.checks.push_back(detail::abs_check(
        "censored_fraction", detail::fmt("runs=%.0f max_draws=%.0f", static_cast<double>(runs),
                                         static_cast<double>(max_draws)),
        0.0, summary.censored_fraction(), 1e-3));

    FitReport fit = compare_to_closed_form(summary, d, 2, 2);
    CheckRecord chi;
    chi.check_id = "pair_2_2_chi_square";
    chi.inputs = detail::fmt("cells=%.0f statistic=%.4g", static_cast<double>(fit.cells_used),
                             fit.chi_square);
    chi.expected = 1.0;  // threshold sits in `tolerance`: pass iff p_value > 0.01
    chi.actual = fit.p_value;
    chi.tolerance = 0.01;
    chi.pass = fit.p_value > 0.01;
    rep.checks.push_back(chi);

    const auto& terms = generate_density_terms(n, DistributionModel::Kind::continuous);
    const double z = 3.2905;  // two-sided 99.9% normal quantile
    for (const auto& term : terms) {
        const double prob = ordering_probability_z3(d, term, 1e-6);
        const auto it = summary.ordering_counts.find(term.interleaving.pattern);
        const double count = it == summary.ordering_counts.end()
                                 ? 0.0
                                 : static_cast<double>(it->second);
        const double freq = count / static_cast<double>(summary.completed);
        const double half_width =
            z * std::sqrt(prob * (1.0 - prob) / static_cast<double>(summary.completed)) +
            2e-6 * prob;
        rep.checks.push_back(detail::abs_check(
            "ordering_frequency_" + term.interleaving.label(),
            detail::fmt("count=%.0f completed=%.0f", count, static_cast<double>(summary.completed)),
            prob, freq, half_width));
    }
    return rep;
}

}  // namespace record_laws
