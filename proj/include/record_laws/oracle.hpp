#pragma once

#include "distribution.hpp"
#include "joint_point.hpp"
#include "parallel.hpp"
#include "record_engine.hpp"
#include "rng.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace record_laws {

// Truncated probability with its truncation bound: the exact value lies in
// [value_lower, value_lower + tail_bound].
struct OracleBound {
    double value_lower = 0.0;
    double tail_bound = 0.0;
    int horizon = 0;
};

// Probability that the record vector equals `point` with every record event
// inside the first `horizon` draws, by forward stepping over the states
// (a, b) = records held on each side.  The record values are pinned to the
// point's coordinates, so each draw either hits the next pending record
// exactly, lingers inside [current low, current high] (ties allowed), or
// kills the path.  Mass still alive at the horizon bounds the remainder of
// the infinite sum.  Deliberately shares nothing with the density modules.
inline OracleBound dp_probability_discrete(const DistributionModel& d,
                                           const JointPoint& point, int n,
                                           int horizon) {
    if (!d.is_discrete())
        throw std::invalid_argument("dp_probability_discrete: discrete model required");
    if (n < 2 || point.n != n || !point.well_formed())
        throw std::invalid_argument("dp_probability_discrete: malformed point");
    if (horizon < 2 * n - 1)
        throw std::invalid_argument("dp_probability_discrete: horizon below 2n-1");
    if (!(d.mass_or_density(point.x) > 0.0))
        throw std::invalid_argument(
            "dp_probability_discrete: first observation off the support");

    // A pinned record value carrying no mass can never be drawn, so the
    // whole event is impossible: an exact zero, not a truncation bound.
    for (double v : point.lower)
        if (!(d.mass_or_density(v) > 0.0)) return {0.0, 0.0, horizon};
    for (double v : point.upper)
        if (!(d.mass_or_density(v) > 0.0)) return {0.0, 0.0, horizon};

    auto low_value = [&](int a) {
        return a == 1 ? point.x : point.lower[size_t(a - 2)];
    };
    auto high_value = [&](int b) {
        return b == 1 ? point.x : point.upper[size_t(b - 2)];
    };

    const size_t side = size_t(n) + 1;
    std::vector<double> live(side * side, 0.0);
    std::vector<double> next(side * side, 0.0);
    auto at = [side](std::vector<double>& v, int a, int b) -> double& {
        return v[size_t(a) * side + size_t(b)];
    };

    double absorbed = 0.0;
    at(live, 1, 1) = d.mass_or_density(point.x);

    for (int step = 2; step <= horizon; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                const double mass = at(live, a, b);
                if (!(mass > 0.0)) continue;
                if (a < n) {
                    const double v = point.lower[size_t(a - 1)];
                    if (v < low_value(a)) {
                        const double moved = mass * d.mass_or_density(v);
                        if (a + 1 == n && b == n)
                            absorbed += moved;
                        else
                            at(next, a + 1, b) += moved;
                    }
                }
                if (b < n) {
                    const double v = point.upper[size_t(b - 1)];
                    if (v > high_value(b)) {
                        const double moved = mass * d.mass_or_density(v);
                        if (b + 1 == n && a == n)
                            absorbed += moved;
                        else
                            at(next, a, b + 1) += moved;
                    }
                }
                const double hi = b < n ? d.cdf(high_value(b)) : 1.0;
                const double lo = a < n ? d.strict_cdf(low_value(a)) : 0.0;
                const double stay = hi - lo;
                if (stay > 0.0) at(next, a, b) += mass * stay;
            }
        live.swap(next);
    }

    double tail = 0.0;
    for (double m : live) tail += m;
    return OracleBound{absorbed, tail, horizon};
}

struct BoxEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    double censored_fraction = 0.0;
};

// Monte-Carlo estimate of the continuous density averaged over an
// axis-aligned box around `center`: simulate full record traces, count those
// whose record vector lands inside the box, divide by runs times box volume.
// Censored runs (records incomplete at max_draws) leave the numerator but
// stay in the denominator; the induced bias is below censored_fraction.
inline BoxEstimate mc_box_probability(const DistributionModel& d,
                                      const JointPoint& center,
                                      double half_width, std::uint64_t runs,
                                      std::uint64_t seed,
                                      std::uint64_t max_draws,
                                      int workers = 0) {
    if (d.is_discrete())
        throw std::invalid_argument("mc_box_probability: continuous model required");
    if (!center.ordered())
        throw std::invalid_argument("mc_box_probability: center must be strictly ordered");
    if (!(half_width > 0.0))
        throw std::invalid_argument("mc_box_probability: half width must be positive");
    if (runs == 0) throw std::invalid_argument("mc_box_probability: runs must be positive");
    const int n = center.n;
    if (max_draws < std::uint64_t(2 * n - 1))
        throw std::invalid_argument("mc_box_probability: max_draws below 2n-1");
    const std::vector<double> target = center.ascending();
    for (double v : target)
        if (v - half_width <= d.support_lower() ||
            v + half_width >= d.support_upper())
            throw std::invalid_argument(
                "mc_box_probability: box crosses the support boundary");

    const int w = effective_workers(workers);
    std::vector<std::uint64_t> hits(size_t(w), 0);
    std::vector<std::uint64_t> censored(size_t(w), 0);
    run_sharded(runs, w, [&](size_t shard, std::uint64_t begin, std::uint64_t end) {
        std::uint64_t local_hits = 0, local_censored = 0;
        std::vector<double> rec(size_t(2 * n - 1));
        for (std::uint64_t run = begin; run < end; ++run) {
            RandomStream stream(seed, run, 1);
            RecordTracker tracker(n);
            for (std::uint64_t t = 0; t < max_draws && !tracker.complete(); ++t)
                tracker.feed(d.quantile(stream.next()));
            if (!tracker.complete()) {
                ++local_censored;
                continue;
            }
            const RecordTrace& trace = tracker.trace();
            size_t k = 0;
            for (size_t i = trace.lower_values.size(); i-- > 0;)
                rec[k++] = trace.lower_values[i];
            for (size_t i = 1; i < trace.upper_values.size(); ++i)
                rec[k++] = trace.upper_values[i];
            bool inside = true;
            for (size_t i = 0; i < rec.size(); ++i)
                if (std::fabs(rec[i] - target[i]) > half_width) {
                    inside = false;
                    break;
                }
            if (inside) ++local_hits;
        }
        hits[shard] = local_hits;
        censored[shard] = local_censored;
    });

    std::uint64_t hit_total = 0, censored_total = 0;
    for (int s = 0; s < w; ++s) {
        hit_total += hits[size_t(s)];
        censored_total += censored[size_t(s)];
    }
    const double volume = std::pow(2.0 * half_width, double(2 * n - 1));
    const double p_hat = double(hit_total) / double(runs);
    BoxEstimate out;
    out.estimate = p_hat / volume;
    out.std_error = std::sqrt(p_hat * (1.0 - p_hat) / double(runs)) / volume;
    out.censored_fraction = double(censored_total) / double(runs);
    return out;
}

} // namespace record_laws
