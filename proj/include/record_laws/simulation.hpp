#pragma once

#include "distribution.hpp"
#include "joint_point.hpp"
#include "marginals.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "record_engine.hpp"
#include "rng.hpp"
#include "special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace record_laws {

struct statistics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coarse quantile sketch over draw counts: power-of-two buckets, quantiles
// read back by linear interpolation inside the bucket.
struct DrawsSketch {
    std::array<std::uint64_t, 64> buckets{};
    std::uint64_t total = 0;

    void add(std::uint64_t draws) {
        size_t k = 0;
        while ((std::uint64_t(1) << (k + 1)) <= draws && k + 1 < buckets.size()) ++k;
        ++buckets[k];
        ++total;
    }
    void merge(const DrawsSketch& o) {
        for (size_t k = 0; k < buckets.size(); ++k) buckets[k] += o.buckets[k];
        total += o.total;
    }
    double quantile(double q) const {
        if (total == 0) return 0.0;
        const double target = q * double(total);
        double seen = 0.0;
        for (size_t k = 0; k < buckets.size(); ++k) {
            if (buckets[k] == 0) continue;
            const double next = seen + double(buckets[k]);
            if (next >= target) {
                const double lo = double(std::uint64_t(1) << k);
                const double frac = (target - seen) / double(buckets[k]);
                return lo * (1.0 + frac); // linear inside the dyadic bucket
            }
            seen = next;
        }
        return double(std::uint64_t(1) << (buckets.size() - 1));
    }
};

// Empirical batch summary.  Everything is integer-valued so merging shards
// gives identical results whatever the worker count.
struct EmpiricalSummary {
    int n = 2;
    int bins = 20;
    std::uint64_t runs = 0;
    std::uint64_t completed = 0;
    std::uint64_t censored = 0;
    std::map<std::string, std::uint64_t> ordering_counts; // key: tag sequence
    // histogram per record-rank pair (p, q), counts row-major with the
    // F(lower record) bin first
    std::map<std::pair<int, int>, std::vector<std::uint64_t>> pair_histograms;
    DrawsSketch draws_to_completion;

    double censored_fraction() const {
        return runs == 0 ? 0.0 : double(censored) / double(runs);
    }

    void merge(const EmpiricalSummary& o) {
        runs += o.runs;
        completed += o.completed;
        censored += o.censored;
        for (const auto& [key, count] : o.ordering_counts)
            ordering_counts[key] += count;
        for (const auto& [key, hist] : o.pair_histograms) {
            auto& mine = pair_histograms[key];
            if (mine.empty()) mine.assign(hist.size(), 0);
            for (size_t i = 0; i < hist.size(); ++i) mine[i] += hist[i];
        }
        draws_to_completion.merge(o.draws_to_completion);
    }
};

// One realized record trace: i.i.d. draws through the quantile until both
// chains hold n records or the draw budget runs out.
inline RecordTrace simulate_one(const DistributionModel& d, int n,
                                RandomStream& stream,
                                std::uint64_t max_draws) {
    if (max_draws < std::uint64_t(2 * n - 1))
        throw std::invalid_argument("simulate_one: max_draws below 2n-1");
    RecordTracker tracker(n);
    for (std::uint64_t t = 0; t < max_draws && !tracker.complete(); ++t)
        tracker.feed(d.quantile(stream.next()));
    return tracker.trace();
}

// Sharded batch simulation.  Histograms bin the probability-integral
// transform F(record value), so every model shares the same bin geometry and
// expected bin masses come from exact integrals.
inline EmpiricalSummary run_batch(const DistributionModel& d, int n,
                                  std::uint64_t runs, std::uint64_t seed,
                                  std::uint64_t max_draws, int bins = 20,
                                  int workers = 0) {
    if (runs == 0) throw std::invalid_argument("run_batch: runs must be positive");
    if (n < 2) throw std::invalid_argument("run_batch: records n must be >= 2");
    if (bins < 1) throw std::invalid_argument("run_batch: bins must be positive");
    if (max_draws < std::uint64_t(2 * n - 1))
        throw std::invalid_argument("run_batch: max_draws below 2n-1");

    const int w = effective_workers(workers);
    std::vector<EmpiricalSummary> partial(static_cast<size_t>(w));
    run_sharded(runs, w, [&](size_t shard, std::uint64_t begin, std::uint64_t end) {
        EmpiricalSummary s;
        s.n = n;
        s.bins = bins;
        for (int p = 2; p <= n; ++p)
            for (int q = 2; q <= n; ++q)
                s.pair_histograms[{p, q}].assign(size_t(bins) * size_t(bins), 0);
        auto bin_of = [&](double value) {
            int b = int(d.cdf(value) * bins);
            if (b < 0) b = 0;
            if (b >= bins) b = bins - 1;
            return size_t(b);
        };
        for (std::uint64_t run = begin; run < end; ++run) {
            RandomStream stream(seed, run, 2);
            RecordTracker tracker(n);
            std::uint64_t draws = 0;
            while (draws < max_draws && !tracker.complete()) {
                tracker.feed(d.quantile(stream.next()));
                ++draws;
            }
            ++s.runs;
            if (!tracker.complete()) {
                ++s.censored;
                continue;
            }
            ++s.completed;
            ++s.ordering_counts[tracker.pattern()];
            const RecordTrace& trace = tracker.trace();
            for (int p = 2; p <= n; ++p)
                for (int q = 2; q <= n; ++q) {
                    auto& hist = s.pair_histograms[{p, q}];
                    const size_t i = bin_of(trace.lower_values[size_t(p - 1)]);
                    const size_t j = bin_of(trace.upper_values[size_t(q - 1)]);
                    ++hist[i * size_t(bins) + j];
                }
            s.draws_to_completion.add(draws);
        }
        partial[shard] = std::move(s);
    });

    EmpiricalSummary out;
    out.n = n;
    out.bins = bins;
    for (int p = 2; p <= n; ++p)
        for (int q = 2; q <= n; ++q)
            out.pair_histograms[{p, q}].assign(size_t(bins) * size_t(bins), 0);
    for (const EmpiricalSummary& s : partial) out.merge(s);
    return out;
}

struct FitReport {
    int p = 2;
    int q = 2;
    int cells_used = 0;
    int dof = 0;
    double chi_square = 0.0;
    double p_value = 1.0;
    double sup_norm = 0.0;           // max |empirical - expected| cell mass
    double expected_mass_used = 0.0; // conditional mass covered by the tested cells
};

// Expected mass of each histogram cell under the closed-form pair law.
// Continuous cells integrate the pair density over the F-space square (the
// inner leg starts at max(u, cell edge), which carves the diagonal cells
// down to their admissible triangle); discrete cells sum the pmf over the
// atoms that map into them.
inline std::vector<double> expected_pair_masses(const DistributionModel& d,
                                                int p, int q, int bins) {
    std::vector<double> mass(size_t(bins) * size_t(bins), 0.0);
    if (d.is_discrete()) {
        const std::vector<double>& sup = d.support();
        for (double y : sup)
            for (double z : sup) {
                if (!(y < z)) continue;
                const double m = pair_density_discrete(d, p, q, y, z);
                if (m == 0.0) continue;
                int i = int(d.cdf(y) * bins);
                int j = int(d.cdf(z) * bins);
                if (i >= bins) i = bins - 1;
                if (j >= bins) j = bins - 1;
                mass[size_t(i) * size_t(bins) + size_t(j)] += m;
            }
        return mass;
    }
    const double width = 1.0 / bins;
    for (int i = 0; i < bins; ++i)
        for (int j = i; j < bins; ++j) {
            const double u_lo = i * width, u_hi = (i + 1) * width;
            const double v_lo = j * width, v_hi = (j + 1) * width;
            auto outer = [&](double u) {
                const double y = d.quantile(u);
                const double fy = d.mass_or_density(y);
                if (!(fy > 0.0)) return 0.0;
                const double a = std::max(u, v_lo);
                if (!(a < v_hi)) return 0.0;
                auto inner = [&](double v) {
                    const double z = d.quantile(v);
                    const double fz = d.mass_or_density(z);
                    if (!(fz > 0.0)) return 0.0;
                    return pair_density_continuous(d, p, q, y, z) / (fy * fz);
                };
                const QuadratureResult r = integrate_1d(inner, a, v_hi, 1e-7, 1e-11);
                if (!r.converged)
                    throw numeric_error("expected cell mass did not converge",
                                        r.error_estimate);
                return r.value;
            };
            const QuadratureResult r = integrate_1d(outer, u_lo, u_hi, 1e-7, 1e-11);
            if (!r.converged)
                throw numeric_error("expected cell mass did not converge",
                                    r.error_estimate);
            mass[size_t(i) * size_t(bins) + size_t(j)] = r.value;
        }
    return mass;
}

// Chi-square goodness of fit of the batch histogram against the closed-form
// pair law, over the cells with expected count at least five.  The histogram
// only sees completed runs, so the law is conditioned on both records
// existing before comparing (a discrete model loses the runs that start on
// an extreme atom; for a continuous one the law total is already 1).
inline FitReport compare_to_closed_form(const EmpiricalSummary& summary,
                                        const DistributionModel& d, int p,
                                        int q) {
    if (summary.completed < 10000)
        throw statistics_error(
            "compare_to_closed_form: need at least 10^4 completed runs");
    const auto it = summary.pair_histograms.find({p, q});
    if (it == summary.pair_histograms.end())
        throw std::invalid_argument("compare_to_closed_form: no histogram for this pair");
    const std::vector<std::uint64_t>& hist = it->second;
    const int bins = summary.bins;
    const std::vector<double> mass = expected_pair_masses(d, p, q, bins);
    double law_total = 0.0;
    for (double m : mass) law_total += m;
    if (!(law_total > 0.0))
        throw statistics_error("compare_to_closed_form: law carries no mass");

    FitReport fit;
    fit.p = p;
    fit.q = q;
    const double completed = double(summary.completed);
    for (size_t c = 0; c < mass.size(); ++c) {
        const double frac = mass[c] / law_total;
        const double expected = frac * completed;
        const double observed = double(hist[c]);
        const double diff = std::fabs(observed / completed - frac);
        if (diff > fit.sup_norm) fit.sup_norm = diff;
        if (expected < 5.0) continue;
        ++fit.cells_used;
        fit.expected_mass_used += frac;
        fit.chi_square += (observed - expected) * (observed - expected) / expected;
    }
    if (fit.cells_used < 2)
        throw statistics_error("compare_to_closed_form: too few cells reach the expected-count floor");
    fit.dof = fit.cells_used - 1;
    fit.p_value = chi_square_survival(fit.chi_square, fit.dof);
    return fit;
}

// Trace export columns: run id, ordering tag, lower record values in arrival
// order, x, upper record values, then the upper and lower record times and
// the draw count.
inline std::string trace_csv_header(int n) {
    std::string head = "run_id,ordering";
    for (int k = 2; k <= n; ++k) head += ",y" + std::to_string(k);
    head += ",x";
    for (int k = 2; k <= n; ++k) head += ",z" + std::to_string(k);
    for (int k = 2; k <= n; ++k) head += ",u" + std::to_string(k);
    for (int k = 2; k <= n; ++k) head += ",l" + std::to_string(k);
    head += ",draws";
    return head;
}

// Replays the same per-run streams as run_batch (identical seed and domain)
// and writes one row per completed run, so exported traces line up with the
// batch summary.  Sequential on purpose: row order is part of the format.
inline void write_traces(std::ostream& out, const DistributionModel& d, int n,
                         std::uint64_t runs, std::uint64_t seed,
                         std::uint64_t max_draws) {
    out << trace_csv_header(n) << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << ',' << buf;
    };
    for (std::uint64_t run = 0; run < runs; ++run) {
        RandomStream stream(seed, run, 2);
        RecordTrace trace = simulate_one(d, n, stream, max_draws);
        if (!trace.complete) continue;
        out << run << ',' << classify_ordering(trace).pattern;
        for (size_t k = 1; k < trace.lower_values.size(); ++k)
            put(trace.lower_values[k]);
        put(trace.lower_values[0]);
        for (size_t k = 1; k < trace.upper_values.size(); ++k)
            put(trace.upper_values[k]);
        for (size_t k = 1; k < trace.upper_times.size(); ++k)
            out << ',' << trace.upper_times[k];
        for (size_t k = 1; k < trace.lower_times.size(); ++k)
            out << ',' << trace.lower_times[k];
        out << ','
            << std::max(trace.lower_times.back(), trace.upper_times.back())
            << '\n';
    }
}

} // namespace record_laws
