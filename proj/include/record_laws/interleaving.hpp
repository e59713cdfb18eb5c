#pragma once

#include "distribution.hpp"
#include "joint_point.hpp"
#include "record_engine.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace record_laws {

// Where the record chains stand while waiting for the next record event.
struct StayState {
    double current_low = 0.0;
    double current_high = 0.0;
    int lower_count = 1;
    int upper_count = 1;
};

// Interval an observation may land in without creating a premature record.
// A side opens up to infinity once that chain holds all n records.
struct StayInterval {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    bool closed = false; // discrete chains allow ties at the current extremes
};

inline StayInterval stay_region(const StayState& s, int n,
                                DistributionModel::Kind kind) {
    StayInterval r;
    if (s.lower_count < n) r.lower = s.current_low;
    if (s.upper_count < n) r.upper = s.current_high;
    r.closed = kind == DistributionModel::Kind::discrete;
    return r;
}

// One stay-region denominator of a density term, bounds named by record rank
// instead of value: rank 0 is x, rank k >= 1 is y_k on the lower side and
// z_k on the upper side; rank -1 marks a side whose bound has been dropped.
struct StayDescriptor {
    int lower_rank = 0;
    int upper_rank = 0;
    bool closed = false;
    int lower_count = 1; // records held on each side while this gap is open
    int upper_count = 1;

    std::string lower_symbol() const {
        if (lower_rank < 0) return "";
        return lower_rank == 0 ? "x" : "y" + std::to_string(lower_rank);
    }
    std::string upper_symbol() const {
        if (upper_rank < 0) return "";
        return upper_rank == 0 ? "x" : "z" + std::to_string(upper_rank);
    }
};

// One additive term of the joint density: the product over inter-record gaps
// of geometric-sum denominators 1 - P(stay region), tied to one interleaving.
struct DensityTerm {
    Interleaving interleaving;
    std::vector<StayDescriptor> denominators;
};

// All admissible arrival orders of the 2(n-1) proper records: every string
// with n-1 'L's and n-1 'U's.  Enumeration is lexicographic ('L' < 'U'),
// except n = 3 which is listed in the conventional O1..O6 label order so the
// six terms line up with the usual presentation of the three-record law.
inline std::vector<Interleaving> enumerate_interleavings(int n) {
    if (n < 2) throw std::invalid_argument("interleavings need n >= 2");
    std::string pat =
        std::string(size_t(n - 1), 'L') + std::string(size_t(n - 1), 'U');
    std::vector<Interleaving> out;
    do {
        out.push_back(Interleaving{n, pat});
    } while (std::next_permutation(pat.begin(), pat.end()));
    if (n == 3)
        std::sort(out.begin(), out.end(),
                  [](const Interleaving& a, const Interleaving& b) {
                      return a.label() < b.label();
                  });
    return out;
}

// Walks one interleaving's record events and emits the stay-region
// denominator for the gap before each event.  Between the first observation
// and the first proper record the only way to linger is to tie with x, so
// that gap exists only for discrete models (and contributes 1 - f(x)).
inline DensityTerm build_density_term(const Interleaving& il,
                                      DistributionModel::Kind kind) {
    const bool discrete = kind == DistributionModel::Kind::discrete;
    DensityTerm term{il, {}};
    int a = 1, b = 1;
    for (char ev : il.pattern) {
        if (a == 1 && b == 1) {
            if (discrete) {
                StayDescriptor g;
                g.lower_rank = 0;
                g.upper_rank = 0;
                g.closed = true;
                term.denominators.push_back(g);
            }
        } else {
            StayDescriptor g;
            g.lower_rank = a < il.n ? a - 1 : -1;
            g.upper_rank = b < il.n ? b - 1 : -1;
            g.closed = discrete;
            g.lower_count = a;
            g.upper_count = b;
            term.denominators.push_back(g);
        }
        if (ev == 'L')
            ++a;
        else
            ++b;
    }
    return term;
}

inline std::vector<DensityTerm> generate_density_terms(
    int n, DistributionModel::Kind kind) {
    std::vector<DensityTerm> terms;
    for (const Interleaving& il : enumerate_interleavings(n))
        terms.push_back(build_density_term(il, kind));
    return terms;
}

namespace detail {

inline const std::vector<DensityTerm>& cached_density_terms(
    int n, DistributionModel::Kind kind) {
    static std::mutex mu;
    static std::map<std::pair<int, int>,
                    std::unique_ptr<const std::vector<DensityTerm>>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, int(kind));
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto terms = std::make_unique<const std::vector<DensityTerm>>(
            generate_density_terms(n, kind));
        it = cache.emplace(key, std::move(terms)).first;
    }
    return *it->second;
}

inline double rank_value(const JointPoint& p, int rank, bool lower_side) {
    if (rank == 0) return p.x;
    return lower_side ? p.lower[size_t(rank - 1)] : p.upper[size_t(rank - 1)];
}

} // namespace detail

// 1 - P(stay region) with the descriptor's symbols bound to the point's
// coordinates.  Closed regions take the strict CDF below so the atom at the
// lower extreme stays inside.
inline double denominator_value(const StayDescriptor& g,
                                const DistributionModel& d,
                                const JointPoint& p) {
    const double hi =
        g.upper_rank < 0 ? 1.0 : d.cdf(detail::rank_value(p, g.upper_rank, false));
    double lo = 0.0;
    if (g.lower_rank >= 0) {
        const double v = detail::rank_value(p, g.lower_rank, true);
        lo = g.closed ? d.strict_cdf(v) : d.cdf(v);
    }
    return 1.0 - (hi - lo);
}

// Product of the term's inverse denominators (the additive part only, no
// density factors).  Throws when a stay region fills the whole support.
inline double term_inverse_denominators(const DensityTerm& term,
                                        const DistributionModel& d,
                                        const JointPoint& p) {
    double value = 1.0;
    for (const StayDescriptor& g : term.denominators) {
        const double den = denominator_value(g, d, p);
        if (!(den > 0.0))
            throw std::domain_error(
                "stay region carries full probability: zero geometric-sum denominator");
        value /= den;
    }
    return value;
}

// Joint density (or mass) of Z_n assembled mechanically from the stay-region
// terms.  Zero off the strictly ordered domain and off the support; n beyond
// 3 has no closed-form counterpart and is arbitrated by the oracle module.
inline double evaluate_general_density(const DistributionModel& d,
                                       const JointPoint& p, int n) {
    if (n < 2) throw std::invalid_argument("record count n must be >= 2");
    if (p.n != n || !p.well_formed())
        throw std::invalid_argument("point does not carry 2n-1 coordinates");
    if (!p.ordered()) return 0.0;
    double prod = d.mass_or_density(p.x);
    for (double v : p.lower) prod *= d.mass_or_density(v);
    for (double v : p.upper) prod *= d.mass_or_density(v);
    if (!(prod > 0.0)) return 0.0;
    double sum = 0.0;
    for (const DensityTerm& t : detail::cached_density_terms(n, d.kind()))
        sum += term_inverse_denominators(t, d, p);
    return prod * sum;
}

// Contribution of a single arrival order: the density factors times that
// term alone.  Integrating this over the whole ordered domain gives the
// probability of the ordering.
inline double ordering_term_density(const DistributionModel& d,
                                    const JointPoint& p,
                                    const DensityTerm& term) {
    double prod = d.mass_or_density(p.x);
    for (double v : p.lower) prod *= d.mass_or_density(v);
    for (double v : p.upper) prod *= d.mass_or_density(v);
    if (!(prod > 0.0)) return 0.0;
    return prod * term_inverse_denominators(term, d, p);
}

} // namespace record_laws
