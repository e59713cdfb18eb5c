#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace record_laws {

// Interleaving of lower/upper record arrivals after the first observation.
// For n records of each kind there are n-1 'L' and n-1 'U' entries; the
// pattern stores them in arrival order.  For n = 3 the six patterns carry
// the conventional labels O1..O6.
struct Interleaving {
    int n = 2;
    std::string pattern; // (n-1) 'U's and (n-1) 'L's in arrival order

    std::string label() const {
        if (n == 3) {
            static const struct {
                const char* pat;
                const char* name;
            } table[] = {{"UULL", "O1"}, {"ULLU", "O2"}, {"ULUL", "O3"},
                         {"LULU", "O4"}, {"LUUL", "O5"}, {"LLUU", "O6"}};
            for (const auto& row : table)
                if (pattern == row.pat) return row.name;
        }
        return pattern.empty() ? std::string("-") : pattern;
    }

    bool operator==(const Interleaving& o) const {
        return n == o.n && pattern == o.pattern;
    }
};

// Record history of one observed sequence.  Times are 1-based positions in
// the sequence; the first observation opens both sides, so lower_times[0]
// and upper_times[0] are both 1 and lower_values[0] == upper_values[0].
struct RecordTrace {
    std::vector<double> lower_values;
    std::vector<double> upper_values;
    std::vector<std::size_t> lower_times;
    std::vector<std::size_t> upper_times;
    bool complete = false; // reached n records on both sides

    std::size_t lower_count() const { return lower_values.size(); }
    std::size_t upper_count() const { return upper_values.size(); }
};

// Incremental record tracker.  Feed observations one at a time; stops
// accepting new records once both sides hold `target` of them.  Ties and
// interior values advance time but change nothing else (records are strict).
class RecordTracker {
  public:
    explicit RecordTracker(int target) : target_(target) {
        if (target < 2) throw std::invalid_argument("record target must be >= 2");
    }

    // Returns 'L' / 'U' if the observation set a lower/upper record, 'B' for
    // the first observation (which sets both), 'N' otherwise.
    char feed(double value) {
        ++time_;
        if (trace_.complete) return 'N';
        if (time_ == 1) {
            trace_.lower_values.push_back(value);
            trace_.upper_values.push_back(value);
            trace_.lower_times.push_back(1);
            trace_.upper_times.push_back(1);
            return 'B';
        }
        if (value < trace_.lower_values.back() &&
            trace_.lower_count() < std::size_t(target_)) {
            trace_.lower_values.push_back(value);
            trace_.lower_times.push_back(time_);
            pattern_.push_back('L');
            check_complete();
            return 'L';
        }
        if (value > trace_.upper_values.back() &&
            trace_.upper_count() < std::size_t(target_)) {
            trace_.upper_values.push_back(value);
            trace_.upper_times.push_back(time_);
            pattern_.push_back('U');
            check_complete();
            return 'U';
        }
        return 'N';
    }

    bool complete() const { return trace_.complete; }
    std::size_t time() const { return time_; }
    const RecordTrace& trace() const { return trace_; }
    const std::string& pattern() const { return pattern_; }

    Interleaving interleaving() const {
        if (!trace_.complete)
            throw std::logic_error("interleaving of an incomplete trace");
        return Interleaving{target_, pattern_};
    }

  private:
    void check_complete() {
        trace_.complete = trace_.lower_count() == std::size_t(target_) &&
                          trace_.upper_count() == std::size_t(target_);
    }

    int target_;
    std::size_t time_ = 0;
    RecordTrace trace_;
    std::string pattern_;
};

// Scans a fixed sequence for the first n lower and n upper records.  Stops
// early once both sides are full; the trace reports complete = false if the
// sequence runs out first.
inline RecordTrace extract_records(const std::vector<double>& sequence, int n) {
    RecordTracker tracker(n);
    for (double v : sequence) {
        tracker.feed(v);
        if (tracker.complete()) break;
    }
    return tracker.trace();
}

// Arrival order of the 2(n-1) proper records in a complete trace.
inline Interleaving classify_ordering(const RecordTrace& trace) {
    if (!trace.complete)
        throw std::invalid_argument("classify_ordering needs a complete trace");
    const int n = int(trace.lower_count());
    std::string pattern;
    std::size_t li = 1, ui = 1; // skip the shared first observation
    while (li < trace.lower_times.size() || ui < trace.upper_times.size()) {
        const bool take_lower =
            ui >= trace.upper_times.size() ||
            (li < trace.lower_times.size() &&
             trace.lower_times[li] < trace.upper_times[ui]);
        if (take_lower) {
            pattern.push_back('L');
            ++li;
        } else {
            pattern.push_back('U');
            ++ui;
        }
    }
    return Interleaving{n, pattern};
}

// Gaps (counts of non-record observations) between consecutive record
// arrivals, in arrival order: 2n-2 entries for a complete trace.  While both
// sides are still open, only an exact tie with the first observation fails
// to set a record, so the leading gap counts ties; it is zero for
// continuous data.
inline std::vector<std::size_t> inter_record_gaps(const RecordTrace& trace) {
    std::vector<std::size_t> times;
    times.reserve(trace.lower_times.size() + trace.upper_times.size());
    std::size_t li = 0, ui = 0;
    while (li < trace.lower_times.size() || ui < trace.upper_times.size()) {
        std::size_t lt = li < trace.lower_times.size() ? trace.lower_times[li]
                                                       : std::size_t(-1);
        std::size_t ut = ui < trace.upper_times.size() ? trace.upper_times[ui]
                                                       : std::size_t(-1);
        if (lt < ut) {
            times.push_back(lt);
            ++li;
        } else if (ut < lt) {
            times.push_back(ut);
            ++ui;
        } else { // shared first observation
            times.push_back(lt);
            ++li;
            ++ui;
        }
    }
    std::vector<std::size_t> gaps;
    for (std::size_t i = 1; i < times.size(); ++i)
        gaps.push_back(times[i] - times[i - 1] - 1);
    return gaps;
}

} // namespace record_laws
