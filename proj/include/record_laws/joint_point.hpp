#pragma once

#include <stdexcept>
#include <vector>

namespace record_laws {

// Coordinates of Z_n: the first observation plus the second through n-th
// lower and upper record values.  lower[k] holds the (k+2)-th lower record,
// so the vector is strictly decreasing; upper[k] is the (k+2)-th upper
// record, strictly increasing.  Symbolic output names these x, y1..y_{n-1}
// and z1..z_{n-1} in arrival order on each side.
struct JointPoint {
    int n = 2;
    double x = 0.0;
    std::vector<double> lower;
    std::vector<double> upper;

    // flat layout: x, the lower records in arrival order, then the upper
    // records in arrival order (the CLI's --point format)
    static JointPoint from_flat(const std::vector<double>& v) {
        if (v.size() < 3 || v.size() % 2 == 0)
            throw std::invalid_argument("a record point needs 2n-1 coordinates with n >= 2");
        JointPoint p;
        p.n = int((v.size() + 1) / 2);
        p.x = v[0];
        p.lower.assign(v.begin() + 1, v.begin() + p.n);
        p.upper.assign(v.begin() + p.n, v.end());
        return p;
    }

    // coordinates sorted ascending: y_{n-1}, .., y_1, x, z_1, .., z_{n-1}
    static JointPoint from_ascending(int n, const std::vector<double>& c) {
        if (n < 2 || c.size() != size_t(2 * n - 1))
            throw std::invalid_argument("ascending coordinate count must be 2n-1");
        JointPoint p;
        p.n = n;
        p.x = c[size_t(n - 1)];
        for (int i = n - 2; i >= 0; --i) p.lower.push_back(c[size_t(i)]);
        p.upper.assign(c.begin() + n, c.end());
        return p;
    }

    std::vector<double> ascending() const {
        std::vector<double> c(lower.rbegin(), lower.rend());
        c.push_back(x);
        c.insert(c.end(), upper.begin(), upper.end());
        return c;
    }

    std::vector<double> flat() const {
        std::vector<double> v{x};
        v.insert(v.end(), lower.begin(), lower.end());
        v.insert(v.end(), upper.begin(), upper.end());
        return v;
    }

    bool well_formed() const {
        return n >= 2 && lower.size() == size_t(n - 1) && upper.size() == size_t(n - 1);
    }

    bool ordered() const {
        if (!well_formed()) return false;
        double prev = x;
        for (double v : lower) {
            if (!(v < prev)) return false;
            prev = v;
        }
        prev = x;
        for (double v : upper) {
            if (!(v > prev)) return false;
            prev = v;
        }
        return true;
    }

    // the mirror image: negate and swap the two record sequences
    JointPoint reflected() const {
        JointPoint p;
        p.n = n;
        p.x = -x;
        p.lower.reserve(upper.size());
        for (double v : upper) p.lower.push_back(-v);
        p.upper.reserve(lower.size());
        for (double v : lower) p.upper.push_back(-v);
        return p;
    }
};

} // namespace record_laws
