// Univariate distribution models: everything the record-law formulas consume.
//
// A DistributionModel exposes f (density or mass), F, the strict CDF
// F*(y) = P(Y < y), the survival P(Y > y), the hazard, a generalized-inverse
// quantile and the support endpoints.  Models are immutable and cheap to
// copy.  Survival is a first-class operation rather than 1 - F because the
// formulas divide by it: tabulated models sum the upper-tail masses and the
// continuous families use their closed complement forms, which keeps those
// denominators exact instead of carrying the rounding of the complement.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace record_laws {

class DistributionModel {
public:
    enum class Kind { continuous, discrete };

    Kind kind() const { return impl_->kind; }
    bool is_discrete() const { return impl_->kind == Kind::discrete; }
    const std::string& name() const { return impl_->name; }
    const std::vector<double>& parameters() const { return impl_->parameters; }
    // Model descriptor string used verbatim in CLI arguments and reports.
    const std::string& descriptor() const { return impl_->descriptor; }

    double support_lower() const { return impl_->lep; }
    double support_upper() const { return impl_->uep; }

    double cdf(double y) const { return impl_->cdf(y); }
    double strict_cdf(double y) const { return impl_->strict_cdf(y); }
    double survival(double y) const { return impl_->survival(y); }
    double mass_or_density(double y) const { return impl_->pdf(y); }

    double hazard(double y) const {
        const double s = survival(y);
        if (!(s > 0.0))
            throw std::domain_error("hazard undefined where F(y) = 1");
        return mass_or_density(y) / s;
    }

    double quantile(double p) const {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("quantile: p outside [0,1]");
        return impl_->quantile(p);
    }

    // Discrete support access (empty for continuous models).
    const std::vector<double>& support() const { return impl_->support; }
    const std::vector<double>& masses() const { return impl_->masses; }

    static DistributionModel uniform(double a, double b);
    static DistributionModel exponential(double lambda);
    static DistributionModel pareto(double alpha, double xm);
    static DistributionModel finite_uniform(int m);
    static DistributionModel tabulated(std::vector<double> values,
                                       std::vector<double> masses,
                                       std::string descriptor = "table:<memory>");
    // Law of -Y: swaps the roles of lower and upper records.
    static DistributionModel reflected(const DistributionModel& d);

private:
    struct Impl {
        virtual ~Impl() = default;
        virtual double cdf(double y) const = 0;
        virtual double strict_cdf(double y) const = 0;
        virtual double survival(double y) const { return 1.0 - cdf(y); }
        virtual double pdf(double y) const = 0;
        virtual double quantile(double p) const = 0;
        Kind kind = Kind::continuous;
        std::string name;
        std::string descriptor;
        std::vector<double> parameters;
        double lep = -std::numeric_limits<double>::infinity();
        double uep = std::numeric_limits<double>::infinity();
        std::vector<double> support, masses; // discrete only
    };

    struct UniformImpl;
    struct ExponentialImpl;
    struct ParetoImpl;
    struct DiscreteImpl;
    struct ReflectedImpl;

    explicit DistributionModel(std::shared_ptr<const Impl> impl)
        : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

struct DistributionModel::UniformImpl : DistributionModel::Impl {
    double a, b;
    UniformImpl(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
        name = "uniform";
        parameters = {a, b};
        lep = a;
        uep = b;
        char buf[64];
        std::snprintf(buf, sizeof buf, "uniform:%g,%g", a, b);
        descriptor = buf;
    }
    double cdf(double y) const override {
        if (y <= a) return 0.0;
        if (y >= b) return 1.0;
        return (y - a) / (b - a);
    }
    double strict_cdf(double y) const override { return cdf(y); }
    double survival(double y) const override {
        if (y <= a) return 1.0;
        if (y >= b) return 0.0;
        return (b - y) / (b - a);
    }
    double pdf(double y) const override {
        return (y >= a && y <= b) ? 1.0 / (b - a) : 0.0;
    }
    double quantile(double p) const override { return a + p * (b - a); }
};

struct DistributionModel::ExponentialImpl : DistributionModel::Impl {
    double lambda;
    explicit ExponentialImpl(double l) : lambda(l) {
        if (!(lambda > 0)) throw std::invalid_argument("exponential: need lambda > 0");
        name = "exponential";
        parameters = {lambda};
        lep = 0.0;
        char buf[64];
        std::snprintf(buf, sizeof buf, "exp:%g", lambda);
        descriptor = buf;
    }
    double cdf(double y) const override {
        return y <= 0.0 ? 0.0 : -std::expm1(-lambda * y);
    }
    double strict_cdf(double y) const override { return cdf(y); }
    double survival(double y) const override {
        return y <= 0.0 ? 1.0 : std::exp(-lambda * y);
    }
    double pdf(double y) const override {
        return y < 0.0 ? 0.0 : lambda * std::exp(-lambda * y);
    }
    double quantile(double p) const override {
        if (p >= 1.0) return std::numeric_limits<double>::infinity();
        return -std::log1p(-p) / lambda;
    }
};

struct DistributionModel::ParetoImpl : DistributionModel::Impl {
    double alpha, xm;
    ParetoImpl(double alpha_, double xm_) : alpha(alpha_), xm(xm_) {
        if (!(alpha > 0) || !(xm > 0))
            throw std::invalid_argument("pareto: need alpha > 0 and xm > 0");
        name = "pareto";
        parameters = {alpha, xm};
        lep = xm;
        char buf[64];
        std::snprintf(buf, sizeof buf, "pareto:%g,%g", alpha, xm);
        descriptor = buf;
    }
    double cdf(double y) const override {
        return y <= xm ? 0.0 : 1.0 - std::pow(xm / y, alpha);
    }
    double strict_cdf(double y) const override { return cdf(y); }
    double survival(double y) const override {
        return y <= xm ? 1.0 : std::pow(xm / y, alpha);
    }
    double pdf(double y) const override {
        return y < xm ? 0.0 : alpha * std::pow(xm, alpha) / std::pow(y, alpha + 1.0);
    }
    double quantile(double p) const override {
        if (p >= 1.0) return std::numeric_limits<double>::infinity();
        return xm * std::pow(1.0 - p, -1.0 / alpha);
    }
};

struct DistributionModel::DiscreteImpl : DistributionModel::Impl {
    std::vector<double> cumulative; // F at each support point
    std::vector<double> upper_tail; // P(Y > support point), summed from above
    DiscreteImpl(std::vector<double> values, std::vector<double> m,
                 std::string desc) {
        kind = Kind::discrete;
        name = "discrete";
        descriptor = std::move(desc);
        if (values.size() != m.size() || values.empty())
            throw std::invalid_argument("tabulated pmf: empty or mismatched columns");
        for (size_t i = 0; i + 1 < values.size(); ++i)
            if (!(values[i] < values[i + 1]))
                throw std::invalid_argument("tabulated pmf: support values must be strictly increasing");
        double total = 0.0;
        for (double mi : m) {
            if (!(mi > 0.0))
                throw std::invalid_argument("tabulated pmf: non-positive mass");
            total += mi;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("tabulated pmf: masses sum to " +
                                        std::to_string(total) + ", outside 1 +/- 1e-9");
        for (double& mi : m) mi /= total;
        support = std::move(values);
        masses = std::move(m);
        cumulative.resize(masses.size());
        double c = 0.0;
        for (size_t i = 0; i < masses.size(); ++i) {
            c += masses[i];
            cumulative[i] = c;
        }
        cumulative.back() = 1.0;
        upper_tail.resize(masses.size());
        double t = 0.0;
        for (size_t i = masses.size(); i-- > 0;) {
            upper_tail[i] = t;
            t += masses[i];
        }
        lep = support.front();
        uep = support.back();
    }
    double cdf(double y) const override {
        auto it = std::upper_bound(support.begin(), support.end(), y);
        if (it == support.begin()) return 0.0;
        return cumulative[size_t(it - support.begin()) - 1];
    }
    double strict_cdf(double y) const override {
        auto it = std::lower_bound(support.begin(), support.end(), y);
        if (it == support.begin()) return 0.0;
        return cumulative[size_t(it - support.begin()) - 1];
    }
    double survival(double y) const override {
        auto it = std::upper_bound(support.begin(), support.end(), y);
        if (it == support.begin()) return 1.0;
        return upper_tail[size_t(it - support.begin()) - 1];
    }
    double pdf(double y) const override {
        auto it = std::lower_bound(support.begin(), support.end(), y);
        if (it != support.end() && *it == y)
            return masses[size_t(it - support.begin())];
        return 0.0;
    }
    double quantile(double p) const override {
        // inf{y : F(y) >= p}
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), p);
        if (it == cumulative.end()) return support.back();
        return support[size_t(it - cumulative.begin())];
    }
};

struct DistributionModel::ReflectedImpl : DistributionModel::Impl {
    std::shared_ptr<const Impl> base;
    explicit ReflectedImpl(std::shared_ptr<const Impl> b) : base(std::move(b)) {
        kind = base->kind;
        name = base->name + "-reflected";
        descriptor = "reflect(" + base->descriptor + ")";
        parameters = base->parameters;
        lep = -base->uep;
        uep = -base->lep;
        if (kind == Kind::discrete) {
            support.assign(base->support.rbegin(), base->support.rend());
            for (double& v : support) v = -v;
            masses.assign(base->masses.rbegin(), base->masses.rend());
        }
    }
    // P(-Y <= t) = P(Y >= -t) = 1 - F*(-t)
    double cdf(double y) const override { return 1.0 - base->strict_cdf(-y); }
    double strict_cdf(double y) const override { return 1.0 - base->cdf(-y); }
    // P(-Y > t) = P(Y < -t)
    double survival(double y) const override { return base->strict_cdf(-y); }
    double pdf(double y) const override { return base->pdf(-y); }
    double quantile(double p) const override {
        if (kind == Kind::discrete) {
            // walk the reflected support directly
            double c = 0.0;
            for (size_t i = 0; i < support.size(); ++i) {
                c += masses[i];
                if (c >= p || i + 1 == support.size()) return support[i];
            }
            return support.back();
        }
        if (p <= 0.0) return lep;
        if (p >= 1.0) return uep;
        return -base->quantile(1.0 - p);
    }
};

inline DistributionModel DistributionModel::uniform(double a, double b) {
    return DistributionModel(std::make_shared<const UniformImpl>(a, b));
}
inline DistributionModel DistributionModel::exponential(double lambda) {
    return DistributionModel(std::make_shared<const ExponentialImpl>(lambda));
}
inline DistributionModel DistributionModel::pareto(double alpha, double xm) {
    return DistributionModel(std::make_shared<const ParetoImpl>(alpha, xm));
}
inline DistributionModel DistributionModel::finite_uniform(int m) {
    if (m < 1) throw std::invalid_argument("finite uniform: need m >= 1");
    std::vector<double> values(static_cast<size_t>(m));
    std::vector<double> masses(static_cast<size_t>(m), 1.0 / m);
    for (int i = 0; i < m; ++i) values[size_t(i)] = i + 1;
    return tabulated(std::move(values), std::move(masses),
                     "finite:" + std::to_string(m));
}
inline DistributionModel DistributionModel::tabulated(std::vector<double> values,
                                                      std::vector<double> masses,
                                                      std::string descriptor) {
    return DistributionModel(std::make_shared<const DiscreteImpl>(
        std::move(values), std::move(masses), std::move(descriptor)));
}
inline DistributionModel DistributionModel::reflected(const DistributionModel& d) {
    return DistributionModel(std::make_shared<const ReflectedImpl>(d.impl_));
}

// Tabulated pmf file: UTF-8 CSV, two columns `value,probability`, no header,
// '#'-prefixed comment lines ignored.
inline DistributionModel load_tabulated(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open pmf file: " + path);
    std::vector<double> values, masses;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected `value,probability`");
        try {
            size_t used = 0;
            const double v = std::stod(line.substr(0, comma), &used);
            const double m = std::stod(line.substr(comma + 1), &used);
            values.push_back(v);
            masses.push_back(m);
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": cannot parse numbers");
        }
    }
    if (values.empty())
        throw std::invalid_argument(path + ": no data rows");
    for (size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i] == values[i + 1])
            throw std::invalid_argument(path + ": duplicate support value " +
                                        std::to_string(values[i]));
    return DistributionModel::tabulated(std::move(values), std::move(masses),
                                        "table:" + path);
}

// Parse a CLI model descriptor: uniform:a,b | exp:lambda | pareto:alpha,xm |
// finite:m | table:path.
inline DistributionModel parse_model(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("model descriptor needs a ':' (e.g. exp:1)");
    const std::string family = descriptor.substr(0, colon);
    const std::string args = descriptor.substr(colon + 1);
    auto parse_reals = [&](size_t want) {
        std::vector<double> out;
        std::stringstream ss(args);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        if (out.size() != want)
            throw std::invalid_argument(family + ": expected " +
                                        std::to_string(want) + " parameter(s)");
        return out;
    };
    if (family == "uniform") {
        auto p = parse_reals(2);
        return DistributionModel::uniform(p[0], p[1]);
    }
    if (family == "exp") {
        auto p = parse_reals(1);
        return DistributionModel::exponential(p[0]);
    }
    if (family == "pareto") {
        auto p = parse_reals(2);
        return DistributionModel::pareto(p[0], p[1]);
    }
    if (family == "finite") {
        auto p = parse_reals(1);
        return DistributionModel::finite_uniform(int(p[0]));
    }
    if (family == "table") return load_tabulated(args);
    throw std::invalid_argument("unknown model family: " + family);
}

} // namespace record_laws
