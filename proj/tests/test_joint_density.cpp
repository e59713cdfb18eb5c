#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "record_laws/distribution.hpp"
#include "record_laws/joint_density.hpp"
#include "record_laws/joint_point.hpp"

using namespace record_laws;
using Catch::Approx;

TEST_CASE("joint points keep both chains ordered") {
    JointPoint p = JointPoint::from_flat({0.5, 0.2, 0.9});
    CHECK(p.n == 2);
    CHECK(p.x == 0.5);
    CHECK(p.ordered());
    CHECK(p.ascending() == std::vector<double>{0.2, 0.5, 0.9});
    CHECK(JointPoint::from_ascending(2, {0.2, 0.5, 0.9}).flat() ==
          std::vector<double>{0.5, 0.2, 0.9});
    CHECK_FALSE(JointPoint::from_flat({0.5, 0.6, 0.9}).ordered());
    CHECK_THROWS_AS(JointPoint::from_flat({1.0, 2.0}), std::invalid_argument);

    JointPoint r = JointPoint::from_flat({0.5, 0.2, 0.9}).reflected();
    CHECK(r.x == -0.5);
    CHECK(r.lower == std::vector<double>{-0.9});
    CHECK(r.upper == std::vector<double>{-0.2});
}

TEST_CASE("two record density, continuous") {
    auto u = DistributionModel::uniform(0.0, 1.0);
    CHECK(density_z2_continuous(u, JointPoint::from_flat({0.5, 0.2, 0.9})) ==
          Approx(4.0));
    // unordered or off support: zero
    CHECK(density_z2_continuous(u, JointPoint::from_flat({0.5, 0.6, 0.9})) == 0.0);
    CHECK(density_z2_continuous(u, JointPoint::from_flat({0.5, -0.2, 0.9})) == 0.0);

    auto e = DistributionModel::exponential(1.0);
    const double x = std::log(2.0);
    // F(x) = 1/2, so the bracket is 4 and the value is 2 e^{-2.1}
    CHECK(density_z2_continuous(e, JointPoint::from_flat({x, 0.1, 2.0})) ==
          Approx(2.0 * std::exp(-2.1)).epsilon(1e-12));
}

TEST_CASE("two record mass, discrete") {
    auto u5 = DistributionModel::finite_uniform(5);
    CHECK(density_z2_discrete(u5, JointPoint::from_flat({3.0, 2.0, 5.0})) ==
          Approx(0.05).epsilon(1e-14));
    CHECK(density_z2_discrete(u5, JointPoint::from_flat({1.0, 0.0, 2.0})) == 0.0);
    CHECK(density_z2_discrete(u5, JointPoint::from_flat({3.0, 3.5, 5.0})) == 0.0);

    // total over ordered triples leaves out the endpoint-started histories
    double total = 0.0;
    for (int y = 1; y <= 5; ++y)
        for (int x2 = y + 1; x2 <= 5; ++x2)
            for (int z = x2 + 1; z <= 5; ++z)
                total += density_z2_discrete(
                    u5, JointPoint::from_flat({double(x2), double(y), double(z)}));
    CHECK(total == Approx(0.6).epsilon(1e-13));
}

TEST_CASE("three record geometric sum terms, continuous") {
    auto u = DistributionModel::uniform(0.0, 1.0);
    const auto terms = l_terms(u, 0.5, 0.3, 0.7);
    // first ordering: 1 / ((1-[F(z1)-F(x)]) F(x) F(y1)) = 1/(0.8*0.5*0.3)
    CHECK(terms[0] == Approx(25.0 / 3.0).epsilon(1e-12));
    CHECK(terms[5] == Approx(1.0 / (0.8 * 0.5 * 0.3)).epsilon(1e-12));
    for (double t : terms) CHECK(t > 0.0);

    JointPoint p;
    p.n = 3;
    p.x = 0.5;
    p.lower = {0.3, 0.1};
    p.upper = {0.7, 0.9};
    double sum = 0.0;
    for (double t : l_terms(u, 0.5, 0.3, 0.7)) sum += t;
    CHECK(density_z3_continuous(u, p) == Approx(sum).epsilon(1e-14));

    p.lower = {0.3, 0.31}; // not strictly decreasing
    CHECK(density_z3_continuous(u, p) == 0.0);
}

TEST_CASE("three record mass, discrete") {
    auto u5 = DistributionModel::finite_uniform(5);
    JointPoint p;
    p.n = 3;
    p.x = 3.0;
    p.lower = {2.0, 1.0};
    p.upper = {4.0, 5.0};
    const double f5 = std::pow(0.2, 5);
    // worked by hand from the stay regions: at this point every one of the
    // six summands has denominator 0.6 * 0.4 * 0.2
    const double expected = f5 / 0.8 * 6.0 / (0.6 * 0.4 * 0.2);
    CHECK(density_z3_discrete(u5, p) == Approx(expected).epsilon(1e-12));
    CHECK(expected == Approx(0.05));

    p.x = 2.5;
    CHECK(density_z3_discrete(u5, p) == 0.0);
}

TEST_CASE("closed form dispatch") {
    auto u = DistributionModel::uniform(0.0, 1.0);
    auto u5 = DistributionModel::finite_uniform(5);
    CHECK(density_closed_form(u, JointPoint::from_flat({0.5, 0.2, 0.9})) ==
          Approx(4.0));
    CHECK(density_closed_form(u5, JointPoint::from_flat({3.0, 2.0, 5.0})) ==
          Approx(0.05));

    JointPoint p4;
    p4.n = 4;
    p4.x = 0.5;
    p4.lower = {0.4, 0.3, 0.2};
    p4.upper = {0.6, 0.7, 0.8};
    CHECK_THROWS_WITH(density_closed_form(u, p4),
                      Catch::Matchers::ContainsSubstring("n <= 3"));
}

TEST_CASE("reflection duality of the closed forms") {
    auto e = DistributionModel::exponential(1.0);
    auto m = DistributionModel::reflected(e);
    JointPoint p = JointPoint::from_flat({1.0, 0.4, 2.5});
    CHECK(density_z2_continuous(e, p) ==
          Approx(density_z2_continuous(m, p.reflected())).epsilon(1e-12));

    JointPoint q;
    q.n = 3;
    q.x = 1.0;
    q.lower = {0.6, 0.2};
    q.upper = {1.7, 2.9};
    CHECK(density_z3_continuous(e, q) ==
          Approx(density_z3_continuous(m, q.reflected())).epsilon(1e-12));

    auto u5 = DistributionModel::finite_uniform(5);
    auto r5 = DistributionModel::reflected(u5);
    JointPoint s;
    s.n = 3;
    s.x = 3.0;
    s.lower = {2.0, 1.0};
    s.upper = {4.0, 5.0};
    CHECK(density_z3_discrete(u5, s) ==
          Approx(density_z3_discrete(r5, s.reflected())).epsilon(1e-12));
}
