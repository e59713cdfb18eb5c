#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "record_laws/distribution.hpp"
#include "record_laws/joint_density.hpp"
#include "record_laws/joint_point.hpp"
#include "record_laws/oracle.hpp"

using namespace record_laws;
using Catch::Approx;

TEST_CASE("dp bracket pins the two record mass") {
    auto u5 = DistributionModel::finite_uniform(5);
    JointPoint p = JointPoint::from_flat({3.0, 2.0, 5.0});
    const auto b = dp_probability_discrete(u5, p, 2, 200);
    CHECK(b.tail_bound <= 1e-12);
    CHECK(b.horizon == 200);
    const double closed = density_z2_discrete(u5, p);
    CHECK(closed >= b.value_lower - 1e-15);
    CHECK(closed <= b.value_lower + b.tail_bound + 1e-15);
}

TEST_CASE("gap-free horizon counts only the shortest histories") {
    // with exactly 2n-1 = 3 draws the records must arrive back to back:
    // two arrival orders, each with mass 0.2^3
    auto u5 = DistributionModel::finite_uniform(5);
    const auto b =
        dp_probability_discrete(u5, JointPoint::from_flat({3.0, 2.0, 5.0}), 2, 3);
    CHECK(b.value_lower == Approx(2.0 * 0.008).epsilon(1e-14));
    CHECK(b.tail_bound > 0.0);
}

TEST_CASE("the bracket tightens as the horizon grows") {
    auto u5 = DistributionModel::finite_uniform(5);
    JointPoint p = JointPoint::from_flat({3.0, 2.0, 5.0});
    double prev_lower = -1.0;
    double prev_width = 2.0;
    for (int horizon : {3, 10, 50, 200}) {
        const auto b = dp_probability_discrete(u5, p, 2, horizon);
        CHECK(b.value_lower >= prev_lower);
        CHECK(b.tail_bound <= prev_width);
        prev_lower = b.value_lower;
        prev_width = b.tail_bound;
    }
    CHECK(prev_lower == Approx(0.05).epsilon(1e-12));
}

TEST_CASE("impossible record values give an exact zero") {
    auto u5 = DistributionModel::finite_uniform(5);
    // started at the support minimum: no lower record can ever follow
    const auto b =
        dp_probability_discrete(u5, JointPoint::from_flat({1.0, 0.5, 3.0}), 2, 50);
    CHECK(b.value_lower == 0.0);
    CHECK(b.tail_bound == 0.0);
    // an off-lattice later coordinate is the same impossibility
    const auto c =
        dp_probability_discrete(u5, JointPoint::from_flat({3.0, 2.5, 5.0}), 2, 50);
    CHECK(c.value_lower == 0.0);
    CHECK(c.tail_bound == 0.0);
}

TEST_CASE("dp argument errors") {
    auto u5 = DistributionModel::finite_uniform(5);
    auto u = DistributionModel::uniform(0.0, 1.0);
    JointPoint p = JointPoint::from_flat({3.0, 2.0, 5.0});
    CHECK_THROWS_AS(dp_probability_discrete(u, p, 2, 200), std::invalid_argument);
    CHECK_THROWS_AS(dp_probability_discrete(u5, p, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(
        dp_probability_discrete(u5, JointPoint::from_flat({2.5, 2.0, 5.0}), 2, 200),
        std::invalid_argument);
    JointPoint bad = p;
    bad.n = 3;
    CHECK_THROWS_AS(dp_probability_discrete(u5, bad, 3, 200), std::invalid_argument);
}

TEST_CASE("three record mass sits inside the horizon-400 bracket") {
    auto u5 = DistributionModel::finite_uniform(5);
    JointPoint p;
    p.n = 3;
    p.x = 3.0;
    p.lower = {2.0, 1.0};
    p.upper = {4.0, 5.0};
    const auto b = dp_probability_discrete(u5, p, 3, 400);
    CHECK(b.tail_bound <= 1e-12);
    const double closed = density_z3_discrete(u5, p);
    CHECK(closed >= b.value_lower - 1e-14);
    CHECK(closed <= b.value_lower + b.tail_bound + 1e-14);
}

TEST_CASE("box estimate brackets the density at a smooth point") {
    auto u = DistributionModel::uniform(0.0, 1.0);
    JointPoint center = JointPoint::from_flat({0.5, 0.2, 0.9});
    const auto est = mc_box_probability(u, center, 0.02, 2000000, 99, 100000);
    CHECK(est.censored_fraction < 1e-3);
    // the density is exactly 4.0 at the center; allow 3 sigma plus a 5%
    // curvature margin for the finite box
    const double slack = 3.0 * est.std_error + 0.05 * 4.0;
    CHECK(std::abs(est.estimate - 4.0) <= slack);

    const auto finer = mc_box_probability(u, center, 0.01, 2000000, 99, 100000);
    const double joint_slack = 3.0 * (est.std_error + finer.std_error) + 0.05 * 4.0;
    CHECK(std::abs(est.estimate - finer.estimate) <= joint_slack);
}

TEST_CASE("box estimate argument errors") {
    auto u = DistributionModel::uniform(0.0, 1.0);
    auto u5 = DistributionModel::finite_uniform(5);
    JointPoint center = JointPoint::from_flat({0.5, 0.2, 0.9});
    CHECK_THROWS_AS(mc_box_probability(u5, center, 0.02, 100, 1, 1000),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_box_probability(u, center, -0.1, 100, 1, 1000),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_box_probability(u, center, 0.02, 0, 1, 1000),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_box_probability(u, center, 0.02, 100, 1, 2),
                    std::invalid_argument);
    // box leaking outside the support
    JointPoint edge = JointPoint::from_flat({0.5, 0.01, 0.9});
    CHECK_THROWS_AS(mc_box_probability(u, edge, 0.02, 100, 1, 1000),
                    std::invalid_argument);
}
