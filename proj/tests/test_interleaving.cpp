#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "record_laws/distribution.hpp"
#include "record_laws/interleaving.hpp"
#include "record_laws/joint_point.hpp"

using namespace record_laws;
using Catch::Approx;

namespace {
const auto kd = DistributionModel::Kind::discrete;
const auto kc = DistributionModel::Kind::continuous;
}

TEST_CASE("interleaving counts are central binomial coefficients") {
    CHECK_THROWS_AS(enumerate_interleavings(1), std::invalid_argument);
    const std::size_t expected[] = {2, 6, 20, 70, 252, 924};
    for (int n = 2; n <= 7; ++n)
        CHECK(enumerate_interleavings(n).size() == expected[n - 2]);
}

TEST_CASE("three record orderings carry their conventional labels") {
    const auto ils = enumerate_interleavings(3);
    REQUIRE(ils.size() == 6);
    const char* patterns[] = {"UULL", "ULLU", "ULUL", "LULU", "LUUL", "LLUU"};
    for (int i = 0; i < 6; ++i) {
        CHECK(ils[std::size_t(i)].pattern == patterns[i]);
        CHECK(ils[std::size_t(i)].label() == "O" + std::to_string(i + 1));
    }
}

TEST_CASE("stay region follows the current extremes until a side completes") {
    StayState s{2.0, 7.0, 1, 1};
    auto r = stay_region(s, 3, kc);
    CHECK(r.lower == 2.0);
    CHECK(r.upper == 7.0);
    CHECK_FALSE(r.closed);

    s.upper_count = 3; // upper chain full, region opens upward
    r = stay_region(s, 3, kd);
    CHECK(r.lower == 2.0);
    CHECK(r.upper == std::numeric_limits<double>::infinity());
    CHECK(r.closed);
}

TEST_CASE("term structure for two records") {
    const auto cont = generate_density_terms(2, kc);
    REQUIRE(cont.size() == 2);
    // lexicographic: LU then UL
    REQUIRE(cont[0].interleaving.pattern == "LU");
    REQUIRE(cont[1].interleaving.pattern == "UL");
    REQUIRE(cont[0].denominators.size() == 1);
    // after the lower record the stay region is (-inf, x): denominator 1-F(x)
    CHECK(cont[0].denominators[0].lower_symbol().empty());
    CHECK(cont[0].denominators[0].upper_symbol() == "x");
    // after the upper record: (x, inf): denominator F(x)
    REQUIRE(cont[1].denominators.size() == 1);
    CHECK(cont[1].denominators[0].lower_symbol() == "x");
    CHECK(cont[1].denominators[0].upper_symbol().empty());

    const auto disc = generate_density_terms(2, kd);
    REQUIRE(disc[0].denominators.size() == 2);
    CHECK(disc[0].denominators[0].lower_symbol() == "x");
    CHECK(disc[0].denominators[0].upper_symbol() == "x");
    CHECK(disc[0].denominators[0].closed);
}

TEST_CASE("term denominators for the first three record ordering") {
    const auto terms = generate_density_terms(3, kc);
    const DensityTerm& o1 = terms[0]; // UULL
    REQUIRE(o1.denominators.size() == 3);
    CHECK(o1.denominators[0].lower_symbol() == "x");
    CHECK(o1.denominators[0].upper_symbol() == "z1");
    CHECK(o1.denominators[1].lower_symbol() == "x");
    CHECK(o1.denominators[1].upper_symbol().empty());
    CHECK(o1.denominators[2].lower_symbol() == "y1");
    CHECK(o1.denominators[2].upper_symbol().empty());

    const auto dterms = generate_density_terms(3, kd);
    const DensityTerm& o6 = dterms[5]; // LLUU
    REQUIRE(o6.denominators.size() == 4);
    CHECK(o6.denominators[0].closed); // tie gap at x
    CHECK(o6.denominators[1].lower_symbol() == "y1");
    CHECK(o6.denominators[1].upper_symbol() == "x");
    CHECK(o6.denominators[2].lower_symbol().empty());
    CHECK(o6.denominators[2].upper_symbol() == "x");
    CHECK(o6.denominators[3].lower_symbol().empty());
    CHECK(o6.denominators[3].upper_symbol() == "z1");
}

TEST_CASE("generated density at a discrete point") {
    auto d = DistributionModel::finite_uniform(5);
    JointPoint p = JointPoint::from_flat({3.0, 2.0, 5.0});
    CHECK(evaluate_general_density(d, p, 2) == Approx(0.05).epsilon(1e-12));
    // off the support: exact zero, not an error
    CHECK(evaluate_general_density(d, JointPoint::from_flat({1.0, 0.0, 2.0}), 2) == 0.0);
    // unordered point
    CHECK(evaluate_general_density(d, JointPoint::from_flat({3.0, 4.0, 5.0}), 2) == 0.0);
    CHECK_THROWS_AS(evaluate_general_density(d, p, 3), std::invalid_argument);
}

TEST_CASE("single term contribution matches a hand computation") {
    auto d = DistributionModel::finite_uniform(5);
    const auto terms = generate_density_terms(3, kd);
    REQUIRE(terms[0].interleaving.pattern == "UULL");
    JointPoint p;
    p.n = 3;
    p.x = 3.0;
    p.lower = {2.0, 1.0};
    p.upper = {4.0, 5.0};
    // denominators (1-f(3)) (1-[F(4)-F*(3)]) F*(3) F*(2) = .8 * .6 * .4 * .2
    const double f5 = 0.2 * 0.2 * 0.2 * 0.2 * 0.2;
    CHECK(ordering_term_density(d, p, terms[0]) ==
          Approx(f5 / (0.8 * 0.6 * 0.4 * 0.2)).epsilon(1e-12));
}

TEST_CASE("n of four evaluates against the stranding identity") {
    // Total mass of the four-record law on uniform {1..9}: the generated
    // density summed over every ordered 7-tuple must come out at 613/25920.
    auto d = DistributionModel::finite_uniform(9);
    double total = 0.0;
    for (int x = 4; x <= 6; ++x) {
        std::vector<int> below, above;
        for (int v = 1; v < x; ++v) below.push_back(v);
        for (int v = x + 1; v <= 9; ++v) above.push_back(v);
        for (std::size_t i = 0; i < below.size(); ++i)
            for (std::size_t j = i + 1; j < below.size(); ++j)
                for (std::size_t k = j + 1; k < below.size(); ++k)
                    for (std::size_t a = 0; a < above.size(); ++a)
                        for (std::size_t b = a + 1; b < above.size(); ++b)
                            for (std::size_t c = b + 1; c < above.size(); ++c) {
                                JointPoint p;
                                p.n = 4;
                                p.x = x;
                                p.lower = {double(below[k]), double(below[j]),
                                           double(below[i])};
                                p.upper = {double(above[a]), double(above[b]),
                                           double(above[c])};
                                total += evaluate_general_density(d, p, 4);
                            }
    }
    CHECK(total == Approx(613.0 / 25920.0).epsilon(1e-10));
}
