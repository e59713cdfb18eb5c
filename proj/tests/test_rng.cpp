#include <catch2/catch_amalgamated.hpp>

#include "record_laws/rng.hpp"

using namespace record_laws;

TEST_CASE("philox known answer vectors") {
    // Reference streams for philox4x32-10 from the published test vectors.
    auto out = philox::block({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    out = philox::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    out = philox::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("random streams are reproducible and separated") {
    RandomStream a(1234, 7, 2);
    RandomStream b(1234, 7, 2);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
    CHECK(a.position() == 100);

    SECTION("different run index gives a different stream") {
        RandomStream c(1234, 8, 2);
        int same = 0;
        RandomStream a2(1234, 7, 2);
        for (int i = 0; i < 64; ++i) same += a2.next() == c.next();
        CHECK(same == 0);
    }
    SECTION("different domain gives a different stream") {
        RandomStream c(1234, 7, 3);
        int same = 0;
        RandomStream a2(1234, 7, 2);
        for (int i = 0; i < 64; ++i) same += a2.next() == c.next();
        CHECK(same == 0);
    }
    SECTION("different seed gives a different stream") {
        RandomStream c(99, 7, 2);
        int same = 0;
        RandomStream a2(1234, 7, 2);
        for (int i = 0; i < 64; ++i) same += a2.next() == c.next();
        CHECK(same == 0);
    }
}

TEST_CASE("stream values live in the unit interval and look uniform") {
    RandomStream s(2024, 0, 1);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double u = s.next();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // 3.3 sigma of the mean of `draws` uniforms
    CHECK(std::abs(sum / draws - 0.5) < 3.3 / std::sqrt(12.0 * draws));
}
