// Counter-based random number generation (Philox4x32-10).
//
// Every stream is addressed by (seed, run index, domain): the j-th draw of a
// stream is a pure function of those values, so shards can be assigned to
// worker threads in any order and still reproduce the exact same numbers.
// The generator matches the published Philox4x32-10 reference streams; see
// the known-answer tests.
#pragma once

#include <array>
#include <cstdint>

namespace record_laws {

namespace philox {

inline constexpr uint32_t MULT_A = 0xD2511F53u;
inline constexpr uint32_t MULT_B = 0xCD9E8D57u;
inline constexpr uint32_t WEYL_A = 0x9E3779B9u;
inline constexpr uint32_t WEYL_B = 0xBB67AE85u;

// One 4x32 block, 10 rounds.
inline std::array<uint32_t, 4> block(std::array<uint32_t, 4> x,
                                     std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += WEYL_A;
            key[1] += WEYL_B;
        }
        const uint64_t p0 = uint64_t(MULT_A) * x[0];
        const uint64_t p1 = uint64_t(MULT_B) * x[2];
        const uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
        const uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
        x = {hi1 ^ x[1] ^ key[0], lo1, hi0 ^ x[3] ^ key[1], lo0};
    }
    return x;
}

} // namespace philox

// Stream of doubles in [0, 1) for one (seed, run, domain) triple.  Each
// Philox block yields two doubles; blocks are indexed by draw position so
// the stream is stateless apart from the position counter.
class RandomStream {
public:
    RandomStream(uint64_t seed, uint64_t run, uint32_t domain = 0)
        : key_{uint32_t(seed), uint32_t(seed >> 32)},
          run_lo_(uint32_t(run)), run_hi_(uint32_t(run >> 32)),
          domain_(domain) {}

    double next() {
        const uint64_t draw = position_++;
        const uint32_t block_index = uint32_t(draw >> 1);
        if (block_index != cached_block_ || !have_block_) {
            cache_ = philox::block({block_index, run_lo_, run_hi_, domain_}, key_);
            cached_block_ = block_index;
            have_block_ = true;
        }
        const int half = int(draw & 1);
        const uint64_t bits =
            uint64_t(cache_[2 * half]) | (uint64_t(cache_[2 * half + 1]) << 32);
        return double(bits >> 11) * 0x1.0p-53;
    }

    uint64_t position() const { return position_; }

private:
    std::array<uint32_t, 2> key_;
    uint32_t run_lo_, run_hi_, domain_;
    uint64_t position_ = 0;
    std::array<uint32_t, 4> cache_{};
    uint32_t cached_block_ = 0;
    bool have_block_ = false;
};

} // namespace record_laws
