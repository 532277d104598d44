#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace ricsim {

// Counter-based PRNG (Philox4x32-10). Draw sequences are reproducible
// bit-for-bit across platforms and independent across (seed, stream) pairs,
// so placement, fading, Monte-Carlo trials and randomization rounds can each
// own a stream without coordinating.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // uniform on [0,1) with 53-bit resolution
    double uniform();
    double uniform(double lo, double hi);

    // standard normal via Box-Muller (second value cached)
    double gaussian();

    // circularly-symmetric complex normal, unit total variance
    std::complex<double> cgaussian();

private:
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_;
    int block_pos_;
    bool has_cached_gaussian_;
    double cached_gaussian_;

    void generate_block();
    std::uint32_t next_u32();
};

// Mixes a stream id with a tag to derive a hierarchical substream id.
std::uint64_t substream(std::uint64_t stream, std::uint64_t tag);

// Stream tags used across the library.
namespace streams {
inline constexpr std::uint64_t placement = 0x01;
inline constexpr std::uint64_t tasks = 0x02;
inline constexpr std::uint64_t channel = 0x10;  // + link class offset
inline constexpr std::uint64_t outage_trial = 0x100;
inline constexpr std::uint64_t randomize = 0x200;
inline constexpr std::uint64_t scheme = 0x300;
}  // namespace streams

}  // namespace ricsim
