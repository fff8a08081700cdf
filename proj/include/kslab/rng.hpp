#pragma once

// Counter-based random streams (Philox4x32-10). Every draw is addressed by
// (seed, tag, index, slot), so sampling order never depends on scheduling.

#include <array>
#include <cmath>
#include <cstdint>

#include "kslab/vec2.hpp"

namespace kslab {

namespace philox {

constexpr uint32_t kMult0 = 0xD2511F53u;
constexpr uint32_t kMult1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                     std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const uint64_t p0 = uint64_t(kMult0) * ctr[0];
        const uint64_t p1 = uint64_t(kMult1) * ctr[2];
        const uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
        const uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

} // namespace philox

// Stream tags keep independent uses of the same seed disjoint.
enum class StreamTag : uint32_t {
    InitSample = 0, // initial-data sampling, index = sample index
    StepNoise = 1,  // Euler-Maruyama noise, index = step, slot = particle
    Property = 2,   // property/acceptance sweeps
};

class CounterRng {
  public:
    CounterRng(uint64_t seed, StreamTag tag) : seed_(seed), tag_(uint32_t(tag)) {}

    std::array<uint32_t, 4> raw(uint64_t index, uint32_t slot) const {
        const std::array<uint32_t, 4> ctr = {uint32_t(index), uint32_t(index >> 32),
                                             slot, tag_};
        const std::array<uint32_t, 2> key = {uint32_t(seed_), uint32_t(seed_ >> 32)};
        return philox::block(ctr, key);
    }

    // Two uniforms in (0,1), one Philox block.
    std::array<double, 2> uniform2(uint64_t index, uint32_t slot) const {
        const auto r = raw(index, slot);
        const uint64_t a = uint64_t(r[0]) | (uint64_t(r[1]) << 32);
        const uint64_t b = uint64_t(r[2]) | (uint64_t(r[3]) << 32);
        return {toUnit(a), toUnit(b)};
    }

    // Standard normal pair via Box-Muller, one Philox block.
    Vec2 normal2(uint64_t index, uint32_t slot) const {
        const auto u = uniform2(index, slot);
        const double r = std::sqrt(-2.0 * std::log(u[0]));
        const double th = 2.0 * kPi * u[1];
        return {r * std::cos(th), r * std::sin(th)};
    }

  private:
    static constexpr double kPi = 3.14159265358979323846;

    // 53-bit mantissa, offset by half an ulp so 0 is never produced.
    static double toUnit(uint64_t v) {
        return (double(v >> 11) + 0.5) * 0x1p-53;
    }

    uint64_t seed_;
    uint32_t tag_;
};

} // namespace kslab
