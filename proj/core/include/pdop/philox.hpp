#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace pdop {

/// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw,
/// "Parallel random numbers: as easy as 1, 2, 3", SC 2011). A 128-bit
/// counter plus a 64-bit key map to 128 bits of output with no carried
/// state, so any sample in a stream can be produced directly from its
/// index. Bit-exact across platforms; integer arithmetic only.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Counter generate(Counter counter, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * counter[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * counter[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
        }
        return counter;
    }
};

/// Addresses one 128-bit Philox block: (seed, stream, draw, lane).
/// `draw` indexes the Monte Carlo sample, `lane` the position within that
/// sample's noise vector, `stream` separates independent substreams (e.g.
/// the entries of a convergence sweep).
struct PhiloxIndex {
    std::uint64_t seed{};
    std::uint32_t stream{};
    std::uint64_t draw{};
    std::uint32_t lane{};
};

/// Two uniforms in (0, 1), open at both ends, from one Philox block.
inline std::array<double, 2> philox_uniform2(const PhiloxIndex& ix) {
    const Philox4x32::Counter out = Philox4x32::generate(
        {static_cast<std::uint32_t>(ix.draw), static_cast<std::uint32_t>(ix.draw >> 32),
         ix.lane, ix.stream},
        {static_cast<std::uint32_t>(ix.seed), static_cast<std::uint32_t>(ix.seed >> 32)});
    const auto to_unit = [](std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
        // 52-bit mantissa plus the half-step keeps the value strictly inside (0, 1).
        return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
    };
    return {to_unit(out[0], out[1]), to_unit(out[2], out[3])};
}

/// Two independent standard normals (Box-Muller) from one Philox block.
inline std::array<double, 2> philox_normal2(const PhiloxIndex& ix) {
    const auto u = philox_uniform2(ix);
    const double radius = std::sqrt(-2.0 * std::log(u[0]));
    const double angle = 2.0 * std::numbers::pi * u[1];
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace pdop
