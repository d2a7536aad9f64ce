#pragma once

#include <cstdint>
#include <random>

namespace ftscorr {

// splitmix64 step: advances `state` and returns the next value of the stream.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream tags separate independent uses of the same master seed.
inline constexpr std::uint64_t kStreamData = 0x01;        // simulated series
inline constexpr std::uint64_t kStreamMultiplier = 0x02;  // bootstrap multipliers
inline constexpr std::uint64_t kStreamRepetition = 0x03;  // Monte Carlo repetitions

// Derives a substream seed from (master, stream, index). Every random draw in
// the library flows through this function, which is what makes results
// independent of thread count and execution order: stream consumers are
// addressed by index, never by arrival time.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t s = master;
    splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ULL * (stream + 1);
    splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ULL * (index + 1);
    return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return std::mt19937_64(derive_seed(master, stream, index));
}

}  // namespace ftscorr
