// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) and a
// keyed engine built on it. Every random quantity in the project is a pure
// function of (seed, tag, replicate, stream, draw index).
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace osp {

using Counter4 = std::array<std::uint32_t, 4>;
using Key2 = std::array<std::uint32_t, 2>;

inline Counter4 philox4x32_10(Counter4 ctr, Key2 key) {
    constexpr std::uint32_t kMulA = 0xD2511F53u;
    constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    constexpr std::uint32_t kWeylB = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

/// SplitMix64 finalizer; used only to derive keys, never as a stream.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stream families. Distinct tags never share randomness under one seed.
enum class StreamTag : std::uint64_t {
    clocks = 1,
    variant = 2,
    lpp = 3,
    sampler = 4,
    test = 5,
};

inline Key2 derive_key(std::uint64_t seed, StreamTag tag) {
    const std::uint64_t k = mix64(seed ^ mix64(static_cast<std::uint64_t>(tag)));
    return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

/// Maps 64 random bits to the open interval (0, 1).
inline double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// UniformRandomBitGenerator over one (seed, tag, replicate, stream) key.
/// The counter layout is (replicate, stream, block lo, block hi); each block
/// yields two 64-bit outputs, so the engine can be positioned anywhere.
class CounterEngine {
  public:
    using result_type = std::uint64_t;

    CounterEngine(std::uint64_t seed, StreamTag tag, std::uint32_t replicate,
                  std::uint32_t stream, std::uint64_t start = 0)
        : key_(derive_key(seed, tag)), replicate_(replicate), stream_(stream) {
        seek(start);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    /// Positions the engine so that the next output has index `index`.
    void seek(std::uint64_t index) {
        block_ = index / 2;
        refill();
        lane_ = static_cast<int>(index % 2);
    }

    /// Index of the next output.
    std::uint64_t position() const { return block_ * 2 + static_cast<std::uint64_t>(lane_) - 2; }

    result_type operator()() {
        if (lane_ == 2) {
            refill();
        }
        return buffer_[lane_++];
    }

    double uniform() { return to_open_unit((*this)()); }
    double exponential() { return -std::log(uniform()); }

  private:
    void refill() {
        const Counter4 out = philox4x32_10(
            {replicate_, stream_, static_cast<std::uint32_t>(block_),
             static_cast<std::uint32_t>(block_ >> 32)},
            key_);
        buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        ++block_;
        lane_ = 0;
    }

    Key2 key_;
    std::uint32_t replicate_;
    std::uint32_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int lane_ = 2;
};

}  // namespace osp
