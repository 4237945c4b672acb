// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Exact law of the discrete-time swap chains for small n.
#pragma once

#include <map>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "osp/permutation.hpp"

namespace osp {

using Rational = boost::multiprecision::cpp_rational;

/// variable: pick i uniform on {1..n-1}, apply S_i.
/// fixed: pick i uniform on the ascent set (no move at rev).
enum class Speed { variable, fixed };

inline constexpr std::size_t kMaxEnumerateN = 7;
inline constexpr std::size_t kMaxEnumerateSteps = 1000;

using ExactDistribution = std::map<Permutation, Rational>;

inline ExactDistribution enumerate_discrete(std::size_t n, std::size_t steps, Speed speed) {
    if (n < 1 || n > kMaxEnumerateN) {
        throw std::invalid_argument("enumerate_discrete: n must lie in [1, 7]");
    }
    if (steps > kMaxEnumerateSteps) {
        throw std::invalid_argument("enumerate_discrete: too many steps");
    }
    ExactDistribution current{{Permutation(n), Rational(1)}};
    if (n == 1) {
        return current;
    }
    for (std::size_t step = 0; step < steps; ++step) {
        ExactDistribution next;
        for (const auto& [sigma, p] : current) {
            if (speed == Speed::variable) {
                const Rational share = p / Rational(static_cast<long>(n - 1));
                for (std::size_t i = 1; i < n; ++i) {
                    Permutation tau = sigma;
                    tau.sort_step(i);
                    next[tau] += share;
                }
            } else {
                const AscentSet ascents(sigma);
                if (ascents.empty()) {
                    next[sigma] += p;
                    continue;
                }
                const Rational share = p / Rational(static_cast<long>(ascents.size()));
                for (const std::size_t i : ascents.sorted()) {
                    Permutation tau = sigma;
                    tau.swap_adjacent(i);
                    next[tau] += share;
                }
            }
        }
        current = std::move(next);
    }
    return current;
}

inline Rational probability_of(const ExactDistribution& dist, const Permutation& sigma) {
    const auto it = dist.find(sigma);
    return it == dist.end() ? Rational(0) : it->second;
}

}  // namespace osp
