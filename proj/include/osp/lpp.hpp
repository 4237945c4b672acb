// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Directed last-passage percolation with i.i.d. Exponential(1) weights.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "osp/limits.hpp"
#include "osp/philox.hpp"

namespace osp {

/// Weight of cell (i, j), 1-based.
using WeightSource = std::function<double(std::int64_t, std::int64_t)>;

/// Weights of one replicate: row i is drawn from its own counter stream, so
/// cell (i, j) does not depend on the grid width read so far.
class ExponentialWeights {
  public:
    ExponentialWeights(std::uint64_t seed, std::uint32_t replicate)
        : seed_(seed), replicate_(replicate) {}

    CounterEngine row(std::int64_t i) const {
        return CounterEngine(seed_, StreamTag::lpp, replicate_, static_cast<std::uint32_t>(i));
    }

  private:
    std::uint64_t seed_;
    std::uint32_t replicate_;
};

/// G(M, N) from an arbitrary weight source, with one rolling row.
inline double lpp_time(std::int64_t rows, std::int64_t cols, const WeightSource& weight) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("lpp_time: grid dimensions must be >= 1");
    }
    std::vector<double> g(static_cast<std::size_t>(cols) + 1, 0.0);
    for (std::int64_t i = 1; i <= rows; ++i) {
        for (std::int64_t j = 1; j <= cols; ++j) {
            auto& cell = g[static_cast<std::size_t>(j)];
            cell = weight(i, j) + std::max(cell, g[static_cast<std::size_t>(j - 1)]);
        }
    }
    return g.back();
}

/// G(M, N) with Exponential(1) weights keyed by (seed, replicate).
inline double lpp_time(std::int64_t rows, std::int64_t cols, std::uint64_t seed,
                       std::uint32_t replicate) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("lpp_time: grid dimensions must be >= 1");
    }
    const ExponentialWeights weights(seed, replicate);
    std::vector<double> g(static_cast<std::size_t>(cols) + 1, 0.0);
    for (std::int64_t i = 1; i <= rows; ++i) {
        CounterEngine engine = weights.row(i);
        for (std::size_t j = 1; j < g.size(); ++j) {
            g[j] = engine.exponential() + std::max(g[j], g[j - 1]);
        }
    }
    return g.back();
}

/// Full passage-time table G(i, j), row-major (rows × cols).
inline std::vector<double> lpp_table(std::int64_t rows, std::int64_t cols,
                                     const WeightSource& weight) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("lpp_table: grid dimensions must be >= 1");
    }
    const auto c = static_cast<std::size_t>(cols);
    std::vector<double> g(static_cast<std::size_t>(rows) * c, 0.0);
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::int64_t j = 0; j < cols; ++j) {
            const double up = i > 0 ? g[static_cast<std::size_t>(i - 1) * c + static_cast<std::size_t>(j)] : 0.0;
            const double left = j > 0 ? g[static_cast<std::size_t>(i) * c + static_cast<std::size_t>(j - 1)] : 0.0;
            g[static_cast<std::size_t>(i) * c + static_cast<std::size_t>(j)] = weight(i + 1, j + 1) + std::max(up, left);
        }
    }
    return g;
}

/// (G - γ_y n) / scale for a grid of `rows` × `cols` with rows ≈ yn and
/// cols ≈ (1 - y)n.
inline double johansson_scaled(double g, double y, std::int64_t n, std::int64_t rows,
                               std::int64_t cols) {
    const auto sc = limits::tw_scaling(y, static_cast<double>(n));
    const double nd = static_cast<double>(n);
    if (std::abs(static_cast<double>(rows) - y * nd) > 1.0 ||
        std::abs(static_cast<double>(cols) - (1 - y) * nd) > 1.0) {
        throw std::invalid_argument("johansson_scaled: grid dimensions do not match (y, n)");
    }
    return (g - sc.center) / sc.scale;
}

}  // namespace osp
