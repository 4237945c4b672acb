// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Combinatorial operators on configurations: projection of a labeled
// configuration, cut-off, push-back, attempted jumps, and second-class
// particle bookkeeping for compatible pairs.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "osp/binary_config.hpp"
#include "osp/permutation.hpp"

namespace osp {

/// T_k: marks the sites of a labeled configuration on [origin, origin+|labels|)
/// whose label is <= k; every site outside the interval is empty.
inline BinaryConfig project(std::span<const Permutation::Label> labels, Site origin,
                            std::int64_t k) {
    std::vector<std::uint8_t> bits(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        bits[i] = labels[i] <= k ? 1 : 0;
    }
    return BinaryConfig::from_window(origin, std::move(bits), false);
}

/// T_k of a permutation on [1, n].
inline BinaryConfig project(const Permutation& sigma, std::int64_t k) {
    return project(sigma.one_line(), 1, k);
}

/// R_k: keeps the k rightmost particles.
inline BinaryConfig cutoff(const BinaryConfig& rho, std::int64_t k) {
    if (k < 0) {
        throw std::invalid_argument("cutoff: k must be >= 0");
    }
    if (const auto total = rho.particle_count(); total && *total <= k) {
        return rho;
    }
    std::vector<Site> kept;
    kept.reserve(static_cast<std::size_t>(k));
    for (std::int64_t j = 1; j <= k; ++j) {
        kept.push_back(rho.particle_pos(j));
    }
    return BinaryConfig::from_sites(std::move(kept));
}

/// B_n: moves the j-th rightmost particle from x to x ∧ (n + 1 - j).
inline BinaryConfig pushback(const BinaryConfig& rho, Site n) {
    const auto window = rho.window_particles();
    std::vector<Site> sites;
    sites.reserve(window.size());
    std::int64_t j = 1;
    // Once some particle is not pushed, no particle to its left is pushed.
    for (; j <= static_cast<std::int64_t>(window.size()); ++j) {
        const Site x = window[static_cast<std::size_t>(j - 1)];
        if (x <= n + 1 - j) {
            break;
        }
        sites.push_back(n + 1 - j);
    }
    for (std::int64_t i = j; i <= static_cast<std::int64_t>(window.size()); ++i) {
        sites.push_back(window[static_cast<std::size_t>(i - 1)]);
    }
    std::optional<Site> filled = rho.frontier();
    if (filled && j > static_cast<std::int64_t>(window.size()) && *filled > n + 1 - j) {
        // The whole infinite block is pushed: its top lands on n + 1 - j.
        filled = n + 1 - j;
    }
    return BinaryConfig::from_sites(std::move(sites), filled);
}

/// J_m: a particle at m jumps to m+1 if that site is empty.
inline BinaryConfig jump(const BinaryConfig& rho, Site m) {
    if (!rho.at(m) || rho.at(m + 1)) {
        return rho;
    }
    const Site lo = std::min(rho.window_begin(), m);
    const Site hi = std::max(rho.window_end(), m + 2);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(hi - lo));
    for (Site x = lo; x < hi; ++x) {
        bits[static_cast<std::size_t>(x - lo)] = rho.at(x) ? 1 : 0;
    }
    bits[static_cast<std::size_t>(m - lo)] = 0;
    bits[static_cast<std::size_t>(m + 1 - lo)] = 1;
    return BinaryConfig::from_window(lo, std::move(bits), rho.filled_left());
}

/// Raised when two configurations are not a compatible pair.
class IncompatiblePair : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Σ_{ρ,ρ'}: the unique site with ρ = 1, ρ' = 0, found by a full diff.
inline Site discrepancy(const BinaryConfig& rho, const BinaryConfig& rho_prime) {
    if (rho.filled_left() != rho_prime.filled_left()) {
        throw IncompatiblePair("configurations differ on an infinite tail");
    }
    const Site lo = std::min(rho.window_begin(), rho_prime.window_begin());
    const Site hi = std::max(rho.window_end(), rho_prime.window_end());
    std::optional<Site> found;
    for (Site x = lo; x < hi; ++x) {
        const bool a = rho.at(x);
        const bool b = rho_prime.at(x);
        if (a == b) {
            continue;
        }
        if (!a || found) {
            throw IncompatiblePair("configurations are not compatible");
        }
        found = x;
    }
    if (!found) {
        throw IncompatiblePair("configurations are identical");
    }
    return *found;
}

/// Compatible pair (ρ, ρ'): equal except at one site where ρ has the particle.
class SecondClassPair {
  public:
    SecondClassPair(BinaryConfig rho, BinaryConfig rho_prime)
        : rho_(std::move(rho)), rho_prime_(std::move(rho_prime)),
          site_(discrepancy(rho_, rho_prime_)) {}

    const BinaryConfig& first() const { return rho_; }
    const BinaryConfig& second() const { return rho_prime_; }
    Site site() const { return site_; }

    /// Shared attempted jump at bond m; the site follows the local rule.
    SecondClassPair jump_at(Site m) const {
        SecondClassPair out = *this;
        out.rho_ = jump(rho_, m);
        out.rho_prime_ = jump(rho_prime_, m);
        if (m == site_ && !rho_.at(m + 1)) {
            out.site_ = m + 1;
        } else if (m + 1 == site_ && rho_.at(m)) {
            out.site_ = m;
        }
        return out;
    }

  private:
    BinaryConfig rho_;
    BinaryConfig rho_prime_;
    Site site_;
};

inline Site second_class_pos(const SecondClassPair& pair) { return pair.site(); }

}  // namespace osp
