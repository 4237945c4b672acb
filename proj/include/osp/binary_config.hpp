// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// 0/1 configurations on Z with a rightmost particle (or none at all).
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace osp {

using Site = std::int64_t;

/// A configuration is a finite window of explicit values plus a convention
/// for the two infinite tails: every site right of the window is empty, and
/// every site left of it is either occupied (`filled_left`) or empty.
///
/// Normal form: the window ends on a particle; it starts on a hole when
/// filled_left and on a particle otherwise. The step configuration 1{x<=L}
/// is filled_left with an empty window starting at L+1; the configuration
/// without particles is not filled_left with an empty window at 0.
class BinaryConfig {
  public:
    BinaryConfig() = default;

    static BinaryConfig step(Site frontier) {
        BinaryConfig c;
        c.filled_left_ = true;
        c.base_ = frontier + 1;
        c.rebuild();
        return c;
    }

    static BinaryConfig empty() { return {}; }

    /// Values on [base, base + bits.size()); tails per `filled_left`.
    static BinaryConfig from_window(Site base, std::vector<std::uint8_t> bits, bool filled_left) {
        BinaryConfig c;
        c.base_ = base;
        c.bits_ = std::move(bits);
        c.filled_left_ = filled_left;
        c.normalize();
        return c;
    }

    /// Particles at the listed sites, plus every site <= filled_through when given.
    static BinaryConfig from_sites(std::vector<Site> sites,
                                   std::optional<Site> filled_through = std::nullopt) {
        if (filled_through) {
            std::erase_if(sites, [&](Site s) { return s <= *filled_through; });
        }
        if (sites.empty()) {
            return filled_through ? step(*filled_through) : empty();
        }
        std::sort(sites.begin(), sites.end());
        if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
            throw std::invalid_argument("BinaryConfig: duplicate particle site");
        }
        const Site lo = filled_through ? *filled_through + 1 : sites.front();
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(sites.back() - lo + 1), 0);
        for (const Site s : sites) {
            bits[static_cast<std::size_t>(s - lo)] = 1;
        }
        return from_window(lo, std::move(bits), filled_through.has_value());
    }

    bool filled_left() const { return filled_left_; }
    bool is_empty() const { return !filled_left_ && bits_.empty(); }

    /// L: every site <= L is occupied (filled_left only).
    std::optional<Site> frontier() const {
        return filled_left_ ? std::optional<Site>(base_ - 1) : std::nullopt;
    }
    /// Position of the rightmost particle, if any.
    std::optional<Site> rightmost() const {
        if (!bits_.empty()) {
            return window_last();
        }
        return frontier();
    }
    /// First site of the explicit window.
    Site window_begin() const { return base_; }
    /// One past the last site of the explicit window.
    Site window_end() const { return base_ + static_cast<Site>(bits_.size()); }

    bool at(Site x) const {
        if (x < base_) {
            return filled_left_;
        }
        if (x >= window_end()) {
            return false;
        }
        return bits_[static_cast<std::size_t>(x - base_)] != 0;
    }

    /// Total particle count, or nullopt when infinite.
    std::optional<std::int64_t> particle_count() const {
        if (filled_left_) {
            return std::nullopt;
        }
        return static_cast<std::int64_t>(particles_.size());
    }

    /// S(ρ, x): particles strictly right of x.
    std::int64_t queue_length(Site x) const {
        const auto in_window = static_cast<std::int64_t>(particles_.size());
        if (x >= window_end()) {
            return 0;
        }
        if (x < base_) {
            return in_window + (filled_left_ ? (base_ - 1 - x) : 0);
        }
        return suffix_[static_cast<std::size_t>(x - base_ + 1)];
    }

    /// π_ρ(j): site of the j-th rightmost particle, j >= 1.
    Site particle_pos(std::int64_t j) const {
        if (j < 1) {
            throw std::invalid_argument("particle_pos: j must be >= 1");
        }
        const auto in_window = static_cast<std::int64_t>(particles_.size());
        if (j <= in_window) {
            return particles_[static_cast<std::size_t>(j - 1)];
        }
        if (!filled_left_) {
            throw std::invalid_argument("particle_pos: only " + std::to_string(in_window) +
                                        " particles, asked for j=" + std::to_string(j));
        }
        return base_ - 1 - (j - in_window - 1);
    }

    /// θ_ρ(n, j): the j-th rightmost hole of ρ ∨ 1_{[n+1,∞)}, i.e. among
    /// the holes at sites <= n; θ(n, 0) = n + 1.
    Site hole_pos(Site n, std::int64_t j) const {
        if (j < 0) {
            throw std::invalid_argument("hole_pos: j must be >= 0");
        }
        if (j == 0) {
            return n + 1;
        }
        if (is_empty()) {
            return n - (j - 1);
        }
        // Holes above the window: sites (last, n].
        const Site last = window_end() - 1;
        const std::int64_t above = std::max<Site>(0, n - last);
        if (j <= above) {
            return n - (j - 1);
        }
        j -= above;
        // Window holes at sites <= n, descending.
        const auto first_le = std::lower_bound(holes_.begin(), holes_.end(), n, std::greater<>());
        const auto inside = static_cast<std::int64_t>(holes_.end() - first_le);
        if (j <= inside) {
            return *(first_le + (j - 1));
        }
        j -= inside;
        if (filled_left_) {
            throw std::invalid_argument("hole_pos: not enough holes at or below n");
        }
        return std::min<Site>(n, base_ - 1) - (j - 1);
    }

    /// Window particles, right to left.
    std::span<const Site> window_particles() const { return particles_; }

    friend bool operator==(const BinaryConfig& a, const BinaryConfig& b) {
        return a.filled_left_ == b.filled_left_ && a.base_ == b.base_ && a.bits_ == b.bits_;
    }

    std::string to_string() const {
        std::string s = filled_left_ ? "...1|" : "...0|";
        s += std::to_string(base_) + ":";
        for (const auto b : bits_) {
            s += b ? '1' : '0';
        }
        return s + "|0...";
    }

  private:
    Site window_last() const { return window_end() - 1; }

    void normalize() {
        std::size_t lead = 0;
        const std::uint8_t pad = filled_left_ ? 1 : 0;
        while (lead < bits_.size() && bits_[lead] == pad) {
            ++lead;
        }
        std::size_t end = bits_.size();
        while (end > lead && bits_[end - 1] == 0) {
            --end;
        }
        if (end == lead) {
            // No explicit structure left.
            if (filled_left_) {
                // Trailing zeros were trimmed; all leading ones extend the frontier.
                base_ += static_cast<Site>(lead);
            } else {
                base_ = 0;
            }
            bits_.clear();
        } else {
            bits_ = std::vector<std::uint8_t>(bits_.begin() + static_cast<std::ptrdiff_t>(lead),
                                              bits_.begin() + static_cast<std::ptrdiff_t>(end));
            base_ += static_cast<Site>(lead);
        }
        rebuild();
    }

    void rebuild() {
        particles_.clear();
        holes_.clear();
        suffix_.assign(bits_.size() + 1, 0);
        for (std::size_t i = bits_.size(); i-- > 0;) {
            const Site x = base_ + static_cast<Site>(i);
            suffix_[i] = suffix_[i + 1] + (bits_[i] ? 1 : 0);
            if (bits_[i]) {
                particles_.push_back(x);
            } else {
                holes_.push_back(x);
            }
        }
    }

    bool filled_left_ = false;
    Site base_ = 0;
    std::vector<std::uint8_t> bits_;
    // Derived caches.
    std::vector<Site> particles_;
    std::vector<Site> holes_;
    std::vector<std::int64_t> suffix_;
};

}  // namespace osp
