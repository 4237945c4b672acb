// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Permutations of {1..n} with a synchronized inverse, adjacent sorting
// operators and inversion counting.
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace osp {

/// Bijection on {1..n}. Positions and labels are 1-based: at(i) is the label
/// at position i and position_of(k) is where label k sits.
class Permutation {
  public:
    using Label = std::int32_t;

    Permutation() = default;

    explicit Permutation(std::size_t n) : forward_(n + 1), inverse_(n + 1) {
        std::iota(forward_.begin(), forward_.end(), 0);
        std::iota(inverse_.begin(), inverse_.end(), 0);
    }

    static Permutation identity(std::size_t n) { return Permutation(n); }

    static Permutation reversed(std::size_t n) {
        Permutation p(n);
        for (std::size_t i = 1; i <= n; ++i) {
            p.forward_[i] = static_cast<Label>(n + 1 - i);
            p.inverse_[n + 1 - i] = static_cast<Label>(i);
        }
        return p;
    }

    /// From one-line notation (σ(1), ..., σ(n)).
    static Permutation from_one_line(std::span<const Label> values) {
        const std::size_t n = values.size();
        Permutation p(n);
        std::vector<bool> seen(n + 1, false);
        for (std::size_t i = 0; i < n; ++i) {
            const Label v = values[i];
            if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)]) {
                throw std::invalid_argument("Permutation: not a bijection on {1..n}");
            }
            seen[static_cast<std::size_t>(v)] = true;
            p.forward_[i + 1] = v;
            p.inverse_[static_cast<std::size_t>(v)] = static_cast<Label>(i + 1);
        }
        return p;
    }
    static Permutation from_one_line(std::initializer_list<Label> values) {
        return from_one_line(std::span<const Label>(values.begin(), values.size()));
    }

    std::size_t size() const { return forward_.empty() ? 0 : forward_.size() - 1; }

    Label at(std::size_t position) const { return forward_[position]; }
    std::size_t position_of(Label label) const {
        return static_cast<std::size_t>(inverse_[static_cast<std::size_t>(label)]);
    }

    bool has_ascent(std::size_t i) const { return forward_[i] < forward_[i + 1]; }

    /// In-place σ ↦ στ_i.
    void swap_adjacent(std::size_t i) {
        const Label a = forward_[i];
        const Label b = forward_[i + 1];
        forward_[i] = b;
        forward_[i + 1] = a;
        inverse_[static_cast<std::size_t>(a)] = static_cast<Label>(i + 1);
        inverse_[static_cast<std::size_t>(b)] = static_cast<Label>(i);
    }

    /// In-place S_i: swaps positions i, i+1 iff they are in increasing
    /// order. Returns whether the swap happened. No range check.
    bool sort_step(std::size_t i) {
        if (forward_[i] < forward_[i + 1]) {
            swap_adjacent(i);
            return true;
        }
        return false;
    }

    Permutation inverse() const {
        Permutation p;
        p.forward_ = inverse_;
        p.inverse_ = forward_;
        return p;
    }

    /// σ(1..n) as a span.
    std::span<const Label> one_line() const {
        return {forward_.data() + 1, size()};
    }
    /// σ⁻¹(1..n) as a span.
    std::span<const Label> positions() const {
        return {inverse_.data() + 1, size()};
    }

    bool is_identity() const {
        for (std::size_t i = 1; i <= size(); ++i) {
            if (forward_[i] != static_cast<Label>(i)) {
                return false;
            }
        }
        return true;
    }
    bool is_reversed() const {
        const std::size_t n = size();
        for (std::size_t i = 1; i <= n; ++i) {
            if (forward_[i] != static_cast<Label>(n + 1 - i)) {
                return false;
            }
        }
        return true;
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 1; i <= size(); ++i) {
            if (i > 1) {
                s += ',';
            }
            s += std::to_string(forward_[i]);
        }
        return s + ")";
    }

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.forward_ == b.forward_;
    }
    friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
        return a.forward_ <=> b.forward_;
    }

  private:
    // Slot 0 is unused so that indices match 1-based positions and labels.
    std::vector<Label> forward_;
    std::vector<Label> inverse_;
};

/// Ascent positions {i : σ(i) < σ(i+1)} with O(1) insert, erase and uniform
/// sampling. After an adjacent swap at i only i-1, i, i+1 can change.
class AscentSet {
  public:
    explicit AscentSet(const Permutation& sigma) : slot_(sigma.size() + 1, -1) {
        for (std::size_t i = 1; i + 1 <= sigma.size(); ++i) {
            if (sigma.has_ascent(i)) {
                insert(i);
            }
        }
    }

    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(std::size_t i) const { return i < slot_.size() && slot_[i] >= 0; }

    /// Refreshes i-1, i, i+1 after σ was swapped at i.
    void update_after_swap(const Permutation& sigma, std::size_t i) {
        const std::size_t lo = i > 1 ? i - 1 : 1;
        const std::size_t hi = std::min(i + 1, sigma.size() - 1);
        for (std::size_t j = lo; j <= hi; ++j) {
            const bool asc = sigma.has_ascent(j);
            if (asc && !contains(j)) {
                insert(j);
            } else if (!asc && contains(j)) {
                erase(j);
            }
        }
    }

    template <class Engine>
    std::size_t sample(Engine& engine) const {
        if (members_.empty()) {
            throw std::logic_error("AscentSet: sampling from an empty set");
        }
        std::uniform_int_distribution<std::size_t> pick(0, members_.size() - 1);
        return static_cast<std::size_t>(members_[pick(engine)]);
    }

    std::vector<std::size_t> sorted() const {
        std::vector<std::size_t> out(members_.begin(), members_.end());
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    void insert(std::size_t i) {
        slot_[i] = static_cast<std::int32_t>(members_.size());
        members_.push_back(static_cast<std::int32_t>(i));
    }
    void erase(std::size_t i) {
        const auto s = static_cast<std::size_t>(slot_[i]);
        const std::int32_t moved = members_.back();
        members_[s] = moved;
        slot_[static_cast<std::size_t>(moved)] = static_cast<std::int32_t>(s);
        members_.pop_back();
        slot_[i] = -1;
    }

    std::vector<std::int32_t> members_;
    std::vector<std::int32_t> slot_;
};

inline void check_bond(const Permutation& sigma, std::size_t i) {
    if (i < 1 || i + 1 > sigma.size()) {
        throw std::invalid_argument("bond index " + std::to_string(i) +
                                    " outside [1, n-1] for n=" + std::to_string(sigma.size()));
    }
}

/// σ·S_i = max{σ, στ_i} by inversion number.
inline Permutation apply_sort(Permutation sigma, std::size_t i) {
    check_bond(sigma, i);
    sigma.sort_step(i);
    return sigma;
}

/// id · S_{i_1} ··· S_{i_k}, applied left to right.
inline Permutation sort_sequence(std::size_t n, std::span<const std::size_t> seq) {
    Permutation sigma(n);
    for (const std::size_t i : seq) {
        check_bond(sigma, i);
        sigma.sort_step(i);
    }
    return sigma;
}
inline Permutation sort_sequence(std::size_t n, std::initializer_list<std::size_t> seq) {
    return sort_sequence(n, std::span<const std::size_t>(seq.begin(), seq.size()));
}

/// #{(i, j) : i < j, σ(i) > σ(j)} by merge counting, O(n log n).
inline std::int64_t inversion_number(const Permutation& sigma) {
    std::vector<Permutation::Label> a(sigma.one_line().begin(), sigma.one_line().end());
    std::vector<Permutation::Label> buf(a.size());
    std::int64_t count = 0;
    for (std::size_t width = 1; width < a.size(); width *= 2) {
        for (std::size_t lo = 0; lo < a.size(); lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, a.size());
            const std::size_t hi = std::min(lo + 2 * width, a.size());
            std::size_t i = lo;
            std::size_t j = mid;
            std::size_t out = lo;
            while (i < mid && j < hi) {
                if (a[j] < a[i]) {
                    count += static_cast<std::int64_t>(mid - i);
                    buf[out++] = a[j++];
                } else {
                    buf[out++] = a[i++];
                }
            }
            while (i < mid) {
                buf[out++] = a[i++];
            }
            while (j < hi) {
                buf[out++] = a[j++];
            }
        }
        a.swap(buf);
    }
    return count;
}

}  // namespace osp
