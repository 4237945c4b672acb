// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// TASEP with step initial condition on a finite interval or on Z (through a
// certified finite window), driven by the same bond clocks as the swap
// process, plus the second-class particle of a compatible pair.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "osp/binary_config.hpp"
#include "osp/clock.hpp"
#include "osp/operators.hpp"

namespace osp {

/// Finite interval [first, last] of Z.
struct Interval {
    Site first;
    Site last;
};

/// Finite window standing in for Z. The margin defaults to
/// ⌈2T⌉ + ⌈10√T⌉ + 10 for horizon T and doubles after each breach.
struct WindowPolicy {
    std::optional<Site> initial_margin;
    int max_doublings = 8;

    Site margin_for(double horizon) const {
        if (initial_margin) {
            return *initial_margin;
        }
        return static_cast<Site>(std::ceil(2 * horizon) + std::ceil(10 * std::sqrt(horizon)) + 10);
    }
};

using Domain = std::variant<Interval, WindowPolicy>;

/// Raised when a window run cannot be certified within the doubling budget.
class WindowExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Mutable 0/1 lattice for fast replay.
///
/// On an interval every site outside it is empty. In window mode the sites
/// left of the window count as occupied, the sites right of it as empty, and
/// the run is exact as long as the first window site stays occupied and the
/// last stays empty (`certified()`).
class TasepLattice {
  public:
    static TasepLattice on_interval(Interval iv, std::int64_t k) {
        if (iv.last < iv.first) {
            throw std::invalid_argument("TasepLattice: empty interval");
        }
        return TasepLattice(iv.first, iv.last, k, false);
    }

    static TasepLattice window(Site lo, Site hi, std::int64_t k) {
        if (hi - lo < 2 || k < lo || k >= hi) {
            throw std::invalid_argument("TasepLattice: window must strictly contain the step edge");
        }
        return TasepLattice(lo, hi, k, true);
    }

    Site first() const { return lo_; }
    Site last() const { return hi_; }
    bool is_window() const { return window_; }

    bool at(Site x) const {
        if (x < lo_) {
            return window_;
        }
        if (x > hi_) {
            return false;
        }
        return occ_[static_cast<std::size_t>(x - lo_)] != 0;
    }

    /// J_m on the lattice; bonds with a site outside [first, last] are inert.
    bool try_jump(Site m) {
        if (m < lo_ || m >= hi_) {
            return false;
        }
        auto& a = occ_[static_cast<std::size_t>(m - lo_)];
        auto& b = occ_[static_cast<std::size_t>(m + 1 - lo_)];
        if (a && !b) {
            a = 0;
            b = 1;
            touched_lo_ = std::min(touched_lo_, m);
            touched_hi_ = std::max(touched_hi_, m + 1);
            return true;
        }
        return false;
    }

    /// Moves a particle from `from` to `to` without checks (second-class moves).
    void move_particle(Site from, Site to) {
        occ_[static_cast<std::size_t>(from - lo_)] = 0;
        occ_[static_cast<std::size_t>(to - lo_)] = 1;
        touched_lo_ = std::min({touched_lo_, from, to});
        touched_hi_ = std::max({touched_hi_, from, to});
    }

    bool certified() const { return !window_ || (occ_.front() != 0 && occ_.back() == 0); }

    BinaryConfig config() const {
        if (!window_) {
            return BinaryConfig::from_window(lo_, occ_, false);
        }
        const Site r0 = std::max(lo_, std::min(touched_lo_, edge_ + 1));
        const Site r1 = std::min(hi_, std::max(touched_hi_, edge_));
        std::vector<std::uint8_t> bits(occ_.begin() + (r0 - lo_), occ_.begin() + (r1 - lo_ + 1));
        return BinaryConfig::from_window(r0, std::move(bits), true);
    }

    /// Particles strictly right of x.
    std::int64_t queue_length(Site x) const {
        std::int64_t count = 0;
        for (Site y = std::max(x + 1, lo_); y <= hi_; ++y) {
            count += occ_[static_cast<std::size_t>(y - lo_)];
        }
        if (window_ && x < lo_ - 1) {
            count += lo_ - 1 - x;
        }
        return count;
    }

  private:
    TasepLattice(Site lo, Site hi, std::int64_t k, bool window)
        : lo_(lo), hi_(hi), edge_(k), window_(window),
          occ_(static_cast<std::size_t>(hi - lo + 1), 0), touched_lo_(hi + 1), touched_hi_(lo - 1) {
        for (Site x = lo; x <= std::min<Site>(hi, k); ++x) {
            occ_[static_cast<std::size_t>(x - lo)] = 1;
        }
    }

    Site lo_;
    Site hi_;
    Site edge_;
    bool window_;
    std::vector<std::uint8_t> occ_;
    Site touched_lo_;
    Site touched_hi_;
};

struct TasepSnapshot {
    double time;
    BinaryConfig config;
};

struct TasepPath {
    std::int64_t k = 0;
    double horizon = 0;
    Interval lattice{0, 0};
    int retries = 0;
    std::int64_t jumps = 0;
    std::vector<TasepSnapshot> snapshots;
    BinaryConfig final_config;
};

namespace detail {

/// Bonds adjacent to a change become live; all others are inert under the
/// step initial condition, so skipping their earlier rings is exact.
inline void wake_neighbors(EventStream& stream, Site m, double t) {
    if (m - 1 >= stream.first_bond()) {
        stream.activate(m - 1, t);
    }
    if (m + 1 <= stream.last_bond()) {
        stream.activate(m + 1, t);
    }
}

inline std::optional<TasepPath> run_tasep_once(TasepLattice lattice, std::int64_t k,
                                               double horizon, std::uint64_t seed,
                                               std::uint32_t replicate,
                                               std::vector<double> times) {
    TasepPath path;
    path.k = k;
    path.horizon = horizon;
    path.lattice = {lattice.first(), lattice.last()};
    std::sort(times.begin(), times.end());
    std::size_t next = 0;
    if (lattice.last() > lattice.first()) {
        EventStream stream(seed, replicate, lattice.first(), lattice.last() - 1, false);
        if (k >= lattice.first() && k < lattice.last()) {
            stream.activate(k, 0.0);
        }
        while (auto ev = stream.next(horizon)) {
            while (next < times.size() && times[next] < ev->time) {
                path.snapshots.push_back({times[next++], lattice.config()});
            }
            if (lattice.try_jump(ev->bond)) {
                ++path.jumps;
                wake_neighbors(stream, ev->bond, ev->time);
                if (!lattice.certified()) {
                    return std::nullopt;
                }
            }
        }
    }
    while (next < times.size() && times[next] <= horizon) {
        path.snapshots.push_back({times[next++], lattice.config()});
    }
    path.final_config = lattice.config();
    return path;
}

}  // namespace detail

/// ν_t^{k,I} on an interval, or ν_t^k on Z through a certified window;
/// snapshots at the requested absolute times (state after events <= t).
inline TasepPath simulate_tasep(std::int64_t k, const Domain& domain, double horizon,
                                std::uint64_t seed, std::uint32_t replicate,
                                std::vector<double> snapshot_times = {}) {
    if (horizon < 0) {
        throw std::invalid_argument("simulate_tasep: negative horizon");
    }
    if (const auto* iv = std::get_if<Interval>(&domain)) {
        auto path = detail::run_tasep_once(TasepLattice::on_interval(*iv, k), k, horizon, seed,
                                           replicate, std::move(snapshot_times));
        return std::move(*path);
    }
    const auto& policy = std::get<WindowPolicy>(domain);
    Site margin = policy.margin_for(horizon);
    for (int attempt = 0; attempt <= policy.max_doublings; ++attempt, margin *= 2) {
        auto path = detail::run_tasep_once(TasepLattice::window(k - margin, k + margin, k), k,
                                           horizon, seed, replicate, snapshot_times);
        if (path) {
            path->retries = attempt;
            return std::move(*path);
        }
    }
    throw WindowExhausted("simulate_tasep: window breached after all doublings");
}

struct SecondClassSample {
    double time;
    Site site;
};

struct SecondClassPath {
    std::int64_t k = 0;
    int retries = 0;
    std::vector<SecondClassSample> samples;
    /// Discrepancy checks against a full diff (only when requested).
    std::int64_t full_diff_checks = 0;
    std::int64_t full_diff_failures = 0;
};

namespace detail {

inline std::optional<SecondClassPath> run_second_class_once(std::int64_t k, Site margin,
                                                            double horizon, std::uint64_t seed,
                                                            std::uint32_t replicate,
                                                            const std::vector<double>& times,
                                                            std::int64_t verify_every) {
    // One lattice holds ν^{k-1}; ν^k is the same plus a particle at `site`.
    // With verification on, ν^k also runs on its own lattice and is diffed.
    TasepLattice lower = TasepLattice::window(k - margin, k + margin, k - 1);
    std::optional<TasepLattice> upper;
    if (verify_every > 0) {
        upper = TasepLattice::window(k - margin, k + margin, k);
    }
    Site site = k;
    SecondClassPath path;
    path.k = k;
    std::size_t next = 0;
    EventStream stream(seed, replicate, lower.first(), lower.last() - 1, false);
    stream.activate(k - 1, 0.0);
    stream.activate(k, 0.0);
    std::int64_t counter = 0;
    while (auto ev = stream.next(horizon)) {
        while (next < times.size() && times[next] < ev->time) {
            path.samples.push_back({times[next++], site});
        }
        const Site m = ev->bond;
        bool changed = false;
        if (m == site) {
            if (!lower.at(m + 1)) {
                site = m + 1;
                changed = true;
            }
        } else if (m + 1 == site) {
            if (lower.at(m)) {
                lower.move_particle(m, m + 1);
                site = m;
                changed = true;
            }
        } else {
            changed = lower.try_jump(m);
        }
        if (upper && upper->try_jump(m)) {
            changed = true;
        }
        if (changed) {
            wake_neighbors(stream, m, ev->time);
            if (!lower.certified() || site <= lower.first() || site >= lower.last() ||
                (upper && !upper->certified())) {
                return std::nullopt;
            }
            if (upper && ++counter % verify_every == 0) {
                ++path.full_diff_checks;
                try {
                    if (discrepancy(upper->config(), lower.config()) != site) {
                        ++path.full_diff_failures;
                    }
                } catch (const IncompatiblePair&) {
                    ++path.full_diff_failures;
                }
            }
        }
    }
    while (next < times.size() && times[next] <= horizon) {
        path.samples.push_back({times[next++], site});
    }
    return path;
}

}  // namespace detail

/// Second-class particle of the pair (ν^k, ν^{k-1}) on Z with shared clocks;
/// X_0 = k. Samples X at the requested absolute times.
inline SecondClassPath second_class_trajectory(std::int64_t k, double horizon,
                                               std::uint64_t seed, std::uint32_t replicate,
                                               std::vector<double> sample_times,
                                               const WindowPolicy& policy = {},
                                               std::int64_t verify_every = 0) {
    if (horizon < 0) {
        throw std::invalid_argument("second_class_trajectory: negative horizon");
    }
    std::sort(sample_times.begin(), sample_times.end());
    Site margin = policy.margin_for(horizon);
    for (int attempt = 0; attempt <= policy.max_doublings; ++attempt, margin *= 2) {
        auto path = detail::run_second_class_once(k, margin, horizon, seed, replicate,
                                                  sample_times, verify_every);
        if (path) {
            path->retries = attempt;
            return std::move(*path);
        }
    }
    throw WindowExhausted("second_class_trajectory: window breached after all doublings");
}

}  // namespace osp
