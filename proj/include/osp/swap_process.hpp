// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Oriented swap process on [1, n] driven by the shared bond clocks, the
// fixed-speed and discrete-time variants, and path queries.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "osp/clock.hpp"
#include "osp/permutation.hpp"

namespace osp {

enum class Variant { continuous_variable, continuous_fixed, discrete_variable, discrete_fixed };

inline std::string to_string(Variant v) {
    switch (v) {
        case Variant::continuous_variable: return "continuous-variable";
        case Variant::continuous_fixed: return "continuous-fixed";
        case Variant::discrete_variable: return "discrete-variable";
        case Variant::discrete_fixed: return "discrete-fixed";
    }
    return "?";
}

inline Variant parse_variant(const std::string& s) {
    for (auto v : {Variant::continuous_variable, Variant::continuous_fixed,
                   Variant::discrete_variable, Variant::discrete_fixed}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw std::invalid_argument("unknown variant '" + s + "'");
}

/// What a replay should keep besides finishing times.
struct RecorderSpec {
    bool record_events = false;
    /// Absolute times; the state at t is the state after all events <= t.
    std::vector<double> snapshot_times;
    std::vector<std::size_t> tracked;
    bool track_all = false;
    /// End the replay at absorption (rev) once all snapshots are taken.
    bool stop_when_absorbed = true;
    /// End the replay once these particles are final and all snapshots are taken.
    std::vector<std::size_t> stop_when_finished;
};

struct SwapEvent {
    double time;
    std::size_t bond;
    bool applied;
};

struct Snapshot {
    double time;
    Permutation state;
    std::int64_t inversions;
};

/// Piecewise-constant trajectory: the particle starts at its label and
/// moves to `moves[j].second` at time `moves[j].first`.
struct Trajectory {
    std::size_t particle = 0;
    std::vector<std::pair<double, std::size_t>> moves;

    std::size_t position_at(double t) const {
        std::size_t pos = particle;
        for (const auto& [time, where] : moves) {
            if (time > t) {
                break;
            }
            pos = where;
        }
        return pos;
    }
};

struct ProcessPath {
    std::size_t n = 0;
    double horizon = 0;
    /// Time at which the replay stopped (horizon, or earlier by a stop rule).
    double end_time = 0;
    std::vector<SwapEvent> events;
    std::vector<Snapshot> snapshots;
    std::vector<Trajectory> trajectories;
    /// finish[k] for labels 1..n (slot 0 unused); nullopt = not finished.
    std::vector<std::optional<double>> finish;
    Permutation final_state;
    std::int64_t applied = 0;

    bool absorbed() const { return final_state.is_reversed(); }

    std::optional<double> beta_star() const {
        double best = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            if (!finish[k]) {
                return std::nullopt;
            }
            best = std::max(best, *finish[k]);
        }
        return best;
    }

    const Snapshot& snapshot_at(double time) const {
        for (const auto& s : snapshots) {
            if (std::abs(s.time - time) <= 1e-12 * std::max(1.0, std::abs(time))) {
                return s;
            }
        }
        throw std::invalid_argument("no snapshot recorded at t=" + std::to_string(time));
    }

    const Trajectory& trajectory_of(std::size_t k) const {
        for (const auto& tr : trajectories) {
            if (tr.particle == k) {
                return tr;
            }
        }
        throw std::invalid_argument("trajectory of particle " + std::to_string(k) +
                                    " was not recorded");
    }
};

/// Incremental bookkeeping shared by all variants: state, inversion count,
/// snapshots, trajectories and finishing times.
///
/// Particle k is final once it sits at n+1-k with labels 1..k-1 to its
/// right; that configuration can never be left, so the time of the move
/// that reaches it is the finishing time.
class SwapReplay {
  public:
    SwapReplay(std::size_t n, const RecorderSpec& spec) : spec_(spec), sigma_(n) {
        if (n < 2) {
            throw std::invalid_argument("swap process needs n >= 2");
        }
        path_.n = n;
        path_.finish.assign(n + 1, std::nullopt);
        max_inversions_ = static_cast<std::int64_t>(n * (n - 1) / 2);
        snapshot_times_ = spec.snapshot_times;
        std::sort(snapshot_times_.begin(), snapshot_times_.end());
        tracked_slot_.assign(n + 1, -1);
        auto track = [&](std::size_t k) {
            if (k < 1 || k > n) {
                throw std::invalid_argument("tracked particle out of range");
            }
            if (tracked_slot_[k] < 0) {
                tracked_slot_[k] = static_cast<int>(path_.trajectories.size());
                path_.trajectories.push_back({k, {}});
            }
        };
        if (spec.track_all) {
            for (std::size_t k = 1; k <= n; ++k) {
                track(k);
            }
        }
        for (const std::size_t k : spec.tracked) {
            track(k);
        }
        for (const std::size_t k : spec.stop_when_finished) {
            if (k < 1 || k > n) {
                throw std::invalid_argument("stop particle out of range");
            }
        }
    }

    const Permutation& state() const { return sigma_; }
    std::int64_t inversions() const { return inversions_; }
    bool absorbed() const { return inversions_ == max_inversions_; }

    /// Records all snapshots strictly before `t`.
    void advance_to(double t) {
        while (next_snapshot_ < snapshot_times_.size() && snapshot_times_[next_snapshot_] < t) {
            path_.snapshots.push_back({snapshot_times_[next_snapshot_], sigma_, inversions_});
            ++next_snapshot_;
        }
    }

    /// Attempts S_i at time t (t must not decrease).
    bool attempt(double t, std::size_t i) {
        advance_to(t);
        const bool applied = sigma_.sort_step(i);
        if (spec_.record_events) {
            path_.events.push_back({t, i, applied});
        }
        if (applied) {
            on_swap(t, i);
        }
        return applied;
    }

    /// Applies στ_i at time t; i must be an ascent.
    void force_swap(double t, std::size_t i) {
        advance_to(t);
        sigma_.swap_adjacent(i);
        if (spec_.record_events) {
            path_.events.push_back({t, i, true});
        }
        on_swap(t, i);
    }

    bool should_stop() const {
        if (next_snapshot_ < snapshot_times_.size()) {
            return false;
        }
        if (spec_.stop_when_absorbed && absorbed()) {
            return true;
        }
        if (!spec_.stop_when_finished.empty()) {
            return std::all_of(spec_.stop_when_finished.begin(), spec_.stop_when_finished.end(),
                               [&](std::size_t k) { return path_.finish[k].has_value(); });
        }
        return false;
    }

    ProcessPath finish(double horizon, double end_time) {
        advance_to(std::nextafter(horizon, horizon + 1.0));
        path_.horizon = horizon;
        path_.end_time = end_time;
        path_.final_state = sigma_;
        path_.applied = inversions_;
        return std::move(path_);
    }

  private:
    void on_swap(double t, std::size_t i) {
        ++inversions_;
        const std::size_t n = sigma_.size();
        // After the swap the smaller label sits at i+1, the larger at i.
        const auto right = static_cast<std::size_t>(sigma_.at(i + 1));
        const auto left = static_cast<std::size_t>(sigma_.at(i));
        if (tracked_slot_[right] >= 0) {
            path_.trajectories[static_cast<std::size_t>(tracked_slot_[right])].moves.push_back(
                {t, i + 1});
        }
        if (tracked_slot_[left] >= 0) {
            path_.trajectories[static_cast<std::size_t>(tracked_slot_[left])].moves.push_back({t, i});
        }
        if (i + 1 == n + 1 - right && is_final(right)) {
            path_.finish[right] = t;
        }
        if (i == n + 1 - left && is_final(left)) {
            path_.finish[left] = t;
        }
    }

    bool is_final(std::size_t k) const {
        const std::size_t n = sigma_.size();
        for (std::size_t j = 1; j < k; ++j) {
            if (sigma_.position_of(static_cast<Permutation::Label>(j)) < n + 2 - k) {
                return false;
            }
        }
        return true;
    }

    const RecorderSpec& spec_;
    Permutation sigma_;
    ProcessPath path_;
    std::int64_t inversions_ = 0;
    std::int64_t max_inversions_ = 0;
    std::vector<double> snapshot_times_;
    std::size_t next_snapshot_ = 0;
    std::vector<int> tracked_slot_;
};

/// Continuous-time variable-speed process on [1, n] using the clocks of
/// bonds 1..n-1 under (seed, replicate).
inline ProcessPath simulate(std::size_t n, double horizon, std::uint64_t seed,
                            std::uint32_t replicate, const RecorderSpec& spec = {}) {
    if (horizon < 0) {
        throw std::invalid_argument("simulate: negative horizon");
    }
    SwapReplay replay(n, spec);
    EventStream stream(seed, replicate, 1, static_cast<Bond>(n) - 1);
    double end_time = horizon;
    while (!replay.should_stop()) {
        const auto ev = stream.next(horizon);
        if (!ev) {
            break;
        }
        replay.attempt(ev->time, static_cast<std::size_t>(ev->bond));
        if (replay.should_stop()) {
            end_time = ev->time;
        }
    }
    return replay.finish(horizon, end_time);
}

/// One of the four time parameterizations. For discrete variants `duration`
/// is a step count and event times are step indices 1, 2, ...; continuous
/// variants use `duration` as the horizon. Events are always recorded.
inline ProcessPath simulate_variant(std::size_t n, double duration, Variant variant,
                                    std::uint64_t seed, std::uint32_t replicate = 0,
                                    RecorderSpec spec = {}) {
    spec.record_events = true;
    if (variant == Variant::continuous_variable) {
        spec.stop_when_absorbed = false;
        return simulate(n, duration, seed, replicate, spec);
    }
    if (duration < 0) {
        throw std::invalid_argument("simulate_variant: negative duration");
    }
    SwapReplay replay(n, spec);
    CounterEngine engine(seed, StreamTag::variant, replicate, static_cast<std::uint32_t>(variant));
    AscentSet ascents(replay.state());
    double end_time = duration;
    if (variant == Variant::continuous_fixed) {
        double t = 0;
        while (!ascents.empty()) {
            t += engine.exponential();
            if (t > duration) {
                break;
            }
            const std::size_t i = ascents.sample(engine);
            replay.force_swap(t, i);
            ascents.update_after_swap(replay.state(), i);
        }
    } else {
        const auto steps = static_cast<std::size_t>(std::floor(duration));
        std::uniform_int_distribution<std::size_t> any_bond(1, n - 1);
        for (std::size_t step = 1; step <= steps; ++step) {
            const auto t = static_cast<double>(step);
            if (variant == Variant::discrete_variable) {
                const std::size_t i = any_bond(engine);
                if (replay.attempt(t, i)) {
                    ascents.update_after_swap(replay.state(), i);
                }
            } else if (!ascents.empty()) {
                const std::size_t i = ascents.sample(engine);
                replay.force_swap(t, i);
                ascents.update_after_swap(replay.state(), i);
            }
        }
    }
    return replay.finish(duration, end_time);
}

/// Distinct states visited, starting from the identity; needs recorded events.
inline std::vector<Permutation> visited_states(const ProcessPath& path) {
    std::vector<Permutation> out{Permutation(path.n)};
    Permutation sigma(path.n);
    for (const auto& ev : path.events) {
        if (ev.applied) {
            sigma.swap_adjacent(ev.bond);
            out.push_back(sigma);
        }
    }
    return out;
}

/// n-point measure (1/n) Σ δ(k/n, η(k)/n) of one configuration.
class EmpiricalMeasure {
  public:
    explicit EmpiricalMeasure(const Permutation& eta) : eta_(eta) {}

    std::size_t size() const { return eta_.size(); }

    /// (k/n, η(k)/n) for k = 1..n.
    std::vector<std::pair<double, double>> points() const {
        const auto n = static_cast<double>(size());
        std::vector<std::pair<double, double>> out;
        out.reserve(size());
        for (std::size_t k = 1; k <= size(); ++k) {
            out.emplace_back(static_cast<double>(k) / n, static_cast<double>(eta_.at(k)) / n);
        }
        return out;
    }

    /// Mass of [0, x] × [0, y].
    double cdf(double x, double y) const {
        const auto n = static_cast<double>(size());
        const auto cols = static_cast<std::int64_t>(std::floor(x * n + 1e-9));
        const auto rows = static_cast<std::int64_t>(std::floor(y * n + 1e-9));
        const std::size_t last = static_cast<std::size_t>(
            std::clamp<std::int64_t>(cols, 0, static_cast<std::int64_t>(size())));
        std::size_t count = 0;
        for (std::size_t k = 1; k <= last; ++k) {
            if (eta_.at(k) <= rows) {
                ++count;
            }
        }
        return static_cast<double>(count) / n;
    }

  private:
    Permutation eta_;
};

/// μ_s from the snapshot taken at time s·n.
inline EmpiricalMeasure empirical_measure(const ProcessPath& path, double s) {
    return EmpiricalMeasure(path.snapshot_at(s * static_cast<double>(path.n)).state);
}

/// T_k(s) = η_{ns}⁻¹(k)/n on the given grid of scaled times.
inline std::vector<double> scaled_trajectory(const ProcessPath& path, std::size_t k,
                                             const std::vector<double>& s_grid) {
    if (k < 1 || k > path.n) {
        throw std::invalid_argument("scaled_trajectory: particle out of range");
    }
    const Trajectory& tr = path.trajectory_of(k);
    const auto n = static_cast<double>(path.n);
    std::vector<double> out;
    out.reserve(s_grid.size());
    for (const double s : s_grid) {
        const double t = s * n;
        if (t > path.end_time && !path.finish[k]) {
            throw std::invalid_argument("scaled_trajectory: time beyond the replay");
        }
        out.push_back(static_cast<double>(tr.position_at(t)) / n);
    }
    return out;
}

}  // namespace osp
