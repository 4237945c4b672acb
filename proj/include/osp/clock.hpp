// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Per-bond unit-rate Poisson clocks. Bond m joins sites m and m+1 for every
// m in Z, and its ring times depend only on (seed, replicate, m): every
// process built on the same key sees the same rings.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "osp/philox.hpp"

namespace osp {

using Bond = std::int64_t;

inline CounterEngine clock_engine(std::uint64_t seed, std::uint32_t replicate, Bond bond) {
    return CounterEngine(seed, StreamTag::clocks, replicate,
                         static_cast<std::uint32_t>(static_cast<std::int32_t>(bond)));
}

/// Lazily extended ring sequence of one bond. Gaps are Exp(1) draws taken
/// in order, so extending the horizon never alters earlier rings.
class ClockStream {
  public:
    ClockStream(std::uint64_t seed, std::uint32_t replicate, Bond bond)
        : seed_(seed), replicate_(replicate), bond_(bond),
          engine_(clock_engine(seed, replicate, bond)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint32_t replicate() const { return replicate_; }
    Bond bond() const { return bond_; }

    /// Ring times in [0, horizon], strictly increasing.
    std::span<const double> rings(double horizon) {
        if (horizon < 0) {
            throw std::invalid_argument("ClockStream: negative horizon");
        }
        while (last_ <= horizon) {
            last_ += engine_.exponential();
            generated_.push_back(last_);
        }
        std::size_t count = generated_.size();
        while (count > 0 && generated_[count - 1] > horizon) {
            --count;
        }
        return {generated_.data(), count};
    }

    /// Number of exponential draws consumed so far.
    std::size_t draws() const { return generated_.size(); }

  private:
    std::uint64_t seed_;
    std::uint32_t replicate_;
    Bond bond_;
    CounterEngine engine_;
    std::vector<double> generated_;
    double last_ = 0.0;
};

inline std::vector<double> ring_times(std::uint64_t seed, std::uint32_t replicate, Bond bond,
                                      double horizon) {
    ClockStream stream(seed, replicate, bond);
    auto r = stream.rings(horizon);
    return {r.begin(), r.end()};
}

struct Event {
    double time;
    Bond bond;

    friend bool operator<(const Event& a, const Event& b) {
        return a.time < b.time || (a.time == b.time && a.bond < b.bond);
    }
    friend bool operator==(const Event&, const Event&) = default;
};

/// Time-ordered merge of the clocks on bonds [first, last], produced on
/// demand from a binary heap of per-bond cursors. Bonds may start dormant
/// and be activated later; rings of a dormant bond before its activation
/// time are consumed and discarded.
class EventStream {
  public:
    EventStream(std::uint64_t seed, std::uint32_t replicate, Bond first, Bond last,
                bool all_active = true)
        : first_(first) {
        if (last < first) {
            throw std::invalid_argument("EventStream: empty bond range");
        }
        const auto count = static_cast<std::size_t>(last - first + 1);
        cursors_.reserve(count);
        for (Bond b = first; b <= last; ++b) {
            cursors_.push_back({clock_engine(seed, replicate, b), 0.0, false});
        }
        if (all_active) {
            heap_.reserve(count);
            for (std::size_t i = 0; i < count; ++i) {
                Cursor& c = cursors_[i];
                c.next = c.engine.exponential();
                c.active = true;
                heap_.push_back({c.next, static_cast<std::int32_t>(i)});
            }
            for (std::size_t i = heap_.size() / 2; i-- > 0;) {
                sift_down(i);
            }
        }
    }

    Bond first_bond() const { return first_; }
    Bond last_bond() const { return first_ + static_cast<Bond>(cursors_.size()) - 1; }

    bool is_active(Bond bond) const { return cursors_[index(bond)].active; }

    /// Starts delivering rings of `bond` strictly after time `now`.
    void activate(Bond bond, double now) {
        Cursor& c = cursors_[index(bond)];
        if (c.active) {
            return;
        }
        c.active = true;
        do {
            c.next += c.engine.exponential();
        } while (c.next <= now);
        heap_.push_back({c.next, static_cast<std::int32_t>(index(bond))});
        sift_up(heap_.size() - 1);
    }

    /// Next ring with time <= horizon, or nullopt once none remain.
    std::optional<Event> next(double horizon) {
        if (heap_.empty() || heap_.front().time > horizon) {
            return std::nullopt;
        }
        const Entry top = heap_.front();
        Cursor& c = cursors_[static_cast<std::size_t>(top.slot)];
        c.next += c.engine.exponential();
        heap_.front().time = c.next;
        sift_down(0);
        return Event{top.time, first_ + top.slot};
    }

  private:
    struct Cursor {
        CounterEngine engine;
        double next;
        bool active;
    };
    struct Entry {
        double time;
        std::int32_t slot;
    };

    static bool before(const Entry& a, const Entry& b) {
        return a.time < b.time || (a.time == b.time && a.slot < b.slot);
    }

    std::size_t index(Bond bond) const {
        const Bond off = bond - first_;
        if (off < 0 || off >= static_cast<Bond>(cursors_.size())) {
            throw std::out_of_range("EventStream: bond outside range");
        }
        return static_cast<std::size_t>(off);
    }

    void sift_down(std::size_t i) {
        const std::size_t n = heap_.size();
        const Entry item = heap_[i];
        while (true) {
            std::size_t child = 2 * i + 1;
            if (child >= n) {
                break;
            }
            if (child + 1 < n && before(heap_[child + 1], heap_[child])) {
                ++child;
            }
            if (!before(heap_[child], item)) {
                break;
            }
            heap_[i] = heap_[child];
            i = child;
        }
        heap_[i] = item;
    }

    void sift_up(std::size_t i) {
        const Entry item = heap_[i];
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!before(item, heap_[parent])) {
                break;
            }
            heap_[i] = heap_[parent];
            i = parent;
        }
        heap_[i] = item;
    }

    Bond first_;
    std::vector<Cursor> cursors_;
    std::vector<Entry> heap_;
};

/// Materialized merge of bonds [first, last] up to `horizon`.
inline std::vector<Event> merge_events(std::uint64_t seed, std::uint32_t replicate, Bond first,
                                       Bond last, double horizon) {
    EventStream stream(seed, replicate, first, last);
    std::vector<Event> out;
    while (auto ev = stream.next(horizon)) {
        out.push_back(*ev);
    }
    return out;
}

}  // namespace osp
