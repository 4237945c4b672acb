// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "osp/clock.hpp"
#include "osp/stats.hpp"

namespace {

TEST(RingTimes, ZeroHorizonIsEmpty) { EXPECT_TRUE(osp::ring_times(1, 0, 5, 0.0).empty()); }

TEST(RingTimes, ExtensionKeepsPrefix) {
    const auto short_list = osp::ring_times(9, 2, -4, 10.0);
    const auto long_list = osp::ring_times(9, 2, -4, 20.0);
    ASSERT_LE(short_list.size(), long_list.size());
    EXPECT_TRUE(std::equal(short_list.begin(), short_list.end(), long_list.begin()));
    EXPECT_TRUE(std::is_sorted(long_list.begin(), long_list.end()));
    EXPECT_TRUE(std::adjacent_find(long_list.begin(), long_list.end()) == long_list.end());
    osp::ClockStream stream(9, 2, -4);
    auto a = stream.rings(10.0);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), short_list.begin(), short_list.end()));
    auto b = stream.rings(20.0);
    EXPECT_TRUE(std::equal(b.begin(), b.end(), long_list.begin(), long_list.end()));
}

TEST(RingTimes, MeanCountOnUnitHorizon) {
    const int streams = 100000;
    double total = 0;
    for (int b = 0; b < streams; ++b) {
        total += static_cast<double>(osp::ring_times(3, 0, b, 1.0).size());
    }
    EXPECT_NEAR(total / streams, 1.0, 0.02);
}

TEST(RingTimes, GapsAreExponential) {
    std::vector<double> gaps;
    for (int b = 0; gaps.size() < 100000; ++b) {
        const auto r = osp::ring_times(5, 1, b, 50.0);
        double prev = 0;
        for (const double t : r) {
            gaps.push_back(t - prev);
            prev = t;
        }
    }
    gaps.resize(100000);
    const double d = osp::stats::ks_distance(gaps, [](double x) { return x <= 0 ? 0.0 : 1 - std::exp(-x); });
    EXPECT_LT(d, 0.01);
}

TEST(MergeEvents, SingleBondMatchesRingTimes) {
    const auto events = osp::merge_events(4, 0, 7, 7, 30.0);
    const auto rings = osp::ring_times(4, 0, 7, 30.0);
    ASSERT_EQ(events.size(), rings.size());
    for (std::size_t i = 0; i < rings.size(); ++i) {
        EXPECT_EQ(events[i].time, rings[i]);
        EXPECT_EQ(events[i].bond, 7);
    }
}

TEST(MergeEvents, SortedUnionOfBonds) {
    const auto events = osp::merge_events(4, 0, 1, 2, 30.0);
    const auto a = osp::ring_times(4, 0, 1, 30.0);
    const auto b = osp::ring_times(4, 0, 2, 30.0);
    std::vector<double> expect(a);
    expect.insert(expect.end(), b.begin(), b.end());
    std::sort(expect.begin(), expect.end());
    ASSERT_EQ(events.size(), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        EXPECT_EQ(events[i].time, expect[i]);
    }
    EXPECT_TRUE(std::is_sorted(events.begin(), events.end()));
}

TEST(MergeEvents, EventCountConcentration) {
    const std::int64_t n = 1000;
    const double horizon = 2.0 * static_cast<double>(n);
    osp::EventStream stream(11, 0, 1, n - 1);
    std::int64_t count = 0;
    while (stream.next(horizon)) {
        ++count;
    }
    const double mean = static_cast<double>(n - 1) * horizon;
    EXPECT_LT(std::abs(static_cast<double>(count) - mean), 3 * std::sqrt(mean));
}

TEST(EventStream, DormantBondSkipsEarlierRings) {
    osp::EventStream stream(2, 0, 0, 0, false);
    EXPECT_FALSE(stream.next(100.0).has_value());
    stream.activate(0, 5.0);
    const auto rings = osp::ring_times(2, 0, 0, 100.0);
    std::vector<double> later;
    for (const double t : rings) {
        if (t > 5.0) {
            later.push_back(t);
        }
    }
    std::vector<double> got;
    while (auto ev = stream.next(100.0)) {
        got.push_back(ev->time);
    }
    EXPECT_EQ(got, later);
}

}  // namespace
