// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "osp/clock.hpp"
#include "osp/limits.hpp"
#include "osp/stats.hpp"
#include "osp/swap_process.hpp"

namespace {

using osp::Permutation;

// Retrospective oracle: replay the merged clocks on a plain vector and read
// each particle's finishing time as its last move, if it ends at n+1-k.
struct NaiveRun {
    std::vector<int> state;
    std::vector<std::optional<double>> finish;
};

NaiveRun naive_replay(std::size_t n, double horizon, std::uint64_t seed, std::uint32_t rep) {
    NaiveRun out{std::vector<int>(n), std::vector<std::optional<double>>(n + 1)};
    for (std::size_t i = 0; i < n; ++i) {
        out.state[i] = static_cast<int>(i + 1);
    }
    std::vector<double> last_move(n + 1, 0.0);
    for (const auto& ev : osp::merge_events(seed, rep, 1, static_cast<osp::Bond>(n) - 1, horizon)) {
        const auto i = static_cast<std::size_t>(ev.bond);
        if (out.state[i - 1] < out.state[i]) {
            std::swap(out.state[i - 1], out.state[i]);
            last_move[static_cast<std::size_t>(out.state[i - 1])] = ev.time;
            last_move[static_cast<std::size_t>(out.state[i])] = ev.time;
        }
    }
    bool absorbed = true;
    for (std::size_t i = 0; i < n; ++i) {
        absorbed = absorbed && out.state[i] == static_cast<int>(n - i);
    }
    if (absorbed) {
        for (std::size_t k = 1; k <= n; ++k) {
            out.finish[k] = last_move[k];
        }
    }
    return out;
}

TEST(Simulate, TwoParticles) {
    const auto rings = osp::ring_times(17, 0, 1, 100.0);
    ASSERT_FALSE(rings.empty());
    osp::RecorderSpec spec;
    spec.snapshot_times = {rings[0] / 2, rings[0]};
    const auto path = osp::simulate(2, 100.0, 17, 0, spec);
    EXPECT_TRUE(path.snapshot_at(rings[0] / 2).state.is_identity());
    EXPECT_TRUE(path.snapshot_at(rings[0]).state.is_reversed());
    EXPECT_EQ(*path.finish[1], rings[0]);
    EXPECT_EQ(*path.finish[2], rings[0]);
    EXPECT_EQ(*path.beta_star(), rings[0]);
}

TEST(Simulate, MatchesNaiveReplay) {
    for (std::uint32_t rep = 0; rep < 20; ++rep) {
        const std::size_t n = 5 + rep;
        const double horizon = 4.0 * static_cast<double>(n);
        osp::RecorderSpec spec;
        spec.stop_when_absorbed = false;
        const auto path = osp::simulate(n, horizon, 3, rep, spec);
        const auto oracle = naive_replay(n, horizon, 3, rep);
        for (std::size_t i = 1; i <= n; ++i) {
            ASSERT_EQ(path.final_state.at(i), oracle.state[i - 1]);
        }
        if (path.absorbed()) {
            for (std::size_t k = 1; k <= n; ++k) {
                ASSERT_EQ(path.finish[k], oracle.finish[k]) << "n=" << n << " k=" << k;
            }
        }
    }
}

TEST(Simulate, InversionsIncrementAlongEvents) {
    osp::RecorderSpec spec;
    spec.record_events = true;
    spec.stop_when_absorbed = false;
    const auto path = osp::simulate(30, 90.0, 1, 0, spec);
    Permutation sigma(30);
    std::int64_t inv = 0;
    for (const auto& ev : path.events) {
        const bool ascent = sigma.at(ev.bond) < sigma.at(ev.bond + 1);
        ASSERT_EQ(ascent, ev.applied);
        if (ev.applied) {
            sigma.swap_adjacent(ev.bond);
            ++inv;
            ASSERT_EQ(osp::inversion_number(sigma), inv);
        }
    }
    EXPECT_EQ(sigma, path.final_state);
    EXPECT_TRUE(path.absorbed());
}

TEST(Simulate, TrajectoriesAgreeWithSnapshots) {
    osp::RecorderSpec spec;
    spec.track_all = true;
    for (int i = 1; i <= 10; ++i) {
        spec.snapshot_times.push_back(5.0 * i);
    }
    const auto path = osp::simulate(25, 60.0, 4, 2, spec);
    for (const auto& snap : path.snapshots) {
        const Permutation inv = snap.state.inverse();
        for (std::size_t k = 1; k <= 25; ++k) {
            ASSERT_EQ(path.trajectory_of(k).position_at(snap.time), static_cast<std::size_t>(inv.at(k)));
            ASSERT_EQ(snap.state.position_of(static_cast<Permutation::Label>(k)),
                      static_cast<std::size_t>(inv.at(k)));
        }
        ASSERT_EQ(snap.inversions, osp::inversion_number(snap.state));
    }
}

TEST(ScaledTrajectory, MonotoneExtremesAndFinalValue) {
    const std::size_t n = 200;
    osp::RecorderSpec spec;
    spec.tracked = {1, n, 60};
    const auto path = osp::simulate(n, 2.5 * n, 8, 0, spec);
    ASSERT_TRUE(path.absorbed());
    std::vector<double> grid;
    for (int i = 0; i <= 250; ++i) {
        grid.push_back(0.01 * i);
    }
    const auto first = osp::scaled_trajectory(path, 1, grid);
    const auto last = osp::scaled_trajectory(path, n, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        EXPECT_GE(first[i], first[i - 1]);
        EXPECT_LE(last[i], last[i - 1]);
    }
    const auto mid = osp::scaled_trajectory(path, 60, {*path.finish[60] / n + 0.1});
    EXPECT_DOUBLE_EQ(mid[0], static_cast<double>(n + 1 - 60) / n);
    EXPECT_THROW(osp::scaled_trajectory(path, 0, grid), std::invalid_argument);
}

TEST(ScaledTrajectory, AfterFinishingTime) {
    const std::size_t n = 1000;
    const std::size_t k = 300;
    const double s = osp::limits::gamma_y(0.3) + 0.1;
    osp::RecorderSpec spec;
    spec.tracked = {k};
    spec.snapshot_times = {s * n};
    const auto path = osp::simulate(n, s * n, 42, 0, spec);
    ASSERT_TRUE(path.finish[k].has_value());
    EXPECT_DOUBLE_EQ(osp::scaled_trajectory(path, k, {s})[0], 0.701);
}

TEST(EmpiricalMeasure, IdentityAndReverse) {
    const std::size_t n = 50;
    osp::RecorderSpec spec;
    spec.snapshot_times = {0.0};
    const auto path = osp::simulate(n, 3.0 * n, 6, 0, spec);
    ASSERT_TRUE(path.absorbed());
    const auto start = osp::empirical_measure(path, 0.0);
    const auto end = osp::EmpiricalMeasure(path.final_state);
    for (double x = 0; x <= 1.0; x += 0.07) {
        for (double y = 0; y <= 1.0; y += 0.09) {
            const double expect = std::min(std::floor(n * x + 1e-9), std::floor(n * y + 1e-9)) / n;
            EXPECT_NEAR(start.cdf(x, y), expect, 1e-12);
            EXPECT_NEAR(end.cdf(x, y), std::max(x + y - 1, 0.0), 2.0 / n);
        }
    }
    EXPECT_EQ(start.points().size(), n);
    EXPECT_THROW(osp::empirical_measure(path, 0.3), std::invalid_argument);
}

TEST(SimulateVariant, InversionNumberEqualsStepIndex) {
    for (auto v : {osp::Variant::continuous_variable, osp::Variant::continuous_fixed, osp::Variant::discrete_variable,
                   osp::Variant::discrete_fixed}) {
        const auto path = osp::simulate_variant(8, 200, v, 5);
        const auto states = osp::visited_states(path);
        for (std::size_t j = 0; j < states.size(); ++j) {
            ASSERT_EQ(osp::inversion_number(states[j]), static_cast<std::int64_t>(j)) << osp::to_string(v);
        }
        EXPECT_EQ(osp::parse_variant(osp::to_string(v)), v);
    }
    EXPECT_THROW(osp::parse_variant("sideways"), std::invalid_argument);
}

TEST(SimulateVariant, DiscreteFixedFrequencies) {
    const int m = 1000000;
    const auto target = Permutation::from_one_line({2, 4, 1, 3});
    const auto other = Permutation::from_one_line({3, 1, 4, 2});
    int hits = 0;
    int hits_other = 0;
    for (int r = 0; r < m; ++r) {
        const auto path = osp::simulate_variant(4, 3, osp::Variant::discrete_fixed, 1, static_cast<std::uint32_t>(r));
        hits += path.final_state == target;
        hits_other += path.final_state == other;
    }
    const double p = static_cast<double>(hits) / m;
    EXPECT_LT(std::abs(p - 1.0 / 3), 3 * std::sqrt(1.0 / 3 * 2.0 / 3 / m));
    const double q = static_cast<double>(hits_other) / m;
    EXPECT_LT(std::abs(q - 1.0 / 6), 3 * std::sqrt(1.0 / 6 * 5.0 / 6 / m));
}

TEST(SimulateVariant, ContinuousAndDiscreteShareSkeleton) {
    // Feeding the continuous path's ring bonds to the discrete-variable rule
    // reproduces the same visited states.
    const auto cont = osp::simulate_variant(7, 40.0, osp::Variant::continuous_variable, 9);
    Permutation sigma(7);
    std::vector<Permutation> visited{sigma};
    for (const auto& ev : cont.events) {
        if (osp::apply_sort(sigma, ev.bond) != sigma) {
            sigma = osp::apply_sort(sigma, ev.bond);
            visited.push_back(sigma);
        }
    }
    EXPECT_EQ(visited, osp::visited_states(cont));
}

TEST(Simulate, FirstParticleGammaLaw) {
    const std::size_t n = 100;
    osp::RecorderSpec spec;
    spec.stop_when_finished = {1};
    std::vector<double> beta;
    for (std::uint32_t r = 0; r < 2000; ++r) {
        beta.push_back(*osp::simulate(n, 3.0 * n, 77, r, spec).finish[1]);
    }
    const double d = osp::stats::ks_distance(beta, [](double x) { return osp::stats::gamma_cdf(99, x); });
    EXPECT_LT(d, 0.04);
}

TEST(Simulate, SymmetryUnderInverseSmall) {
    std::map<Permutation, long long> counts;
    osp::RecorderSpec spec;
    spec.snapshot_times = {3.0};
    for (std::uint32_t r = 0; r < 20000; ++r) {
        ++counts[osp::simulate(4, 3.0, 12, r, spec).snapshot_at(3.0).state];
    }
    const auto test = osp::stats::bowker_test<Permutation>(counts, [](const Permutation& p) { return p.inverse(); });
    EXPECT_GT(test.p_value, 0.001);
}

TEST(Simulate, RejectsBadInput) {
    EXPECT_THROW(osp::simulate(1, 1.0, 0, 0), std::invalid_argument);
    EXPECT_THROW(osp::simulate(5, -1.0, 0, 0), std::invalid_argument);
}

}  // namespace
