// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "osp/stats.hpp"

namespace {

namespace st = osp::stats;

double std_uniform(double x) { return std::clamp(x, 0.0, 1.0); }

TEST(Stats, PairwiseSumAndMean) {
    std::vector<double> xs(1000, 0.1);
    EXPECT_NEAR(st::pairwise_sum(xs), 100.0, 1e-12);
    EXPECT_NEAR(st::mean(xs), 0.1, 1e-15);
    EXPECT_THROW(st::mean(std::vector<double>{}), std::invalid_argument);
}

TEST(Stats, KsExamples) {
    EXPECT_DOUBLE_EQ(st::ks_distance({0.5}, std_uniform), 0.5);
    // Constant sample at c against a continuous CDF: distance is max(F(c), 1 - F(c)).
    EXPECT_NEAR(st::ks_distance(std::vector<double>(50, 0.2), std_uniform), 0.8, 1e-15);
    // Atom in the model: sample sitting exactly on it.
    auto atom = [](double x) { return x < 0 ? 0.0 : 1.0; };
    EXPECT_DOUBLE_EQ(st::ks_distance({0.0, 0.0, 0.0}, atom), 0.0);
    std::vector<double> grid;
    for (int i = 1; i <= 100; ++i) {
        grid.push_back((i - 0.5) / 100);
    }
    EXPECT_NEAR(st::ks_distance(grid, std_uniform), 0.005, 1e-12);
    EXPECT_THROW(st::ks_distance({}, std_uniform), std::invalid_argument);
}

TEST(Stats, KsCalibration) {
    // DKW: P[D > t] <= 2 exp(-2 m t²); at m = 2000, t = 0.04 this is 3e-3.
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0, 1);
    int exceed = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs(2000);
        for (auto& x : xs) {
            x = u(gen);
        }
        exceed += st::ks_distance(xs, std_uniform) > 0.04;
    }
    EXPECT_LE(exceed, 1);
}

TEST(Stats, OneAndTwoSample) {
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> b{3, 4, 5, 6};
    EXPECT_DOUBLE_EQ(st::ks_one_sided(a, b), 0.5);
    EXPECT_DOUBLE_EQ(st::ks_one_sided(b, a), 0.0);
    EXPECT_DOUBLE_EQ(st::ks_two_sample(a, b), 0.5);
    EXPECT_DOUBLE_EQ(st::ks_two_sample(a, a), 0.0);
    EXPECT_THROW(st::ks_one_sided({}, a), std::invalid_argument);
}

TEST(Stats, Cdfs) {
    EXPECT_NEAR(st::gamma_cdf(1, 1), 1 - std::exp(-1.0), 1e-15);
    EXPECT_NEAR(st::gamma_cdf(2, 1), 1 - 2 * std::exp(-1.0), 1e-15);
    EXPECT_EQ(st::gamma_cdf(3, -1), 0.0);
    EXPECT_DOUBLE_EQ(st::uniform_cdf(-1, 1, 0), 0.5);
    EXPECT_DOUBLE_EQ(st::uniform_cdf(-1, 1, 5), 1.0);
}

TEST(Stats, BowkerTest) {
    auto swap_case = [](const std::string& s) {
        std::string out = s;
        for (auto& c : out) {
            c = static_cast<char>(std::islower(c) ? std::toupper(c) : std::tolower(c));
        }
        return out;
    };
    const std::function<std::string(const std::string&)> partner = swap_case;
    const std::map<std::string, long long> sym{{"a", 50}, {"A", 50}, {"b", 30}, {"B", 30}};
    const auto s = st::bowker_test(sym, partner);
    EXPECT_EQ(s.dof, 2);
    EXPECT_DOUBLE_EQ(s.statistic, 0.0);
    EXPECT_DOUBLE_EQ(s.p_value, 1.0);
    const std::map<std::string, long long> skew{{"a", 80}, {"A", 20}, {"c", 9}};
    const auto t = st::bowker_test(skew, partner);
    // (80-20)²/100 = 36 from (a, A), 9 from the unmatched c.
    EXPECT_EQ(t.dof, 2);
    EXPECT_DOUBLE_EQ(t.statistic, 45.0);
    EXPECT_LT(t.p_value, 1e-9);
    const std::map<std::string, long long> edge{{"a", 0}, {"A", 0}};
    EXPECT_EQ(st::bowker_test(edge, partner).dof, 0);
}

TEST(Stats, ParallelMapIsThreadCountInvariant) {
    auto fn = [](std::size_t i) {
        std::mt19937_64 gen(i);
        return std::uniform_real_distribution<double>(0, 1)(gen);
    };
    const auto serial = st::parallel_map(1000, 1, fn);
    for (unsigned t : {2u, 3u, 8u}) {
        EXPECT_EQ(st::parallel_map(1000, t, fn), serial);
    }
    EXPECT_TRUE(st::parallel_map(0, 4, fn).empty());
    EXPECT_GE(st::resolve_threads(0), 1u);
    EXPECT_EQ(st::resolve_threads(5), 5u);
}

TEST(Stats, ParallelMapPropagatesErrors) {
    auto bad = [](std::size_t i) -> int {
        if (i == 17) {
            throw std::runtime_error("boom");
        }
        return static_cast<int>(i);
    };
    EXPECT_THROW(st::parallel_map(100, 4, bad), std::runtime_error);
    EXPECT_THROW(st::parallel_map(100, 1, bad), std::runtime_error);
}

}  // namespace
