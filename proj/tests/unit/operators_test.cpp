// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "osp/operators.hpp"
#include "osp/permutation.hpp"

namespace {

using osp::BinaryConfig;
using osp::Site;

BinaryConfig sites(std::vector<Site> s) { return BinaryConfig::from_sites(std::move(s)); }

std::vector<Site> particles(const BinaryConfig& c) {
    std::vector<Site> out(c.window_particles().begin(), c.window_particles().end());
    std::sort(out.begin(), out.end());
    return out;
}

TEST(Project, IdentityGivesStep) {
    const osp::Permutation id(6);
    for (std::int64_t k = 0; k <= 6; ++k) {
        const auto c = osp::project(id, k);
        for (Site x = -3; x <= 10; ++x) {
            EXPECT_EQ(c.at(x), x >= 1 && x <= k) << "k=" << k << " x=" << x;
        }
    }
}

TEST(Project, SmallLabelOnly) {
    const auto c = osp::project(osp::Permutation::from_one_line({2, 3, 1}), 1);
    EXPECT_EQ(particles(c), (std::vector<Site>{3}));
    EXPECT_EQ(c.particle_count(), 1);
}

TEST(Cutoff, Examples) {
    EXPECT_EQ(particles(osp::cutoff(sites({1, 2, 5}), 2)), (std::vector<Site>{2, 5}));
    EXPECT_EQ(osp::cutoff(sites({1, 2, 5}), 3), sites({1, 2, 5}));
    EXPECT_EQ(osp::cutoff(sites({1, 2, 5}), 9), sites({1, 2, 5}));
    EXPECT_TRUE(osp::cutoff(sites({1, 2, 5}), 0).is_empty());
    EXPECT_EQ(particles(osp::cutoff(BinaryConfig::step(0), 3)), (std::vector<Site>{-2, -1, 0}));
    EXPECT_THROW(osp::cutoff(sites({1}), -1), std::invalid_argument);
}

TEST(Pushback, Examples) {
    EXPECT_EQ(particles(osp::pushback(sites({2, 5, 7}), 4)), (std::vector<Site>{2, 3, 4}));
    EXPECT_EQ(osp::pushback(sites({1, 3}), 4), sites({1, 3}));
    const auto b = osp::pushback(BinaryConfig::step(10), 4);
    EXPECT_EQ(b, BinaryConfig::step(4));
}

TEST(Jump, Examples) {
    EXPECT_EQ(particles(osp::jump(sites({2, 5}), 2)), (std::vector<Site>{3, 5}));
    EXPECT_EQ(osp::jump(sites({2, 5}), 1), sites({2, 5}));
    EXPECT_EQ(osp::jump(sites({2, 3}), 2), sites({2, 3}));
    EXPECT_EQ(osp::jump(BinaryConfig::step(0), 0), BinaryConfig::from_sites({1}, -1));
}

TEST(Queue, Examples) {
    const auto rho = sites({2, 5, 7});
    EXPECT_EQ(rho.queue_length(4), 2);
    EXPECT_EQ(rho.particle_pos(2), 5);
    EXPECT_THROW(rho.particle_pos(4), std::invalid_argument);
    EXPECT_THROW(rho.particle_pos(0), std::invalid_argument);
    const auto two = sites({2, 5});
    EXPECT_EQ(two.hole_pos(6, 0), 7);
    EXPECT_EQ(two.hole_pos(6, 1), 6);
    EXPECT_EQ(two.hole_pos(6, 2), 4);
    EXPECT_EQ(two.hole_pos(6, 3), 3);
    EXPECT_THROW(BinaryConfig::step(6).hole_pos(6, 1), std::invalid_argument);
    EXPECT_EQ(BinaryConfig::step(3).queue_length(0), 3);
    EXPECT_EQ(BinaryConfig::step(3).particle_pos(5), -1);
}

TEST(Discrepancy, Examples) {
    EXPECT_EQ(osp::discrepancy(sites({1, 3}), sites({3})), 1);
    EXPECT_THROW(osp::discrepancy(sites({3}), sites({1, 3})), osp::IncompatiblePair);
    EXPECT_THROW(osp::discrepancy(sites({1, 3}), sites({1, 3})), osp::IncompatiblePair);
    EXPECT_THROW(osp::discrepancy(sites({1, 2, 3}), sites({3})), osp::IncompatiblePair);
    EXPECT_THROW(osp::discrepancy(BinaryConfig::step(0), sites({0})), osp::IncompatiblePair);
    EXPECT_EQ(osp::discrepancy(BinaryConfig::step(0), BinaryConfig::step(-1)), 0);
}

TEST(SecondClassPair, LocalRuleMatchesDiff) {
    osp::SecondClassPair pair(BinaryConfig::step(0), BinaryConfig::step(-1));
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<Site> bond(-8, 8);
    for (int i = 0; i < 2000; ++i) {
        pair = pair.jump_at(bond(gen));
        ASSERT_EQ(pair.site(), osp::discrepancy(pair.first(), pair.second()));
    }
}

// Independent generator from the harness one: arbitrary finite or
// left-filled configurations on a short window.
BinaryConfig random_config(std::mt19937_64& gen) {
    std::uniform_int_distribution<Site> base(-6, 6);
    std::uniform_int_distribution<int> width(0, 14);
    std::bernoulli_distribution coin(0.5);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(width(gen)));
    for (auto& b : bits) {
        b = coin(gen);
    }
    return BinaryConfig::from_window(base(gen), std::move(bits), coin(gen));
}

TEST(Operators, QueueIdentitiesOnRandomConfigs) {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<std::int64_t> kd(0, 8);
    std::uniform_int_distribution<Site> nd(-4, 20);
    for (int it = 0; it < 10000; ++it) {
        const auto rho = random_config(gen);
        const auto k = kd(gen);
        const auto n = nd(gen);
        const auto rk = osp::cutoff(rho, k);
        const auto bn = osp::pushback(rho, n);
        for (Site x = -20; x <= 30; ++x) {
            ASSERT_EQ(rk.queue_length(x), std::min(rho.queue_length(x), k)) << rho.to_string();
            ASSERT_EQ(bn.queue_length(x), std::min(rho.queue_length(x), std::max<Site>(n - x, 0)))
                << rho.to_string() << " n=" << n;
        }
        ASSERT_EQ(osp::pushback(rk, n), osp::cutoff(bn, k));
        for (std::int64_t j = 1; j <= 6; ++j) {
            if (rho.particle_count() && *rho.particle_count() < j) {
                break;
            }
            ASSERT_EQ(rho.queue_length(rho.particle_pos(j)), j - 1);
        }
    }
}

TEST(Operators, JumpCommutation) {
    std::mt19937_64 gen(12);
    std::uniform_int_distribution<std::int64_t> kd(0, 8);
    std::uniform_int_distribution<Site> nd(2, 20);
    for (int it = 0; it < 10000; ++it) {
        const auto rho = random_config(gen);
        const auto k = kd(gen);
        const auto n = nd(gen);
        const auto brk = osp::pushback(osp::cutoff(rho, k), n);
        const Site inside = std::uniform_int_distribution<Site>(1, n - 1)(gen);
        ASSERT_EQ(osp::pushback(osp::cutoff(osp::jump(rho, inside), k), n), osp::jump(brk, inside));
        const Site beyond = std::uniform_int_distribution<Site>(n, n + 10)(gen);
        ASSERT_EQ(osp::pushback(osp::cutoff(osp::jump(rho, beyond), k), n), brk);
        const bool right_of_zero =
            k == 0 || ((!rho.particle_count() || *rho.particle_count() >= k) && rho.particle_pos(k) >= 1);
        if (right_of_zero) {
            const Site left = std::uniform_int_distribution<Site>(-10, 0)(gen);
            ASSERT_EQ(osp::pushback(osp::cutoff(osp::jump(rho, left), k), n), brk);
        }
    }
}

TEST(Operators, PairDiscrepancyUnderCutoffAndPushback) {
    std::mt19937_64 gen(13);
    std::uniform_int_distribution<std::int64_t> kd(1, 8);
    std::uniform_int_distribution<Site> nd(-4, 20);
    int cut_checks = 0;
    int push_checks = 0;
    for (int it = 0; it < 10000; ++it) {
        const auto lower = random_config(gen);
        std::vector<Site> holes;
        for (Site x = lower.window_begin() - 2; x <= lower.window_end() + 2; ++x) {
            if (!lower.at(x)) {
                holes.push_back(x);
            }
        }
        const Site extra = holes[std::uniform_int_distribution<std::size_t>(0, holes.size() - 1)(gen)];
        std::vector<Site> s(lower.window_particles().begin(), lower.window_particles().end());
        s.push_back(extra);
        const auto upper = BinaryConfig::from_sites(std::move(s), lower.frontier());
        const Site sigma = osp::discrepancy(upper, lower);
        ASSERT_EQ(sigma, extra);
        const auto k = kd(gen);
        const auto n = nd(gen);
        if (!upper.particle_count() || *upper.particle_count() >= k) {
            ++cut_checks;
            ASSERT_EQ(osp::discrepancy(osp::cutoff(upper, k), osp::cutoff(lower, k - 1)),
                      std::max(sigma, upper.particle_pos(k)));
        }
        if (!upper.filled_left()) {
            ++push_checks;
            ASSERT_EQ(osp::discrepancy(osp::pushback(upper, n), osp::pushback(lower, n)),
                      std::min(sigma, upper.hole_pos(n, upper.queue_length(n))));
        }
    }
    EXPECT_GT(cut_checks, 1000);
    EXPECT_GT(push_checks, 1000);
}

}  // namespace
