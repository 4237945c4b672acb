// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "osp/philox.hpp"

namespace {

TEST(Philox, KnownAnswerZero) {
    const osp::Counter4 out = osp::philox4x32_10({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (osp::Counter4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
    const osp::Counter4 out =
        osp::philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
    EXPECT_EQ(out, (osp::Counter4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
    const osp::Counter4 out = osp::philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                                 {0xa4093822, 0x299f31d0});
    EXPECT_EQ(out, (osp::Counter4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterEngine, SeekReproducesStream) {
    osp::CounterEngine a(7, osp::StreamTag::test, 3, 11);
    std::vector<std::uint64_t> first;
    for (int i = 0; i < 9; ++i) {
        first.push_back(a());
    }
    for (std::uint64_t start : {0u, 1u, 4u, 7u}) {
        osp::CounterEngine b(7, osp::StreamTag::test, 3, 11, start);
        EXPECT_EQ(b.position(), start);
        for (std::uint64_t i = start; i < first.size(); ++i) {
            EXPECT_EQ(b(), first[i]);
        }
    }
}

TEST(CounterEngine, KeysSeparateStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t seed : {1u, 2u}) {
        for (auto tag : {osp::StreamTag::clocks, osp::StreamTag::lpp}) {
            for (std::uint32_t rep : {0u, 1u}) {
                for (std::uint32_t stream : {0u, 1u}) {
                    osp::CounterEngine e(seed, tag, rep, stream);
                    seen.insert(e());
                }
            }
        }
    }
    EXPECT_EQ(seen.size(), 16u);
}

TEST(CounterEngine, UniformInOpenInterval) {
    EXPECT_GT(osp::to_open_unit(0), 0.0);
    EXPECT_LT(osp::to_open_unit(~std::uint64_t{0}), 1.0);
    osp::CounterEngine e(1, osp::StreamTag::test, 0, 0);
    double sum = 0;
    const int m = 100000;
    for (int i = 0; i < m; ++i) {
        const double u = e.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / m, 0.5, 0.005);
}

}  // namespace
