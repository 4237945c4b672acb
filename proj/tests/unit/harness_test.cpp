// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>

#include "osp/harness.hpp"

namespace {

namespace h = osp::harness;

h::Experiment make(std::string kind, h::Json params = h::Json::object()) {
    h::Experiment e;
    e.kind = std::move(kind);
    e.parameters = std::move(params);
    return e;
}

void expect_same(const h::Report& a, const h::Report& b) {
    ASSERT_EQ(a.verdicts.size(), b.verdicts.size());
    for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
        EXPECT_EQ(a.verdicts[i].name, b.verdicts[i].name);
        EXPECT_EQ(a.verdicts[i].observed, b.verdicts[i].observed) << a.verdicts[i].name;
        EXPECT_EQ(a.verdicts[i].pass, b.verdicts[i].pass);
    }
}

TEST(Verdict, Rules) {
    EXPECT_TRUE(h::within("a", 1.04, 1, 0.05).pass);
    EXPECT_FALSE(h::within("a", 1.06, 1, 0.05).pass);
    EXPECT_TRUE(h::at_most("b", 0.02, 0.02).pass);
    EXPECT_FALSE(h::at_least("c", 0.89, 0.9).pass);
    EXPECT_TRUE(h::exact_zero("d", 0).pass);
    EXPECT_FALSE(h::exact_zero("d", 1).pass);
    EXPECT_FALSE(h::within("nan", std::nan(""), 0, 1).pass);
    h::Report r;
    r.verdicts.push_back(h::report_only(h::at_most("soft", 9, 1)));
    EXPECT_TRUE(r.passed());
    r.verdicts.push_back(h::at_most("hard", 9, 1));
    EXPECT_FALSE(r.passed());
}

TEST(Report, JsonRoundTrip) {
    auto e = make("identity-suite", {{"parts", {"enumeration"}}});
    const auto report = h::run_experiment(e);
    const auto text = h::to_json(report).dump();
    const auto back = h::report_from_json(h::Json::parse(text));
    EXPECT_EQ(back.experiment.kind, "identity-suite");
    EXPECT_EQ(back.experiment.parameters, report.experiment.parameters);
    expect_same(report, back);
    for (std::size_t i = 0; i < back.verdicts.size(); ++i) {
        EXPECT_EQ(back.verdicts[i].target, report.verdicts[i].target);
        EXPECT_EQ(back.verdicts[i].rule, report.verdicts[i].rule);
        EXPECT_EQ(back.verdicts[i].seed, 42u);
    }
}

TEST(Harness, ResolvedDefaultsAreLogged) {
    const auto report = h::run_experiment(make("symmetry", {{"n", 4}}));
    EXPECT_EQ(report.experiment.parameters.at("n"), 4);
    EXPECT_TRUE(report.experiment.parameters.contains("t"));
    EXPECT_GT(report.experiment.replicates, 0);
    for (const auto& v : report.verdicts) {
        EXPECT_EQ(v.replicates, report.experiment.replicates);
    }
}

TEST(Harness, DeterministicAndThreadInvariant) {
    auto a = make("symmetry");
    a.replicates = 4000;
    a.threads = 1;
    auto b = a;
    b.threads = 3;
    const auto ra = h::run_experiment(a);
    expect_same(ra, h::run_experiment(a));
    expect_same(ra, h::run_experiment(b));
    auto c = a;
    c.seed = 43;
    EXPECT_NE(h::run_experiment(c).verdicts[0].observed, ra.verdicts[0].observed);
}

TEST(Harness, RejectsInfeasibleExperiments) {
    EXPECT_THROW(h::run_experiment(make("no-such-kind")), h::InfeasibleExperiment);
    EXPECT_THROW(h::run_experiment(make("identity-suite", {{"parts", {"bogus"}}})), h::InfeasibleExperiment);
    EXPECT_THROW(h::run_experiment(make("hydro", {{"n", "large"}})), h::InfeasibleExperiment);
    EXPECT_THROW(h::run_experiment(make("hydro", h::Json::array())), h::InfeasibleExperiment);
    auto zero = make("symmetry");
    zero.replicates = 0;
    EXPECT_THROW(h::run_experiment(zero), h::InfeasibleExperiment);
    EXPECT_EQ(h::experiment_kinds().size(), 13u);
}

TEST(Harness, QuickSuitesPass) {
    for (const char* kind : {"identity-suite", "tw-numerics", "hydro"}) {
        const auto report = h::run_experiment(make(kind));
        EXPECT_TRUE(report.passed()) << kind;
    }
}

TEST(Harness, WritesArtifacts) {
    const auto dir = std::filesystem::temp_directory_path() / "osp_harness_test";
    std::filesystem::remove_all(dir);
    auto e = make("hydro");
    e.out_dir = dir.string();
    const auto report = h::run_experiment(e);
    ASSERT_FALSE(report.artifacts.empty());
    for (const auto& path : report.artifacts) {
        EXPECT_TRUE(std::filesystem::exists(path)) << path;
    }
    std::filesystem::remove_all(dir);
}

}  // namespace
