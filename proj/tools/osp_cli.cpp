// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// osp: command-line front end for simulation, limit evaluation, Tracy-Widom
// tables, LPP sampling, verification suites and report aggregation.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "osp/osp.hpp"

namespace {

using osp::harness::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Reads --config files: top-level keys are global flags, a nested object
// named after a subcommand holds that subcommand's flags.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        Json j = Json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) {
                continue;
            }
            const std::string name = opt->get_lnames()[0];
            if (opt->count() > 0) {
                j[name] = opt->results().size() == 1 ? Json(opt->results()[0]) : Json(opt->results());
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        for (const CLI::App* sub : app->get_subcommands({})) {
            const auto nested = Json::parse(to_config(sub, default_also, false, ""));
            if (!nested.empty()) {
                j[sub->get_name()] = nested;
            }
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        Json j;
        try {
            j = Json::parse(input);
        } catch (const Json::exception& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) {
            throw CLI::ConversionError("config file must hold a JSON object");
        }
        std::vector<CLI::ConfigItem> items;
        collect(j, {}, items);
        return items;
    }

  private:
    static std::string scalar(const Json& v) {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_boolean()) {
            return v.get<bool>() ? "true" : "false";
        }
        return v.dump();
    }

    static void collect(const Json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto next = parents;
                next.push_back(key);
                collect(value, next, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) {
                    item.inputs.push_back(scalar(v));
                }
            } else {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
    }
};

struct Globals {
    std::uint64_t seed = 42;
    std::int64_t replicates = -1;
    unsigned threads = 0;
    std::string out_dir;
    std::string format = "json";
};

Json globals_json(const Globals& g) {
    Json j;
    j["seed"] = g.seed;
    j["replicates"] = g.replicates;
    j["threads"] = g.threads;
    j["out_dir"] = g.out_dir;
    j["format"] = g.format;
    return j;
}

std::int64_t replicates_or(const Globals& g, std::int64_t fallback) {
    return g.replicates < 0 ? fallback : g.replicates;
}

void emit(const Globals& g, const Json& j, const osp::harness::CsvTable& table, const std::string& name) {
    if (g.format == "csv") {
        std::cout << table.str();
    } else {
        std::cout << j.dump(2) << "\n";
    }
    if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        const auto dir = std::filesystem::path(g.out_dir);
        table.write(dir / (name + ".csv"));
        std::ofstream(dir / (name + ".json")) << j.dump(2) << "\n";
    }
}

std::string rational_string(const osp::Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r) << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::size_t n = 0;
    std::optional<double> horizon;
    std::string variant = "continuous-variable";
    std::optional<double> steps;
    bool exact = false;
    std::vector<double> snapshots;
    std::vector<std::size_t> track;
    std::vector<double> grid;
    bool events = false;
};

int run_simulate(const Globals& g, const SimulateOptions& o) {
    if (o.n < 2) {
        throw UsageError("simulate: -n must be >= 2");
    }
    const osp::Variant variant = osp::parse_variant(o.variant);
    const bool discrete = variant == osp::Variant::discrete_variable || variant == osp::Variant::discrete_fixed;
    Json config = globals_json(g);
    config["n"] = o.n;
    config["variant"] = o.variant;
    if (o.exact) {
        if (!discrete || !o.steps) {
            throw UsageError("simulate: --exact needs a discrete variant and --steps");
        }
        const auto speed = variant == osp::Variant::discrete_fixed ? osp::Speed::fixed : osp::Speed::variable;
        const auto dist = osp::enumerate_discrete(o.n, static_cast<std::size_t>(*o.steps), speed);
        config["steps"] = *o.steps;
        config["exact"] = true;
        Json rows = Json::array();
        osp::harness::CsvTable table({"state_index", "inversions", "probability"});
        std::size_t index = 0;
        for (const auto& [sigma, p] : dist) {
            rows.push_back({{"state", sigma.to_string()},
                            {"inversions", osp::inversion_number(sigma)},
                            {"probability", rational_string(p)},
                            {"value", static_cast<double>(p)}});
            table.row({static_cast<double>(index++), static_cast<double>(osp::inversion_number(sigma)),
                       static_cast<double>(p)});
        }
        emit(g, {{"config", config}, {"distribution", rows}}, table, "distribution");
        return kExitOk;
    }
    const double nd = static_cast<double>(o.n);
    double duration = 0;
    if (discrete) {
        if (!o.steps) {
            throw UsageError("simulate: discrete variants need --steps");
        }
        duration = *o.steps;
        config["steps"] = duration;
    } else {
        duration = o.horizon.value_or(2.5 * nd);
        config["horizon"] = duration;
    }
    osp::RecorderSpec spec;
    spec.record_events = o.events;
    for (const double s : o.snapshots) {
        spec.snapshot_times.push_back(s * nd);
    }
    spec.tracked = o.track;
    for (const std::size_t k : o.track) {
        if (k < 1 || k > o.n) {
            throw UsageError("simulate: --track label out of range");
        }
    }
    config["snapshots"] = o.snapshots;
    config["track"] = o.track;
    config["grid"] = o.grid;
    const auto reps = replicates_or(g, 1);
    Json runs = Json::array();
    osp::harness::CsvTable finishing({"replicate", "k", "beta_over_n", "gamma_target"});
    osp::harness::CsvTable trajectories({"replicate", "s", "k", "position"});
    for (std::int64_t r = 0; r < reps; ++r) {
        const auto path = discrete || variant == osp::Variant::continuous_fixed
                              ? osp::simulate_variant(o.n, duration, variant, g.seed, static_cast<std::uint32_t>(r), spec)
                              : osp::simulate(o.n, duration, g.seed, static_cast<std::uint32_t>(r), spec);
        Json run;
        run["replicate"] = r;
        run["end_time"] = path.end_time;
        run["absorbed"] = path.absorbed();
        run["applied"] = path.applied;
        run["beta_star"] = path.beta_star() ? Json(*path.beta_star()) : Json(nullptr);
        Json finish = Json::array();
        for (std::size_t k = 1; k <= o.n; ++k) {
            finish.push_back(path.finish[k] ? Json(*path.finish[k]) : Json(nullptr));
            finishing.row({static_cast<double>(r), static_cast<double>(k),
                           path.finish[k] ? *path.finish[k] / nd : std::numeric_limits<double>::quiet_NaN(),
                           osp::limits::gamma_y(static_cast<double>(k) / nd)});
        }
        run["finish"] = finish;
        run["final_state"] = path.final_state.to_string();
        Json snaps = Json::array();
        for (const auto& s : path.snapshots) {
            snaps.push_back({{"time", s.time}, {"state", s.state.to_string()}, {"inversions", s.inversions}});
        }
        run["snapshots"] = snaps;
        Json tracks = Json::array();
        for (const auto& tr : path.trajectories) {
            Json moves = Json::array();
            for (const auto& [t, where] : tr.moves) {
                moves.push_back({t, where});
            }
            tracks.push_back({{"particle", tr.particle}, {"moves", moves}});
            if (!o.grid.empty() && !discrete) {
                const auto values = osp::scaled_trajectory(path, tr.particle, o.grid);
                for (std::size_t i = 0; i < values.size(); ++i) {
                    trajectories.row({static_cast<double>(r), o.grid[i], static_cast<double>(tr.particle), values[i]});
                }
            }
        }
        run["trajectories"] = tracks;
        if (o.events) {
            Json evs = Json::array();
            for (const auto& ev : path.events) {
                evs.push_back({ev.time, ev.bond, ev.applied});
            }
            run["events"] = evs;
        }
        runs.push_back(run);
    }
    const bool want_traj = !o.grid.empty() && !o.track.empty();
    emit(g, {{"config", config}, {"runs", runs}}, want_traj ? trajectories : finishing,
         want_traj ? "trajectories" : "finishing");
    return kExitOk;
}

// ------------------------------------------------------------------- tasep

struct TasepOptions {
    std::int64_t k = 0;
    double horizon = 0;
    std::vector<osp::Site> interval;
    std::optional<std::int64_t> margin;
    std::vector<double> snapshots;
    std::optional<std::size_t> coupling_n;
    bool second_class = false;
    std::vector<double> sample_times;
    std::int64_t verify_every = 0;
    double scale = 0;
};

int run_tasep(const Globals& g, const TasepOptions& o) {
    if (o.horizon < 0) {
        throw UsageError("tasep: --horizon must be >= 0");
    }
    if (!o.interval.empty() && o.interval.size() != 2) {
        throw UsageError("tasep: --interval takes two sites");
    }
    Json config = globals_json(g);
    config["k"] = o.k;
    config["horizon"] = o.horizon;
    osp::WindowPolicy policy;
    policy.initial_margin = o.margin;
    const auto reps = replicates_or(g, 1);
    if (o.coupling_n) {
        config["coupling_n"] = *o.coupling_n;
        Json runs = Json::array();
        osp::harness::CsvTable table({"replicate", "checks", "failures", "retries"});
        bool ok = true;
        for (std::int64_t r = 0; r < reps; ++r) {
            const auto rep = osp::check_coupling(*o.coupling_n, o.k, o.horizon, g.seed, static_cast<std::uint32_t>(r), policy);
            ok = ok && rep.failures() == 0;
            runs.push_back({{"replicate", r},
                            {"events", rep.events},
                            {"checks", rep.checks},
                            {"projection_failures", rep.projection_failures},
                            {"pushback_failures", rep.pushback_failures},
                            {"location_failures", rep.location_failures},
                            {"formula_failures", rep.formula_failures},
                            {"retries", rep.retries}});
            table.row({static_cast<double>(r), static_cast<double>(rep.checks), static_cast<double>(rep.failures()),
                       static_cast<double>(rep.retries)});
        }
        emit(g, {{"config", config}, {"coupling", runs}, {"pass", ok}}, table, "coupling");
        return ok ? kExitOk : kExitFailed;
    }
    if (o.second_class) {
        auto times = o.sample_times.empty() ? std::vector<double>{o.horizon} : o.sample_times;
        config["sample_times"] = times;
        config["verify_every"] = o.verify_every;
        Json runs = Json::array();
        osp::harness::CsvTable table({"replicate", "time", "site"});
        for (std::int64_t r = 0; r < reps; ++r) {
            const auto path = osp::second_class_trajectory(o.k, o.horizon, g.seed, static_cast<std::uint32_t>(r),
                                                           times, policy, o.verify_every);
            Json samples = Json::array();
            for (const auto& s : path.samples) {
                samples.push_back({{"time", s.time}, {"site", s.site}});
                table.row({static_cast<double>(r), s.time, static_cast<double>(s.site)});
            }
            runs.push_back({{"replicate", r},
                            {"retries", path.retries},
                            {"full_diff_checks", path.full_diff_checks},
                            {"full_diff_failures", path.full_diff_failures},
                            {"samples", samples}});
        }
        emit(g, {{"config", config}, {"second_class", runs}}, table, "second_class");
        return kExitOk;
    }
    osp::Domain domain = policy;
    if (!o.interval.empty()) {
        domain = osp::Interval{o.interval[0], o.interval[1]};
        config["interval"] = o.interval;
    }
    const double scale = o.scale > 0 ? o.scale : std::max(o.horizon, 1.0);
    config["scale"] = scale;
    Json runs = Json::array();
    osp::harness::CsvTable table({"replicate", "time", "x", "scaled_queue_length"});
    for (std::int64_t r = 0; r < reps; ++r) {
        const auto path = osp::simulate_tasep(o.k, domain, o.horizon, g.seed, static_cast<std::uint32_t>(r), o.snapshots);
        Json snaps = Json::array();
        auto add_profile = [&](double t, const osp::BinaryConfig& c) {
            const osp::Site lo = std::max(path.lattice.first, c.window_begin() - 1);
            const osp::Site hi = std::min(path.lattice.last, c.window_end());
            for (osp::Site x = lo; x <= hi; ++x) {
                table.row({static_cast<double>(r), t, static_cast<double>(x),
                           static_cast<double>(c.queue_length(x)) / scale});
            }
        };
        for (const auto& s : path.snapshots) {
            snaps.push_back({{"time", s.time}, {"config", s.config.to_string()}});
            add_profile(s.time, s.config);
        }
        add_profile(o.horizon, path.final_config);
        runs.push_back({{"replicate", r},
                        {"lattice", {path.lattice.first, path.lattice.last}},
                        {"retries", path.retries},
                        {"jumps", path.jumps},
                        {"snapshots", snaps},
                        {"final", path.final_config.to_string()}});
    }
    emit(g, {{"config", config}, {"runs", runs}}, table, "tasep_profile");
    return kExitOk;
}

// ------------------------------------------------------------------ limits

struct LimitsOptions {
    std::string quantity;
    std::vector<double> s{0.0};
    std::vector<double> x{0.0};
    std::vector<double> y{0.5};
    std::vector<double> u{0.0};
    double n = 1000;
};

const std::vector<std::string>& limit_quantities() {
    static const std::vector<std::string> q{
        "rost",  "lower-envelope", "upper-envelope", "gamma",     "phi",       "phi-cdf",
        "lambda-minus", "lambda-plus", "f",   "F",         "kappa-cdf", "w-minus",
        "w-plus", "southeast",     "inversion",      "tw-center", "tw-scale",  "psi",
        "z"};
    return q;
}

double evaluate_limit(const std::string& q, double s, double x, double y, double u, double n) {
    namespace L = osp::limits;
    if (q == "rost") return L::rost_profile(x);
    if (q == "lower-envelope") return L::envelopes(y, s).lower;
    if (q == "upper-envelope") return L::envelopes(y, s).upper;
    if (q == "gamma") return L::gamma_y(y);
    if (q == "phi") return L::phi(y, s, u);
    if (q == "phi-cdf") return L::phi_cdf(y, s, x);
    if (q == "lambda-minus") return L::lambda(y, s).minus;
    if (q == "lambda-plus") return L::lambda(y, s).plus;
    if (q == "f") return L::density_f(s, x, y);
    if (q == "F") return L::cumulative_F(s, u, y);
    if (q == "kappa-cdf") return L::kappa_cdf(s, x, y);
    if (q == "w-minus") return L::w_pm(s).first;
    if (q == "w-plus") return L::w_pm(s).second;
    if (q == "southeast") return L::southeast_prob(s, x, y);
    if (q == "inversion") return L::inversion_limit(s);
    if (q == "tw-center") return L::tw_scaling(y, n).center;
    if (q == "tw-scale") return L::tw_scaling(y, n).scale;
    if (q == "psi") return L::psi(y, s);
    if (q == "z") return L::z_profile(y, s, x);
    throw UsageError("limits: unknown quantity '" + q + "'");
}

int run_limits(const Globals& g, const LimitsOptions& o) {
    Json config = globals_json(g);
    config["quantity"] = o.quantity;
    config["s"] = o.s;
    config["x"] = o.x;
    config["y"] = o.y;
    config["u"] = o.u;
    config["n"] = o.n;
    Json values = Json::array();
    osp::harness::CsvTable table({"s", "x", "y", "u", "value"});
    for (const double s : o.s) {
        for (const double x : o.x) {
            for (const double y : o.y) {
                for (const double u : o.u) {
                    const double v = evaluate_limit(o.quantity, s, x, y, u, o.n);
                    values.push_back({{"s", s}, {"x", x}, {"y", y}, {"u", u}, {"value", osp::harness::number(v)}});
                    table.row({s, x, y, u, v});
                }
            }
        }
    }
    Json out{{"config", config}, {"quantity", o.quantity}};
    if (values.size() == 1) {
        out["value"] = values[0]["value"];
    }
    out["values"] = values;
    emit(g, out, table, "limits_" + o.quantity);
    return kExitOk;
}

// ---------------------------------------------------------------------- tw

struct TwOptions {
    std::vector<double> z;
    std::vector<double> range;
    std::vector<double> quantiles;
    double x0 = 8.0;
    double x_min = -10.5;
    double step = 1e-3;
    std::string init = "airy";
};

int run_tw(const Globals& g, const TwOptions& o) {
    if (o.init != "airy" && o.init != "asymptotic") {
        throw UsageError("tw: --init must be airy or asymptotic");
    }
    const auto sol = osp::tw::PainleveSolution(osp::tw::SolverConfig{
        o.x0, o.x_min, o.step, o.init == "airy" ? osp::tw::Init::airy : osp::tw::Init::asymptotic});
    std::vector<double> zs = o.z;
    if (!o.range.empty()) {
        if (o.range.size() != 3 || !(o.range[2] > 0) || o.range[1] < o.range[0]) {
            throw UsageError("tw: --range takes LO HI STEP with STEP > 0");
        }
        for (double z = o.range[0]; z <= o.range[1] + 1e-12; z += o.range[2]) {
            zs.push_back(z);
        }
    }
    if (zs.empty() && o.quantiles.empty()) {
        for (int i = 0; i <= 80; ++i) {
            zs.push_back(-6.0 + 0.1 * i);
        }
    }
    Json config = globals_json(g);
    config["x0"] = o.x0;
    config["x_min"] = o.x_min;
    config["step"] = o.step;
    config["init"] = o.init;
    Json points = Json::array();
    osp::harness::CsvTable table({"z", "cdf"});
    for (const double z : zs) {
        if (z < sol.x_min()) {
            throw UsageError("tw: z=" + osp::harness::format_label(z) + " lies below x_min");
        }
        const double f = sol.cdf(z);
        points.push_back({{"z", z}, {"cdf", f}});
        table.row({z, f});
    }
    Json qs = Json::array();
    for (const double p : o.quantiles) {
        qs.push_back({{"p", p}, {"z", sol.quantile(p)}});
    }
    const auto [mean, var] = sol.mean_variance();
    emit(g,
         {{"config", config}, {"points", points}, {"quantiles", qs}, {"mean", mean}, {"variance", var},
          {"max_residual", sol.max_residual()}},
         table, "tw");
    return kExitOk;
}

// --------------------------------------------------------------------- lpp

struct LppOptions {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::int64_t n = 0;
    double y = 0.5;
};

int run_lpp(const Globals& g, const LppOptions& o) {
    std::int64_t rows = o.rows;
    std::int64_t cols = o.cols;
    const bool scaled = o.n > 0;
    if (scaled) {
        if (rows == 0 && cols == 0) {
            rows = std::llround(o.y * static_cast<double>(o.n));
            cols = o.n - rows;
        }
    }
    if (rows < 1 || cols < 1) {
        throw UsageError("lpp: give --rows and --cols, or -n with --y");
    }
    Json config = globals_json(g);
    config["rows"] = rows;
    config["cols"] = cols;
    config["n"] = o.n;
    config["y"] = o.y;
    const auto reps = replicates_or(g, 1);
    const auto values = osp::stats::parallel_map(static_cast<std::size_t>(reps), g.threads, [&](std::size_t r) {
        const double t = osp::lpp_time(rows, cols, g.seed, static_cast<std::uint32_t>(r));
        return scaled ? osp::johansson_scaled(t, o.y, o.n, rows, cols) : t;
    });
    osp::harness::CsvTable table({scaled ? "scaled_value" : "passage_time"});
    for (const double v : values) {
        table.row({v});
    }
    emit(g, {{"config", config}, {scaled ? "scaled_values" : "passage_times", values}}, table, "lpp");
    return kExitOk;
}

// ------------------------------------------------------------------ verify

struct VerifyOptions {
    std::string suite = "identities";
    std::vector<std::string> set;
};

std::vector<osp::harness::Experiment> suite_experiments(const std::string& suite) {
    std::vector<std::string> kinds;
    if (suite == "identities") {
        kinds = {"identity-suite", "coupling-suite"};
    } else if (suite == "limits") {
        kinds = {"limits", "tw-numerics"};
    } else if (suite == "statistics") {
        kinds = {"first-particle", "hydro",    "inversions", "finishing", "second-class",
                 "trajectories",   "symmetry", "lpp",        "tw-fluct"};
    } else if (suite == "all") {
        kinds = osp::harness::experiment_kinds();
    } else if (std::find(osp::harness::experiment_kinds().begin(), osp::harness::experiment_kinds().end(), suite) !=
               osp::harness::experiment_kinds().end()) {
        kinds = {suite};
    } else {
        throw UsageError("verify: unknown suite '" + suite + "'");
    }
    std::vector<osp::harness::Experiment> out;
    for (const auto& k : kinds) {
        osp::harness::Experiment e;
        e.kind = k;
        out.push_back(e);
    }
    return out;
}

Json summarize(const std::vector<osp::harness::Report>& reports) {
    Json list = Json::array();
    bool ok = true;
    for (const auto& r : reports) {
        list.push_back(osp::harness::to_json(r));
        ok = ok && r.passed();
    }
    return {{"reports", list}, {"pass", ok}};
}

std::string verdict_csv(const std::vector<osp::harness::Report>& reports) {
    std::ostringstream os;
    os << "experiment,verdict,observed,target,tolerance,rule,pass,report_only\n";
    for (const auto& r : reports) {
        for (const auto& v : r.verdicts) {
            std::string name = v.name;
            std::replace(name.begin(), name.end(), '"', '\'');
            os << r.experiment.kind << ",\"" << name << "\"," << osp::harness::format_double(v.observed) << ","
               << osp::harness::format_double(v.target) << "," << osp::harness::format_double(v.tolerance) << ","
               << osp::harness::to_string(v.rule) << "," << (v.pass ? 1 : 0) << "," << (v.report_only ? 1 : 0)
               << "\n";
        }
    }
    return os.str();
}

int run_verify(const Globals& g, const VerifyOptions& o) {
    auto experiments = suite_experiments(o.suite);
    for (const auto& kv : o.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw UsageError("verify: --set expects KEY=JSON");
        }
        Json value;
        try {
            value = Json::parse(kv.substr(eq + 1));
        } catch (const Json::exception&) {
            value = kv.substr(eq + 1);
        }
        for (auto& e : experiments) {
            e.parameters[kv.substr(0, eq)] = value;
        }
    }
    std::vector<osp::harness::Report> reports;
    for (auto& e : experiments) {
        e.seed = g.seed;
        e.replicates = g.replicates;
        e.threads = g.threads;
        e.out_dir = g.out_dir;
        if (!e.out_dir.empty()) {
            std::filesystem::create_directories(e.out_dir);
        }
        reports.push_back(osp::harness::run_experiment(e));
        if (!g.out_dir.empty()) {
            std::ofstream(std::filesystem::path(g.out_dir) / ("report_" + e.kind + ".json"))
                << osp::harness::to_json(reports.back()).dump(2) << "\n";
        }
    }
    Json out = summarize(reports);
    out["suite"] = o.suite;
    if (g.format == "csv") {
        std::cout << verdict_csv(reports);
    } else {
        std::cout << out.dump(2) << "\n";
    }
    return out["pass"].get<bool>() ? kExitOk : kExitFailed;
}

// ------------------------------------------------------------------ report

struct ReportOptions {
    std::vector<std::string> inputs;
};

int run_report(const Globals& g, const ReportOptions& o) {
    std::vector<std::filesystem::path> files;
    for (const auto& in : o.inputs) {
        const std::filesystem::path p(in);
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> found;
            for (const auto& entry : std::filesystem::directory_iterator(p)) {
                const auto name = entry.path().filename().string();
                if (entry.is_regular_file() && name.rfind("report_", 0) == 0 && entry.path().extension() == ".json") {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (std::filesystem::is_regular_file(p)) {
            files.push_back(p);
        } else {
            throw UsageError("report: no such file or directory: " + in);
        }
    }
    if (files.empty()) {
        throw UsageError("report: no report files found");
    }
    std::vector<osp::harness::Report> reports;
    for (const auto& f : files) {
        std::ifstream in(f);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::exception& e) {
            throw UsageError("report: " + f.string() + " is not valid JSON");
        }
        auto r = osp::harness::report_from_json(j);
        for (auto& v : r.verdicts) {
            v.pass = osp::harness::Verdict::evaluate(v.rule, v.observed, v.target, v.tolerance);
        }
        reports.push_back(std::move(r));
    }
    const Json out = summarize(reports);
    if (g.format == "csv") {
        std::cout << verdict_csv(reports);
    } else {
        std::cout << out.dump(2) << "\n";
    }
    return out["pass"].get<bool>() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"osp: oriented swap process and coupled TASEP laboratory", "osp"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with flag values; subcommand flags go in a nested object");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
    app.add_option("--replicates", g.replicates, "Replicate count (negative: command default)")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "Directory for CSV/JSON outputs")->envname("OSP_OUT_DIR");
    app.add_option("--format", g.format, "Standard output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run the oriented swap process on [1, n]");
    simulate->add_option("-n", sim.n, "Number of particles")->required();
    simulate->add_option("--horizon", sim.horizon, "Time horizon for continuous variants (default 2.5n)");
    simulate->add_option("--variant", sim.variant, "Time parameterization")
        ->check(CLI::IsMember({"continuous-variable", "continuous-fixed", "discrete-variable", "discrete-fixed"}))
        ->capture_default_str();
    simulate->add_option("--steps", sim.steps, "Step count for discrete variants");
    simulate->add_flag("--exact", sim.exact, "Exact distribution by enumeration (discrete variants, n <= 7)");
    simulate->add_option("--snapshot", sim.snapshots, "Scaled times s at which to record the state (t = sn)");
    simulate->add_option("--track", sim.track, "Particle labels whose trajectories are recorded");
    simulate->add_option("--grid", sim.grid, "Scaled times for the trajectory CSV of tracked particles");
    simulate->add_flag("--events", sim.events, "Include every ring (time, bond, applied) in the output");

    TasepOptions tas;
    auto* tasep = app.add_subcommand("tasep", "Run step-initial TASEP, coupling checks or a second-class particle");
    tasep->add_option("-k", tas.k, "Step edge: sites <= k start occupied")->capture_default_str();
    tasep->add_option("--horizon", tas.horizon, "Time horizon")->required();
    tasep->add_option("--interval", tas.interval, "Finite lattice FIRST LAST (default: certified window on Z)")
        ->expected(2);
    tasep->add_option("--margin", tas.margin, "Initial window margin (default 2T + 10 sqrt(T) + 10)");
    tasep->add_option("--snapshot", tas.snapshots, "Times at which to record the configuration");
    tasep->add_option("--coupling", tas.coupling_n, "Check the swap-process coupling on [1, N] for particle k");
    tasep->add_flag("--second-class", tas.second_class, "Track the discrepancy of the pair started at k and k-1");
    tasep->add_option("--sample", tas.sample_times, "Sample times for --second-class (default: horizon)");
    tasep->add_option("--verify-every", tas.verify_every, "Full-diff check period in rings for --second-class")
        ->capture_default_str();
    tasep->add_option("--scale", tas.scale, "Divisor for queue lengths in the profile CSV (default: horizon)");

    LimitsOptions lim;
    auto* limits = app.add_subcommand("limits", "Evaluate a closed-form limit on a grid of parameters");
    limits->add_option("--quantity", lim.quantity, "Quantity to evaluate")
        ->required()
        ->check(CLI::IsMember(limit_quantities()));
    limits->add_option("--s", lim.s, "Scaled time(s)")->capture_default_str();
    limits->add_option("--x", lim.x, "Position(s)")->capture_default_str();
    limits->add_option("--y", lim.y, "Label fraction(s)")->capture_default_str();
    limits->add_option("--u", lim.u, "Uniform variable or lower position bound(s)")->capture_default_str();
    limits->add_option("-n", lim.n, "System size for tw-center and tw-scale")->capture_default_str();

    TwOptions tw;
    auto* twc = app.add_subcommand("tw", "Tabulate the Tracy-Widom distribution function");
    twc->add_option("--z", tw.z, "Evaluation points");
    twc->add_option("--range", tw.range, "Grid LO HI STEP")->expected(3);
    twc->add_option("--quantile", tw.quantiles, "Probabilities to invert");
    twc->add_option("--x0", tw.x0, "Right end of the integration grid")->capture_default_str();
    twc->add_option("--x-min", tw.x_min, "Left end of the integration grid")->capture_default_str();
    twc->add_option("--step", tw.step, "RK4 step")->capture_default_str();
    twc->add_option("--init", tw.init, "Initial data at x0")
        ->check(CLI::IsMember({"airy", "asymptotic"}))
        ->capture_default_str();

    LppOptions lp;
    auto* lpp = app.add_subcommand("lpp", "Sample last-passage times with Exponential(1) weights");
    lpp->add_option("--rows", lp.rows, "Grid rows M");
    lpp->add_option("--cols", lp.cols, "Grid columns N");
    lpp->add_option("-n", lp.n, "System size; with --y, samples scaled values");
    lpp->add_option("--y", lp.y, "Label fraction for scaling")->capture_default_str();

    VerifyOptions ver;
    auto* verify = app.add_subcommand("verify", "Run verification suites (exit 2 if a check fails)");
    verify->add_option("--suite", ver.suite, "identities, limits, statistics, all, or one experiment kind")
        ->capture_default_str();
    verify->add_option("--set", ver.set, "Experiment parameter override KEY=JSON (repeatable)");

    ReportOptions rep;
    auto* report = app.add_subcommand("report", "Re-evaluate verdicts from saved report files or directories");
    report->add_option("inputs", rep.inputs, "report_*.json files or directories holding them")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) return run_simulate(g, sim);
        if (*tasep) return run_tasep(g, tas);
        if (*limits) return run_limits(g, lim);
        if (*twc) return run_tw(g, tw);
        if (*lpp) return run_lpp(g, lp);
        if (*verify) return run_verify(g, ver);
        if (*report) return run_report(g, rep);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
