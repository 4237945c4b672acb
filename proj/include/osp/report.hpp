// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Experiments, verdicts and their JSON/CSV forms.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace osp::harness {

using Json = nlohmann::ordered_json;

/// How `observed` is compared with `target` and `tolerance`.
enum class Rule {
    /// |observed - target| <= tolerance
    within,
    /// observed <= tolerance (distances, failure counts with tolerance 0)
    at_most,
    /// observed >= target (fractions, p-values)
    at_least,
};

inline std::string to_string(Rule r) {
    switch (r) {
        case Rule::within: return "within";
        case Rule::at_most: return "at_most";
        case Rule::at_least: return "at_least";
    }
    return "?";
}

inline Rule parse_rule(const std::string& s) {
    for (auto r : {Rule::within, Rule::at_most, Rule::at_least}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    throw std::invalid_argument("unknown verdict rule '" + s + "'");
}

struct Verdict {
    std::string name;
    double observed = 0;
    double target = 0;
    double tolerance = 0;
    Rule rule = Rule::within;
    bool pass = false;
    /// Recorded but never fails a suite.
    bool report_only = false;
    std::uint64_t seed = 0;
    std::int64_t replicates = 0;

    static bool evaluate(Rule rule, double observed, double target, double tolerance) {
        if (std::isnan(observed)) {
            return false;
        }
        switch (rule) {
            case Rule::within: return std::abs(observed - target) <= tolerance;
            case Rule::at_most: return observed <= tolerance;
            case Rule::at_least: return observed >= target;
        }
        return false;
    }
};

inline Verdict within(std::string name, double observed, double target, double tolerance) {
    return {std::move(name), observed, target, tolerance, Rule::within,
            Verdict::evaluate(Rule::within, observed, target, tolerance)};
}

inline Verdict at_most(std::string name, double observed, double bound) {
    return {std::move(name), observed, 0.0, bound, Rule::at_most,
            Verdict::evaluate(Rule::at_most, observed, 0.0, bound)};
}

inline Verdict at_least(std::string name, double observed, double bound) {
    return {std::move(name), observed, bound, 0.0, Rule::at_least,
            Verdict::evaluate(Rule::at_least, observed, bound, 0.0)};
}

inline Verdict exact_zero(std::string name, std::int64_t failures) {
    return at_most(std::move(name), static_cast<double>(failures), 0.0);
}

inline Verdict report_only(Verdict v) {
    v.report_only = true;
    return v;
}

struct Experiment {
    std::string kind;
    Json parameters = Json::object();
    std::uint64_t seed = 42;
    /// Negative: the kind's default.
    std::int64_t replicates = -1;
    unsigned threads = 0;
    std::string out_dir;
};

struct Report {
    Experiment experiment;
    std::vector<Verdict> verdicts;
    std::vector<std::string> artifacts;

    bool passed() const {
        for (const auto& v : verdicts) {
            if (!v.pass && !v.report_only) {
                return false;
            }
        }
        return true;
    }
};

/// Doubles are written with 17 significant digits so that reports
/// round-trip exactly; non-finite values become null.
inline Json number(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return x;
}

inline double number_from(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline Json to_json(const Verdict& v) {
    return Json{{"name", v.name},
                {"observed", number(v.observed)},
                {"target", number(v.target)},
                {"tolerance", number(v.tolerance)},
                {"rule", to_string(v.rule)},
                {"pass", v.pass},
                {"report_only", v.report_only},
                {"seed", v.seed},
                {"replicates", v.replicates}};
}

inline Verdict verdict_from_json(const Json& j) {
    Verdict v;
    v.name = j.at("name").get<std::string>();
    v.observed = number_from(j.at("observed"));
    v.target = number_from(j.at("target"));
    v.tolerance = number_from(j.at("tolerance"));
    v.rule = parse_rule(j.value("rule", std::string("within")));
    v.pass = j.at("pass").get<bool>();
    v.report_only = j.value("report_only", false);
    v.seed = j.value("seed", std::uint64_t{0});
    v.replicates = j.value("replicates", std::int64_t{0});
    return v;
}

inline Json to_json(const Report& r) {
    Json verdicts = Json::array();
    for (const auto& v : r.verdicts) {
        verdicts.push_back(to_json(v));
    }
    return Json{{"experiment", r.experiment.kind},
                {"parameters", r.experiment.parameters},
                {"seed", r.experiment.seed},
                {"replicates", r.experiment.replicates},
                {"threads", r.experiment.threads},
                {"verdicts", verdicts},
                {"artifacts", r.artifacts},
                {"pass", r.passed()}};
}

inline Report report_from_json(const Json& j) {
    Report r;
    r.experiment.kind = j.at("experiment").get<std::string>();
    r.experiment.parameters = j.value("parameters", Json::object());
    r.experiment.seed = j.value("seed", std::uint64_t{42});
    r.experiment.replicates = j.value("replicates", std::int64_t{-1});
    r.experiment.threads = j.value("threads", 0u);
    for (const auto& v : j.at("verdicts")) {
        r.verdicts.push_back(verdict_from_json(v));
    }
    r.artifacts = j.value("artifacts", std::vector<std::string>{});
    return r;
}

inline std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

/// Short form for verdict names.
inline std::string format_label(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

/// Minimal CSV table writer.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(const std::vector<double>& values) {
        if (values.size() != header_.size()) {
            throw std::invalid_argument("CsvTable: row width mismatch");
        }
        rows_.push_back(values);
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header_.size(); ++i) {
            os << (i ? "," : "") << header_[i];
        }
        os << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << (i ? "," : "") << format_double(r[i]);
            }
            os << '\n';
        }
        return os.str();
    }

    void write(const std::filesystem::path& path) const {
        if (path.has_parent_path()) {
            std::filesystem::create_directories(path.parent_path());
        }
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        out << str();
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace osp::harness
