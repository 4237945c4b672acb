// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// GUE Tracy–Widom distribution from the Hastings–McLeod solution of
// Painlevé II, u'' = 2u^3 + xu, integrated leftward from x0.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/airy.hpp>

namespace osp::tw {

enum class Init {
    /// u(x0) = Ai(x0), u'(x0) = Ai'(x0).
    airy,
    /// Leading term (2√π)^{-1} x^{-1/4} e^{-2x^{3/2}/3} and its derivative.
    asymptotic,
};

struct SolverConfig {
    double x0 = 8.0;
    double x_min = -10.5;
    double step = 1e-3;
    Init init = Init::airy;
    double blowup_guard = 1e3;
};

/// State along the grid: u, u', ∫_x^{x0} u², ∫_x^{x0} t u(t)² dt.
using State = std::array<double, 4>;

class PainleveSolution {
  public:
    explicit PainleveSolution(const SolverConfig& config = {}) : config_(config) {
        if (!(config.step > 0) || !(config.x_min < config.x0)) {
            throw std::invalid_argument("solve_painleve: need step > 0 and x_min < x0");
        }
        const double x0 = config.x0;
        State s{};
        if (config.init == Init::airy) {
            s[0] = boost::math::airy_ai(x0);
            s[1] = boost::math::airy_ai_prime(x0);
        } else {
            const double lead = 1.0 / (2.0 * std::sqrt(std::numbers::pi)) * std::pow(x0, -0.25) *
                                std::exp(-2.0 / 3.0 * std::pow(x0, 1.5));
            s[0] = lead;
            s[1] = lead * (-0.25 / x0 - std::sqrt(x0));
        }
        const auto steps = static_cast<std::size_t>(std::ceil((x0 - config.x_min) / config.step));
        states_.reserve(steps + 1);
        states_.push_back(s);
        for (std::size_t i = 0; i < steps; ++i) {
            s = advance(s, node(i), -config.step);
            if (!std::isfinite(s[0]) || std::abs(s[0]) > config.blowup_guard) {
                throw std::runtime_error("solve_painleve: solution left the guard at x=" +
                                         std::to_string(node(i + 1)) +
                                         "; reduce the step or move x0");
            }
            states_.push_back(s);
        }
        // Tail beyond x0 with u ≈ Ai: ∫ Ai² = Ai'² - x Ai², ∫ x Ai² = -(x²Ai² - xAi'² + Ai Ai')/3.
        const double a = boost::math::airy_ai(x0);
        const double ap = boost::math::airy_ai_prime(x0);
        tail_u2_ = ap * ap - x0 * a * a;
        tail_xu2_ = -(x0 * x0 * a * a - x0 * ap * ap + a * ap) / 3.0;
    }

    const SolverConfig& config() const { return config_; }
    std::size_t size() const { return states_.size(); }
    double node(std::size_t i) const { return config_.x0 - static_cast<double>(i) * config_.step; }
    double x_min() const { return node(states_.size() - 1); }
    const State& state(std::size_t i) const { return states_[i]; }

    /// Full state at any x in [x_min, x0], by a partial step from the grid.
    State state_at(double x) const {
        check_range(x);
        const double offset = (config_.x0 - x) / config_.step;
        auto i = static_cast<std::size_t>(std::floor(offset));
        if (i >= states_.size() - 1) {
            i = states_.size() - 1;
        }
        const double h = x - node(i);
        if (h == 0.0) {
            return states_[i];
        }
        return advance(states_[i], node(i), h);
    }

    double u(double x) const { return state_at(x)[0]; }

    /// Largest |u'' - 2u³ - xu| over interior nodes, with a fourth-order
    /// central difference for u''.
    double max_residual() const {
        const double h = config_.step;
        double worst = 0;
        for (std::size_t i = 2; i + 2 < states_.size(); ++i) {
            const double d2 = (-states_[i - 2][0] + 16 * states_[i - 1][0] - 30 * states_[i][0] +
                               16 * states_[i + 1][0] - states_[i + 2][0]) /
                              (12 * h * h);
            const double uu = states_[i][0];
            worst = std::max(worst, std::abs(d2 - 2 * uu * uu * uu - node(i) * uu));
        }
        return worst;
    }

    /// F_TW(z) = exp(-∫_z^∞ (x - z) u(x)² dx).
    double cdf(double z) const {
        if (z >= config_.x0) {
            return std::exp(-(tail_xu2_ - z * tail_u2_));
        }
        const State s = state_at(z);
        const double integral = (s[3] + tail_xu2_) - z * (s[2] + tail_u2_);
        return std::exp(-integral);
    }

    /// z with F_TW(z) = p, by bisection on [x_min, x0].
    double quantile(double p) const {
        if (!(p > 0 && p < 1)) {
            throw std::invalid_argument("quantile: p must lie in (0, 1)");
        }
        double lo = x_min();
        double hi = config_.x0;
        if (cdf(lo) > p) {
            throw std::invalid_argument("quantile: p below the resolved range");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            (cdf(mid) < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    /// First two moments of F_TW from ∫ z dF on the grid (tails negligible).
    std::pair<double, double> mean_variance() const {
        // E[Z] = x0 - ∫ F, E[Z²] = x0² - 2∫ z F, over [x_min, x0].
        const double h = config_.step;
        double m1 = 0;
        double m2 = 0;
        for (std::size_t i = 0; i + 1 < states_.size(); ++i) {
            const double a = node(i + 1);
            const double b = node(i);
            const double fa = cdf(a);
            const double fb = cdf(b);
            const double fm = cdf(0.5 * (a + b));
            m1 += h / 6 * (fa + 4 * fm + fb);
            m2 += h / 6 * (a * fa + 4 * 0.5 * (a + b) * fm + b * fb);
        }
        const double x0 = config_.x0;
        const double lo = x_min();
        const double mean = x0 - m1 - lo * cdf(lo);
        const double second = x0 * x0 - 2 * m2 - lo * lo * cdf(lo);
        return {mean, second - mean * mean};
    }

  private:
    static State rhs(const State& s, double x) {
        const double u2 = s[0] * s[0];
        return {s[1], 2 * u2 * s[0] + x * s[0], -u2, -x * u2};
    }

    static State advance(const State& s, double x, double h) {
        auto add = [](const State& a, const State& b, double c) {
            return State{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]};
        };
        const State k1 = rhs(s, x);
        const State k2 = rhs(add(s, k1, h / 2), x + h / 2);
        const State k3 = rhs(add(s, k2, h / 2), x + h / 2);
        const State k4 = rhs(add(s, k3, h), x + h);
        State out;
        for (std::size_t j = 0; j < 4; ++j) {
            out[j] = s[j] + h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
        }
        return out;
    }

    void check_range(double x) const {
        if (x < x_min() - 1e-12 || x > config_.x0) {
            throw std::invalid_argument("Painleve solution: x=" + std::to_string(x) +
                                        " outside the resolved grid");
        }
    }

    SolverConfig config_;
    std::vector<State> states_;
    double tail_u2_ = 0;
    double tail_xu2_ = 0;
};

inline PainleveSolution solve_painleve(double x0 = 8.0, double x_min = -10.5, double step = 1e-3,
                                       Init init = Init::airy) {
    return PainleveSolution(SolverConfig{x0, x_min, step, init});
}

/// Shared default solution.
inline const PainleveSolution& default_solution() {
    static const PainleveSolution solution{};
    return solution;
}

/// F_TW(z) on the default grid; z below the grid is rejected.
inline double f_tw(double z) {
    const auto& sol = default_solution();
    if (z < sol.x_min()) {
        throw std::invalid_argument("f_tw: z=" + std::to_string(z) + " below the resolved grid");
    }
    return sol.cdf(z);
}

}  // namespace osp::tw
