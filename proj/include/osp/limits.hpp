// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Closed-form limiting objects of the oriented swap process and its TASEP
// family. Conventions: y is a label fraction, x and u are scaled positions,
// s is scaled time. On branch boundaries the left-closed branch is used;
// every quantity here is continuous across them.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace osp::limits {

namespace detail {

inline void check_unit(double y, const char* what) {
    if (!(y >= 0.0 && y <= 1.0)) {
        throw std::invalid_argument(std::string(what) + ": y must lie in [0, 1]");
    }
}

inline void check_time(double s, const char* what, bool strict) {
    if (!(strict ? s > 0.0 : s >= 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument(std::string(what) + (strict ? ": s must be > 0" : ": s must be >= 0"));
    }
}

inline double fan(double s, double y, double u) { return (s + y - u) * (s + y - u) / (4 * s); }

}  // namespace detail

/// Rost profile h(x) = 1 ∧ (1 - x)/2 ∨ 0.
inline double rost_profile(double x) { return std::clamp((1.0 - x) / 2.0, 0.0, 1.0); }

inline double lower_envelope(double y, double s) { return y + s - 2 * std::sqrt(s * y); }
inline double upper_envelope(double y, double s) { return y - s + 2 * std::sqrt(s * (1 - y)); }
inline double gamma_y(double y) { return 1 + 2 * std::sqrt(y * (1 - y)); }

struct Envelopes {
    double lower;
    double upper;
    double gamma;
};

inline Envelopes envelopes(double y, double s) {
    detail::check_unit(y, "envelopes");
    detail::check_time(s, "envelopes", false);
    return {lower_envelope(y, s), upper_envelope(y, s), gamma_y(y)};
}

/// φ_y(s) for the speed u ∈ [-1, 1].
inline double phi(double y, double s, double u) {
    if (!(u >= -1.0 && u <= 1.0)) {
        throw std::invalid_argument("phi: u must lie in [-1, 1]");
    }
    const auto e = envelopes(y, s);
    if (s >= e.gamma) {
        return 1 - y;
    }
    return std::min(std::max(e.lower, y + u * s), e.upper);
}

/// P[φ_y(s) <= x] for U uniform on [-1, 1]; atoms sit at the clamp points.
inline double phi_cdf(double y, double s, double x) {
    const auto e = envelopes(y, s);
    if (s >= e.gamma) {
        return x >= 1 - y ? 1.0 : 0.0;
    }
    if (x < e.lower) {
        return 0.0;
    }
    if (x >= e.upper) {
        return 1.0;
    }
    if (s == 0) {
        return x >= y ? 1.0 : 0.0;
    }
    return std::clamp((x - y + s) / (2 * s), 0.0, 1.0);
}

struct LambdaPair {
    double minus;
    double plus;
};

inline LambdaPair lambda(double y, double s) {
    detail::check_unit(y, "lambda");
    detail::check_time(s, "lambda", false);
    return {s < y ? 0.0 : lower_envelope(y, s), s < 1 - y ? 1.0 : upper_envelope(y, s)};
}

/// ∫_u^∞ h((x - y)/s) dx.
inline double fan_mass(double s, double u, double y) {
    detail::check_time(s, "fan_mass", true);
    if (u < y - s) {
        return y - u;
    }
    if (u <= y + s) {
        return detail::fan(s, y, u);
    }
    return 0.0;
}

/// Limiting density at x of labels <= yn, time sn.
inline double density_f(double s, double x, double y) {
    detail::check_unit(y, "density_f");
    detail::check_time(s, "density_f", true);
    const double lm = lower_envelope(y, s);
    const double lp = upper_envelope(y, s);
    if (std::max(y - s, lm) < x && x < std::min(y + s, lp)) {
        return (s + y - x) / (2 * s);
    }
    if (0 < x && x < y - s) {
        return 1.0;
    }
    if (y + s < x && x < 1) {
        return 0.0;
    }
    if (s > 1 - y && std::max(1 - y, lp) < x && x < 1) {
        return 1.0;
    }
    return 0.0;
}

namespace detail {

inline double cumulative_lower_half(double s, double u, double y) {
    const double g = gamma_y(y);
    if (s <= y) {
        if (u <= y - s) {
            return y - u;
        }
        return u <= y + s ? fan(s, y, u) : 0.0;
    }
    const double lm = lower_envelope(y, s);
    if (s <= 1 - y) {
        if (u <= lm) {
            return y;
        }
        return u <= y + s ? fan(s, y, u) : 0.0;
    }
    if (s <= g) {
        const double lp = upper_envelope(y, s);
        if (u <= lm) {
            return y;
        }
        return u <= lp ? fan(s, y, u) : 1 - u;
    }
    return u <= 1 - y ? y : 1 - u;
}

}  // namespace detail

/// F(s, u, y): limiting mass of labels <= yn at positions > un, time sn.
inline double cumulative_F(double s, double u, double y) {
    detail::check_unit(y, "cumulative_F");
    detail::check_time(s, "cumulative_F", true);
    if (u <= 0) {
        return y;
    }
    if (u >= 1) {
        return 0.0;
    }
    if (y <= 0.5) {
        return detail::cumulative_lower_half(s, u, y);
    }
    return y - u + detail::cumulative_lower_half(s, 1 - u, 1 - y);
}

/// The defining minimum form ∫_u^∞ h((x-y)/s)dx ∧ y ∧ (1-u)^+.
inline double cumulative_F_min_form(double s, double u, double y) {
    return std::min({fan_mass(s, u, y), y, std::max(0.0, 1 - u)});
}

/// κ_s([0, x] × [0, y]): positions <= xn holding labels <= yn.
inline double kappa_cdf(double s, double x, double y) {
    const double yy = std::clamp(y, 0.0, 1.0);
    return cumulative_F(s, 0.0, yy) - cumulative_F(s, x, yy);
}

/// One point (position, label) of κ_s: label y uniform, position φ_y(s).
template <class Engine>
std::pair<double, double> kappa_sample(double s, Engine& engine) {
    detail::check_time(s, "kappa_sample", true);
    const double y = engine.uniform();
    const double u = 2 * engine.uniform() - 1;
    return {phi(y, s, u), y};
}

/// W_s^± for 1 < s <= 2.
inline std::pair<double, double> w_pm(double s) {
    if (!(s > 1 && s <= 2)) {
        throw std::invalid_argument("w_pm: s must lie in (1, 2]");
    }
    const double r = std::sqrt(std::max(0.0, 2 * s - s * s));
    return {(1 - r) / 2, (1 + r) / 2};
}

/// Is (x, y) in the support of κ_s, up to `tol`?
inline bool in_kappa_support(double s, double x, double y, double tol = 1e-9) {
    if (y < -tol || y > 1 + tol) {
        return false;
    }
    const double yy = std::clamp(y, 0.0, 1.0);
    const auto e = envelopes(yy, s);
    if (s >= e.gamma) {
        return std::abs(x - (1 - yy)) <= tol;
    }
    const double lo = std::max(e.lower, yy - s);
    const double hi = std::min(e.upper, yy + s);
    return x >= lo - tol && x <= hi + tol;
}

/// κ_s-mass of {z' : z ↘ z'} for z = (x, y) in the support.
inline double southeast_prob(double s, double x, double y) {
    detail::check_time(s, "southeast_prob", true);
    if (!in_kappa_support(s, x, y)) {
        throw std::invalid_argument("southeast_prob: point is off the support");
    }
    if (s > 1) {
        const auto [wm, wp] = w_pm(std::min(s, 2.0));
        if (s > 2 || y < wm || y > wp) {
            return y;
        }
    }
    return detail::fan(s, y, x);
}

inline double inversion_limit_lower_branch(double s) { return 2.0 / 3.0 * s - s * s / 15.0; }

inline double inversion_limit_upper_branch(double s) {
    return 1 - 2.0 / 15.0 / std::sqrt(s) * std::pow(2 - s, 1.5) * (2 * s + 1);
}

/// I(s): limiting scaled inversion number.
inline double inversion_limit(double s) {
    detail::check_time(s, "inversion_limit", false);
    if (s <= 1) {
        return inversion_limit_lower_branch(s);
    }
    if (s <= 2) {
        return inversion_limit_upper_branch(s);
    }
    return 1.0;
}

struct TwScaling {
    double center;
    double scale;
};

/// Centering γ_y n and fluctuation scale γ_y^{2/3} (y(1-y))^{-1/6} n^{1/3}.
inline TwScaling tw_scaling(double y, double n) {
    if (!(y > 0 && y < 1)) {
        throw std::invalid_argument("tw_scaling: y must lie in (0, 1)");
    }
    if (!(n > 0)) {
        throw std::invalid_argument("tw_scaling: n must be positive");
    }
    const double g = gamma_y(y);
    return {g * n, std::pow(g, 2.0 / 3.0) * std::pow(y * (1 - y), -1.0 / 6.0) * std::cbrt(n)};
}

/// ψ_y(s) = ∫_1^∞ h((x-y)/s) dx.
inline double psi(double y, double s) {
    detail::check_unit(y, "psi");
    detail::check_time(s, "psi", false);
    if (s < 1 - y) {
        return 0.0;
    }
    return detail::fan(s, y, 1.0);
}

/// Limiting density profile Z_{y,s} of the k rightmost particles.
inline double z_profile(double y, double s, double x) {
    detail::check_time(s, "z_profile", true);
    return x < lambda(y, s).minus ? 0.0 : rost_profile((x - y) / s);
}

/// Adaptive Gauss–Kronrod integral over [a, b], split at the given points.
template <class F>
double integrate(F&& f, double a, double b, std::vector<double> breaks = {},
                 double tol = 1e-12) {
    if (b <= a) {
        return 0.0;
    }
    std::vector<double> cuts{a};
    std::sort(breaks.begin(), breaks.end());
    for (const double c : breaks) {
        if (c > cuts.back() && c < b) {
            cuts.push_back(c);
        }
    }
    cuts.push_back(b);
    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, cuts[i], cuts[i + 1], 15, tol);
    }
    return total;
}

/// ∫_u^1 f(s, x, y) dx by quadrature.
inline double cumulative_F_quadrature(double s, double u, double y) {
    const double a = std::clamp(u, 0.0, 1.0);
    return integrate([&](double x) { return density_f(s, x, y); }, a, 1.0,
                     {y - s, y + s, lower_envelope(y, s), upper_envelope(y, s), 1 - y});
}

}  // namespace osp::limits
