// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Empirical statistics: KS distances, Bowker's symmetry test, pairwise
// summation and a replicate-parallel map with index-ordered results.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace osp::stats {

/// Pairwise (cascade) summation; the result depends only on the order of
/// the input, never on how work was scheduled.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0;
        for (const double x : xs) {
            s += x;
        }
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) {
        throw std::invalid_argument("mean: empty input");
    }
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

/// sup_x |F_m(x) - F(x)| for the empirical CDF F_m of `samples`. Both
/// one-sided gaps are taken at every sample value, with the left limit
/// F(x-) so that model atoms are handled exactly.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) {
        throw std::invalid_argument("ks_distance: empty sample");
    }
    std::sort(samples.begin(), samples.end());
    const auto m = static_cast<double>(samples.size());
    double d = 0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) {
            ++j;
        }
        const double x = samples[i];
        const double at = cdf(x);
        const double before = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
        d = std::max({d, static_cast<double>(j) / m - at, before - static_cast<double>(i) / m,
                      at - static_cast<double>(j) / m, static_cast<double>(i) / m - before});
        i = j;
    }
    return d;
}

/// sup_x (F_a(x) - F_b(x)) over the pooled sample points.
inline double ks_one_sided(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_one_sided: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    double d = -1;
    for (const double x : pooled) {
        const double fa = static_cast<double>(std::upper_bound(a.begin(), a.end(), x) - a.begin()) /
                          static_cast<double>(a.size());
        const double fb = static_cast<double>(std::upper_bound(b.begin(), b.end(), x) - b.begin()) /
                          static_cast<double>(b.size());
        d = std::max(d, fa - fb);
    }
    return std::max(d, 0.0);
}

/// Two-sample KS distance sup_x |F_a(x) - F_b(x)|.
inline double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    return std::max(ks_one_sided(a, b), ks_one_sided(b, a));
}

inline double gamma_cdf(double shape, double x) {
    return x <= 0 ? 0.0 : boost::math::gamma_p(shape, x);
}

inline double uniform_cdf(double lo, double hi, double x) {
    return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
}

struct ChiSquare {
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
};

/// Bowker's test that counts are symmetric under an involution on states.
/// `partner` maps a key to its image; fixed points carry no information.
template <class Key>
ChiSquare bowker_test(const std::map<Key, long long>& counts,
                      const std::function<Key(const Key&)>& partner) {
    ChiSquare out;
    for (const auto& [key, a] : counts) {
        const Key other = partner(key);
        if (!(key < other)) {
            continue;
        }
        const auto it = counts.find(other);
        const long long b = it == counts.end() ? 0 : it->second;
        if (a + b == 0) {
            continue;
        }
        out.statistic += static_cast<double>((a - b) * (a - b)) / static_cast<double>(a + b);
        ++out.dof;
    }
    // Pairs where only the larger key was observed.
    for (const auto& [key, b] : counts) {
        const Key other = partner(key);
        if (other < key && counts.find(other) == counts.end() && b > 0) {
            out.statistic += static_cast<double>(b);
            ++out.dof;
        }
    }
    if (out.dof > 0) {
        const boost::math::chi_squared dist(out.dof);
        out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    }
    return out;
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// fn(0..count-1) on a worker pool; results are stored by index, so the
/// output is identical for every thread count.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(count);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                out[i] = fn(i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(count);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

}  // namespace osp::stats
