// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

// Pathwise coupling of the swap process on [1, n] with the TASEPs
// ν^{k,n}, ν^{k-1,n} on [1, n] and ν^k, ν^{k-1} on Z, all on one clock family.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "osp/clock.hpp"
#include "osp/operators.hpp"
#include "osp/permutation.hpp"
#include "osp/tasep.hpp"

namespace osp {

struct CouplingReport {
    std::size_t n = 0;
    std::int64_t k = 0;
    std::int64_t events = 0;
    /// Event times at which the identities were evaluated (some state changed).
    std::int64_t checks = 0;
    /// ν^{j,n} = T_j ζ for j = k, k-1.
    std::int64_t projection_failures = 0;
    /// ν^{j,n} = B_n R_j ν^j for j = k, k-1.
    std::int64_t pushback_failures = 0;
    /// Location of particle k = discrepancy of (ν^{k,n}, ν^{k-1,n}).
    std::int64_t location_failures = 0;
    /// Discrepancy of (ν^{k,n}, ν^{k-1,n}) from the pair on Z via the
    /// cut-off/push-back formula.
    std::int64_t formula_failures = 0;
    int retries = 0;

    std::int64_t failures() const {
        return projection_failures + pushback_failures + location_failures + formula_failures;
    }
};

namespace detail {

inline std::optional<CouplingReport> run_coupling_once(std::size_t n, std::int64_t k,
                                                       double horizon, std::uint64_t seed,
                                                       std::uint32_t replicate, Site margin) {
    const auto nn = static_cast<Site>(n);
    Permutation zeta(n);
    TasepLattice fin_k = TasepLattice::on_interval({1, nn}, k);
    TasepLattice fin_k1 = TasepLattice::on_interval({1, nn}, k - 1);
    const Site lo = std::min<Site>(k - margin, 0);
    const Site hi = std::max<Site>(k + margin, nn + 1);
    TasepLattice inf_k = TasepLattice::window(lo, hi, k);
    TasepLattice inf_k1 = TasepLattice::window(lo, hi, k - 1);
    EventStream stream(seed, replicate, lo, hi - 1);

    CouplingReport rep;
    rep.n = n;
    rep.k = k;
    auto check = [&] {
        ++rep.checks;
        const BinaryConfig a = fin_k.config();
        const BinaryConfig b = fin_k1.config();
        const BinaryConfig za = inf_k.config();
        const BinaryConfig zb = inf_k1.config();
        if (!(project(zeta, k) == a) || !(project(zeta, k - 1) == b)) {
            ++rep.projection_failures;
        }
        const BinaryConfig ca = cutoff(za, k);
        if (!(pushback(ca, nn) == a) || !(pushback(cutoff(zb, k - 1), nn) == b)) {
            ++rep.pushback_failures;
        }
        const Site sigma = discrepancy(a, b);
        if (static_cast<Site>(zeta.position_of(static_cast<Permutation::Label>(k))) != sigma) {
            ++rep.location_failures;
        }
        const Site formula = std::min(std::max(discrepancy(za, zb), za.particle_pos(k)),
                                      ca.hole_pos(nn, ca.queue_length(nn)));
        if (formula != sigma) {
            ++rep.formula_failures;
        }
    };
    check();
    while (auto ev = stream.next(horizon)) {
        ++rep.events;
        const Site m = ev->bond;
        bool changed = false;
        if (m >= 1 && m <= nn - 1) {
            changed |= zeta.sort_step(static_cast<std::size_t>(m));
            changed |= fin_k.try_jump(m);
            changed |= fin_k1.try_jump(m);
        }
        changed |= inf_k.try_jump(m);
        changed |= inf_k1.try_jump(m);
        if (!inf_k.certified() || !inf_k1.certified()) {
            return std::nullopt;
        }
        if (changed) {
            check();
        }
    }
    return rep;
}

}  // namespace detail

/// Replays all five processes over [0, horizon] and checks the identities
/// at every event time where some state changed. Needs 1 <= k <= n.
inline CouplingReport check_coupling(std::size_t n, std::int64_t k, double horizon,
                                     std::uint64_t seed, std::uint32_t replicate,
                                     const WindowPolicy& policy = {}) {
    if (n < 2 || k < 1 || k > static_cast<std::int64_t>(n)) {
        throw std::invalid_argument("check_coupling: need n >= 2 and 1 <= k <= n");
    }
    Site margin = policy.margin_for(horizon);
    for (int attempt = 0; attempt <= policy.max_doublings; ++attempt, margin *= 2) {
        if (auto rep = detail::run_coupling_once(n, k, horizon, seed, replicate, margin)) {
            rep->retries = attempt;
            return *rep;
        }
    }
    throw WindowExhausted("check_coupling: window breached after all doublings");
}

}  // namespace osp
