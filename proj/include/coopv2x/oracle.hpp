#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "coopv2x/allocator.hpp"
#include "coopv2x/link.hpp"

namespace coopv2x {

// ---------------------------------------------------------------------------
// Brute-force reference solvers. They touch only the rate/outage primitives,
// never the closed forms, so closed-form results can be validated against
// them. Kept deterministic for a fixed spec.
// ---------------------------------------------------------------------------

struct GridSpec {
    double p_v_lo = 0.0;
    double p_v_hi = -1.0;  // negative: use params.p_vm
    double p_r_lo = 0.0;
    double p_r_hi = -1.0;  // negative: use params.p_rm
    int coarse_points = 400;
    int refine_rounds = 3;  // each round shrinks the window 10x around the incumbent

    void validate(const SystemParams& params) const {
        const double vhi = p_v_hi < 0.0 ? params.p_vm : p_v_hi;
        const double rhi = p_r_hi < 0.0 ? params.p_rm : p_r_hi;
        if (coarse_points < 2) throw std::invalid_argument("GridSpec: need >= 2 points");
        if (refine_rounds < 0) throw std::invalid_argument("GridSpec: negative refine_rounds");
        if (!(p_v_lo >= 0.0 && vhi <= params.p_vm && p_v_lo < vhi))
            throw std::invalid_argument("GridSpec: p_v range outside the power box");
        if (!(p_r_lo >= 0.0 && rhi <= params.p_rm && p_r_lo < rhi))
            throw std::invalid_argument("GridSpec: p_r range outside the power box");
    }
};

/// Exhaustive minimum-total-power search over the (p_v, p_r) grid under the
/// analytic outage constraint, followed by windowed refinement around the
/// incumbent. With no feasible grid point the least-outage point is returned,
/// flagged infeasible.
inline PowerAllocation grid_search_min_power(const LinkState& link_v, const LinkState& link_r,
                                             double v, const SystemParams& params,
                                             const GridSpec& spec = {}) {
    spec.validate(params);
    const double full_v_lo = spec.p_v_lo;
    const double full_v_hi = spec.p_v_hi < 0.0 ? params.p_vm : spec.p_v_hi;
    const double full_r_lo = spec.p_r_lo;
    const double full_r_hi = spec.p_r_hi < 0.0 ? params.p_rm : spec.p_r_hi;
    const int n = spec.coarse_points;

    const double disp_v = (link_v.bandwidth / ln2) * fbl_dispersion(link_v, params);
    const double disp_r = (link_r.bandwidth / ln2) * fbl_dispersion(link_r, params);
    auto rate_v = [&](double p) { return (link_v.bandwidth / ln2) * std::log1p(snr(p, link_v, params)) - disp_v; };
    auto rate_r = [&](double p) { return (link_r.bandwidth / ln2) * std::log1p(snr(p, link_r, params)) - disp_r; };

    bool have_feasible = false;
    double best_total = std::numeric_limits<double>::infinity();
    double best_pv = full_v_hi, best_pr = full_r_hi;
    double least_outage = std::numeric_limits<double>::infinity();
    double lo_pv = full_v_lo, lo_pr = full_r_lo;

    double v_lo = full_v_lo, v_hi = full_v_hi, r_lo = full_r_lo, r_hi = full_r_hi;
    for (int round = 0; round <= spec.refine_rounds; ++round) {
        const double v_step = (v_hi - v_lo) / (n - 1);
        const double r_step = (r_hi - r_lo) / (n - 1);
        for (int iv = 0; iv < n; ++iv) {
            const double pv = v_lo + iv * v_step;
            if (have_feasible && pv >= best_total) break;  // p_r >= 0 cannot recover
            const double rv = rate_v(pv);
            for (int ir = 0; ir < n; ++ir) {
                const double pr = r_lo + ir * r_step;
                if (have_feasible && pv + pr >= best_total) break;
                const double outage = analytic_outage(rv + rate_r(pr), v, params);
                if (outage <= params.delta) {
                    // first feasible p_r in this row is the row's best total
                    have_feasible = true;
                    best_total = pv + pr;
                    best_pv = pv;
                    best_pr = pr;
                    break;
                }
                if (!have_feasible && outage < least_outage) {
                    least_outage = outage;
                    lo_pv = pv;
                    lo_pr = pr;
                }
            }
        }
        // shrink the window around the incumbent (or least-outage point)
        const double cv = have_feasible ? best_pv : lo_pv;
        const double cr = have_feasible ? best_pr : lo_pr;
        const double v_w = (v_hi - v_lo) / 10.0;
        const double r_w = (r_hi - r_lo) / 10.0;
        v_lo = std::max(full_v_lo, cv - v_w / 2.0);
        v_hi = std::min(full_v_hi, cv + v_w / 2.0);
        r_lo = std::max(full_r_lo, cr - r_w / 2.0);
        r_hi = std::min(full_r_hi, cr + r_w / 2.0);
    }

    PowerAllocation a;
    a.mode = Mode::COOPERATIVE;
    a.p_v = have_feasible ? best_pv : lo_pv;
    a.p_r = have_feasible ? best_pr : lo_pr;
    return check_feasibility(a, link_v, link_r, v, params);
}

/// Bisection on the single-link outage constraint: the least power whose
/// outage meets delta, or nothing when even p_max falls short. Outage at zero
/// power is 1, so the bracket always exists.
inline std::optional<double> bisect_single_link_power(const LinkState& link, double v,
                                                      const SystemParams& params, double p_max) {
    auto outage = [&](double p) { return analytic_outage(fbl_rate(p, link, params), v, params); };
    if (outage(p_max) > params.delta) return std::nullopt;
    double lo = 0.0, hi = p_max;
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (outage(mid) <= params.delta ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace coopv2x
