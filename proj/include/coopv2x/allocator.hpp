#pragma once

#include <algorithm>
#include <cmath>

#include "coopv2x/link.hpp"
#include "coopv2x/scenario.hpp"
#include "coopv2x/stats.hpp"

namespace coopv2x {

// ---------------------------------------------------------------------------
// Closed-form minimum-power allocations for the three transmission modes and
// the min-total-power selection among them. Every returned allocation carries
// the recomputed outage of its own rate sum, so clamped (best-effort) results
// are reported rather than rejected.
// ---------------------------------------------------------------------------

enum class Mode { V2I_ONLY, V2V_ONLY, COOPERATIVE };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::V2I_ONLY: return "V2I_ONLY";
        case Mode::V2V_ONLY: return "V2V_ONLY";
        case Mode::COOPERATIVE: return "COOPERATIVE";
    }
    return "?";
}

struct PowerAllocation {
    double p_v = 0.0;  // W, vehicle transmit power
    double p_r = 0.0;  // W, RSU transmit power
    Mode mode = Mode::V2I_ONLY;
    bool feasible = false;
    double total = 0.0;             // W, p_v + p_r
    double achieved_outage = 1.0;   // outage of this allocation's rate sum
};

/// Rate sum entering the outage constraint for the allocation's mode. Single
/// link modes count only their own link; the cooperative mode pays both
/// dispersion penalties even at zero power on one side.
inline double allocation_rate_sum(const PowerAllocation& a, const LinkState& link_v,
                                  const LinkState& link_r, const SystemParams& params) {
    switch (a.mode) {
        case Mode::V2I_ONLY: return fbl_rate(a.p_r, link_r, params);
        case Mode::V2V_ONLY: return fbl_rate(a.p_v, link_v, params);
        case Mode::COOPERATIVE:
            return fbl_rate(a.p_r, link_r, params) + fbl_rate(a.p_v, link_v, params);
    }
    return 0.0;
}

// Absolute slack on the outage comparison; covers rounding at the boundary
// where closed forms land exactly on delta.
inline constexpr double feasibility_slack = 1e-12;

/// Recompute achieved outage and the feasibility flag from the final powers.
inline PowerAllocation check_feasibility(PowerAllocation a, const LinkState& link_v,
                                         const LinkState& link_r, double v,
                                         const SystemParams& params) {
    a.total = a.p_v + a.p_r;
    a.achieved_outage =
        analytic_outage(allocation_rate_sum(a, link_v, link_r, params), v, params);
    a.feasible = a.achieved_outage <= params.delta + feasibility_slack;
    return a;
}

namespace detail {

// Minimum power for one link alone to close the outage constraint, projected
// onto [0, p_max]. A dead link (gain 0) needs infinite power and lands on the
// cap with feasible = false.
inline double single_link_power(const LinkState& link, double v, const SystemParams& params,
                                double p_max) {
    const double qstar = trunc_upper_quantile(params.delta, params.trunc);
    const double exponent = qstar * v * ln2 / link.bandwidth + fbl_dispersion(link, params);
    const double need = unit_snr_power(link, params) * std::expm1(exponent);
    if (!std::isfinite(need)) return p_max;
    return std::clamp(need, 0.0, p_max);
}

}  // namespace detail

/// Mode psi1: the RSU serves the whole requirement, p_v = 0.
inline PowerAllocation allocate_v2i_only(const LinkState& link_r, double v,
                                         const SystemParams& params) {
    params.validate();
    link_r.validate();
    PowerAllocation a;
    a.mode = Mode::V2I_ONLY;
    a.p_r = detail::single_link_power(link_r, v, params, params.p_rm);
    // link_v is unused for this mode's rate sum
    return check_feasibility(a, link_r, link_r, v, params);
}

/// Mode psi2: the partner vehicle serves the whole requirement, p_r = 0.
/// Callers gate on v2v_available.
inline PowerAllocation allocate_v2v_only(const LinkState& link_v, double v,
                                         const SystemParams& params) {
    params.validate();
    link_v.validate();
    PowerAllocation a;
    a.mode = Mode::V2V_ONLY;
    a.p_v = detail::single_link_power(link_v, v, params, params.p_vm);
    return check_feasibility(a, link_v, link_v, v, params);
}

/// Mode psi3: both links transmit. The interior split comes from the
/// stationarity condition g'(p_v) = -1 on the constraint boundary; when a
/// power cap binds, the remaining free power is re-solved from the boundary
/// curve before its own projection, so the box is exhausted before the
/// allocation is declared infeasible.
inline PowerAllocation allocate_cooperative(const LinkState& link_v, const LinkState& link_r,
                                            double v, const SystemParams& params) {
    params.validate();
    link_v.validate();
    link_r.validate();
    PowerAllocation a;
    a.mode = Mode::COOPERATIVE;

    const double gv = std::pow(link_v.distance, -params.alpha) * link_v.gain;
    const double gr = std::pow(link_r.distance, -params.alpha) * link_r.gain;
    const double x = chi(v, params);

    if (gv <= 0.0 && gr <= 0.0) {
        return check_feasibility(a, link_v, link_r, v, params);  // hopeless, report as-is
    }
    if (gv <= 0.0) {
        const double need = detail::unit_snr_power(link_r, params) * std::expm1(x);
        a.p_r = std::clamp(need, 0.0, params.p_rm);
        return check_feasibility(a, link_v, link_r, v, params);
    }
    if (gr <= 0.0) {
        const double need = detail::unit_snr_power(link_v, params) *
                            std::expm1(x * params.b_r / params.b_v);
        a.p_v = std::isfinite(need) ? std::clamp(need, 0.0, params.p_vm) : params.p_vm;
        return check_feasibility(a, link_v, link_r, v, params);
    }

    const double ln_k = std::log(gr) - std::log(gv) - x;
    const double share = link_r.bandwidth / (link_v.bandwidth + link_r.bandwidth);
    const double pv_raw = detail::unit_snr_power(link_v, params) * std::expm1(-share * ln_k);
    const double pr_raw =
        detail::unit_snr_power(link_r, params) * std::expm1(x + (1.0 - share) * ln_k);

    double pv = std::isfinite(pv_raw) ? std::clamp(pv_raw, 0.0, params.p_vm) : params.p_vm;
    double pr;
    if (pv != pv_raw) {
        pr = std::clamp(g_of_pv(pv, link_v, link_r, v, params), 0.0, params.p_rm);
    } else {
        pr = std::isfinite(pr_raw) ? std::clamp(pr_raw, 0.0, params.p_rm) : params.p_rm;
        if (pr != pr_raw) {
            pv = std::clamp(g_inverse(pr, link_v, link_r, v, params), 0.0, params.p_vm);
        }
    }
    a.p_v = pv;
    a.p_r = pr;
    return check_feasibility(a, link_v, link_r, v, params);
}

namespace detail {

inline bool better_candidate(const PowerAllocation& challenger, const PowerAllocation& best) {
    if (challenger.feasible != best.feasible) return challenger.feasible;
    if (challenger.feasible) return challenger.total < best.total;
    if (challenger.achieved_outage != best.achieved_outage)
        return challenger.achieved_outage < best.achieved_outage;
    return challenger.total < best.total;
}

}  // namespace detail

/// Min-total-power selection over the candidate modes. The single-V2I mode is
/// always a candidate; the V2V-assisted modes join only within V2V range.
/// With no feasible candidate the least-outage one is returned, flagged.
inline PowerAllocation allocate_optimal(const LinkState& link_v, const LinkState& link_r,
                                        double v, const SystemParams& params, double d_v) {
    PowerAllocation best = allocate_v2i_only(link_r, v, params);
    if (v2v_available(d_v, params)) {
        for (const PowerAllocation& c : {allocate_v2v_only(link_v, v, params),
                                         allocate_cooperative(link_v, link_r, v, params)}) {
            if (detail::better_candidate(c, best)) best = c;
        }
    }
    return best;
}

}  // namespace coopv2x
