#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "coopv2x/scenario.hpp"
#include "coopv2x/stats.hpp"

namespace coopv2x {

// ---------------------------------------------------------------------------
// Per-link physics: large-scale gain, SNR, finite-blocklength rate, analytic
// outage of the per-meter data-volume requirement, and the derived constants
// of the cooperative power split (vartheta, chi, the boundary curve g).
// ---------------------------------------------------------------------------

inline constexpr double ln2 = std::numbers::ln2;

struct LinkState {
    double distance;   // m, > 0
    double gain;       // dimensionless fading power gain, >= 0
    double bandwidth;  // Hz
    double eps;        // decoding error probability target

    void validate() const {
        if (!(std::isfinite(distance) && distance > 0.0))
            throw std::invalid_argument("LinkState: distance must be > 0");
        if (!(std::isfinite(bandwidth) && bandwidth > 0.0))
            throw std::invalid_argument("LinkState: bandwidth must be > 0");
        if (!(eps > 0.0 && eps < 0.5))
            throw std::invalid_argument("LinkState: eps must lie in (0, 0.5)");
        if (!(std::isfinite(gain) && gain >= 0.0))
            throw std::invalid_argument("LinkState: gain must be >= 0");
    }
};

/// Large-scale channel gain phi0 * d^-alpha.
inline double large_scale_gain(double d, const SystemParams& params) {
    if (!(d > 0.0)) throw std::domain_error("large_scale_gain: distance must be > 0");
    return params.phi0 * std::pow(d, -params.alpha);
}

/// Received SNR at transmit power p; linear in p.
inline double snr(double p, const LinkState& link, const SystemParams& params) {
    if (!(p >= 0.0)) throw std::domain_error("snr: negative power");
    return large_scale_gain(link.distance, params) * link.gain * p /
           (params.phi1 * params.n0 * link.bandwidth);
}

/// Dispersion penalty sqrt(1/(tau B)) * Qinv(eps), in nats.
inline double fbl_dispersion(const LinkState& link, const SystemParams& params) {
    return std::sqrt(1.0 / (params.tau * link.bandwidth)) * q_gauss_inv(link.eps);
}

/// Finite-blocklength rate in bits/s. May be negative at low power; callers
/// clamp for display only, the allocation algebra needs the raw value.
inline double fbl_rate(double p, const LinkState& link, const SystemParams& params) {
    return link.bandwidth / ln2 *
           (std::log1p(snr(p, link, params)) - fbl_dispersion(link, params));
}

/// Deliverable data volume per meter of road at speed v.
inline double kappa(double rate_sum, double v) {
    if (!(v > 0.0)) throw std::domain_error("kappa: speed must be > 0");
    return rate_sum / v;
}

/// P{q v > rate_sum} for q truncated-Gaussian; 1 whenever kappa <= 0.
inline double analytic_outage(double rate_sum, double v, const SystemParams& params) {
    const double k = kappa(rate_sum, v);
    if (k <= 0.0) return 1.0;
    const TruncGaussParams& t = params.trunc;
    return normal_upper_tail((k - t.mu) / t.sigma) / t.tail_mass();
}

/// Sum of both links' rate offsets at zero SNR (nonpositive for eps < 0.5).
inline double vartheta(const SystemParams& params) {
    const double dr = std::sqrt(1.0 / (params.tau * params.b_r)) * q_gauss_inv(params.eps_r);
    const double dv = std::sqrt(1.0 / (params.tau * params.b_v)) * q_gauss_inv(params.eps_v);
    return -(params.b_r / ln2) * dr - (params.b_v / ln2) * dv;
}

/// Cooperative rate requirement in nats, normalized by the RSU bandwidth.
inline double chi(double v, const SystemParams& params) {
    if (!(v > 0.0)) throw std::domain_error("chi: speed must be > 0");
    return (trunc_upper_quantile(params.delta, params.trunc) * v - vartheta(params)) *
           ln2 / params.b_r;
}

namespace detail {

// Shorthands for the cooperative closed forms. c is the power that produces
// unit SNR on the link; a is its inverse.
inline double unit_snr_power(const LinkState& link, const SystemParams& params) {
    return params.phi1 * params.n0 * link.bandwidth /
           (params.phi0 * std::pow(link.distance, -params.alpha) * link.gain);
}

inline double snr_per_watt(const LinkState& link, const SystemParams& params) {
    return params.phi0 * std::pow(link.distance, -params.alpha) * link.gain /
           (params.phi1 * params.n0 * link.bandwidth);
}

}  // namespace detail

/// Minimum RSU power closing the outage constraint at vehicle power p_v:
/// the boundary curve of the cooperative region. Decreasing and convex.
inline double g_of_pv(double p_v, const LinkState& link_v, const LinkState& link_r,
                      double v, const SystemParams& params) {
    if (!(p_v >= 0.0)) throw std::domain_error("g_of_pv: negative vehicle power");
    if (!(link_v.gain > 0.0) || !(link_r.gain > 0.0))
        throw std::domain_error("g_of_pv: zero fading gain makes the link singular");
    const double a_v = detail::snr_per_watt(link_v, params);
    const double c_r = detail::unit_snr_power(link_r, params);
    return c_r * std::expm1(chi(v, params) -
                            link_v.bandwidth / link_r.bandwidth * std::log1p(a_v * p_v));
}

/// Inverse of g: the vehicle power for which g(p_v) = p_r.
inline double g_inverse(double p_r, const LinkState& link_v, const LinkState& link_r,
                        double v, const SystemParams& params) {
    if (!(p_r >= 0.0)) throw std::domain_error("g_inverse: negative RSU power");
    if (!(link_v.gain > 0.0) || !(link_r.gain > 0.0))
        throw std::domain_error("g_inverse: zero fading gain makes the link singular");
    const double a_v = detail::snr_per_watt(link_v, params);
    const double c_r = detail::unit_snr_power(link_r, params);
    const double l = (chi(v, params) - std::log1p(p_r / c_r)) *
                     link_r.bandwidth / link_v.bandwidth;
    return std::expm1(l) / a_v;
}

}  // namespace coopv2x
