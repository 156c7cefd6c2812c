#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "coopv2x/stats.hpp"

namespace coopv2x {

/// dBm -> watts (also used for dBm/Hz -> W/Hz).
inline double dbm_to_watt(double dbm) {
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

/// watts -> dBm; zero maps to -inf.
inline double watt_to_dbm(double w) {
    return 10.0 * std::log10(w * 1e3);
}

// ---------------------------------------------------------------------------
// Physical-layer and statistical constants. Defaults follow the common
// urban-road V2X setup: -174 dBm/Hz noise floor, 40/36 dBm power caps,
// 1 MHz / 0.5 MHz downlink bands, 150 m V2V range.
// ---------------------------------------------------------------------------

struct SystemParams {
    double phi0 = 1e-3;   // channel constant (antenna gain, carrier frequency)
    double alpha = 3.0;   // path-loss exponent
    double phi1 = 1.5;    // SNR loss coefficient, >= 1
    double tau = 1e-3;    // s, transmission duration
    double n0 = dbm_to_watt(-174.0);  // W/Hz, noise spectral density
    double b_r = 1e6;     // Hz, RSU bandwidth
    double b_v = 5e5;     // Hz, vehicle bandwidth
    double p_rm = dbm_to_watt(40.0);  // W, max RSU transmit power
    double p_vm = dbm_to_watt(36.0);  // W, max vehicle transmit power
    double d_vm = 150.0;  // m, max V2V communication range
    double eps_r = 1e-4;  // decoding error probability, V2I downlink
    double eps_v = 1e-4;  // decoding error probability, V2V downlink
    double delta = 1e-4;  // max outage probability
    TruncGaussParams trunc;

    void validate() const {
        auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
        if (!pos(phi0) || !pos(alpha) || !pos(tau) || !pos(n0) || !pos(b_r) ||
            !pos(b_v) || !pos(p_rm) || !pos(p_vm) || !pos(d_vm))
            throw std::invalid_argument("SystemParams: all physical constants must be positive");
        if (!(std::isfinite(phi1) && phi1 >= 1.0))
            throw std::invalid_argument("SystemParams: phi1 must be >= 1");
        auto prob = [](double p) { return p > 0.0 && p < 0.5; };
        if (!prob(eps_r) || !prob(eps_v) || !prob(delta))
            throw std::invalid_argument("SystemParams: eps_r, eps_v, delta must lie in (0, 0.5)");
        trunc.validate();
    }
};

struct RoadGeometry {
    double road_length = 432.0;      // m, segment covered by the RSU
    double rsu_offset = 250.0;       // m, perpendicular distance RSU-to-road
    double lane_width = 3.5;         // m
    double rsu_longitudinal = 216.0; // m along the road (mid-segment)

    void validate() const {
        auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
        if (!pos(road_length) || !pos(rsu_offset) || !pos(lane_width))
            throw std::invalid_argument("RoadGeometry: lengths must be positive");
        if (!(rsu_longitudinal >= 0.0 && rsu_longitudinal <= road_length))
            throw std::invalid_argument("RoadGeometry: rsu_longitudinal outside road");
    }
};

enum class Direction { forward, backward };

struct VehicleState {
    double position = 0.0;  // m along the road
    double speed = 20.0;    // m/s, >= 0
    Direction direction = Direction::forward;
    int lane_index = 0;     // 0 or 1

    void validate(const RoadGeometry& geom) const {
        if (!(position >= 0.0 && position <= geom.road_length))
            throw std::invalid_argument("VehicleState: position outside road");
        if (!(std::isfinite(speed) && speed >= 0.0))
            throw std::invalid_argument("VehicleState: negative speed");
        if (lane_index != 0 && lane_index != 1)
            throw std::invalid_argument("VehicleState: lane_index must be 0 or 1");
    }
};

/// Euclidean distance from a vehicle to the RSU.
inline double distance_to_rsu(const RoadGeometry& geom, const VehicleState& veh) {
    return std::hypot(geom.rsu_offset, veh.position - geom.rsu_longitudinal);
}

/// Distance between two vehicles; lane separation applies across lanes.
inline double inter_vehicle_distance(const RoadGeometry& geom, const VehicleState& a,
                                     const VehicleState& b) {
    const double dx = a.position - b.position;
    if (a.lane_index == b.lane_index) return std::abs(dx);
    return std::hypot(dx, geom.lane_width);
}

struct AdvanceResult {
    VehicleState first;
    VehicleState second;
    bool terminal = false;  // one of the vehicles reached the road boundary
};

/// Move both vehicles by dt along their directions, clamped to the road.
inline AdvanceResult advance(const RoadGeometry& geom, const VehicleState& a,
                             const VehicleState& b, double dt) {
    if (!(dt >= 0.0)) throw std::domain_error("advance: dt must be >= 0");
    auto step = [&](VehicleState v) {
        const double sign = (v.direction == Direction::forward) ? 1.0 : -1.0;
        v.position += sign * v.speed * dt;
        return v;
    };
    AdvanceResult out{step(a), step(b), false};
    for (VehicleState* v : {&out.first, &out.second}) {
        if (v->position < 0.0 || v->position > geom.road_length) {
            v->position = std::clamp(v->position, 0.0, geom.road_length);
            out.terminal = true;
        }
    }
    return out;
}

/// V2V link usable iff the inter-vehicle distance is within range (inclusive).
inline bool v2v_available(double d_v, const SystemParams& params) {
    if (!(d_v >= 0.0)) throw std::domain_error("v2v_available: negative distance");
    return d_v <= params.d_vm;
}

/// Target-position interval [x_lo, x_hi] where V2V is available under the
/// opposite-end symmetric pairing (partner at road_length - x). Empty when the
/// V2V range cannot even bridge the lane separation.
inline std::optional<std::pair<double, double>> v2v_window(const RoadGeometry& geom,
                                                           const SystemParams& params) {
    if (params.d_vm < geom.lane_width) return std::nullopt;
    const double half = std::sqrt(params.d_vm * params.d_vm -
                                  geom.lane_width * geom.lane_width) / 2.0;
    const double mid = geom.road_length / 2.0;
    return std::make_pair(std::max(0.0, mid - half),
                          std::min(geom.road_length, mid + half));
}

}  // namespace coopv2x
