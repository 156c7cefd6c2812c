#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace coopv2x {

// ---------------------------------------------------------------------------
// Standard normal CDF / quantile and the Gaussian Q-function.
//
// phi_cdf routes through erfc; the quantile uses Wichura's PPND16 minimax
// rational approximation (AS 241) polished with one Newton step against
// phi_cdf, so the pair stays consistent to ~1 ulp even at tail probabilities
// around 1e-10.
// ---------------------------------------------------------------------------

inline constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;

/// Standard normal density.
inline double normal_pdf(double x) {
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF. Absolute error below 1e-14 over the real line.
inline double phi_cdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("phi_cdf: non-finite input");
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

/// Upper tail P{Z > z} with full relative precision (no 1 - CDF cancellation).
inline double normal_upper_tail(double z) {
    if (!std::isfinite(z)) throw std::domain_error("normal_upper_tail: non-finite input");
    return 0.5 * std::erfc(z * M_SQRT1_2);
}

/// Complementary CDF 1 - phi_cdf(x). Shares the erfc kernel with phi_cdf.
inline double q_gauss(double x) {
    return 1.0 - phi_cdf(x);
}

namespace detail {

// PPND16 (Wichura, AS 241) evaluated on the lower half p in (0, 0.5]; returns
// the nonpositive quantile for that half.
inline double ppnd16_lower(double p) {
    const double q = p - 0.5;
    if (q >= -0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    const double s = std::sqrt(-std::log(p));
    if (s <= 5.0) {
        const double t = s - 1.6;
        return -(((((((7.7454501427834140764e-4 * t + 0.0227238449892691845833) * t +
                      0.24178072517745061177) * t + 1.27045825245236838258) * t +
                    3.64784832476320460504) * t + 5.7694972214606914055) * t +
                  4.6303378461565452959) * t + 1.42343711074968357734) /
               (((((((1.05075007164441684324e-9 * t + 5.475938084995344946e-4) * t +
                     0.0151986665636164571966) * t + 0.14810397642748007459) * t +
                   0.68976733498510000455) * t + 1.6763848301838038494) * t +
                 2.05319162663775882187) * t + 1.0);
    }
    const double t = s - 5.0;
    return -(((((((2.01033439929228813265e-7 * t + 2.71155556874348757815e-5) * t +
                  0.0012426609473880784386) * t + 0.026532189526576123093) * t +
                0.29656057182850489123) * t + 1.7848265399172913358) * t +
              5.4637849111641143699) * t + 6.6579046435011037772) /
           (((((((2.04426310338993978564e-15 * t + 1.4215117583164458887e-7) * t +
                 1.8463183175100546818e-5) * t + 7.868691311456132591e-4) * t +
               0.0148753612908506148525) * t + 0.13692988092273580531) * t +
             0.59983220655588793769) * t + 1.0);
}

// Quantile on the lower half with one Newton polish against phi_cdf.
inline double phi_inv_lower(double p) {
    double x = ppnd16_lower(p);
    const double dens = normal_pdf(x);
    if (dens > 0.0) x -= (phi_cdf(x) - p) / dens;
    return x;
}

}  // namespace detail

/// Inverse standard normal CDF for p in (0, 1).
inline double phi_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("phi_inv: p outside (0,1)");
    if (p == 0.5) return 0.0;
    // Evaluate on min(p, 1-p) so the (p, 1-p) pair maps to one kernel call.
    return p < 0.5 ? detail::phi_inv_lower(p) : -detail::phi_inv_lower(1.0 - p);
}

/// Inverse Gaussian Q-function: q_gauss(q_gauss_inv(p)) = p.
inline double q_gauss_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_gauss_inv: p outside (0,1)");
    if (p == 0.5) return 0.0;
    return p < 0.5 ? -detail::phi_inv_lower(p) : detail::phi_inv_lower(1.0 - p);
}

// ---------------------------------------------------------------------------
// Gaussian truncated to [0, +inf), parameterized by the mean and standard
// deviation of the underlying (untruncated) normal.
// ---------------------------------------------------------------------------

struct TruncGaussParams {
    double mu = 800.0;    // bits/m, mean of the underlying Gaussian
    double sigma = 100.0; // bits/m, standard deviation of the underlying Gaussian

    void validate() const {
        if (!(std::isfinite(mu) && std::isfinite(sigma) && sigma > 0.0))
            throw std::invalid_argument("TruncGaussParams: sigma must be finite and > 0");
    }

    /// Mass of the untruncated Gaussian above 0, i.e. 1 - Phi(-mu/sigma).
    double tail_mass() const { return normal_upper_tail(-mu / sigma); }
};

/// Density of the truncated Gaussian; zero below the support.
inline double trunc_pdf(double q, const TruncGaussParams& p) {
    p.validate();
    if (q < 0.0) return 0.0;
    const double z = (q - p.mu) / p.sigma;
    return normal_pdf(z) / (p.sigma * p.tail_mass());
}

/// CDF of the truncated Gaussian.
inline double trunc_cdf(double q, const TruncGaussParams& p) {
    p.validate();
    if (q <= 0.0) return 0.0;
    const double z0 = -p.mu / p.sigma;
    const double z = (q - p.mu) / p.sigma;
    const double m = normal_upper_tail(z0);
    return (m - normal_upper_tail(z)) / m;
}

/// Upper quantile q* with P{q > q*} = delta under the truncated distribution.
inline double trunc_upper_quantile(double delta, const TruncGaussParams& p) {
    p.validate();
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("trunc_upper_quantile: delta outside (0,1)");
    return p.mu + p.sigma * phi_inv(1.0 - delta * p.tail_mass());
}

// ---------------------------------------------------------------------------
// Caller-owned random stream. All draws are generated through internal
// kernels (inverse-CDF normal, inverse-CDF exponential) so sequences depend
// only on the mt19937_64 state, not on the standard library's distribution
// implementations.
// ---------------------------------------------------------------------------

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw on the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw via the inverse CDF.
    double standard_normal() { return phi_inv(uniform01()); }

    /// Exponential(1) draw.
    double exp1() { return -std::log1p(-uniform01()); }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

/// Sample from the truncated Gaussian by rejection from the untruncated one.
/// Acceptance probability equals the positive-tail mass, so the guard cap is
/// unreachable for any reasonable mu/sigma.
inline double trunc_sample(RandomStream& rng, const TruncGaussParams& p) {
    p.validate();
    constexpr int max_rejects = 1000000;
    for (int i = 0; i < max_rejects; ++i) {
        const double x = p.mu + p.sigma * rng.standard_normal();
        if (x >= 0.0) return x;
    }
    throw std::runtime_error("trunc_sample: rejection cap exceeded");
}

}  // namespace coopv2x
