#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "coopv2x/stats.hpp"
#include "oracles.hpp"

using namespace coopv2x;

TEST_CASE("phi_cdf basic values") {
    CHECK(phi_cdf(0.0) == 0.5);
    // Deep lower tail, reference 6.220960574271784e-16.
    CHECK_THAT(phi_cdf(-8.0),
               Catch::Matchers::WithinRel(6.220960574271784e-16, 1e-13));
    CHECK_THAT(phi_cdf(-8.0),
               Catch::Matchers::WithinRel(static_cast<double>(testoracle::phi_ref(-8.0L)), 1e-13));
    CHECK_THAT(phi_cdf(1.959964), Catch::Matchers::WithinAbs(0.975, 1e-8));
}

TEST_CASE("phi_cdf matches quadrature oracle") {
    for (double x : {-6.0, -3.0, -1.959964, -0.5, 0.1, 1.0, 1.959964, 2.5, 4.0, 6.0}) {
        CHECK_THAT(phi_cdf(x), Catch::Matchers::WithinAbs(testoracle::phi_quadrature(x), 1e-14));
    }
}

TEST_CASE("phi_cdf monotone and domain-checked") {
    double prev = 0.0;
    for (double x = -38.0; x <= 38.0; x += 0.25) {
        const double v = phi_cdf(x);
        CHECK(v >= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK_THROWS_AS(phi_cdf(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(phi_cdf(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("phi_inv known values and bisection oracle") {
    CHECK(phi_inv(0.5) == 0.0);
    const double x975 = testoracle::bisect_increasing([](double x) { return phi_cdf(x); },
                                                      0.975, 0.0, 4.0);
    CHECK_THAT(phi_inv(0.975), Catch::Matchers::WithinAbs(x975, 1e-12));
    CHECK_THAT(phi_inv(0.975), Catch::Matchers::WithinAbs(1.959963984540054, 1e-12));
    CHECK_THAT(phi_inv(0.9999), Catch::Matchers::WithinAbs(3.7190164854556806, 1e-11));
    CHECK_THROWS_AS(phi_inv(0.0), std::domain_error);
    CHECK_THROWS_AS(phi_inv(1.0), std::domain_error);
    CHECK_THROWS_AS(phi_inv(-0.3), std::domain_error);
}

TEST_CASE("phi_inv round trip over the contract range") {
    // log-spaced from both ends of [1e-10, 1 - 1e-10]
    std::vector<double> ps;
    for (int i = 0; i <= 500; ++i) {
        const double p = std::pow(10.0, -10.0 + i * (10.0 - 0.30103) / 500.0);
        ps.push_back(p);
        ps.push_back(1.0 - p);
    }
    for (double p : ps) {
        const double x = phi_inv(p);
        CHECK_THAT(phi_cdf(x), Catch::Matchers::WithinAbs(p, 1e-12));
    }
}

TEST_CASE("q_gauss shares the phi_cdf kernel") {
    CHECK(q_gauss(0.0) == 0.5);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> ux(-9.0, 9.0);
    for (int i = 0; i < 200; ++i) {
        const double x = ux(gen);
        CHECK(q_gauss(x) == 1.0 - phi_cdf(x));  // definitional, bit-exact
    }
    CHECK_THAT(q_gauss(3.7190164854556806), Catch::Matchers::WithinRel(1e-4, 1e-10));
}

TEST_CASE("q_gauss_inv values and odd symmetry") {
    CHECK(q_gauss_inv(0.5) == 0.0);
    const double x = testoracle::bisect_decreasing([](double t) { return q_gauss(t); },
                                                   1e-4, 0.0, 8.0);
    CHECK_THAT(q_gauss_inv(1e-4), Catch::Matchers::WithinAbs(x, 1e-11));
    CHECK_THAT(q_gauss_inv(1e-4), Catch::Matchers::WithinAbs(3.7190164854556806, 1e-11));

    CHECK_THAT(q_gauss_inv(0.3) + q_gauss_inv(0.7), Catch::Matchers::WithinAbs(0.0, 1e-15));
    // For p >= 0.5, 1-p is exact and the symmetry is bitwise.
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> up(0.5, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double p = up(gen);
        if (p == 0.5) continue;
        CHECK(q_gauss_inv(p) == -q_gauss_inv(1.0 - p));
    }
    // Round trip
    for (double p : {1e-6, 1e-4, 0.01, 0.2, 0.5, 0.77, 0.9999}) {
        CHECK_THAT(q_gauss(q_gauss_inv(p)), Catch::Matchers::WithinAbs(p, 1e-12));
    }
}

TEST_CASE("trunc_pdf support and peak value") {
    const TruncGaussParams p{800.0, 100.0};
    CHECK(trunc_pdf(-1.0, p) == 0.0);
    CHECK(trunc_pdf(-1e-12, p) == 0.0);
    CHECK_THAT(trunc_pdf(800.0, p), Catch::Matchers::WithinRel(0.0039894228040143293, 1e-12));
    CHECK_THROWS_AS(trunc_pdf(1.0, TruncGaussParams{800.0, -1.0}), std::invalid_argument);
}

TEST_CASE("trunc_pdf integrates to one") {
    const TruncGaussParams p{800.0, 100.0};
    const double hi = p.mu + 12.0 * p.sigma;
    const int n = 1 << 21;
    const double h = hi / n;
    long double sum = 0.5L * (trunc_pdf(0.0, p) + trunc_pdf(hi, p));
    for (int i = 1; i < n; ++i) sum += trunc_pdf(i * h, p);
    CHECK_THAT(static_cast<double>(sum * h), Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("trunc_cdf endpoints and agreement with pdf integral") {
    const TruncGaussParams p{800.0, 100.0};
    CHECK(trunc_cdf(0.0, p) == 0.0);
    CHECK(trunc_cdf(-5.0, p) == 0.0);
    CHECK_THAT(trunc_cdf(p.mu + 12 * p.sigma, p), Catch::Matchers::WithinAbs(1.0, 1e-12));
    // midpoint: integrate pdf up to 820 by Simpson and compare
    const double q = 820.0;
    const int n = 40000;
    const double h = q / n;
    long double sum = trunc_pdf(0.0, p) + trunc_pdf(q, p);
    for (int i = 1; i < n; ++i) sum += trunc_pdf(i * h, p) * ((i % 2) ? 4.0L : 2.0L);
    CHECK_THAT(trunc_cdf(q, p), Catch::Matchers::WithinAbs(static_cast<double>(sum * h / 3.0L), 1e-10));
}

TEST_CASE("trunc_upper_quantile values and round trip") {
    const TruncGaussParams wide{800.0, 1.0};
    CHECK_THAT(trunc_upper_quantile(0.5, wide), Catch::Matchers::WithinAbs(800.0, 1e-9));

    const TruncGaussParams p{800.0, 100.0};
    const double qref = testoracle::bisect_increasing(
        [&](double q) { return trunc_cdf(q, p); }, 1.0 - 1e-4, 800.0, 2000.0);
    CHECK_THAT(trunc_upper_quantile(1e-4, p), Catch::Matchers::WithinRel(qref, 1e-10));
    CHECK_THAT(trunc_upper_quantile(1e-4, p), Catch::Matchers::WithinRel(1171.9016485455681, 1e-12));

    for (double delta : {0.5, 0.05, 1e-3, 1e-4}) {
        const double qs = trunc_upper_quantile(delta, p);
        const long double tail = testoracle::upper_tail_ref((qs - p.mu) / p.sigma) /
                                 testoracle::upper_tail_ref(-p.mu / p.sigma);
        CHECK_THAT(static_cast<double>(tail), Catch::Matchers::WithinAbs(delta, 1e-10));
    }
    CHECK_THROWS_AS(trunc_upper_quantile(0.0, p), std::domain_error);
    CHECK_THROWS_AS(trunc_upper_quantile(1.0, p), std::domain_error);
}

TEST_CASE("trunc_sample support, mean, and tail frequency") {
    const TruncGaussParams p{800.0, 100.0};
    RandomStream rng(12345);
    long double acc = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double s = trunc_sample(rng, p);
        REQUIRE(s >= 0.0);
        acc += s;
    }
    // truncation correction is < 1e-12 at mu/sigma = 8; SE = 0.1
    CHECK_THAT(static_cast<double>(acc / n), Catch::Matchers::WithinAbs(800.0, 0.3));

    RandomStream rng2(999);
    const double qs = trunc_upper_quantile(1e-4, p);
    const int m = 10000000;
    int above = 0;
    for (int i = 0; i < m; ++i) {
        if (trunc_sample(rng2, p) > qs) ++above;
    }
    const double freq = static_cast<double>(above) / m;
    const double se = std::sqrt(1e-4 * (1 - 1e-4) / m);
    CHECK_THAT(freq, Catch::Matchers::WithinAbs(1e-4, 3.0 * se));
}

TEST_CASE("sampler empirical CDF passes Kolmogorov-Smirnov at 1%") {
    const TruncGaussParams p{800.0, 100.0};
    RandomStream rng(20240601);
    const int n = 100000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = trunc_sample(rng, p);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = trunc_cdf(xs[i], p);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double crit = 1.6276 / std::sqrt(static_cast<double>(n));
    CHECK(d < crit);
}

TEST_CASE("random stream is deterministic per seed") {
    RandomStream a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const double ua = a.uniform01(), ub = b.uniform01(), uc = c.uniform01();
        all_equal = all_equal && (ua == ub);
        any_diff = any_diff || (ua != uc);
        CHECK(ua > 0.0);
        CHECK(ua < 1.0);
    }
    CHECK(all_equal);
    CHECK(any_diff);
}
