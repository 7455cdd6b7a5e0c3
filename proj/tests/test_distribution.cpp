#include <doctest.h>

#include <cmath>

#include "wchaos/distribution.hpp"
#include "wchaos/hermite.hpp"
#include "wchaos/quadrature.hpp"

using namespace wchaos;

TEST_CASE("text form round-trips") {
    for (const char* s : {"delta@0.5", "ddelta^2@0", "heaviside@-1", "pv1x", "logabs",
                          "xlogabs", "delta@-0.25"}) {
        auto spec = DistributionSpec::parse(s);
        CHECK(spec.to_string() == s);
    }
    CHECK_THROWS_AS(DistributionSpec::parse("gamma@1"), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::parse("delta@abc"), std::invalid_argument);
}

TEST_CASE("positivity flag") {
    CHECK(DistributionSpec::delta(0.0).is_positive());
    CHECK(DistributionSpec::heaviside(1.0).is_positive());
    CHECK_FALSE(DistributionSpec::log_abs().is_positive());
    CHECK_FALSE(DistributionSpec::pv_recip().is_positive());
    CHECK_FALSE(DistributionSpec::delta_derivative(0.0, 1).is_positive());
}

TEST_CASE("delta pairings: closed sifting values") {
    auto d0 = DistributionSpec::delta(0.0);
    CHECK(pair_gaussian(d0, 1.0, 2) ==
          doctest::Approx(-1.0 / kSqrt2Pi).epsilon(1e-14));
    CHECK(pair_gaussian(d0, 1.0, 0) == doctest::Approx(norm_pdf(0.0)).epsilon(1e-14));
    CHECK(pair_gaussian(d0, 1.0, 4) == doctest::Approx(3.0 * norm_pdf(0.0)).epsilon(1e-14));
    // odd orders vanish exactly at y = 0
    for (long n : {1L, 3L, 5L, 17L}) CHECK(pair_gaussian(d0, 1.0, n) == 0.0);

    auto dy = DistributionSpec::delta(0.7);
    CHECK(pair_gaussian(dy, 2.0, 3) ==
          doctest::Approx(hermite_eval(3, 0.35) * norm_pdf(0.35) / 2.0).epsilon(1e-14));
}

TEST_CASE("scaling covariance of delta pairings") {
    for (double y : {0.0, 0.4, -1.3}) {
        for (double c : {0.5, 2.0, 3.7}) {
            for (long n : {0L, 1L, 2L, 5L}) {
                const double lhs = pair_gaussian(DistributionSpec::delta(y), c, n);
                const double rhs =
                    pair_gaussian(DistributionSpec::delta(y / c), 1.0, n) / c;
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("delta derivative pairing reduces to a Hermite shift") {
    // E[delta_y^{(k)}(cZ) H_n(Z)] = c^{-(k+1)} H_{n+k}(y/c) phi(y/c)
    auto spec = DistributionSpec::delta_derivative(0.3, 2);
    const double u = 0.3 / 1.5;
    CHECK(pair_gaussian(spec, 1.5, 3) ==
          doctest::Approx(std::pow(1.5, -3.0) * hermite_eval(5, u) * norm_pdf(u))
              .epsilon(1e-13));
    CHECK_THROWS_AS(DistributionSpec::delta_derivative(0.0, 0), std::invalid_argument);
}

TEST_CASE("heaviside pairings") {
    auto h = DistributionSpec::heaviside(0.0);
    CHECK(pair_gaussian(h, 1.0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pair_gaussian(h, 1.0, 1) == doctest::Approx(-norm_pdf(0.0)).epsilon(1e-14));
    auto h1 = DistributionSpec::heaviside(-1.0);
    CHECK(pair_gaussian(h1, 1.0, 0) == doctest::Approx(norm_cdf(-1.0)).epsilon(1e-14));
    CHECK(pair_gaussian(h1, 1.0, 3) ==
          doctest::Approx(-hermite_eval(2, -1.0) * norm_pdf(-1.0)).epsilon(1e-14));
}

TEST_CASE("log-abs pairings match the double-factorial ladder") {
    auto spec = DistributionSpec::log_abs();
    // a_{2k+2} = (-1)^k (2k)!!; quadrature path against the exact values
    CHECK(pair_gaussian(spec, 1.0, 2) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(pair_gaussian(spec, 1.0, 4) == doctest::Approx(-2.0).epsilon(1e-11));
    CHECK(pair_gaussian(spec, 1.0, 6) == doctest::Approx(8.0).epsilon(1e-11));
    CHECK(pair_gaussian(spec, 1.0, 8) == doctest::Approx(-48.0).epsilon(1e-11));
    for (long n : {1L, 3L, 9L}) CHECK(pair_gaussian(spec, 1.0, n) == 0.0);
    CHECK(pair_gaussian(spec, 1.0, 0) == doctest::Approx(kMeanLogAbsGauss).epsilon(1e-14));
    CHECK(pair_gaussian(spec, 2.0, 0) ==
          doctest::Approx(kMeanLogAbsGauss + std::log(2.0)).epsilon(1e-14));

    // larger orders against the ladder
    auto ladder = pairing_ladder(spec, 1.0, 40);
    for (long n = 2; n <= 40; n += 2) {
        const double quad = pair_gaussian(spec, 1.0, n);
        CHECK(quad == doctest::Approx(ladder[n].value()).epsilon(1e-10));
    }
    CHECK_THROWS_AS(pair_gaussian(spec, 1.0, kMaxQuadraturePairingOrder + 2),
                    std::domain_error);
}

TEST_CASE("principal value pairings") {
    auto spec = DistributionSpec::pv_recip();
    CHECK(pair_gaussian(spec, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-11));
    // even orders vanish exactly under the symmetric fold
    for (long n : {0L, 2L, 8L}) CHECK(pair_gaussian(spec, 1.0, n) == 0.0);
    CHECK(pair_gaussian(spec, 1.0, 3) == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(pair_gaussian(spec, 1.0, 5) == doctest::Approx(8.0).epsilon(1e-10));
    // 1/c scaling
    CHECK(pair_gaussian(spec, 4.0, 3) == doctest::Approx(-0.5).epsilon(1e-10));

    auto ladder = pairing_ladder(spec, 1.0, 31);
    for (long n = 1; n <= 31; n += 2)
        CHECK(pair_gaussian(spec, 1.0, n) ==
              doctest::Approx(ladder[n].value()).epsilon(1e-9));
}

TEST_CASE("x log|x| - x pairings") {
    auto spec = DistributionSpec::x_log_abs_minus_x();
    CHECK(pair_gaussian(spec, 1.0, 1) == doctest::Approx(kMeanLogAbsGauss).epsilon(1e-13));
    // a_{2k+3} = (-1)^k (2k)!! at c = 1; quadrature vs ladder
    CHECK(pair_gaussian(spec, 1.0, 3) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pair_gaussian(spec, 1.0, 5) == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(pair_gaussian(spec, 1.0, 0) == 0.0);
    CHECK(pair_gaussian(spec, 1.0, 4) == 0.0);
}

TEST_CASE("smooth pairing: sin against explicit moments") {
    // E[sin(cZ) H_n(Z)]: sin(cx) = sum (-1)^m c^{2m+1} x^{2m+1}/(2m+1)!;
    // known closed form E[sin(cZ)H_n(Z)] = e^{-c^2/2} c^n (-1)^{(n-1)/2} for odd n
    auto spec = DistributionSpec::smooth([](double x) { return std::sin(x); }, 0.0, 1.0);
    for (double c : {0.5, 1.0}) {
        for (long n : {1L, 3L, 5L}) {
            const double expected =
                std::exp(-0.5 * c * c) * std::pow(c, static_cast<double>(n)) *
                ((n % 4 == 1) ? 1.0 : -1.0);
            CHECK(pair_gaussian(spec, c, n) == doctest::Approx(expected).epsilon(1e-12));
        }
        CHECK(std::abs(pair_gaussian(spec, c, 2)) < 1e-14);
    }
}

TEST_CASE("pairing input validation") {
    auto d = DistributionSpec::delta(0.0);
    CHECK_THROWS_AS(pair_gaussian(d, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(pair_gaussian(d, -1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(pair_gaussian(d, 1.0, -2), std::invalid_argument);
    // raw pairing overflows double near n ~ 320 at y = 0
    CHECK_THROWS_AS(pair_gaussian(d, 1.0, 340), std::domain_error);
    // the ladder still covers it
    auto ladder = pairing_ladder(d, 1.0, 340);
    CHECK(ladder[340].sign == 1);  // k = 170 even
    CHECK(std::isfinite(ladder[340].log_abs));
}

TEST_CASE("mollified delta peak and mass") {
    auto d = DistributionSpec::delta(0.0);
    for (double eps : {0.3, 0.05}) {
        CHECK(mollified_eval(d, eps, 0.0) ==
              doctest::Approx(1.0 / (eps * kSqrt2Pi)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(mollified_eval(d, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mollified_eval(d, -0.1, 0.0), std::invalid_argument);

    // total mass by quadrature
    const double mass = integrate_adaptive(
                            [&](double x) { return mollified_eval(d, 0.2, x); }, -4.0, 4.0)
                            .value;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mollified heaviside saturates to the total mass") {
    auto h = DistributionSpec::heaviside(0.0);
    CHECK(mollified_eval(h, 0.1, -1.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mollified_eval(h, 0.1, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mollified_eval(h, 0.1, 1.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mollified principal value against the cutoff-extrapolation oracle") {
    auto pv = DistributionSpec::pv_recip();
    const double eps = 0.1, x = 1.0;
    const double got = mollified_eval(pv, eps, x);

    // oracle: direct int_{|u|>delta} kappa_eps(x-u)/u du, delta -> 0 by
    // two-level extrapolation
    auto raw = [&](double delta) {
        auto f = [&](double u) { return norm_pdf((x - u) / eps) / (eps * u); };
        double left = integrate_adaptive(f, -12.0 * eps + x - 20.0, -delta, 1e-14).value;
        double right = integrate_adaptive(f, delta, x + 12.0 * eps + 20.0, 1e-14).value;
        return left + right;
    };
    const double d1 = raw(1e-4), d2 = raw(5e-5);
    const double oracle = 2.0 * d2 - d1;
    CHECK(got == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("mollified log-abs at a regular point matches the plain convolution") {
    auto spec = DistributionSpec::log_abs();
    const double eps = 0.2, x = 1.3;
    const double got = mollified_eval(spec, eps, x);
    auto f = [&](double u) { return std::log(std::abs(u)) * norm_pdf((x - u) / eps) / eps; };
    double oracle = integrate_adaptive(f, -5.0, -1e-14, 1e-13).value +
                    integrate_adaptive(f, 1e-14, 8.0, 1e-13).value;
    CHECK(got == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("mollifier consistency: pairings recovered as eps -> 0") {
    // E[(Lambda * kappa_eps)(Z) H_n(Z)] -> pair_gaussian(spec, 1, n).
    // fixed fine panels: adaptive rules can step over the narrowing spike
    auto smoothed_pairing = [&](const DistributionSpec& spec, double eps, long n) {
        return integrate_gl(
            [&](double z) {
                return mollified_eval(spec, eps, z) * hermite_eval(n, z) * norm_pdf(z);
            },
            -9.0, 9.0, 2400, 16);
    };

    SUBCASE("smooth kind converges at second order") {
        auto spec = DistributionSpec::smooth([](double x) { return std::sin(x); }, 0.0, 1.0);
        const double target = pair_gaussian(spec, 1.0, 3);
        double prev_err = 0.0;
        int step = 0;
        for (double eps : {0.1, 0.05, 0.025}) {
            const double err = std::abs(smoothed_pairing(spec, eps, 3) - target);
            if (step > 0) {
                const double order = std::log2(prev_err / err);
                CHECK(order > 1.9);  // observed order ~ 2
            }
            prev_err = err;
            ++step;
        }
    }

    SUBCASE("delta kind converges at least at first order") {
        auto spec = DistributionSpec::delta(0.2);
        const double target = pair_gaussian(spec, 1.0, 2);
        double prev_err = 0.0;
        int step = 0;
        for (double eps : {0.1, 0.05, 0.025}) {
            const double err = std::abs(smoothed_pairing(spec, eps, 2) - target);
            if (step > 0) CHECK(std::log2(prev_err / err) > 0.9);
            prev_err = err;
            ++step;
        }
    }
}

TEST_CASE("smooth growth bound is enforced") {
    // claims bounded but actually grows like e^{x^2}
    auto bad = DistributionSpec::smooth([](double x) { return std::exp(x * x); }, 0.0, 1.0);
    CHECK_THROWS_AS(pair_gaussian(bad, 3.0, 2), std::domain_error);
}
