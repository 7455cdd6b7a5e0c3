#include <doctest.h>

#include <cmath>

#include "wchaos/chaos.hpp"
#include "wchaos/quadrature.hpp"

using namespace wchaos;

TEST_CASE("expand delta@0: sifting + Hermite zero values") {
    auto v = expand(DistributionSpec::delta(0.0), 1.0, 1.0, 4);
    const double p0 = norm_pdf(0.0);
    CHECK(v.pairing(0) == doctest::Approx(p0).epsilon(1e-14));
    CHECK(v.pairing(1) == 0.0);
    CHECK(v.pairing(2) == doctest::Approx(-p0).epsilon(1e-14));
    CHECK(v.pairing(3) == 0.0);
    CHECK(v.pairing(4) == doctest::Approx(3.0 * p0).epsilon(1e-14));
    CHECK(v.direction_scale() == 1.0);
}

TEST_CASE("expand logabs: double-factorial ladder") {
    auto v = expand(DistributionSpec::log_abs(), 1.0, 1.0, 4);
    CHECK(v.pairing(2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(v.pairing(4) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(v.pairing(1) == 0.0);
    CHECK(v.pairing(3) == 0.0);
}

TEST_CASE("expand pairings depend on (t,T) only through T") {
    auto a = expand(DistributionSpec::delta(0.0), 1.0, 1.0, 4);
    auto b = expand(DistributionSpec::delta(0.0), 0.25, 1.0, 4);
    for (long n = 0; n <= 4; ++n)
        CHECK(b.pairing(n) == doctest::Approx(a.pairing(n)).epsilon(1e-13));

    auto c1 = expand(DistributionSpec::heaviside(0.3), 0.37, 2.0, 16);
    auto c2 = expand(DistributionSpec::heaviside(0.3), 2.0, 2.0, 16);
    for (long n = 0; n <= 16; ++n)
        CHECK(c1.pairing(n) == doctest::Approx(c2.pairing(n)).epsilon(1e-12));
}

TEST_CASE("expand input validation") {
    auto d = DistributionSpec::delta(0.0);
    CHECK_THROWS_AS(expand(d, 0.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(expand(d, 2.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(expand(d, 0.5, 1.0, -1), std::invalid_argument);
}

TEST_CASE("sobolev norm basics") {
    // zero vector
    ChaosVector zero("custom", 1.0, 1.0, 3,
                     std::vector<SignedLog>(4), std::vector<double>(4, 0.0));
    CHECK(sobolev_norm(zero, SobolevIndex{0.5, 2}).value == 0.0);

    // a_0 = 1 only: (1+0)^s = 1 for every s
    ChaosVector unit("custom", 1.0, 1.0, 0, {SignedLog::from_value(1.0)}, {0.0});
    CHECK(sobolev_norm(unit, SobolevIndex{7.0, 2}).value == doctest::Approx(1.0));

    CHECK_THROWS_AS(sobolev_norm(unit, SobolevIndex{0.0, 3}), std::invalid_argument);
}

TEST_CASE("norm is monotone in s on partial sums") {
    auto v = expand(DistributionSpec::delta(0.3), 1.0, 1.0, 200);
    double prev = 0.0;
    bool first = true;
    for (double s : {-1.5, -1.0, -0.5, 0.0, 0.5}) {
        const double cur = sobolev_norm(v, SobolevIndex{s, 2}).value;
        if (!first) CHECK(cur >= prev);
        prev = cur;
        first = false;
    }
}

TEST_CASE("delta@0 divergence flagging across s") {
    auto v = expand(DistributionSpec::delta(0.0), 1.0, 1.0, 5000);
    CHECK(sobolev_norm(v, SobolevIndex{0.0, 2}).divergent);
    CHECK(sobolev_norm(v, SobolevIndex{-0.4, 2}).divergent);
    auto ok = sobolev_norm(v, SobolevIndex{-0.65, 2});
    CHECK_FALSE(ok.divergent);
    CHECK(ok.index_valid);
    // the tail bound must cover the directly summed continuation to 4 N
    auto v4 = expand(DistributionSpec::delta(0.0), 1.0, 1.0, 20000);
    const double continuation = sobolev_norm(v4, SobolevIndex{-0.65, 2}).sum_sq - ok.sum_sq;
    CHECK(ok.tail_bound > continuation);
    CHECK(ok.tail_bound < ok.sum_sq);
}

TEST_CASE("Parseval consistency for a smooth functional") {
    auto spec = DistributionSpec::smooth([](double x) { return std::sin(x); }, 0.0, 1.0);
    auto v = expand(spec, 1.0, 1.0, 64);
    double sum = 0.0;
    for (long n = 0; n <= 64; ++n) sum += v.l2_term(n);
    // oracle: E[sin(Z)^2] by quadrature
    const double oracle =
        integrate_adaptive(
            [](double x) { return std::sin(x) * std::sin(x) * norm_pdf(x); }, -10.0, 10.0,
            1e-14, 1e-13)
            .value;
    CHECK(sum == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("scaled norm identity") {
    SUBCASE("delta, half scale") {
        auto pair = scaled_norm_identity(DistributionSpec::delta(0.0), 0.25, 1.0, -1.0, 200);
        CHECK(pair.lhs / pair.rhs == doctest::Approx(1.0).epsilon(1e-12));
        // equals 2 |delta_0(w(1))|_{2,-1} at matched truncation
        auto base = sobolev_norm(expand(DistributionSpec::delta(0.0), 1.0, 1.0, 200),
                                 SobolevIndex{-1.0, 2});
        CHECK(pair.rhs == doctest::Approx(2.0 * base.value).epsilon(1e-13));
    }
    SUBCASE("heaviside at t = T is the same code path twice") {
        auto pair = scaled_norm_identity(DistributionSpec::heaviside(0.0), 0.7, 0.7, 0.2, 64);
        CHECK(pair.lhs == pair.rhs);
    }
    SUBCASE("logabs, strong scale separation") {
        auto pair = scaled_norm_identity(DistributionSpec::log_abs(), 0.04, 1.0, 0.3, 500);
        CHECK(pair.lhs / pair.rhs == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("time-integral chaos weights") {
    CHECK(time_integral_chaos_l2(0, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(time_integral_chaos_l2(1, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(time_integral_chaos_l2(5, 1.0) == doctest::Approx(80.0).epsilon(1e-14));
    CHECK_THROWS_AS(time_integral_chaos_l2(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(time_integral_chaos_l2(0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(time_integral_chaos_l2(200, 1.0), std::domain_error);
    CHECK(std::isfinite(log_time_integral_chaos_l2(5000, 1.0)));

    for (long n : {0L, 1L, 2L, 5L, 10L}) {
        for (double T : {1.0, 2.0}) {
            const double closed = time_integral_chaos_l2(n, T);
            const double quad = time_integral_chaos_l2_quadrature(n, T);
            CHECK(quad == doctest::Approx(closed).epsilon(1e-8));
        }
    }
}

TEST_CASE("smoothing identity is exact term by term") {
    SUBCASE("delta at s = -0.8") {
        auto pair = smoothing_norm(DistributionSpec::delta(0.0), -0.8, 1.0, 300);
        CHECK(pair.integral_norm_sq ==
              doctest::Approx(pair.scaled_base_sq).epsilon(1e-12));
        CHECK(pair.max_term_ratio_gap < 1e-12);
        CHECK_FALSE(pair.divergent);
        CHECK(std::isfinite(pair.integral_norm_sq));
    }
    SUBCASE("partial sums diverge together at s = -0.4") {
        auto pair = smoothing_norm(DistributionSpec::delta(0.0), -0.4, 1.0, 2000);
        CHECK(pair.divergent);
        CHECK(pair.integral_norm_sq == doctest::Approx(pair.scaled_base_sq).epsilon(1e-12));
    }
    SUBCASE("single-coefficient vector reduces to 4 T^2 a_0^2") {
        // heaviside@-30 at scale ~1: a_0 = Phi(-30) essentially, higher
        // pairings are below double underflow at this location
        auto spec = DistributionSpec::heaviside(0.0);
        auto pair = smoothing_norm(spec, 3.0, 2.0, 0);
        const double a0 = 0.5;
        CHECK(pair.integral_norm_sq == doctest::Approx(16.0 * a0 * a0).epsilon(1e-13));
        CHECK(pair.scaled_base_sq == doctest::Approx(16.0 * a0 * a0).epsilon(1e-13));
    }
    SUBCASE("other specs at s = -0.8") {
        for (const char* txt : {"heaviside@0", "logabs"}) {
            auto pair = smoothing_norm(DistributionSpec::parse(txt), -0.8, 1.0, 300);
            CHECK(pair.max_term_ratio_gap < 1e-12);
        }
    }
}

TEST_CASE("critical index recovery at desk scale") {
    const long N = 2000, lo = 200;
    auto delta = estimate_critical_index(DistributionSpec::delta(0.0), N, lo, N);
    CHECK(delta.critical_s == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(delta.parity == 0);

    auto heav = estimate_critical_index(DistributionSpec::heaviside(0.0), N, lo, N);
    CHECK(heav.critical_s == doctest::Approx(0.5).epsilon(0.1));
    CHECK(heav.parity == 1);

    auto logabs = estimate_critical_index(DistributionSpec::log_abs(), N, lo, N);
    CHECK(logabs.critical_s == doctest::Approx(0.5).epsilon(0.1));

    auto pv = estimate_critical_index(DistributionSpec::pv_recip(), N, lo, N);
    CHECK(pv.critical_s == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("tail fit on synthetic data recovers the exponent exactly") {
    std::vector<double> terms(2001, 0.0);
    for (long n = 1; n <= 2000; ++n)
        terms[n] = 3.7 * std::pow(static_cast<double>(n), -1.25);
    auto est = fit_tail_exponent(terms, 100, 2000);
    CHECK(est.alpha == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(est.critical_s == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(est.residual_rms < 1e-12);
    CHECK(est.parity == -1);

    std::vector<double> zeros(2001, 0.0);
    CHECK_THROWS_AS(fit_tail_exponent(zeros, 100, 2000), std::invalid_argument);
    CHECK_THROWS_AS(fit_tail_exponent(terms, 100, 105), std::invalid_argument);
}
