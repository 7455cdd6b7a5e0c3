#include "wchaos/distribution.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wchaos/hermite.hpp"
#include "wchaos/quadrature.hpp"

namespace wchaos {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void check_scale(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("pairing: scale c must be positive and finite");
}

void check_order(long n) {
    if (n < 0) throw std::invalid_argument("pairing: order must be >= 0");
}

// Normalized quadrature value Ehat_n = E[Lambda(Z) Hhat_n(Z)] for LogAbs; the
// integrand oscillates with local wavelength ~ pi/sqrt(n+1), so panels track
// that scale. The log singularity on (0,1) goes through tanh-sinh.
double log_abs_pairing_normalized(long n, double* err_out) {
    // n even, n >= 2; integrand is even: 2 int_0^inf log(x) Hhat_n phi dx
    auto f = [n](double x) { return std::log(x) * hermite_normalized(n, x) * norm_pdf(x); };
    auto near = integrate_tanh_sinh_01(f, 1e-15);
    const double L = 2.0 * std::sqrt(static_cast<double>(n) + 1.0) + 10.0;
    const double wavelength = kPi / std::sqrt(static_cast<double>(n) + 1.0);
    const int panels = static_cast<int>(std::ceil((L - 1.0) / std::min(1.0, wavelength)));
    const double far = integrate_gl(f, 1.0, L, panels, 16);
    const double far_check = integrate_gl(f, 1.0, L, 2 * panels, 16);
    const double err = near.error_estimate + std::abs(far - far_check);
    if (err_out) *err_out = 2.0 * err;
    if (!near.converged)
        throw std::runtime_error("log-abs pairing quadrature failed; error estimate " +
                                 std::to_string(err));
    return 2.0 * (near.value + far_check);
}

// x log|x| - x against Hhat_n, n odd >= 3. Even part vanishes by parity.
double xlogabs_pairing_normalized(long n, double* err_out) {
    auto f = [n](double x) {
        return (x * std::log(x) - x) * hermite_normalized(n, x) * norm_pdf(x);
    };
    // integrand is x log x - x times odd Hermite: even overall; kink-free on (0,inf)
    auto near = integrate_tanh_sinh_01(f, 1e-15);
    const double L = 2.0 * std::sqrt(static_cast<double>(n) + 1.0) + 10.0;
    const double wavelength = kPi / std::sqrt(static_cast<double>(n) + 1.0);
    const int panels = static_cast<int>(std::ceil((L - 1.0) / std::min(1.0, wavelength)));
    const double far = integrate_gl(f, 1.0, L, panels, 16);
    const double far_check = integrate_gl(f, 1.0, L, 2 * panels, 16);
    const double err = near.error_estimate + std::abs(far - far_check);
    if (err_out) *err_out = 2.0 * err;
    return 2.0 * (near.value + far_check);
}

// p.v. integral of Hhat_n phi / x for odd n via symmetric cutoff plus
// two-point Richardson in the cutoff (the symmetric fold keeps even orders
// exactly zero, so only odd orders reach this).
double pv_pairing_normalized(long n, double* err_out) {
    const double L = 2.0 * std::sqrt(static_cast<double>(n) + 1.0) + 10.0;
    const double wavelength = kPi / std::sqrt(static_cast<double>(n) + 1.0);
    auto tail = [n, L, wavelength](double eps) {
        auto f = [n](double x) { return hermite_normalized(n, x) * norm_pdf(x) / x; };
        // log-spaced panels over (eps, 1], then oscillation-resolved panels
        CompensatedSum acc;
        double lo = eps;
        while (lo < 1.0) {
            const double hi = std::min(1.0, 2.0 * lo);
            acc.add(gl_panel(f, lo, hi, 16));
            lo = hi;
        }
        const int panels =
            static_cast<int>(std::ceil((L - 1.0) / std::min(1.0, wavelength)));
        acc.add(integrate_gl(f, 1.0, L, panels, 16));
        return 2.0 * acc.value();
    };
    const double eps = 1e-5;
    const double i1 = tail(eps), i2 = tail(0.5 * eps);
    const double extrapolated = 2.0 * i2 - i1;
    if (err_out) *err_out = std::abs(i2 - i1);
    return extrapolated;
}

double smooth_pairing_normalized(const DistributionSpec& spec, double c, long n,
                                 const GaussHermiteRule& rule, double* err_out) {
    CompensatedSum acc;
    for (int i = 0; i < rule.size(); ++i) {
        const double xi = rule.nodes[i];
        const double fv = spec.smooth_fn(c * xi);
        if (!std::isfinite(fv) ||
            std::abs(fv) > 1e3 * spec.growth_scale *
                               std::exp(spec.growth_rate * std::abs(c * xi)) + 1e3)
            throw std::domain_error(
                "smooth pairing: function violates its stated growth bound at scale c");
        acc.add(rule.weights[i] * fv * hermite_normalized(n, xi));
    }
    if (err_out) *err_out = 1e-14 * std::abs(acc.value());
    return acc.value();
}

double signedlog_to_double_checked(const SignedLog& v) {
    if (v.sign != 0 && v.log_abs > 700.0)
        throw std::domain_error(
            "pairing overflows double at this order; use the chaos-module ladder");
    return v.value();
}

}  // namespace

namespace {
DistributionSpec make_spec(DistKind kind, double y = 0.0) {
    DistributionSpec s;
    s.kind = kind;
    s.location = y;
    return s;
}
}  // namespace

DistributionSpec DistributionSpec::delta(double y) { return make_spec(DistKind::Delta, y); }

DistributionSpec DistributionSpec::delta_derivative(double y, int order) {
    if (order < 1) throw std::invalid_argument("delta_derivative: order must be >= 1");
    DistributionSpec s = make_spec(DistKind::DeltaDerivative, y);
    s.derivative_order = order;
    return s;
}

DistributionSpec DistributionSpec::heaviside(double y) {
    return make_spec(DistKind::Heaviside, y);
}
DistributionSpec DistributionSpec::log_abs() { return make_spec(DistKind::LogAbs); }
DistributionSpec DistributionSpec::pv_recip() {
    return make_spec(DistKind::PrincipalValueRecip);
}
DistributionSpec DistributionSpec::x_log_abs_minus_x() {
    return make_spec(DistKind::XLogAbsMinusX);
}

DistributionSpec DistributionSpec::smooth(std::function<double(double)> f,
                                          double growth_rate, double growth_scale) {
    DistributionSpec s = make_spec(DistKind::Smooth);
    s.smooth_fn = std::move(f);
    s.growth_rate = growth_rate;
    s.growth_scale = growth_scale;
    return s;
}

std::string DistributionSpec::to_string() const {
    switch (kind) {
        case DistKind::Delta: return "delta@" + format_double(location);
        case DistKind::DeltaDerivative:
            return "ddelta^" + std::to_string(derivative_order) + "@" +
                   format_double(location);
        case DistKind::Heaviside: return "heaviside@" + format_double(location);
        case DistKind::LogAbs: return "logabs";
        case DistKind::PrincipalValueRecip: return "pv1x";
        case DistKind::XLogAbsMinusX: return "xlogabs";
        case DistKind::Smooth: return "smooth";
    }
    return "?";
}

DistributionSpec DistributionSpec::parse(const std::string& text) {
    auto parse_loc = [&](const std::string& s) {
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw std::invalid_argument("cannot parse location in '" + text + "'");
        return v;
    };
    if (text == "logabs") return log_abs();
    if (text == "pv1x") return pv_recip();
    if (text == "xlogabs") return x_log_abs_minus_x();
    if (text.rfind("delta@", 0) == 0) return delta(parse_loc(text.substr(6)));
    if (text.rfind("heaviside@", 0) == 0) return heaviside(parse_loc(text.substr(10)));
    if (text.rfind("ddelta^", 0) == 0) {
        const auto at = text.find('@');
        if (at == std::string::npos)
            throw std::invalid_argument("bad distribution spec '" + text + "'");
        const int order = std::stoi(text.substr(7, at - 7));
        return delta_derivative(parse_loc(text.substr(at + 1)), order);
    }
    throw std::invalid_argument("unknown distribution spec '" + text + "'");
}

std::vector<SignedLog> pairing_ladder(const DistributionSpec& spec, double c, long N,
                                      std::vector<double>* err_estimates) {
    check_scale(c);
    check_order(N);
    std::vector<SignedLog> a(static_cast<std::size_t>(N) + 1);
    if (err_estimates) err_estimates->assign(static_cast<std::size_t>(N) + 1, 0.0);
    auto set_err = [&](long n, double e) {
        if (err_estimates) (*err_estimates)[n] = e;
    };
    const double log_c = std::log(c);

    switch (spec.kind) {
        case DistKind::Delta: {
            const double u = spec.location / c;
            auto h = hermite_normalized_all(N, u);
            const double base = std::log(norm_pdf(u)) - log_c;
            for (long n = 0; n <= N; ++n) {
                if (h[n] == 0.0) continue;
                a[n] = SignedLog::from_log(h[n] > 0 ? 1 : -1,
                                           std::log(std::abs(h[n])) +
                                               0.5 * log_factorial(n) + base);
                set_err(n, 1e-14);
            }
            break;
        }
        case DistKind::DeltaDerivative: {
            const long k = spec.derivative_order;
            const double u = spec.location / c;
            auto h = hermite_normalized_all(N + k, u);
            const double base = std::log(norm_pdf(u)) - (k + 1.0) * log_c;
            for (long n = 0; n <= N; ++n) {
                if (h[n + k] == 0.0) continue;
                a[n] = SignedLog::from_log(h[n + k] > 0 ? 1 : -1,
                                           std::log(std::abs(h[n + k])) +
                                               0.5 * log_factorial(n + k) + base);
                set_err(n, 1e-14);
            }
            break;
        }
        case DistKind::Heaviside: {
            const double u = spec.location / c;
            auto h = hermite_normalized_all(std::max(0L, N - 1), u);
            a[0] = SignedLog::from_value(norm_cdf(u));
            set_err(0, 1e-15);
            const double base = std::log(norm_pdf(u));
            for (long n = 1; n <= N; ++n) {
                if (h[n - 1] == 0.0) continue;
                a[n] = SignedLog::from_log(h[n - 1] > 0 ? -1 : 1,
                                           std::log(std::abs(h[n - 1])) +
                                               0.5 * log_factorial(n - 1) + base);
                set_err(n, 1e-14);
            }
            break;
        }
        case DistKind::LogAbs: {
            a[0] = SignedLog::from_value(kMeanLogAbsGauss + log_c);
            set_err(0, 1e-16);
            for (long n = 2; n <= N; n += 2) {
                const long k = n / 2 - 1;  // n = 2k + 2
                a[n] = SignedLog::from_log(k % 2 == 0 ? 1 : -1,
                                           log_double_factorial(2 * k));
                set_err(n, 1e-15);
            }
            break;
        }
        case DistKind::PrincipalValueRecip: {
            for (long n = 1; n <= N; n += 2) {
                const long k = (n - 1) / 2;
                a[n] = SignedLog::from_log(k % 2 == 0 ? 1 : -1,
                                           log_double_factorial(2 * k) - log_c);
                set_err(n, 1e-15);
            }
            break;
        }
        case DistKind::XLogAbsMinusX: {
            if (N >= 1) {
                a[1] = SignedLog::from_value(c * (kMeanLogAbsGauss + log_c));
                set_err(1, 1e-16);
            }
            for (long n = 3; n <= N; n += 2) {
                const long k = (n - 3) / 2;
                a[n] = SignedLog::from_log(k % 2 == 0 ? 1 : -1,
                                           log_double_factorial(2 * k) + log_c);
                set_err(n, 1e-15);
            }
            break;
        }
        case DistKind::Smooth: {
            if (!spec.smooth_fn) throw std::invalid_argument("smooth spec without function");
            const int m = static_cast<int>(std::min<long>(N + 32, kMaxGaussHermiteNodes));
            if (N > 2 * m - 2)
                throw std::domain_error("smooth ladder: order too large for the rule");
            auto rule = gauss_hermite_rule(m);
            for (long n = 0; n <= N; ++n) {
                double err = 0.0;
                const double ahat = smooth_pairing_normalized(spec, c, n, rule, &err);
                a[n] = SignedLog::from_value(ahat);
                if (a[n].sign != 0) a[n].log_abs += 0.5 * log_factorial(n);
                set_err(n, err);
            }
            break;
        }
    }
    return a;
}

double pair_gaussian(const DistributionSpec& spec, double c, long n) {
    check_scale(c);
    check_order(n);
    switch (spec.kind) {
        case DistKind::Delta:
        case DistKind::DeltaDerivative:
        case DistKind::Heaviside: {
            auto ladder = pairing_ladder(spec, c, n);
            return signedlog_to_double_checked(ladder[n]);
        }
        case DistKind::LogAbs: {
            if (n == 0) return kMeanLogAbsGauss + std::log(c);
            if (n % 2 == 1) return 0.0;
            if (n > kMaxQuadraturePairingOrder)
                throw std::domain_error(
                    "pair_gaussian(LogAbs): order beyond quadrature support");
            double err = 0.0;
            const double ahat = log_abs_pairing_normalized(n, &err);
            return ahat * std::exp(0.5 * log_factorial(n));
        }
        case DistKind::XLogAbsMinusX: {
            if (n % 2 == 0) return 0.0;
            if (n == 1) return c * (kMeanLogAbsGauss + std::log(c));
            if (n > kMaxQuadraturePairingOrder)
                throw std::domain_error(
                    "pair_gaussian(XLogAbsMinusX): order beyond quadrature support");
            double err = 0.0;
            const double ahat = xlogabs_pairing_normalized(n, &err);
            return c * ahat * std::exp(0.5 * log_factorial(n));
        }
        case DistKind::PrincipalValueRecip: {
            if (n % 2 == 0) return 0.0;  // symmetric truncation cancels exactly
            if (n > kMaxQuadraturePairingOrder)
                throw std::domain_error(
                    "pair_gaussian(PrincipalValueRecip): order beyond quadrature support");
            double err = 0.0;
            const double ahat = pv_pairing_normalized(n, &err);
            return ahat * std::exp(0.5 * log_factorial(n)) / c;
        }
        case DistKind::Smooth: {
            auto ladder = pairing_ladder(spec, c, n);
            return signedlog_to_double_checked(ladder[n]);
        }
    }
    throw std::invalid_argument("pair_gaussian: unknown kind");
}

namespace {

// E[log|mu - Z|], Z ~ N(0,1); quadrature with the log singularity split out.
// The singular slab is integrated in the distance variable t = |mu - z| so the
// nodes never collapse onto the singular point.
double gauss_log_moment(double mu, double weight_power) {
    // weight_power = 0: E[log|mu-Z|]; = 1: E[Z log|mu-Z|]
    auto f = [mu, weight_power](double z) {
        const double w = weight_power == 0.0 ? 1.0 : z;
        return w * std::log(std::abs(mu - z)) * norm_pdf(z);
    };
    const double L = 9.5 + std::abs(mu);
    const double d = 0.5;
    CompensatedSum acc;
    acc.add(integrate_adaptive(f, -L, mu - d, 1e-14, 1e-13).value);
    acc.add(integrate_adaptive(f, mu + d, L, 1e-14, 1e-13).value);
    auto slab = [mu, weight_power, d](double u) {
        const double t = d * u;  // distance from the singularity
        const double zl = mu - t, zr = mu + t;
        const double wl = weight_power == 0.0 ? 1.0 : zl;
        const double wr = weight_power == 0.0 ? 1.0 : zr;
        return std::log(t) * (wl * norm_pdf(zl) + wr * norm_pdf(zr));
    };
    acc.add(d * integrate_tanh_sinh_01(slab, 1e-15).value);
    return acc.value();
}

}  // namespace

double mollified_eval(const DistributionSpec& spec, double eps, double x) {
    if (!(eps > 0.0)) throw std::invalid_argument("mollified_eval: eps must be > 0");
    switch (spec.kind) {
        case DistKind::Delta:
            return norm_pdf((x - spec.location) / eps) / eps;
        case DistKind::DeltaDerivative: {
            const int k = spec.derivative_order;
            const double u = (x - spec.location) / eps;
            return std::pow(eps, -(k + 1.0)) * (k % 2 == 0 ? 1.0 : -1.0) *
                   hermite_eval(k, u) * norm_pdf(u);
        }
        case DistKind::Heaviside:
            return norm_cdf((spec.location - x) / eps);
        case DistKind::LogAbs:
            // E[log|x - eps Z|] = log eps + E[log|x/eps - Z|]
            return std::log(eps) + gauss_log_moment(x / eps, 0.0);
        case DistKind::XLogAbsMinusX: {
            // E[(x - eps Z) log|x - eps Z|] - x
            const double mu = x / eps;
            const double m0 = gauss_log_moment(mu, 0.0);
            const double m1 = gauss_log_moment(mu, 1.0);
            return x * (std::log(eps) + m0) - eps * m1 - x;
        }
        case DistKind::PrincipalValueRecip: {
            // p.v. int kappa_eps(x-u)/u du as a folded integral over u > 0
            auto f = [eps, x](double u) {
                return (norm_pdf((x - u) / eps) - norm_pdf((x + u) / eps)) / (eps * u);
            };
            const double L = std::abs(x) + 10.0 * eps;
            return integrate_adaptive(f, 1e-300, L, 1e-14, 1e-12).value;
        }
        case DistKind::Smooth: {
            static const GaussHermiteRule rule = gauss_hermite_rule(64);
            return rule.integrate([&](double z) { return spec.smooth_fn(x - eps * z); });
        }
    }
    throw std::invalid_argument("mollified_eval: unknown kind");
}

}  // namespace wchaos
