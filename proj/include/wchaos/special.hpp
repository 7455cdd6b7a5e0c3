#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

// Scalar special functions and log-space helpers shared by all modules.
// Everything here is pure and thread-safe.

namespace wchaos {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// E[log|Z|] for Z ~ N(0,1); equals -(gamma + log 2)/2.
inline constexpr double kMeanLogAbsGauss = -0.63518142273073909373;

/// Standard normal density.
inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

/// Standard normal CDF.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// log Gamma(x) for x > 0.
inline double log_gamma(double x) { return std::lgamma(x); }

/// log(n!) via lgamma.
inline double log_factorial(long n) {
    if (n < 0) throw std::invalid_argument("log_factorial: n < 0");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

/// log(n!!). For even n = 2k: k log 2 + log k!; for odd n = 2k-1: log (2k)! - log (2k)!!.
/// log(0!!) = log((-1)!!) = 0 by the usual convention.
inline double log_double_factorial(long n) {
    if (n < -1) throw std::invalid_argument("log_double_factorial: n < -1");
    if (n <= 0) return 0.0;
    if (n % 2 == 0) {
        const double k = static_cast<double>(n / 2);
        return k * std::log(2.0) + std::lgamma(k + 1.0);
    }
    const double k = static_cast<double>((n + 1) / 2);  // n = 2k - 1
    return std::lgamma(2.0 * k + 1.0) - k * std::log(2.0) - std::lgamma(k + 1.0);
}

/// A real number kept as sign * exp(log_abs). Safe far beyond double range.
struct SignedLog {
    int sign = 0;          // -1, 0, +1
    double log_abs = -std::numeric_limits<double>::infinity();

    static SignedLog zero() { return {}; }

    static SignedLog from_value(double v) {
        if (v == 0.0) return {};
        return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
    }

    static SignedLog from_log(int sign, double log_abs) {
        if (sign == 0) return {};
        return {sign, log_abs};
    }

    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_abs);  // may overflow to +/-inf by design of double
    }

    bool is_zero() const { return sign == 0; }

    SignedLog operator*(const SignedLog& o) const {
        if (sign == 0 || o.sign == 0) return {};
        return {sign * o.sign, log_abs + o.log_abs};
    }

    SignedLog scaled(double factor) const {
        return (*this) * from_value(factor);
    }
};

/// Render a SignedLog as a decimal string (e.g. "-4.1327e+2713") even when the
/// magnitude exceeds double range. Used by the CSV/JSON writers.
inline std::string to_decimal_string(const SignedLog& v, int digits = 12) {
    if (v.sign == 0) return "0";
    const double log10_abs = v.log_abs / std::log(10.0);
    double expo = std::floor(log10_abs);
    double mant = std::pow(10.0, log10_abs - expo);
    // guard against mantissa rounding to 10
    if (mant >= 10.0 - 5e-13) { mant /= 10.0; expo += 1.0; }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*fe%+03d", digits, v.sign * mant,
                  static_cast<int>(expo));
    return std::string(buf);
}

/// Inverse of the standard normal CDF (Wichura's PPND16, full double accuracy).
inline double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("norm_quantile: p must be in (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

/// Neumaier-compensated accumulator. Deterministic for a fixed input order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace wchaos
