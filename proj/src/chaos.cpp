#include "wchaos/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wchaos/hermite.hpp"
#include "wchaos/parallel.hpp"
#include "wchaos/quadrature.hpp"

namespace wchaos {

void SobolevIndex::validate() const {
    if (p != 2) throw std::invalid_argument("SobolevIndex: only p = 2 is supported");
    if (!std::isfinite(s)) throw std::invalid_argument("SobolevIndex: s must be finite");
}

ChaosVector::ChaosVector(std::string spec_text, double t, double T, long truncation,
                         std::vector<SignedLog> pairings, std::vector<double> err_estimates)
    : spec_text_(std::move(spec_text)),
      t_(t),
      T_(T),
      direction_scale_(std::sqrt(t)),
      truncation_(truncation),
      pairings_(std::move(pairings)),
      err_estimates_(std::move(err_estimates)) {
    if (pairings_.size() != static_cast<std::size_t>(truncation_) + 1 ||
        err_estimates_.size() != pairings_.size())
        throw std::invalid_argument("ChaosVector: size mismatch");
    for (std::size_t n = 0; n < pairings_.size(); ++n) {
        const auto& a = pairings_[n];
        if (a.sign != 0 && !std::isfinite(a.log_abs))
            throw std::invalid_argument("ChaosVector: non-finite pairing");
        if (!(err_estimates_[n] >= 0.0))
            throw std::invalid_argument("ChaosVector: negative error estimate");
    }
}

double ChaosVector::l2_term(long n) const {
    const auto& a = pairings_.at(n);
    if (a.sign == 0) return 0.0;
    return std::exp(2.0 * a.log_abs - log_factorial(n));
}

ChaosVector expand(const DistributionSpec& spec, double t, double T, long truncation) {
    if (!(t > 0.0) || !(t <= T)) throw std::invalid_argument("expand: need 0 < t <= T");
    if (truncation < 0) throw std::invalid_argument("expand: truncation must be >= 0");
    // composite scale of Lambda(sqrt(T/t) w(t)) along w(t)/sqrt(t);
    // equals sqrt(T) up to rounding, which is the point of the identity tests
    const double c = std::sqrt(T / t) * std::sqrt(t);
    std::vector<double> err;
    auto pairings = pairing_ladder(spec, c, truncation, &err);
    return ChaosVector(spec.to_string(), t, T, truncation, std::move(pairings),
                       std::move(err));
}

namespace {

std::vector<double> l2_terms_of(const ChaosVector& v) {
    std::vector<double> terms(static_cast<std::size_t>(v.truncation()) + 1);
    for (long n = 0; n <= v.truncation(); ++n) terms[n] = v.l2_term(n);
    return terms;
}

}  // namespace

IndexEstimate fit_tail_exponent(const std::vector<double>& terms, long window_lo,
                                long window_hi) {
    const long N = static_cast<long>(terms.size()) - 1;
    if (window_lo < 1 || window_hi > N || window_hi - window_lo < 10)
        throw std::invalid_argument("fit_tail_exponent: bad window (need >= 10 points)");

    // choose the parity subsequence with more nonzero entries in the window
    long even_nonzero = 0, odd_nonzero = 0;
    for (long n = window_lo; n <= window_hi; ++n) {
        if (terms[n] > 0.0) ((n % 2 == 0) ? even_nonzero : odd_nonzero)++;
    }
    int parity;
    if (even_nonzero >= 5 && odd_nonzero >= 5)
        parity = -1;
    else if (even_nonzero >= odd_nonzero)
        parity = 0;
    else
        parity = 1;

    std::vector<double> xs, ys;
    for (long n = window_lo; n <= window_hi; ++n) {
        if (parity >= 0 && n % 2 != parity) continue;
        if (!(terms[n] > 0.0)) continue;
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(terms[n]));
    }
    if (xs.size() < 10)
        throw std::invalid_argument("fit_tail_exponent: all-zero or too-sparse tail");

    const std::size_t m = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("fit_tail_exponent: degenerate window");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }
    IndexEstimate est;
    est.alpha = -slope;
    est.critical_s = est.alpha - 1.0;
    est.residual_rms = std::sqrt(ss_res / m);
    est.slope_stderr = (m > 2) ? std::sqrt(ss_res / (m - 2) / sxx) : 0.0;
    est.log_amplitude = intercept;
    est.window_lo = window_lo;
    est.window_hi = window_hi;
    est.parity = parity;
    return est;
}

IndexEstimate estimate_critical_index(const DistributionSpec& spec, long truncation,
                                      long window_lo, long window_hi) {
    if (window_hi > truncation)
        throw std::invalid_argument("estimate_critical_index: window beyond truncation");
    auto v = expand(spec, 1.0, 1.0, truncation);
    return fit_tail_exponent(l2_terms_of(v), window_lo, window_hi);
}

NormResult sobolev_norm(const ChaosVector& v, const SobolevIndex& idx) {
    idx.validate();
    const double s = idx.s;
    const long N = v.truncation();
    CompensatedSum acc;
    for (long n = 0; n <= N; ++n) {
        const auto& a = v.pairing_log(n);
        if (a.sign == 0) continue;
        acc.add(std::exp(s * std::log1p(static_cast<double>(n)) + 2.0 * a.log_abs -
                         log_factorial(n)));
    }
    NormResult out;
    out.sum_sq = acc.value();
    out.value = std::sqrt(out.sum_sq);

    if (N >= 64) {
        const long lo = std::max<long>(8, N / 10);
        try {
            out.index = fit_tail_exponent(l2_terms_of(v), lo, N);
            out.index_valid = true;
            const double s_star = out.index.critical_s;
            if (s >= s_star - 2.0 * out.index.slope_stderr) {
                out.divergent = true;
            } else {
                const double C = std::exp(out.index.log_amplitude);
                double tail = C * std::pow(static_cast<double>(N), s - s_star) /
                              (s_star - s);
                if (out.index.parity >= 0) tail *= 0.5;  // every other term present
                out.tail_bound = tail;
            }
        } catch (const std::invalid_argument&) {
            out.index_valid = false;  // e.g. fewer than 10 usable tail points
        }
    }
    return out;
}

IdentityPair scaled_norm_identity(const DistributionSpec& spec, double t, double T,
                                  double s, long truncation) {
    const double prefactor = std::sqrt(T / t);
    auto lhs_vec = expand(spec, t, T, truncation);
    auto rhs_vec = expand(spec, T, T, truncation);
    SobolevIndex idx{s, 2};
    auto lhs = sobolev_norm(lhs_vec, idx);
    auto rhs = sobolev_norm(rhs_vec, idx);
    IdentityPair out;
    out.lhs = prefactor * lhs.value;
    out.rhs = prefactor * rhs.value;
    out.divergent = lhs.divergent || rhs.divergent;
    return out;
}

double log_time_integral_chaos_l2(long n, double T) {
    if (n < 0 || !(T > 0.0))
        throw std::invalid_argument("time_integral_chaos_l2: need n >= 0, T > 0");
    return std::log(4.0 * T) + log_factorial(n) - std::log(static_cast<double>(n) + 1.0);
}

double time_integral_chaos_l2(long n, double T) {
    const double lg = log_time_integral_chaos_l2(n, T);
    if (lg > 700.0)
        throw std::domain_error("time_integral_chaos_l2: overflows double; use log form");
    return std::exp(lg);
}

double time_integral_chaos_l2_quadrature(long n, double T) {
    if (n < 0 || !(T > 0.0))
        throw std::invalid_argument("time_integral_chaos_l2_quadrature: bad input");
    // E[(...)^2] = 2 n! iint_{0<t<s<T} (t/s)^{n/2} (ts)^{-1/2} dt ds; the
    // substitution (t,s) = (tau^2, sigma^2) flattens both endpoint
    // singularities and leaves 8 n! iint_{0<tau<sigma<sqrt(T)} (tau/sigma)^n.
    const double root = std::sqrt(T);
    auto outer = [&](double sigma) {
        return gl_panel(
            [&](double tau) { return std::pow(tau / sigma, static_cast<double>(n)); }, 0.0,
            sigma, 24);
    };
    const double plane = integrate_gl(outer, 0.0, root, 64, 24);
    return 8.0 * std::exp(log_factorial(n)) * plane;
}

SmoothingPair smoothing_norm(const DistributionSpec& spec, double s, double T,
                             long truncation) {
    auto base = expand(spec, T, T, truncation);
    SmoothingPair out;
    CompensatedSum lhs_acc, rhs_acc;
    const double log_4T2 = std::log(4.0 * T * T);
    double max_gap = 0.0;
    for (long n = 0; n <= truncation; ++n) {
        const auto& a = base.pairing_log(n);
        if (a.sign == 0) continue;
        const double log_n1 = std::log1p(static_cast<double>(n));
        // n-th chaos of the time integral: (a_n/n!)^2 * T * E[(int t^{-1/2} H_n)^2]
        const double lhs_n =
            std::exp((s + 1.0) * log_n1 + 2.0 * (a.log_abs - log_factorial(n)) +
                     std::log(T) + log_time_integral_chaos_l2(n, T));
        const double rhs_n =
            std::exp(s * log_n1 + log_4T2 + 2.0 * a.log_abs - log_factorial(n));
        lhs_acc.add(lhs_n);
        rhs_acc.add(rhs_n);
        if (rhs_n > 0.0) max_gap = std::max(max_gap, std::abs(lhs_n / rhs_n - 1.0));
    }
    out.integral_norm_sq = lhs_acc.value();
    out.scaled_base_sq = rhs_acc.value();
    out.max_term_ratio_gap = max_gap;
    out.divergent = sobolev_norm(base, SobolevIndex{s, 2}).divergent;
    return out;
}

}  // namespace wchaos
