#pragma once

#include <string>
#include <vector>

#include "wchaos/distribution.hpp"
#include "wchaos/special.hpp"

// Chaos vectors along a single Gaussian direction and the spectral Sobolev
// norms built on them. A functional Lambda(sqrt(T/t) w(t)) expanded along
// w(t)/sqrt(t) is described by the pairings
//   a_n = E[Lambda(sqrt(T/t) w(t)) H_n(w(t)/sqrt(t))],
// which depend on (t,T) only through the composite scale sqrt(T/t)*sqrt(t).
// The n-th chaos has L2 norm squared a_n^2/n!, and
//   |F|_{2,s}^2 = sum (1+n)^s a_n^2/n!.
// Pairings are stored; the 1/n! enters here and nowhere else.

namespace wchaos {

struct SobolevIndex {
    double s = 0.0;
    int p = 2;  // only p = 2 is computable here

    void validate() const;
};

/// Fitted tail exponent of a_n^2/n! ~ C n^{-alpha} and the implied critical
/// index s* = alpha - 1 (the series sum (1+n)^s a_n^2/n! converges iff s < s*).
struct IndexEstimate {
    double alpha = 0.0;
    double critical_s = 0.0;
    double slope_stderr = 0.0;
    double residual_rms = 0.0;
    double log_amplitude = 0.0;  // fitted log C
    long window_lo = 0;
    long window_hi = 0;
    int parity = -1;  // 0: even orders, 1: odd orders, -1: all orders
};

class ChaosVector {
public:
    ChaosVector(std::string spec_text, double t, double T, long truncation,
                std::vector<SignedLog> pairings, std::vector<double> err_estimates);

    const std::string& spec_text() const { return spec_text_; }
    double t() const { return t_; }
    double horizon() const { return T_; }
    long truncation() const { return truncation_; }
    /// The expansion direction is w(t)/sqrt(t); this is sqrt(t).
    double direction_scale() const { return direction_scale_; }

    const SignedLog& pairing_log(long n) const { return pairings_.at(n); }
    /// Raw pairing value; +/-inf if it exceeds double range (see pairing_log).
    double pairing(long n) const { return pairings_.at(n).value(); }
    /// |J_n|_2^2 = a_n^2/n!, evaluated in log space.
    double l2_term(long n) const;
    double err_estimate(long n) const { return err_estimates_.at(n); }

private:
    std::string spec_text_;
    double t_, T_, direction_scale_;
    long truncation_;
    std::vector<SignedLog> pairings_;
    std::vector<double> err_estimates_;
};

/// Chaos vector of Lambda(sqrt(T/t) w(t)) along w(t)/sqrt(t).
ChaosVector expand(const DistributionSpec& spec, double t, double T, long truncation);

struct NormResult {
    double value = 0.0;      // truncated norm (sqrt of the partial sum)
    double sum_sq = 0.0;     // the partial sum itself
    bool divergent = false;  // tail flag: s >= s* - 2 stderr
    double tail_bound = 0.0; // C N^{s-s*}/(s*-s) when convergent and fitted
    bool index_valid = false;
    IndexEstimate index;
};

/// Truncated Sobolev-Watanabe norm with a tail-divergence diagnosis fitted
/// from the stored terms (parity-aware).
NormResult sobolev_norm(const ChaosVector& v, const SobolevIndex& idx);

struct IdentityPair {
    double lhs = 0.0;
    double rhs = 0.0;
    bool divergent = false;
};

/// Both sides of |sqrt(T/t) Lambda(sqrt(T/t) w(t))|_{2,s} =
/// sqrt(T/t) |Lambda(w(T))|_{2,s} at matched truncation. The two sides run
/// through independently computed scales, so the ratio exercises the whole
/// pairing pipeline.
IdentityPair scaled_norm_identity(const DistributionSpec& spec, double t, double T,
                                  double s, long truncation);

/// E[(int_0^T t^{-1/2} H_n(w(t)/sqrt(t)) dt)^2] = 4T n!/(n+1), closed form.
/// Overflows double for n > 170; log_time_integral_chaos_l2 covers all n.
double time_integral_chaos_l2(long n, double T);
double log_time_integral_chaos_l2(long n, double T);

/// Companion cross-check: the same quantity by 2-D quadrature of
/// 2 n! iint_{0<t<s<T} (t/s)^{n/2} / sqrt(ts) dt ds with both endpoint
/// singularities flattened by t = tau^2.
double time_integral_chaos_l2_quadrature(long n, double T);

struct SmoothingPair {
    double integral_norm_sq = 0.0;  // |int_0^T sqrt(T/t) Lambda(...) dt|_{2,s+1}^2
    double scaled_base_sq = 0.0;    // 4 T^2 |Lambda(w(T))|_{2,s}^2
    double max_term_ratio_gap = 0.0;  // max_n |lhs_n/rhs_n - 1| over nonzero terms
    bool divergent = false;
};

/// Term-by-term smoothing identity at truncation N.
SmoothingPair smoothing_norm(const DistributionSpec& spec, double s, double T,
                             long truncation);

/// Weighted least-squares tail fit of log(a_n^2/n!) against log n over
/// [window_lo, window_hi], on the nonzero parity subsequence.
IndexEstimate estimate_critical_index(const DistributionSpec& spec, long truncation,
                                      long window_lo, long window_hi);

/// Same fit on precomputed terms t_n (t_n <= 0 treated as missing).
IndexEstimate fit_tail_exponent(const std::vector<double>& terms, long window_lo,
                                long window_hi);

}  // namespace wchaos
