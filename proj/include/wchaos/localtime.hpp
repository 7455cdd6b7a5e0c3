#pragma once

#include <utility>
#include <vector>

#include "wchaos/chaos.hpp"
#include "wchaos/diffusion.hpp"

// Chaos norms of diffusion local times on the unit time horizon. The n-th
// chaos weight of sigma(y) int_0^1 delta_y(X_t) dt is
//   I_n = (2/n!) iint_{0<u<v<1} u^n g_n(u) g_n(v) du dv,
// with g_n(t) = t^{-(n+1)/2} H_n(q/sqrt t) phi(q/sqrt t) and q = psi(y), and
// the Hoelder experiments replace g_n by differences across two levels. The
// norm is sum (1+n)^s I_n.

namespace wchaos {

/// E[(int over the n-simplex of [0,t] of dw...dw)^2] = t^n/n!.
double iterated_integral_l2(long n, double t);

/// The chaos weights I_n, n = 0..N, of the local-time functional whose
/// kernel factor is sum_j signs[j] * H_n(qs[j]/sqrt t) phi(qs[j]/sqrt t)
/// (one entry: plain local time at Lamperti coordinate q; two entries with
/// signs +1/-1: the difference of local times at two levels).
std::vector<double> localtime_chaos_terms(const std::vector<double>& qs,
                                          const std::vector<double>& signs, long N);

/// Cross bilinear weights B_n(a,b) = (1/n!) iint_{0<u<v<1} u^n
/// [g^a(u) g^b(v) + g^b(u) g^a(v)] du dv, so that the difference weight
/// expands as I_n = I_n(a,a) + I_n(b,b) - 2 B_n(a,b).
std::vector<double> localtime_cross_terms(double qa, double qb, long N);

/// sigma(y) int_0^1 p_t(x,y) dt (the mean of the local-time functional).
double local_time_mean(const LampertiMap& map, double y);

struct LocalTimeNorm {
    double value = 0.0;
    double sum_sq = 0.0;
    std::vector<double> terms;  // I_n
    bool divergent = false;
    bool index_valid = false;
    IndexEstimate index;
};

/// |sigma(y) int_0^1 delta_y(X_t) dt|_{2,s} truncated at N, with the tail
/// divergence diagnosis (the series converges iff s < 1/2).
LocalTimeNorm local_time_chaos_norm(const DiffusionModel& model, double y, double s,
                                    long N);

struct HolderExperiment {
    DiffusionModel model;
    double s = 0.0;
    double beta = 0.25;   // in (0, min{1/2 - s, 1})
    double y = 0.0;
    double z = 0.0;
    long truncation = 1000;

    void validate() const;  // requires s + beta < 1/2 and beta in range
};

/// |sigma(y) int delta_y(X_t) dt - sigma(z) int delta_z(X_t) dt|_{2,s}.
LocalTimeNorm holder_difference_norm(const HolderExperiment& exp);

struct HolderBound {
    double constant = 0.0;      // c(s, beta); the bound is c |y-z|^beta
    double constant_sq = 0.0;   // includes the appended tail estimate
    double partial_sum = 0.0;   // sum of the series terms up to terms_used
    double tail_estimate = 0.0;
    double tail_fraction = 0.0;
    long terms_used = 0;
    bool divergent = false;     // s + beta >= 1/2
    std::vector<double> terms;  // the summands, for tail-exponent checks
};

/// The explicit Hoelder constant:
/// c(s,beta)^2 = (pi lambda^{beta/2})^{-2}/(1-beta) *
///               sum (1+n)^s 2^{n+beta+1} Gamma((n+beta+1)/2)^2 / (n! (n-beta+1)),
/// summed until the tail estimate drops below 1e-6 of the partial sum or the
/// cap N is hit; the tail estimate is appended to keep the bound valid.
HolderBound holder_bound_constant(double s, double beta, double lambda, long N_cap);

struct DensityHolderReport {
    struct Row {
        double y = 0.0, z = 0.0;
        double diff = 0.0;           // |f(y) - f(z)| for f = sigma(.) int p_t dt
        double holder_ratio = 0.0;   // diff / |y-z|^beta
        double dominating_norm = 0.0;  // difference norm at s = -1/2
        bool dominated = false;      // diff <= dominating_norm
    };
    std::vector<Row> rows;
    double max_ratio = 0.0;
    bool all_dominated = true;
};

/// Hoelder continuity of y -> sigma(y) int_0^1 p_t(x,y) dt on point pairs,
/// plus the domination by the s = -1/2 difference norm.
DensityHolderReport density_holder_check(const DiffusionModel& model,
                                         const std::vector<std::pair<double, double>>& pairs,
                                         double beta, long truncation = 600);

}  // namespace wchaos
