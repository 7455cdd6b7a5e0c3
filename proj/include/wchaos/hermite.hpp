#pragma once

#include <utility>
#include <vector>

#include "wchaos/special.hpp"

// Probabilists' Hermite polynomials H_n (H_0 = 1, H_1 = x,
// H_n = x H_{n-1} - (n-1) H_{n-2}) and Gaussian quadrature rules.
// This is the one normalization used throughout the project; E[H_n(Z)^2] = n!.

namespace wchaos {

/// H_n(x) by upward recurrence. Grows like sqrt(n!), so the raw value
/// overflows double near n ~ 300 for small x; use the normalized variant for
/// large orders. Uses long double accumulators above kHermiteExtendedOrder.
double hermite_eval(long n, double x);

/// Switch-over point to extended-precision accumulators in hermite_eval.
inline constexpr long kHermiteExtendedOrder = 300;

/// Normalized value H_n(x)/sqrt(n!). Bounded by ~1.087 * exp(x^2/4) for all n,
/// so it stays representable for any order.
double hermite_normalized(long n, double x);

/// All normalized values H_k(x)/sqrt(k!) for k = 0..n in one recurrence pass.
std::vector<double> hermite_normalized_all(long n, double x);

/// H_n(0) in closed form: 0 for odd n, (-1)^k (2k-1)!! for n = 2k.
/// Overflows double near n ~ 302; log_hermite_zero_abs covers all orders.
double hermite_zero_value(long n);

/// (sign, log |H_n(x)/sqrt(n!)|) with periodic rescaling, valid for any x
/// (the plain normalized value overflows once x passes the turning point).
std::pair<int, double> hermite_normalized_log(long n, double x);

/// log |H_n(0)| (-inf for odd n).
double log_hermite_zero_abs(long n);

/// Derivative H_n'(x) = n H_{n-1}(x).
double hermite_derivative(long n, double x);

/// Precomputed recurrence coefficients for the normalized evaluation; shaves
/// the per-step square roots off hot loops. Immutable, safe to share across
/// threads.
class HermiteRecurrence {
public:
    explicit HermiteRecurrence(long max_order);
    long max_order() const { return max_order_; }
    /// H_n(x)/sqrt(n!), table-driven.
    double normalized(long n, double x) const;

private:
    long max_order_;
    std::vector<double> inv_sqrt_;  // 1/sqrt(k)
    std::vector<double> ratio_;     // sqrt((k-1)/k)
};

/// Precomputes the zero-value table up to max_order; evaluation itself is the
/// plain recurrence. Immutable after construction.
class HermiteEvaluator {
public:
    explicit HermiteEvaluator(long max_order, bool precompute_zero_table = true);

    long max_order() const { return max_order_; }
    double eval(long n, double x) const;
    double normalized(long n, double x) const;
    double zero_value(long n) const;

private:
    long max_order_;
    std::vector<double> zero_table_;  // empty when not precomputed
};

/// Quadrature rule for the standard Gaussian weight: sum w_i f(xi_i) ~ E[f(Z)].
/// Weights are normalized so they sum to 1.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }

    template <typename F>
    double integrate(F&& f) const {
        CompensatedSum acc;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc.add(weights[i] * f(nodes[i]));
        return acc.value();
    }
};

/// Largest supported Gauss-Hermite node count (dense eigensolve behind it).
inline constexpr int kMaxGaussHermiteNodes = 600;

/// Golub-Welsch rule for the N(0,1) weight; exact on polynomials of degree
/// <= 2m-1. Throws std::invalid_argument for m <= 0 or m > kMaxGaussHermiteNodes.
GaussHermiteRule gauss_hermite_rule(int m);

/// Nodes/weights on [-1,1] with unit weight (Gauss-Legendre).
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre_rule(int m);

/// Rule for the weight x^b on (0,1) (b >= 0 real): sum w_i f(x_i) ~
/// int_0^1 x^b f(x) dx. Used for the inner time integrals where x^n
/// concentrates all mass near 1.
GaussLegendreRule gauss_powerlaw01_rule(double b, int m);

}  // namespace wchaos
