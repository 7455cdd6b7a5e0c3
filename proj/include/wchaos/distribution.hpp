#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wchaos/special.hpp"

// Catalog of one-dimensional tempered distributions and their pairings
// against Gaussian-weighted test functions. The central quantity is
// pair_gaussian(spec, c, n) = E[Lambda(c Z) H_n(Z)], Z ~ N(0,1), which feeds
// every chaos coefficient downstream. The pairing (not the pairing / n!)
// is what gets stored; the 1/n! enters once, in the chaos module.

namespace wchaos {

enum class DistKind {
    Delta,
    DeltaDerivative,
    Heaviside,  // indicator of (-inf, y)
    LogAbs,
    PrincipalValueRecip,
    XLogAbsMinusX,
    Smooth,
};

struct DistributionSpec {
    DistKind kind = DistKind::Delta;
    double location = 0.0;     // y for Delta / DeltaDerivative / Heaviside
    int derivative_order = 0;  // k >= 1 for DeltaDerivative
    std::function<double(double)> smooth_fn;
    // growth bound |f(x)| <= growth_scale * exp(growth_rate * |x|) for Smooth
    double growth_rate = 0.0;
    double growth_scale = 1.0;

    static DistributionSpec delta(double y);
    static DistributionSpec delta_derivative(double y, int order);
    static DistributionSpec heaviside(double y);
    static DistributionSpec log_abs();
    static DistributionSpec pv_recip();
    static DistributionSpec x_log_abs_minus_x();
    static DistributionSpec smooth(std::function<double(double)> f, double growth_rate,
                                   double growth_scale);

    /// Set exactly for Delta and Heaviside.
    bool is_positive() const {
        return kind == DistKind::Delta || kind == DistKind::Heaviside;
    }

    /// Canonical text form: delta@0.5, ddelta^2@0, heaviside@-1, logabs,
    /// pv1x, xlogabs. Smooth kinds have no text form.
    std::string to_string() const;
    static DistributionSpec parse(const std::string& text);
};

/// Orders above this are rejected by the quadrature-backed kinds of
/// pair_gaussian; the chaos module's ladder covers arbitrary orders.
inline constexpr long kMaxQuadraturePairingOrder = 160;

/// E[Lambda(c Z) H_n(Z)]. Delta-family and Heaviside use closed Hermite
/// forms; LogAbs and XLogAbsMinusX use adaptive quadrature split at the log
/// singularity; PrincipalValueRecip uses the symmetric-limit quadrature with
/// two-point Richardson extrapolation in the cutoff.
/// Throws std::invalid_argument for invalid input, std::domain_error when the
/// value overflows double or (kind, n) is not supported, std::runtime_error
/// when quadrature fails to converge (message carries the error estimate).
double pair_gaussian(const DistributionSpec& spec, double c, long n);

/// All pairings n = 0..N in log-sign form, with per-term error estimates.
/// Uses the exact coefficient ladders for the catalog kinds (valid at any
/// order) and the Gauss-Hermite rule for Smooth.
std::vector<SignedLog> pairing_ladder(const DistributionSpec& spec, double c, long N,
                                      std::vector<double>* err_estimates = nullptr);

/// (Lambda * kappa_eps)(x) with a Gaussian mollifier of bandwidth eps.
double mollified_eval(const DistributionSpec& spec, double eps, double x);

}  // namespace wchaos
