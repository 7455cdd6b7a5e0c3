#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wchaos/special.hpp"

// One-dimensional Stratonovich diffusions dX = sigma(X) o dw. The Lamperti
// coordinate psi(a) = int_x^a dz/sigma(z) turns X into Brownian motion,
// X_t = psi^{-1}(w_t), and carries every kernel here: the transition density,
// its A^n derivatives (A = sigma d/dz), and the local-time machinery on top.

namespace wchaos {

struct DiffusionModel {
    std::string name;
    std::function<double(double)> sigma;
    std::function<double(double)> sigma_prime;
    // general drift; only used by scale_speed / fundamental_solution
    std::function<double(double)> drift;
    enum class DriftMode { StratonovichSymmetric, General };
    DriftMode drift_mode = DriftMode::StratonovichSymmetric;
    double start = 0.0;
    double lambda_floor = 0.0;    // (H3): lambda <= sigma^2 on the working domain
    double kappa_ceiling = 0.0;   // (H4): sigma^2 <= kappa on the working domain

    /// Stratonovich drift sigma sigma'/2 (or the stored general drift).
    double effective_drift(double z) const;

    // catalog models: closed or semi-closed Lamperti maps for the oracles
    static DiffusionModel unit(double x = 0.0);       // sigma = 1
    static DiffusionModel sqrt1pz2(double x = 0.0);   // sigma = sqrt(1+z^2)
    static DiffusionModel sin2(double x = 0.0);       // sigma = 2 + sin z
    /// Tabulated sigma with monotone-cubic interpolation; rows "z,sigma".
    static DiffusionModel from_table(const std::vector<double>& z,
                                     const std::vector<double>& sigma_values,
                                     double x = 0.0);
    static DiffusionModel from_csv(const std::string& path, double x = 0.0);
    /// CLI model string: unit | sqrt1pz2 | sin2 | csv:<path>.
    static DiffusionModel parse(const std::string& text, double x = 0.0);

    /// Samples sigma on a grid and rejects ellipticity violations.
    void validate(double halfwidth = 20.0) const;
};

/// psi(a) = int_x^a dz/sigma(z) with a checkpoint table, plus the monotone
/// inverse. Immutable after construction; safe for concurrent reads.
class LampertiMap {
public:
    /// Builds checkpoints until psi covers [-u_range, u_range].
    LampertiMap(const DiffusionModel& model, double u_range = 20.0);

    double forward(double a) const;   // psi(a)
    double inverse(double u) const;   // psi^{-1}(u), Newton + bisection fallback
    double sigma(double z) const { return sigma_(z); }

    double domain_lo() const { return z_lo_; }
    double domain_hi() const { return z_hi_; }
    double u_range() const { return u_range_; }
    /// max |psi(psi^{-1}(u)) - u| over the construction grid
    double max_round_trip_error() const { return round_trip_error_; }

private:
    std::function<double(double)> sigma_;
    double x_;
    double z_lo_, z_hi_;
    double u_range_;
    double round_trip_error_;
    std::vector<double> grid_z_;
    std::vector<double> grid_u_;

    double segment_integral(double a, double b) const;
};

LampertiMap lamperti(const DiffusionModel& model, double u_range = 20.0);

/// The flow point e^{uA}(x): solves dphi/du = sigma(phi), phi(0) = x with an
/// adaptive Dormand-Prince 5(4) integrator.
double flow(const DiffusionModel& model, double u, double tol = 1e-12);

/// Krylov-Veretennikov kernel A_x^n p_t(x,a) =
/// t^{-(n+1)/2} H_n(psi(a)/sqrt(t)) phi(psi(a)/sqrt(t)) / sigma(a).
/// n = 0 is the transition density.
double kv_kernel(const LampertiMap& map, long n, double t, double a);

/// Same with H_n replaced by H_n/sqrt(n!) (usable at any order).
double kv_kernel_normalized(const LampertiMap& map, long n, double t, double a);

struct ScaleSpeed {
    std::function<double(double)> s;        // scale function, s(0) = 0
    std::function<double(double)> s_prime;  // exp(-int_0^x 2b/sigma^2)
    std::function<double(double)> m_prime;  // speed density
};

ScaleSpeed scale_speed(const DiffusionModel& model);

struct FundamentalSolution {
    std::function<double(double)> u;   // m'(y)/2 |s(z) - s(y)|, u(y) = 0
    std::function<double(double)> Au;  // sgn(z-y) exp(-int_y^z 2b/s^2) sigma(z)/sigma(y)^2
    double y = 0.0;
    // Au has a jump at z = y; evaluation exactly at y returns the right limit
    bool au_right_limit_at_kink = true;
};

FundamentalSolution fundamental_solution(const DiffusionModel& model, double y);

/// (1 - Laplacian)^{s/2} delta_y evaluated at x (d = 1), by the heat-kernel
/// time integral. Requires -1 < s < 0 and x != y.
double bessel_delta_kernel(double s, double y, double x);

}  // namespace wchaos
