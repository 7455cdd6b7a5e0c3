#include "wchaos/hermite.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace wchaos {

namespace {

void check_order(long n) {
    if (n < 0) throw std::invalid_argument("hermite: order must be >= 0");
}

}  // namespace

double hermite_eval(long n, double x) {
    check_order(n);
    if (!std::isfinite(x)) throw std::invalid_argument("hermite_eval: x not finite");
    if (n == 0) return 1.0;
    if (n == 1) return x;
    if (n <= kHermiteExtendedOrder) {
        double hm2 = 1.0, hm1 = x;
        for (long k = 2; k <= n; ++k) {
            const double h = x * hm1 - static_cast<double>(k - 1) * hm2;
            hm2 = hm1;
            hm1 = h;
        }
        return hm1;
    }
    // cancellation control for deep recurrences
    long double hm2 = 1.0L, hm1 = x;
    for (long k = 2; k <= n; ++k) {
        const long double h = static_cast<long double>(x) * hm1 - static_cast<long double>(k - 1) * hm2;
        hm2 = hm1;
        hm1 = h;
    }
    return static_cast<double>(hm1);
}

std::vector<double> hermite_normalized_all(long n, double x) {
    check_order(n);
    if (!std::isfinite(x)) throw std::invalid_argument("hermite_normalized: x not finite");
    std::vector<double> h(static_cast<std::size_t>(n) + 1);
    h[0] = 1.0;
    if (n >= 1) h[1] = x;
    for (long k = 2; k <= n; ++k) {
        const double rk = static_cast<double>(k);
        h[k] = (x / std::sqrt(rk)) * h[k - 1] - std::sqrt((rk - 1.0) / rk) * h[k - 2];
    }
    return h;
}

double hermite_normalized(long n, double x) {
    check_order(n);
    if (!std::isfinite(x)) throw std::invalid_argument("hermite_normalized: x not finite");
    if (n == 0) return 1.0;
    if (n == 1) return x;
    double hm2 = 1.0, hm1 = x;
    for (long k = 2; k <= n; ++k) {
        const double rk = static_cast<double>(k);
        const double h = (x / std::sqrt(rk)) * hm1 - std::sqrt((rk - 1.0) / rk) * hm2;
        hm2 = hm1;
        hm1 = h;
    }
    return hm1;
}

std::pair<int, double> hermite_normalized_log(long n, double x) {
    check_order(n);
    if (!std::isfinite(x)) throw std::invalid_argument("hermite_normalized_log: bad x");
    if (n == 0) return {1, 0.0};
    double hm2 = 1.0, hm1 = x, log_scale = 0.0;
    if (n == 1) hm1 = x;
    for (long k = 2; k <= n; ++k) {
        const double rk = static_cast<double>(k);
        double h = (x / std::sqrt(rk)) * hm1 - std::sqrt((rk - 1.0) / rk) * hm2;
        hm2 = hm1;
        hm1 = h;
        const double mag = std::max(std::abs(hm1), std::abs(hm2));
        if (mag > 1e250) {
            hm1 *= 1e-250;
            hm2 *= 1e-250;
            log_scale += 250.0 * std::log(10.0);
        } else if (mag > 0.0 && mag < 1e-250) {
            hm1 *= 1e250;
            hm2 *= 1e250;
            log_scale -= 250.0 * std::log(10.0);
        }
    }
    if (hm1 == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    return {hm1 > 0.0 ? 1 : -1, std::log(std::abs(hm1)) + log_scale};
}

double hermite_zero_value(long n) {
    check_order(n);
    if (n % 2 == 1) return 0.0;
    const long k = n / 2;
    // product form reproduces the recurrence at x = 0 bit for bit
    double mag = 1.0;
    for (long j = 1; j <= k; ++j) mag *= static_cast<double>(2 * j - 1);
    return (k % 2 == 0) ? mag : -mag;
}

double log_hermite_zero_abs(long n) {
    check_order(n);
    if (n % 2 == 1) return -std::numeric_limits<double>::infinity();
    return log_double_factorial(n - 1);
}

double hermite_derivative(long n, double x) {
    check_order(n);
    if (n == 0) return 0.0;
    return static_cast<double>(n) * hermite_eval(n - 1, x);
}

HermiteRecurrence::HermiteRecurrence(long max_order) : max_order_(max_order) {
    check_order(max_order);
    inv_sqrt_.resize(static_cast<std::size_t>(max_order) + 1, 0.0);
    ratio_.resize(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (long k = 1; k <= max_order; ++k) {
        const double rk = static_cast<double>(k);
        inv_sqrt_[k] = 1.0 / std::sqrt(rk);
        ratio_[k] = std::sqrt((rk - 1.0) / rk);
    }
}

double HermiteRecurrence::normalized(long n, double x) const {
    if (n > max_order_) throw std::invalid_argument("HermiteRecurrence: order above table");
    if (n == 0) return 1.0;
    if (n == 1) return x;
    double hm2 = 1.0, hm1 = x;
    for (long k = 2; k <= n; ++k) {
        const double h = x * inv_sqrt_[k] * hm1 - ratio_[k] * hm2;
        hm2 = hm1;
        hm1 = h;
    }
    return hm1;
}

HermiteEvaluator::HermiteEvaluator(long max_order, bool precompute_zero_table)
    : max_order_(max_order) {
    check_order(max_order);
    if (precompute_zero_table) {
        zero_table_.resize(static_cast<std::size_t>(max_order) + 1);
        for (long n = 0; n <= max_order; ++n) zero_table_[n] = hermite_zero_value(n);
    }
}

double HermiteEvaluator::eval(long n, double x) const {
    if (n > max_order_) throw std::invalid_argument("HermiteEvaluator: order above max_order");
    return hermite_eval(n, x);
}

double HermiteEvaluator::normalized(long n, double x) const {
    if (n > max_order_) throw std::invalid_argument("HermiteEvaluator: order above max_order");
    return hermite_normalized(n, x);
}

double HermiteEvaluator::zero_value(long n) const {
    if (n > max_order_) throw std::invalid_argument("HermiteEvaluator: order above max_order");
    if (!zero_table_.empty()) return zero_table_[static_cast<std::size_t>(n)];
    return hermite_zero_value(n);
}

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix, weights are mu_0 * (first eigenvector component)^2.
struct TridiagRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

TridiagRule golub_welsch(const std::vector<double>& diag,
                         const std::vector<double>& subdiag, double mu0) {
    const int m = static_cast<int>(diag.size());
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), m);
    Eigen::VectorXd e(m > 1 ? m - 1 : 0);
    for (int i = 0; i + 1 < m; ++i) e[i] = subdiag[i];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("golub_welsch: tridiagonal eigensolver failed to converge");

    TridiagRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        rule.nodes[i] = solver.eigenvalues()[i];
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace

GaussHermiteRule gauss_hermite_rule(int m) {
    if (m <= 0) throw std::invalid_argument("gauss_hermite_rule: need m >= 1");
    if (m > kMaxGaussHermiteNodes)
        throw std::invalid_argument("gauss_hermite_rule: m exceeds supported maximum");
    std::vector<double> diag(m, 0.0), sub(m > 1 ? m - 1 : 0);
    for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
    TridiagRule gw = golub_welsch(diag, sub, 1.0);

    // Newton-polish the eigenvalue nodes on the normalized recurrence and
    // recompute weights from w_i = 1 / (m * Hhat_{m-1}(xi_i)^2).
    const double rm = static_cast<double>(m);
    for (int i = 0; i < m; ++i) {
        double xi = gw.nodes[i];
        for (int it = 0; it < 3; ++it) {
            const double hm = hermite_normalized(m, xi);
            const double hm1 = hermite_normalized(m - 1, xi);
            if (hm1 == 0.0) break;
            const double step = hm / (std::sqrt(rm) * hm1);
            xi -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(xi))) break;
        }
        gw.nodes[i] = xi;
        const double hm1 = hermite_normalized(m - 1, xi);
        gw.weights[i] = 1.0 / (rm * hm1 * hm1);
    }

    // the Gaussian weight has total mass exactly 1
    double total = 0.0;
    for (double w : gw.weights) total += w;
    for (double& w : gw.weights) w /= total;

    return {std::move(gw.nodes), std::move(gw.weights)};
}

GaussLegendreRule gauss_legendre_rule(int m) {
    if (m <= 0) throw std::invalid_argument("gauss_legendre_rule: need m >= 1");
    std::vector<double> diag(m, 0.0), sub(m > 1 ? m - 1 : 0);
    for (int k = 1; k < m; ++k) {
        const double kk = static_cast<double>(k);
        sub[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    TridiagRule gw = golub_welsch(diag, sub, 2.0);
    return {std::move(gw.nodes), std::move(gw.weights)};
}

GaussLegendreRule gauss_powerlaw01_rule(double b, int m) {
    if (m <= 0) throw std::invalid_argument("gauss_powerlaw01_rule: need m >= 1");
    if (b < 0.0) throw std::invalid_argument("gauss_powerlaw01_rule: need b >= 0");
    // Jacobi weight (1+u)^b on [-1,1], mapped by x = (1+u)/2; alpha = 0.
    std::vector<double> diag(m), sub(m > 1 ? m - 1 : 0);
    diag[0] = b / (b + 2.0);
    for (int k = 1; k < m; ++k) {
        const double kk = static_cast<double>(k);
        const double den = (2.0 * kk + b) * (2.0 * kk + b + 2.0);
        diag[k] = b * b / den;
        const double num = 4.0 * kk * kk * (kk + b) * (kk + b);
        const double den2 =
            (2.0 * kk + b) * (2.0 * kk + b) * (2.0 * kk + b + 1.0) * (2.0 * kk + b - 1.0);
        sub[k - 1] = std::sqrt(num / den2);
    }
    // total mass of x^b on (0,1)
    TridiagRule gw = golub_welsch(diag, sub, 1.0 / (b + 1.0));
    GaussLegendreRule rule;
    rule.nodes.resize(m);
    rule.weights = std::move(gw.weights);
    for (int i = 0; i < m; ++i) rule.nodes[i] = 0.5 * (1.0 + gw.nodes[i]);
    return rule;
}

}  // namespace wchaos
