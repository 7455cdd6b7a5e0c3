#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wchaos/hermite.hpp"
#include "wchaos/special.hpp"

// One-dimensional quadrature building blocks: composite Gauss-Legendre panels,
// an adaptive bisection driver, and a tanh-sinh rule for integrable endpoint
// singularities.

namespace wchaos {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

namespace detail {
inline const GaussLegendreRule& cached_gl(int m) {
    static const GaussLegendreRule gl8 = gauss_legendre_rule(8);
    static const GaussLegendreRule gl16 = gauss_legendre_rule(16);
    static const GaussLegendreRule gl24 = gauss_legendre_rule(24);
    static const GaussLegendreRule gl32 = gauss_legendre_rule(32);
    switch (m) {
        case 8: return gl8;
        case 16: return gl16;
        case 24: return gl24;
        default: return (m <= 24) ? gl24 : gl32;
    }
}
}  // namespace detail

/// Single Gauss-Legendre panel on [a,b].
template <typename F>
double gl_panel(F&& f, double a, double b, int m = 16) {
    const GaussLegendreRule& gl = detail::cached_gl(m);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    CompensatedSum acc;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        acc.add(gl.weights[i] * f(mid + half * gl.nodes[i]));
    return half * acc.value();
}

/// Composite rule with `panels` equal panels.
template <typename F>
double integrate_gl(F&& f, double a, double b, int panels, int pts = 16) {
    CompensatedSum acc;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) acc.add(gl_panel(f, a + i * h, a + (i + 1) * h, pts));
    return acc.value();
}

/// Adaptive bisection on top of 16/8-point panel pairs.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                                    double rel_tol = 1e-12, int max_depth = 40) {
    struct Frame {
        double a, b, coarse;
        int depth;
    };
    QuadratureResult out;
    std::vector<Frame> stack{{a, b, gl_panel(f, a, b, 8), 0}};
    CompensatedSum total, err;
    double scale = std::abs(stack.front().coarse);
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        const double fine = gl_panel(f, fr.a, fr.b, 16);
        const double diff = std::abs(fine - fr.coarse);
        const double tol = std::max(abs_tol, rel_tol * scale) *
                           std::max(1e-3, (fr.b - fr.a) / (b - a));
        if (diff <= tol || fr.depth >= max_depth) {
            total.add(fine);
            err.add(diff);
            if (fr.depth >= max_depth && diff > tol) out.converged = false;
            continue;
        }
        const double mid = 0.5 * (fr.a + fr.b);
        stack.push_back({fr.a, mid, gl_panel(f, fr.a, mid, 8), fr.depth + 1});
        stack.push_back({mid, fr.b, gl_panel(f, mid, fr.b, 8), fr.depth + 1});
        scale = std::max(scale, std::abs(total.value()));
    }
    out.value = total.value();
    out.error_estimate = err.value();
    return out;
}

/// Tanh-sinh rule on (0,1). Handles integrable endpoint singularities
/// (log x, x^alpha with alpha > -1) at both ends; f is never called at 0 or 1.
template <typename F>
QuadratureResult integrate_tanh_sinh_01(F&& f, double tol = 1e-13, int max_level = 13) {
    const double vmax = 4.8;
    auto node = [](double v, double& x, double& w) {
        const double sv = std::sinh(v);
        const double c = std::cosh(v);
        x = 1.0 / (1.0 + std::exp(-2.0 * sv));
        const double ch = std::cosh(sv);
        w = c / (2.0 * ch * ch);
    };
    double h = vmax;
    double x, w;
    node(0.0, x, w);
    double prev = h * w * f(x);
    QuadratureResult out;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        CompensatedSum add;
        for (double v = h; v <= vmax + 1e-14; v += 2.0 * h) {
            node(v, x, w);
            if (x < 1.0 && x > 0.0 && w > 0.0) add.add(w * f(x));
            node(-v, x, w);
            if (x > 0.0 && x < 1.0 && w > 0.0) add.add(w * f(x));
        }
        const double cur = 0.5 * prev + h * add.value();
        const double diff = std::abs(cur - prev);
        prev = cur;
        if (level >= 4 && diff <= tol * std::max(1.0, std::abs(cur))) {
            out.value = cur;
            out.error_estimate = diff;
            return out;
        }
    }
    out.value = prev;
    out.error_estimate = std::abs(prev) * 1e-8;
    out.converged = false;
    return out;
}

/// Tanh-sinh on a general interval (a,b). Nodes that round onto an endpoint
/// are dropped, so an endpoint singularity of f never gets evaluated; for
/// full accuracy near a singular endpoint, parameterize by the distance to it
/// and use integrate_tanh_sinh_01 directly.
template <typename F>
QuadratureResult integrate_tanh_sinh(F&& f, double a, double b, double tol = 1e-13) {
    const double len = b - a;
    auto res = integrate_tanh_sinh_01(
        [&](double u) {
            const double z = a + len * u;
            if (z <= a || z >= b) return 0.0;
            return f(z);
        },
        tol);
    res.value *= len;
    res.error_estimate *= std::abs(len);
    return res;
}

}  // namespace wchaos
