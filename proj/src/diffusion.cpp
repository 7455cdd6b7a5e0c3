#include "wchaos/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wchaos/hermite.hpp"
#include "wchaos/quadrature.hpp"

namespace wchaos {

double DiffusionModel::effective_drift(double z) const {
    if (drift_mode == DriftMode::StratonovichSymmetric)
        return 0.5 * sigma(z) * sigma_prime(z);
    return drift ? drift(z) : 0.0;
}

DiffusionModel DiffusionModel::unit(double x) {
    DiffusionModel m;
    m.name = "unit";
    m.sigma = [](double) { return 1.0; };
    m.sigma_prime = [](double) { return 0.0; };
    m.start = x;
    m.lambda_floor = 1.0;
    m.kappa_ceiling = 1.0;
    return m;
}

DiffusionModel DiffusionModel::sqrt1pz2(double x) {
    DiffusionModel m;
    m.name = "sqrt1pz2";
    m.sigma = [](double z) { return std::sqrt(1.0 + z * z); };
    m.sigma_prime = [](double z) { return z / std::sqrt(1.0 + z * z); };
    m.start = x;
    m.lambda_floor = 1.0;
    m.kappa_ceiling = 1.0 + (std::abs(x) + 60.0) * (std::abs(x) + 60.0);
    return m;
}

DiffusionModel DiffusionModel::sin2(double x) {
    DiffusionModel m;
    m.name = "sin2";
    m.sigma = [](double z) { return 2.0 + std::sin(z); };
    m.sigma_prime = [](double z) { return std::cos(z); };
    m.start = x;
    m.lambda_floor = 1.0;
    m.kappa_ceiling = 9.0;
    return m;
}

namespace {

// Fritsch-Carlson monotone cubic interpolant.
struct Pchip {
    std::vector<double> x, y, d;  // nodes, values, derivatives

    Pchip(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
        const std::size_t n = x.size();
        if (n < 2) throw std::invalid_argument("pchip: need at least 2 points");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x[i + 1] > x[i]))
                throw std::invalid_argument("pchip: abscissae must be strictly increasing");
        std::vector<double> h(n - 1), slope(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x[i + 1] - x[i];
            slope[i] = (y[i + 1] - y[i]) / h[i];
        }
        d.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (slope[i - 1] * slope[i] <= 0.0) {
                d[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
            }
        }
        d[0] = slope[0];
        d[n - 1] = slope[n - 2];
    }

    std::size_t find(double z) const {
        if (z <= x.front()) return 0;
        if (z >= x[x.size() - 2]) return x.size() - 2;
        return static_cast<std::size_t>(
                   std::upper_bound(x.begin(), x.end(), z) - x.begin()) - 1;
    }

    double eval(double z) const {
        const std::size_t i = find(z);
        const double h = x[i + 1] - x[i], t = (z - x[i]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
    }

    double deriv(double z) const {
        const std::size_t i = find(z);
        const double h = x[i + 1] - x[i], t = (z - x[i]) / h;
        const double g00 = 6 * t * (t - 1) / h;
        const double g10 = (1 - t) * (1 - 3 * t);
        const double g01 = -g00;
        const double g11 = t * (3 * t - 2);
        return g00 * y[i] + g10 * d[i] + g01 * y[i + 1] + g11 * d[i + 1];
    }
};

}  // namespace

DiffusionModel DiffusionModel::from_table(const std::vector<double>& z,
                                          const std::vector<double>& sigma_values,
                                          double x) {
    if (z.size() != sigma_values.size())
        throw std::invalid_argument("from_table: column length mismatch");
    auto interp = std::make_shared<Pchip>(z, sigma_values);
    double lo = 1e300, hi = 0.0;
    for (double s : sigma_values) {
        if (!(s > 0.0)) throw std::invalid_argument("from_table: sigma must be positive");
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    DiffusionModel m;
    m.name = "table";
    m.sigma = [interp](double a) { return interp->eval(a); };
    m.sigma_prime = [interp](double a) { return interp->deriv(a); };
    m.start = x;
    m.lambda_floor = lo * lo;
    m.kappa_ceiling = hi * hi;
    return m;
}

DiffusionModel DiffusionModel::from_csv(const std::string& path, double x) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sigma table '" + path + "'");
    std::vector<double> zs, ss;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.find("z") == 0 || line.find("Z") == 0) continue;  // header
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double z, s;
        if (row >> z >> s) {
            zs.push_back(z);
            ss.push_back(s);
        }
    }
    if (zs.size() < 4)
        throw std::runtime_error("sigma table '" + path + "' has fewer than 4 rows");
    return from_table(zs, ss, x);
}

DiffusionModel DiffusionModel::parse(const std::string& text, double x) {
    if (text == "unit") return unit(x);
    if (text == "sqrt1pz2") return sqrt1pz2(x);
    if (text == "sin2") return sin2(x);
    if (text.rfind("csv:", 0) == 0) return from_csv(text.substr(4), x);
    throw std::invalid_argument("unknown model '" + text + "'");
}

void DiffusionModel::validate(double halfwidth) const {
    if (!sigma) throw std::invalid_argument("model: sigma not set");
    if (!(lambda_floor > 0.0)) throw std::invalid_argument("model: lambda must be > 0");
    const int samples = 768;
    for (int i = 0; i <= samples; ++i) {
        const double z = start - halfwidth + 2.0 * halfwidth * i / samples;
        const double s2 = sigma(z) * sigma(z);
        if (!(s2 >= lambda_floor * (1.0 - 1e-12)))
            throw std::invalid_argument("model: sigma^2 < lambda at z = " + std::to_string(z));
        if (kappa_ceiling > 0.0 && !(s2 <= kappa_ceiling * (1.0 + 1e-12)))
            throw std::invalid_argument("model: sigma^2 > kappa at z = " + std::to_string(z));
    }
}

LampertiMap::LampertiMap(const DiffusionModel& model, double u_range)
    : sigma_(model.sigma), x_(model.start), u_range_(u_range) {
    model.validate();
    auto invsig = [this](double z) { return 1.0 / sigma_(z); };

    grid_z_.push_back(x_);
    grid_u_.push_back(0.0);
    // adaptive z-steps targeting about 0.2 in the u coordinate, so the table
    // covers [-u_range, u_range] in O(u_range) segments for any admissible sigma
    auto z_step = [this](double z) { return std::clamp(0.2 * sigma_(z), 1e-3, 1e9); };
    double z = x_, u = 0.0;
    std::vector<double> right_z, right_u;
    while (u < u_range_) {
        const double z2 = z + z_step(z);
        u += gl_panel(invsig, z, z2, 24);
        z = z2;
        right_z.push_back(z);
        right_u.push_back(u);
        if (right_z.size() > 1'000'000)
            throw std::runtime_error("lamperti: psi fails to reach the requested range");
    }
    z = x_;
    u = 0.0;
    std::vector<double> left_z, left_u;
    while (u > -u_range_) {
        const double z2 = z - z_step(z);
        u -= gl_panel(invsig, z2, z, 24);
        z = z2;
        left_z.push_back(z);
        left_u.push_back(u);
        if (left_z.size() > 1'000'000)
            throw std::runtime_error("lamperti: psi fails to reach the requested range");
    }
    grid_z_.insert(grid_z_.begin(), left_z.rbegin(), left_z.rend());
    grid_u_.insert(grid_u_.begin(), left_u.rbegin(), left_u.rend());
    grid_z_.insert(grid_z_.end(), right_z.begin(), right_z.end());
    grid_u_.insert(grid_u_.end(), right_u.begin(), right_u.end());
    z_lo_ = grid_z_.front();
    z_hi_ = grid_z_.back();

    // monotonicity of the numeric psi signals an ellipticity violation
    for (std::size_t i = 0; i + 1 < grid_u_.size(); ++i)
        if (!(grid_u_[i + 1] > grid_u_[i]))
            throw std::runtime_error("lamperti: numeric psi is not increasing");

    round_trip_error_ = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double uu = -u_range_ + 2.0 * u_range_ * i / 64.0;
        round_trip_error_ = std::max(round_trip_error_, std::abs(forward(inverse(uu)) - uu));
    }
}

double LampertiMap::segment_integral(double a, double b) const {
    auto invsig = [this](double z) { return 1.0 / sigma_(z); };
    return gl_panel(invsig, a, b, 24);
}

double LampertiMap::forward(double a) const {
    if (a < z_lo_ || a > z_hi_) {
        // extend from the nearest checkpoint; rare, kept for robustness
        if (a < z_lo_) return grid_u_.front() - segment_integral(a, z_lo_);
        return grid_u_.back() + segment_integral(z_hi_, a);
    }
    const auto it = std::upper_bound(grid_z_.begin(), grid_z_.end(), a);
    const std::size_t i = std::max<std::ptrdiff_t>(0, it - grid_z_.begin() - 1);
    return grid_u_[i] + segment_integral(grid_z_[i], a);
}

double LampertiMap::inverse(double u) const {
    // bracket from the checkpoint table
    const auto it = std::upper_bound(grid_u_.begin(), grid_u_.end(), u);
    std::size_t i = (it == grid_u_.begin())
                        ? 0
                        : static_cast<std::size_t>(it - grid_u_.begin()) - 1;
    i = std::min(i, grid_u_.size() - 2);
    double lo = grid_z_[i], hi = grid_z_[i + 1];
    double z = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double err = forward(z) - u;
        if (std::abs(err) < 1e-14 * (1.0 + std::abs(u))) break;
        if (err > 0.0)
            hi = z;
        else
            lo = z;
        if (hi - lo < 1e-16 * (1.0 + std::abs(z))) break;
        const double newton = z - err * sigma_(z);
        z = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    return z;
}

LampertiMap lamperti(const DiffusionModel& model, double u_range) {
    return LampertiMap(model, u_range);
}

double flow(const DiffusionModel& model, double u, double tol) {
    if (!std::isfinite(u)) throw std::invalid_argument("flow: u must be finite");
    // Dormand-Prince 5(4) on dphi/du = sigma(phi)
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous ODE

    const double dir = (u >= 0.0) ? 1.0 : -1.0;
    const double target = std::abs(u);
    double s = 0.0, y = model.start;
    double h = std::min(0.1, target > 0 ? target : 0.1);
    auto f = [&](double yy) { return dir * model.sigma(yy); };
    int guard = 0;
    while (s < target && guard++ < 2'000'000) {
        h = std::min(h, target - s);
        const double k1 = f(y);
        const double k2 = f(y + h * a21 * k1);
        const double k3 = f(y + h * (a31 * k1 + a32 * k2));
        const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = f(y5);
        const double err =
            std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        const double scale = tol * (1.0 + std::abs(y5));
        if (err <= scale) {
            s += h;
            y = y5;
        }
        const double factor = 0.9 * std::pow(scale / std::max(err, 1e-300), 0.2);
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < 1e-14)
            throw std::runtime_error("flow: step size underflow");
    }
    if (s < target) throw std::runtime_error("flow: integrator failed to reach u");
    return y;
}

double kv_kernel_normalized(const LampertiMap& map, long n, double t, double a) {
    if (n < 0 || !(t > 0.0)) throw std::invalid_argument("kv_kernel: need n >= 0, t > 0");
    const double q = map.forward(a);
    const double arg = q / std::sqrt(t);
    const double h = hermite_normalized(n, arg);
    if (h == 0.0) return 0.0;
    // assembled in log space: the t-power and the Gaussian factor can each
    // leave double range while their product is fine
    const double logmag = -0.5 * (static_cast<double>(n) + 1.0) * std::log(t) +
                          std::log(std::abs(h)) - 0.5 * arg * arg -
                          std::log(kSqrt2Pi) - std::log(map.sigma(a));
    return (h > 0.0 ? 1.0 : -1.0) * std::exp(logmag);
}

double kv_kernel(const LampertiMap& map, long n, double t, double a) {
    const double normalized = kv_kernel_normalized(map, n, t, a);
    if (normalized == 0.0) return 0.0;
    const double lg = 0.5 * log_factorial(n) + std::log(std::abs(normalized));
    if (lg > 700.0)
        throw std::domain_error("kv_kernel: value overflows double; use the normalized form");
    return normalized * std::exp(0.5 * log_factorial(n));
}

namespace {

// cumulative of g from 0 with checkpoints every 0.25
class Cumulative {
public:
    Cumulative(std::function<double(double)> g, double lo, double hi)
        : g_(std::move(g)), step_(0.25) {
        lo = std::min(lo, -1.0);
        hi = std::max(hi, 1.0);
        double z = 0.0, acc = 0.0;
        zs_.push_back(0.0);
        vals_.push_back(0.0);
        while (z < hi) {
            acc += gl_panel(g_, z, z + step_, 24);
            z += step_;
            zs_.push_back(z);
            vals_.push_back(acc);
        }
        z = 0.0;
        acc = 0.0;
        std::vector<double> lz, lv;
        while (z > lo) {
            acc -= gl_panel(g_, z - step_, z, 24);
            z -= step_;
            lz.push_back(z);
            lv.push_back(acc);
        }
        zs_.insert(zs_.begin(), lz.rbegin(), lz.rend());
        vals_.insert(vals_.begin(), lv.rbegin(), lv.rend());
    }

    double operator()(double z) const {
        if (z <= zs_.front()) return vals_.front() - gl_panel(g_, z, zs_.front(), 24);
        if (z >= zs_.back()) return vals_.back() + gl_panel(g_, zs_.back(), z, 24);
        const auto it = std::upper_bound(zs_.begin(), zs_.end(), z);
        const std::size_t i = static_cast<std::size_t>(it - zs_.begin()) - 1;
        return vals_[i] + gl_panel(g_, zs_[i], z, 24);
    }

private:
    std::function<double(double)> g_;
    double step_;
    std::vector<double> zs_;
    std::vector<double> vals_;
};

}  // namespace

ScaleSpeed scale_speed(const DiffusionModel& model) {
    model.validate();
    auto sig = model.sigma;
    auto drift_over_sig2 = [model](double z) {
        const double s = model.sigma(z);
        return 2.0 * model.effective_drift(z) / (s * s);
    };
    auto inner = std::make_shared<Cumulative>(drift_over_sig2, -24.0, 24.0);
    auto s_prime = [inner](double z) { return std::exp(-(*inner)(z)); };
    auto outer = std::make_shared<Cumulative>(s_prime, -24.0, 24.0);

    ScaleSpeed out;
    out.s = [outer](double z) { return (*outer)(z); };
    out.s_prime = s_prime;
    out.m_prime = [inner, sig](double z) {
        const double s = sig(z);
        return 2.0 * std::exp((*inner)(z)) / (s * s);
    };
    return out;
}

FundamentalSolution fundamental_solution(const DiffusionModel& model, double y) {
    auto ss = scale_speed(model);
    const double sy = ss.s(y);
    const double mpy = ss.m_prime(y);
    const double sig_y = model.sigma(y);
    auto sig = model.sigma;
    auto sfun = ss.s;
    auto sprime = ss.s_prime;
    const double spy = ss.s_prime(y);

    FundamentalSolution out;
    out.y = y;
    out.u = [sfun, sy, mpy, y](double z) {
        if (z == y) return 0.0;
        return 0.5 * mpy * std::abs(sfun(z) - sy);
    };
    // exp(-int_y^z 2b/sigma^2) = s'(z)/s'(y)
    out.Au = [sprime, spy, sig, sig_y, y](double z) {
        const double sgn = (z >= y) ? 1.0 : -1.0;  // right limit at the kink
        return sgn * (sprime(z) / spy) * sig(z) / (sig_y * sig_y);
    };
    return out;
}

double bessel_delta_kernel(double s, double y, double x) {
    if (!(s > -1.0) || !(s < 0.0))
        throw std::invalid_argument("bessel_delta_kernel: need -1 < s < 0");
    if (x == y) throw std::invalid_argument("bessel_delta_kernel: x = y not allowed");
    const double r = std::abs(x - y);
    // (1/Gamma(-s/2)) int_0^inf t^{-s/2-1} e^{-t} p_t dt with the heat kernel
    // p_t = (4 pi t)^{-1/2} exp(-r^2/(4t)); integrated on a log-time grid
    auto f = [s, r](double v) {
        const double t = std::exp(v);
        return std::exp(-0.5 * (s + 1.0) * v - t - r * r / (4.0 * t));
    };
    const double v_lo = std::min(std::log(r * r / 4.0), 0.0) - 40.0;
    const double v_hi = 8.0;
    const int panels = static_cast<int>(v_hi - v_lo) + 8;
    const double integral = integrate_gl(f, v_lo, v_hi, panels, 16);
    const double check = integrate_gl(f, v_lo, v_hi, 2 * panels, 16);
    if (std::abs(check - integral) > 1e-10 * std::abs(check) + 1e-300)
        throw std::runtime_error("bessel_delta_kernel: quadrature failed to converge");
    return check / (std::sqrt(4.0 * kPi) * std::tgamma(-0.5 * s));
}

}  // namespace wchaos
