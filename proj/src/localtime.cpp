#include "wchaos/localtime.hpp"

#include <cmath>
#include <stdexcept>

#include "wchaos/hermite.hpp"
#include "wchaos/parallel.hpp"
#include "wchaos/quadrature.hpp"

namespace wchaos {

double iterated_integral_l2(long n, double t) {
    if (n < 0 || !(t >= 0.0))
        throw std::invalid_argument("iterated_integral_l2: need n >= 0, t >= 0");
    if (n == 0) return 1.0;
    if (t == 0.0) return 0.0;
    return std::exp(static_cast<double>(n) * std::log(t) - log_factorial(n));
}

namespace {

// Kernel factor khat_n(t) = sum_j signs_j Hhat_n(q_j/sqrt t) phi(q_j/sqrt t).
// Bounded by ~0.44 * sum_j exp(-q_j^2/(4t)) for every order.
class KernelFactor {
public:
    KernelFactor(std::vector<double> qs, std::vector<double> signs, long max_n)
        : qs_(std::move(qs)), signs_(std::move(signs)), rec_(max_n) {
        all_zero_ = true;
        for (double q : qs_) all_zero_ = all_zero_ && q == 0.0;
        if (all_zero_) zero_table_ = hermite_normalized_all(max_n, 0.0);
    }

    bool all_zero() const { return all_zero_; }

    double operator()(long n, double t) const {
        if (all_zero_) {
            double s = 0.0;
            for (double sign : signs_) s += sign;
            return s * zero_table_[n] * norm_pdf(0.0);
        }
        const double inv_sqrt_t = 1.0 / std::sqrt(t);
        double v = 0.0;
        for (std::size_t j = 0; j < qs_.size(); ++j) {
            const double arg = qs_[j] * inv_sqrt_t;
            if (std::abs(arg) > 53.0) continue;  // below double underflow
            v += signs_[j] * rec_.normalized(n, arg) * norm_pdf(arg);
        }
        return v;
    }

private:
    std::vector<double> qs_, signs_;
    HermiteRecurrence rec_;
    bool all_zero_ = false;
    std::vector<double> zero_table_;
};

// I_n via the min-kernel factorization
//   I_n = n int_0^1 r^{n-1} G(r)^2 dr,  G(r) = int_r^1 t^{-(n+1)/2} khat_n(t) dt,
// marched in the exponential coordinate t = exp(-2v/(n+1)). With
// W(v) = r^{(n-1)/2} G(r), gamma = (n-1)/(n+1):
//   W' = (2/(n+1)) khat_n(t(v)) - gamma W,  I_n = 2n/(n+1) int_0^inf e^{-2v/(n+1)} W^2.
// In this coordinate the Hermite oscillation of khat has wavelength >= ~pi/2
// for every order, so a fixed step resolves it.
class TermMarcher {
public:
    TermMarcher(const KernelFactor& kf, long n) : kf_(kf), n_(n) {}

    double integrate(double h, double v_max) const {
        const double np1 = static_cast<double>(n_) + 1.0;
        const double gamma = (static_cast<double>(n_) - 1.0) / np1;
        const double scale = 2.0 / np1;
        auto driver = [&](double v) { return scale * kf_(n_, std::exp(-2.0 * v / np1)); };
        auto weight = [&](double v) { return std::exp(-2.0 * v / np1); };

        double w = 0.0, acc = 0.0;
        const long steps = static_cast<long>(std::ceil(v_max / h));
        double f0 = driver(0.0);
        for (long i = 0; i < steps; ++i) {
            const double v = i * h;
            const double fh = driver(v + 0.5 * h);
            const double f1 = driver(v + h);
            // RK4 for (W, J): W' = f - gamma W, J' = weight * W^2
            const double k1w = f0 - gamma * w;
            const double k1j = weight(v) * w * w;
            const double w2 = w + 0.5 * h * k1w;
            const double k2w = fh - gamma * w2;
            const double k2j = weight(v + 0.5 * h) * w2 * w2;
            const double w3 = w + 0.5 * h * k2w;
            const double k3w = fh - gamma * w3;
            const double k3j = weight(v + 0.5 * h) * w3 * w3;
            const double w4 = w + h * k3w;
            const double k4w = f1 - gamma * w4;
            const double k4j = weight(v + h) * w4 * w4;
            w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            acc += h / 6.0 * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
            f0 = f1;
        }
        return 2.0 * static_cast<double>(n_) / np1 * acc;
    }

    /// Richardson pairing of two step sizes (RK4: order-4 error model).
    double value() const {
        const double v_max = 48.0;
        const double coarse = integrate(0.05, v_max);
        const double fine = integrate(0.025, v_max);
        return (16.0 * fine - coarse) / 15.0;
    }

private:
    const KernelFactor& kf_;
    long n_;
};

double zeroth_term(const KernelFactor& kf) {
    // I_0 = (int_0^1 t^{-1/2} khat_0(t) dt)^2 = (2 int_0^1 khat_0(tau^2) dtau)^2
    const double integral =
        2.0 * integrate_gl([&](double tau) { return kf(0, tau * tau); }, 0.0, 1.0, 64, 16);
    return integral * integral;
}

}  // namespace

std::vector<double> localtime_chaos_terms(const std::vector<double>& qs,
                                          const std::vector<double>& signs, long N) {
    if (qs.size() != signs.size() || qs.empty())
        throw std::invalid_argument("localtime_chaos_terms: bad kernel description");
    if (N < 0) throw std::invalid_argument("localtime_chaos_terms: N >= 0");
    KernelFactor kf(qs, signs, N);
    auto terms = map_indexed(static_cast<std::size_t>(N) + 1, [&](std::size_t n) {
        if (n == 0) return zeroth_term(kf);
        return TermMarcher(kf, static_cast<long>(n)).value();
    });
    return terms;
}

std::vector<double> localtime_cross_terms(double qa, double qb, long N) {
    // B_n(a,b) = (I_n of the sum kernel - I_n(a,a) - I_n(b,b)) / 2 computed
    // directly from the product of the two G-integrals: run the marcher on
    // the combined kernel pairs (g^a + g^b) and subtract the diagonals.
    auto sum_terms = localtime_chaos_terms({qa, qb}, {1.0, 1.0}, N);
    auto aa = localtime_chaos_terms({qa}, {1.0}, N);
    auto bb = localtime_chaos_terms({qb}, {1.0}, N);
    std::vector<double> cross(static_cast<std::size_t>(N) + 1);
    for (long n = 0; n <= N; ++n) cross[n] = 0.5 * (sum_terms[n] - aa[n] - bb[n]);
    return cross;
}

double local_time_mean(const LampertiMap& map, double y) {
    const double q = map.forward(y);
    // sigma(y) int_0^1 p_t(x,y) dt = int_0^1 t^{-1/2} phi(q/sqrt t) dt
    return 2.0 * integrate_gl([&](double tau) { return norm_pdf(q / tau); }, 1e-300, 1.0,
                              48, 16);
}

namespace {

LocalTimeNorm assemble_norm(std::vector<double> terms, double s) {
    LocalTimeNorm out;
    out.terms = std::move(terms);
    const long N = static_cast<long>(out.terms.size()) - 1;
    CompensatedSum acc;
    for (long n = 0; n <= N; ++n) {
        if (out.terms[n] == 0.0) continue;
        acc.add(std::exp(s * std::log1p(static_cast<double>(n))) * out.terms[n]);
    }
    out.sum_sq = acc.value();
    out.value = std::sqrt(std::max(0.0, out.sum_sq));
    if (N >= 64) {
        try {
            out.index = fit_tail_exponent(out.terms, std::max<long>(8, N / 10), N);
            out.index_valid = true;
            out.divergent = s >= out.index.critical_s - 2.0 * out.index.slope_stderr;
        } catch (const std::invalid_argument&) {
            out.index_valid = false;
        }
    }
    return out;
}

}  // namespace

LocalTimeNorm local_time_chaos_norm(const DiffusionModel& model, double y, double s,
                                    long N) {
    auto map = lamperti(model);
    const double q = map.forward(y);
    return assemble_norm(localtime_chaos_terms({q}, {1.0}, N), s);
}

void HolderExperiment::validate() const {
    if (!(s < 0.5)) throw std::invalid_argument("holder experiment: need s < 1/2");
    if (!(beta > 0.0) || !(beta < std::min(0.5 - s, 1.0)))
        throw std::invalid_argument(
            "holder experiment: need beta in (0, min{1/2 - s, 1})");
    if (truncation < 0) throw std::invalid_argument("holder experiment: bad truncation");
}

LocalTimeNorm holder_difference_norm(const HolderExperiment& exp) {
    exp.validate();
    if (exp.y == exp.z) {
        LocalTimeNorm zero;
        zero.terms.assign(static_cast<std::size_t>(exp.truncation) + 1, 0.0);
        return zero;
    }
    auto map = lamperti(exp.model);
    const double qy = map.forward(exp.y);
    const double qz = map.forward(exp.z);
    return assemble_norm(localtime_chaos_terms({qy, qz}, {1.0, -1.0}, exp.truncation),
                         exp.s);
}

HolderBound holder_bound_constant(double s, double beta, double lambda, long N_cap) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw std::invalid_argument("holder_bound_constant: need beta in (0,1)");
    if (!(lambda > 0.0)) throw std::invalid_argument("holder_bound_constant: lambda > 0");
    if (N_cap < 16) throw std::invalid_argument("holder_bound_constant: cap too small");

    HolderBound out;
    out.divergent = (s + beta >= 0.5);
    const double log_c2 = -std::log(kPi) - 0.5 * beta * std::log(lambda);
    const double front = std::exp(2.0 * log_c2) / (1.0 - beta);
    const double gamma_exp = s + beta - 1.5;  // term decay exponent

    CompensatedSum acc;
    const double ln2 = std::log(2.0);
    long n = 0;
    for (; n <= N_cap; ++n) {
        const double log_term = s * std::log1p(static_cast<double>(n)) +
                                (n + beta + 1.0) * ln2 +
                                2.0 * std::lgamma(0.5 * (n + beta + 1.0)) -
                                log_factorial(n) -
                                std::log(static_cast<double>(n) - beta + 1.0);
        const double term = front * std::exp(log_term);
        acc.add(term);
        out.terms.push_back(term);
        if (!out.divergent && n >= 64) {
            // integral tail estimate under the O(n^{s+beta-3/2}) decay
            const double tail = term * static_cast<double>(n) / (-1.0 - gamma_exp);
            if (tail < 1e-6 * acc.value()) {
                out.tail_estimate = tail;
                break;
            }
        }
    }
    out.terms_used = std::min(n, N_cap);
    out.partial_sum = acc.value();
    if (!out.divergent && out.tail_estimate == 0.0 && !out.terms.empty()) {
        // cap reached before the tail target; append the estimate anyway
        out.tail_estimate = out.terms.back() * static_cast<double>(out.terms_used) /
                            (-1.0 - gamma_exp);
    }
    if (out.divergent) {
        out.constant_sq = std::numeric_limits<double>::infinity();
        out.constant = std::numeric_limits<double>::infinity();
        out.tail_fraction = 1.0;
        return out;
    }
    out.constant_sq = out.partial_sum + out.tail_estimate;
    out.constant = std::sqrt(out.constant_sq);
    out.tail_fraction = out.tail_estimate / out.constant_sq;
    return out;
}

DensityHolderReport density_holder_check(const DiffusionModel& model,
                                         const std::vector<std::pair<double, double>>& pairs,
                                         double beta, long truncation) {
    if (!(beta < 1.0) || !(beta > 0.0))
        throw std::invalid_argument("density_holder_check: need beta in (0,1)");
    auto map = lamperti(model);
    DensityHolderReport report;
    for (const auto& [y, z] : pairs) {
        DensityHolderReport::Row row;
        row.y = y;
        row.z = z;
        row.diff = std::abs(local_time_mean(map, y) - local_time_mean(map, z));
        if (y != z) {
            row.holder_ratio = row.diff / std::pow(std::abs(y - z), beta);
            const double qy = map.forward(y), qz = map.forward(z);
            auto terms = localtime_chaos_terms({qy, qz}, {1.0, -1.0}, truncation);
            row.dominating_norm = assemble_norm(std::move(terms), -0.5).value;
        }
        // |E[D]| = |J_0 D| <= |D|_{2,s} for any s; at y = z both sides are 0
        row.dominated = row.diff <= row.dominating_norm + 1e-12;
        report.max_ratio = std::max(report.max_ratio, row.holder_ratio);
        report.all_dominated = report.all_dominated && row.dominated;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace wchaos
