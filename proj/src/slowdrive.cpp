#include "erasure/slowdrive.hpp"

#include <cmath>
#include <iostream>
#include <map>

namespace erasure {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by
// Newton iteration on the Legendre recurrence.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const auto& rule = gauss_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.w[i] * f(mid + half * rule.x[i]);
    return half * sum;
}

// 64-point base rule over rescaled time, doubled until the relative change
// falls below 1e-7.
double time_integral(const std::function<double(double)>& f) {
    double prev = gauss_integrate(f, 0.0, 1.0, 64);
    for (int n = 128; n <= 1024; n *= 2) {
        const double next = gauss_integrate(f, 0.0, 1.0, n);
        if (std::abs(next - prev) <= 1e-7 * std::max(1e-300, std::abs(next))) return next;
        prev = next;
    }
    return prev;
}

// The CGF integrand is a quadratic form in the power components (f, g)
// weighted by the nu-integrated Heisenberg coefficients.
double quad_form(double f, double g, const AveragedCovariances& cov,
                 const Eigen::Matrix3d& At) {
    const double Axx = At(0, 0), Axz = At(0, 2), Azx = At(2, 0), Azz = At(2, 2);
    return cov.zz * (f * f * Azz + f * g * Axz) + cov.xx * (g * g * Axx + f * g * Azx) +
           cov.xz * (f * f * Azx + g * g * Axz + f * g * (Azz + Axx));
}

void warn_if_fast(const DrivingProtocol& p, const BathModel& bath) {
    static thread_local const void* warned_for = nullptr;
    if (warned_for == &p) return;
    const double ratio = slow_driving_ratio(p, bath);
    if (ratio > 0.2) {
        std::cerr << "warning: slow-driving validity marginal, max v_t/gamma_t = " << ratio
                  << "\n";
        warned_for = &p;
    }
}

}  // namespace

ops::Complex quantum_covariance(const ops::Matrix& A, const ops::Matrix& B,
                                const ops::Matrix& pi, double y) {
    const auto s = ops::eigh(pi);
    if (s.values.minCoeff() <= 1e-14) {
        throw std::invalid_argument("quantum_covariance: pi is rank-deficient");
    }
    Eigen::VectorXd py(s.values.size()), p1y(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        py[i] = std::pow(s.values[i], y);
        p1y[i] = std::pow(s.values[i], 1.0 - y);
    }
    const ops::Matrix pi_y = s.vectors * py.asDiagonal() * s.vectors.adjoint();
    const ops::Matrix pi_1y = s.vectors * p1y.asDiagonal() * s.vectors.adjoint();
    return (A * pi_y * B * pi_1y).trace() - (A * pi).trace() * (B * pi).trace();
}

double double_average(const std::function<double(double)>& f, double u, double temperature) {
    const double a = u * temperature;
    auto outer = [&](double y) {
        return gauss_integrate(f, y, 1.0 - y, 32);
    };
    return gauss_integrate(outer, 0.0, a, 32);
}

AveragedCovariances qubit_covariances_closed_form(double theta, double eps, double beta,
                                                  double u) {
    const double ch_b = std::cosh(beta * eps);
    const double ch_ub = std::cosh(eps * (u - beta));
    const double ch_u = std::cosh(u * eps);
    const double common = -ch_b + ch_ub + ch_u - 1.0;
    const double s2 = std::sin(theta) * std::sin(theta);
    const double c2 = std::cos(theta) * std::cos(theta);
    const double sin2t = std::sin(2.0 * theta);
    const double denom = beta * beta * eps * eps * (ch_b + 1.0);
    const double sech_half = 1.0 / std::cosh(0.5 * beta * eps);
    AveragedCovariances out;
    out.xx = (2.0 * u * eps * eps * s2 * (beta - u) - 2.0 * c2 * common) / denom;
    out.xz = sin2t * sech_half * sech_half *
             (common + u * eps * eps * (beta - u)) / (2.0 * beta * beta * eps * eps);
    out.zz = (2.0 * u * eps * eps * c2 * (beta - u) - 2.0 * s2 * common) / denom;
    return out;
}

AveragedCovariances qubit_covariances_symmetric(double theta, double eps, double beta) {
    const double th2 = std::tanh(0.5 * beta * eps);
    const double e = std::exp(beta * eps);
    const double c2t = std::cos(2.0 * theta);
    AveragedCovariances out;
    out.xx = ((e - 1.0) * (e - 1.0) * c2t + 6.0 * e + e * e + 1.0) /
             (2.0 * (e + 1.0) * (e + 1.0));
    out.xz = -std::sin(theta) * std::cos(theta) * th2 * th2;
    out.zz = 1.0 - std::cos(theta) * std::cos(theta) * th2 * th2;
    return out;
}

Eigen::Matrix3d integrated_heisenberg(const DrivingProtocol& p, const BathModel& bath,
                                      double t) {
    const double eps = p.eps(t);
    const double theta = p.theta(t);
    const double gamma = characteristic_rate(bath, eps);
    const double d = gamma * gamma + eps * eps;
    Eigen::Matrix3d A0;
    A0 << gamma / d, eps / d, 0.0,
        -eps / d, gamma / d, 0.0,
        0.0, 0.0, 0.5 / gamma;
    const double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix3d R;
    R << c, 0, s, 0, 1, 0, -s, 0, c;
    return R * A0 * R.transpose();
}

double slow_driving_ratio(const DrivingProtocol& p, const BathModel& bath) {
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = p.tau() * i / 200.0;
        worst = std::max(worst, driving_speed(p, t) / characteristic_rate(p, bath, t));
    }
    return worst;
}

namespace {

enum class PowerPart { total, diagonal, coherent };

// K(u) = -(1/tau) beta^2 int_0^1 dt [[cov^u]]-quadratic form, with the
// power components expressed in rescaled time (f_resc = tau * f_phys).
double cgf_counting_field(const DrivingProtocol& p, const BathModel& bath, double u,
                          PowerPart part) {
    const double beta = bath.beta;
    auto integrand = [&](double s) {
        const auto ps = sample(p, s * p.tau());
        const double sin_th = std::sin(ps.theta), cos_th = std::cos(ps.theta);
        double f = 0.0, g = 0.0;
        switch (part) {
            case PowerPart::total:
                f = ps.f;
                g = ps.g;
                break;
            case PowerPart::diagonal:
                f = 0.5 * ps.deps_dt * cos_th;
                g = 0.5 * ps.deps_dt * sin_th;
                break;
            case PowerPart::coherent:
                f = -0.5 * ps.eps * ps.dtheta_dt * sin_th;
                g = 0.5 * ps.eps * ps.dtheta_dt * cos_th;
                break;
        }
        f *= p.tau();
        g *= p.tau();
        const auto cov = qubit_covariances_closed_form(ps.theta, ps.eps, beta, u);
        const auto At = integrated_heisenberg(p, bath, s * p.tau());
        return quad_form(f, g, cov, At);
    };
    return -(beta * beta / p.tau()) * time_integral(integrand);
}

}  // namespace

double cgf_slow_driving(const DrivingProtocol& p, const BathModel& bath, double u) {
    warn_if_fast(p, bath);
    return cgf_counting_field(p, bath, u, PowerPart::total);
}

double cgf_coherent(const DrivingProtocol& p, const BathModel& bath, double u) {
    return cgf_counting_field(p, bath, u, PowerPart::coherent);
}

double cgf_classical(const DrivingProtocol& p, const BathModel& bath, double u) {
    // Quadratic in u by construction: K^d = (1/tau)(u^2 - beta u) C with
    // C the nu-integrated symmetric covariance of the diagonal power.
    const double beta = bath.beta;
    auto integrand = [&](double s) {
        const auto ps = sample(p, s * p.tau());
        const double sin_th = std::sin(ps.theta), cos_th = std::cos(ps.theta);
        const double f = 0.5 * ps.deps_dt * cos_th * p.tau();
        const double g = 0.5 * ps.deps_dt * sin_th * p.tau();
        const auto cov = qubit_covariances_symmetric(ps.theta, ps.eps, beta);
        const auto At = integrated_heisenberg(p, bath, s * p.tau());
        return quad_form(f, g, cov, At);
    };
    return (u * u - beta * u) / p.tau() * time_integral(integrand);
}

CgfCurve cgf_curve(const DrivingProtocol& p, const BathModel& bath,
                   const std::vector<double>& u_grid) {
    CgfCurve curve;
    curve.u_grid = u_grid;
    for (double u : u_grid) {
        curve.total.push_back(cgf_slow_driving(p, bath, u));
        curve.classical.push_back(cgf_classical(p, bath, u));
        curve.coherent.push_back(cgf_coherent(p, bath, u));
    }
    return curve;
}

std::array<double, 4> extract_cumulants(const std::function<double(double)>& K, double beta,
                                        double h) {
    if (h <= 0.0) h = 0.02 * beta;
    auto derivatives = [&](double step) {
        const double k1 = K(step), km1 = K(-step), k2 = K(2 * step), km2 = K(-2 * step);
        std::array<double, 4> d;
        d[0] = (k1 - km1) / (2 * step);
        d[1] = (k1 + km1) / (step * step);  // K(0) = 0
        d[2] = (k2 - 2 * k1 + 2 * km1 - km2) / (2 * step * step * step);
        d[3] = (k2 - 4 * k1 - 4 * km1 + km2) / (step * step * step * step);
        return d;
    };
    const auto dh = derivatives(h);
    const auto dh2 = derivatives(0.5 * h);
    std::array<double, 4> out;
    double scale = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double refined = (4.0 * dh2[k] - dh[k]) / 3.0;
        out[k] = (k % 2 == 0) ? -refined : refined;  // kappa_k = (-1)^k K^(k)
        scale = std::max(scale, std::abs(out[k]));
        const double disagreement = std::abs(refined - dh2[k]);
        if (disagreement > 0.01 * std::abs(refined) + 1e-9 * std::max(scale, 1e-300)) {
            throw std::runtime_error(
                "extract_cumulants: finite-difference step too large for curvature");
        }
    }
    return out;
}

}  // namespace erasure
