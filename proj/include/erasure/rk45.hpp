// rk45.hpp — Adaptive Dormand–Prince 5(4) integrator, templated on an
// Eigen vector state.  Keeps the FSAL derivative so callers can build
// cubic Hermite interpolants across the last accepted step.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace erasure {

struct RkTolerances {
    double rel = 1e-8;
    double abs = 1e-12;
};

struct StiffnessError : std::runtime_error {
    explicit StiffnessError(const std::string& msg) : std::runtime_error(msg) {}
};

// One integrator instance per ODE solve; State is an Eigen fixed or dynamic
// vector, Rhs is callable as rhs(t, y, dydt).
template <typename State, typename Rhs>
class Rk45 {
public:
    Rk45(Rhs rhs, double t0, State y0, RkTolerances tol = {})
        : rhs_(std::move(rhs)), t_(t0), y_(std::move(y0)), tol_(tol) {
        k1_ = y_;
        rhs_(t_, y_, k1_);
    }

    double t() const { return t_; }
    const State& y() const { return y_; }
    const State& dydt() const { return k1_; }

    // State at the start of the last accepted step, for interpolation.
    double t_prev() const { return t_prev_; }
    const State& y_prev() const { return y_prev_; }
    const State& dydt_prev() const { return k1_prev_; }

    // Advance by one accepted step, not beyond t_end.  Returns the new t.
    double step(double t_end) {
        if (h_ == 0.0) h_ = initial_step(t_end);
        for (int attempt = 0; attempt < 64; ++attempt) {
            double h = std::min(h_, t_end - t_);
            if (h <= std::abs(t_) * 1e-15) {
                // already at t_end up to roundoff
                t_ = t_end;
                return t_;
            }
            const double err = try_step(h);
            if (err <= 1.0) {
                t_prev_ = t_;
                y_prev_ = y_;
                k1_prev_ = k1_;
                t_ += h;
                y_ = y_new_;
                k1_ = k7_;  // FSAL
                h_ = h * std::clamp(0.9 * std::pow(err + 1e-300, -0.2), 0.2, 5.0);
                return t_;
            }
            h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
            if (h_ < 1e-14 * std::max(1.0, std::abs(t_))) {
                throw StiffnessError("rk45: step size underflow at t=" + std::to_string(t_));
            }
        }
        throw StiffnessError("rk45: repeated step rejection at t=" + std::to_string(t_));
    }

    // Cubic Hermite interpolation on the last accepted step.
    State interpolate(double t) const {
        const double h = t_ - t_prev_;
        const double x = (t - t_prev_) / h;
        const double x2 = x * x, x3 = x2 * x;
        const double h00 = 2 * x3 - 3 * x2 + 1;
        const double h10 = x3 - 2 * x2 + x;
        const double h01 = -2 * x3 + 3 * x2;
        const double h11 = x3 - x2;
        return h00 * y_prev_ + (h10 * h) * k1_prev_ + h01 * y_ + (h11 * h) * k1_;
    }

    void integrate_to(double t_end) {
        while (t_ < t_end) step(t_end);
    }

private:
    double initial_step(double t_end) const {
        const double scale = tol_.abs + tol_.rel * y_.norm();
        const double d1 = k1_.norm();
        double h = (d1 > 1e-12) ? 0.01 * scale / d1 : 1e-6 * (t_end - t_);
        return std::min(h, t_end - t_);
    }

    // Returns the scaled error estimate; fills y_new_ and k7_.
    double try_step(double h) {
        const double t = t_;
        const State& y = y_;
        State k2 = y, k3 = y, k4 = y, k5 = y, k6 = y;
        State tmp = y + h * (1.0 / 5.0) * k1_;
        rhs_(t + h / 5.0, tmp, k2);
        tmp = y + h * (3.0 / 40.0 * k1_ + 9.0 / 40.0 * k2);
        rhs_(t + 3.0 * h / 10.0, tmp, k3);
        tmp = y + h * (44.0 / 45.0 * k1_ - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3);
        rhs_(t + 4.0 * h / 5.0, tmp, k4);
        tmp = y + h * (19372.0 / 6561.0 * k1_ - 25360.0 / 2187.0 * k2 +
                       64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4);
        rhs_(t + 8.0 * h / 9.0, tmp, k5);
        tmp = y + h * (9017.0 / 3168.0 * k1_ - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 +
                       49.0 / 176.0 * k4 - 5103.0 / 18656.0 * k5);
        rhs_(t + h, tmp, k6);
        y_new_ = y + h * (35.0 / 384.0 * k1_ + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                          2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
        k7_ = y;
        rhs_(t + h, y_new_, k7_);
        const State err_vec =
            h * (71.0 / 57600.0 * k1_ - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4 -
                 17253.0 / 339200.0 * k5 + 22.0 / 525.0 * k6 - 1.0 / 40.0 * k7_);
        const double scale =
            tol_.abs + tol_.rel * std::max(y.template lpNorm<Eigen::Infinity>(),
                                           y_new_.template lpNorm<Eigen::Infinity>());
        return err_vec.template lpNorm<Eigen::Infinity>() / scale;
    }

    Rhs rhs_;
    double t_;
    State y_;
    State k1_;
    double t_prev_ = 0.0;
    State y_prev_;
    State k1_prev_;
    State y_new_;
    State k7_;
    RkTolerances tol_;
    double h_ = 0.0;
};

}  // namespace erasure
