#include "erasure/protocol.hpp"

#include <cmath>

namespace erasure {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_range(double t, double tau) {
    if (t < -1e-12 * tau || t > tau * (1.0 + 1e-12)) {
        throw std::out_of_range("protocol: time outside [0, tau]");
    }
}

}  // namespace

DrivingProtocol::DrivingProtocol(double eps0, double epsT, double tau, ThetaMode mode)
    : eps0_(eps0), epsT_(epsT), tau_(tau), mode_(mode) {
    if (!(0.0 < eps0 && eps0 < epsT) || !(tau > 0.0)) {
        throw std::invalid_argument("DrivingProtocol: need 0 < eps0 < epsT and tau > 0");
    }
    if (mode == ThetaMode::custom) {
        throw std::invalid_argument("DrivingProtocol: custom mode needs explicit schedules");
    }
}

DrivingProtocol::DrivingProtocol(double eps0, double epsT, double tau, Schedule eps, Schedule theta)
    : eps0_(eps0), epsT_(epsT), tau_(tau), mode_(ThetaMode::custom),
      eps_schedule_(std::move(eps)), theta_schedule_(std::move(theta)) {
    if (!(tau > 0.0)) throw std::invalid_argument("DrivingProtocol: tau > 0 required");
}

double DrivingProtocol::eps(double t) const {
    check_range(t, tau_);
    if (mode_ == ThetaMode::custom) return eps_schedule_.value(t);
    const double s = std::sin(kPi * t / (2.0 * tau_));
    return eps0_ + (epsT_ - eps0_) * s * s;
}

double DrivingProtocol::deps_dt(double t) const {
    check_range(t, tau_);
    if (mode_ == ThetaMode::custom) return eps_schedule_.derivative(t);
    return (epsT_ - eps0_) * (kPi / (2.0 * tau_)) * std::sin(kPi * t / tau_);
}

double DrivingProtocol::theta(double t) const {
    check_range(t, tau_);
    switch (mode_) {
        case ThetaMode::quantum: return kPi * (t / tau_ - 1.0);
        case ThetaMode::classical: return 0.0;
        case ThetaMode::custom: return theta_schedule_.value(t);
    }
    return 0.0;
}

double DrivingProtocol::dtheta_dt(double t) const {
    check_range(t, tau_);
    switch (mode_) {
        case ThetaMode::quantum: return kPi / tau_;
        case ThetaMode::classical: return 0.0;
        case ThetaMode::custom: return theta_schedule_.derivative(t);
    }
    return 0.0;
}

ProtocolSample sample(const DrivingProtocol& p, double t) {
    ProtocolSample s;
    s.t = t;
    s.eps = p.eps(t);
    s.deps_dt = p.deps_dt(t);
    s.theta = p.theta(t);
    s.dtheta_dt = p.dtheta_dt(t);
    const double sin_th = std::sin(s.theta);
    const double cos_th = std::cos(s.theta);
    s.f = 0.5 * (s.deps_dt * cos_th - s.eps * s.dtheta_dt * sin_th);
    s.g = 0.5 * (s.deps_dt * sin_th + s.eps * s.dtheta_dt * cos_th);
    return s;
}

ops::Matrix hamiltonian_at(const DrivingProtocol& p, double t) {
    const auto s = sample(p, t);
    return 0.5 * s.eps *
           (std::cos(s.theta) * ops::sigma_z() + std::sin(s.theta) * ops::sigma_x());
}

ops::Matrix power_operator(const DrivingProtocol& p, double t) {
    const auto s = sample(p, t);
    return s.f * ops::sigma_z() + s.g * ops::sigma_x();
}

PowerSplit power_split(const DrivingProtocol& p, double t) {
    const auto s = sample(p, t);
    const double sin_th = std::sin(s.theta);
    const double cos_th = std::cos(s.theta);
    PowerSplit out;
    out.diagonal = 0.5 * s.deps_dt * (cos_th * ops::sigma_z() + sin_th * ops::sigma_x());
    out.coherent =
        0.5 * s.eps * s.dtheta_dt * (-sin_th * ops::sigma_z() + cos_th * ops::sigma_x());
    return out;
}

ops::Matrix lowering_operator(double theta) {
    ops::Matrix L(2, 2);
    L << -std::sin(theta), std::cos(theta) - 1.0,
          std::cos(theta) + 1.0, std::sin(theta);
    return 0.5 * L;
}

ops::Matrix lowering_operator(const DrivingProtocol& p, double t) {
    return lowering_operator(p.theta(t));
}

double driving_speed(const DrivingProtocol& p, double t) {
    const auto s = sample(p, t);
    const double rel = s.deps_dt / s.eps;
    return std::sqrt(rel * rel + s.dtheta_dt * s.dtheta_dt);
}

}  // namespace erasure
