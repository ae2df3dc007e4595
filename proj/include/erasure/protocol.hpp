// protocol.hpp — Driving schedules for the two-level erasure protocol: the
// gap ramp eps_t, the mixing angle theta_t, their derivatives, the control
// Hamiltonian and its diagonal/coherent power split.

#pragma once

#include "erasure/operators.hpp"

#include <functional>

namespace erasure {

enum class ThetaMode { quantum, classical, custom };

// Value/derivative pair for a user-supplied schedule.
struct Schedule {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

// Default gap ramp: eps_t = eps0 + (epsT - eps0) sin^2(pi t / 2 tau).
// Quantum mixing angle: theta_t = pi (t/tau - 1); classical: theta == 0.
class DrivingProtocol {
public:
    DrivingProtocol(double eps0, double epsT, double tau, ThetaMode mode);

    // Custom schedules; callers supply exact derivatives, nothing is
    // differentiated numerically outside of tests.
    DrivingProtocol(double eps0, double epsT, double tau, Schedule eps, Schedule theta);

    double eps0() const { return eps0_; }
    double epsT() const { return epsT_; }
    double tau() const { return tau_; }
    ThetaMode mode() const { return mode_; }

    double eps(double t) const;
    double deps_dt(double t) const;
    double theta(double t) const;
    double dtheta_dt(double t) const;

private:
    double eps0_, epsT_, tau_;
    ThetaMode mode_;
    Schedule eps_schedule_;
    Schedule theta_schedule_;
};

// One protocol time slice with the power-operator components
// dH/dt = f_t sigma_z + g_t sigma_x.
struct ProtocolSample {
    double t;
    double eps;
    double deps_dt;
    double theta;
    double dtheta_dt;
    double f;
    double g;
};

ProtocolSample sample(const DrivingProtocol& p, double t);

// H_t = eps_t/2 (cos theta sigma_z + sin theta sigma_x).
ops::Matrix hamiltonian_at(const DrivingProtocol& p, double t);

// dH/dt = f_t sigma_z + g_t sigma_x.
ops::Matrix power_operator(const DrivingProtocol& p, double t);

struct PowerSplit {
    ops::Matrix diagonal;  // dephase(dH/dt, H_t) = eps_dot/2 (cos sz + sin sx)
    ops::Matrix coherent;  // eps theta_dot / 2 (-sin sz + cos sx)
};

PowerSplit power_split(const DrivingProtocol& p, double t);

// Instantaneous lowering operator, [H_t, L_t] = -eps_t L_t.
ops::Matrix lowering_operator(const DrivingProtocol& p, double t);
ops::Matrix lowering_operator(double theta);

// v_t = sqrt((eps_dot/eps)^2 + theta_dot^2).
double driving_speed(const DrivingProtocol& p, double t);

}  // namespace erasure
