// lindblad.hpp — The adiabatic Lindblad generator for the driven qubit, its
// Bloch-space representation, Drazin inverse, slow-driving state correction
// and the exact counting-field (tilted) propagation.

#pragma once

#include "erasure/operators.hpp"
#include "erasure/protocol.hpp"
#include "erasure/rk45.hpp"

#include <Eigen/Dense>
#include <vector>

namespace erasure {

// Ohmic bath, J(w) = alpha * w, at inverse temperature beta.
struct BathModel {
    double alpha;
    double beta;

    BathModel(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
        if (!(alpha > 0.0) || !(beta > 0.0)) {
            throw std::invalid_argument("BathModel: alpha and beta must be positive");
        }
    }

    // Bose occupation at splitting eps; the product alpha*eps*N is what
    // enters the rates, so bose_times_eps avoids the 0*inf corner via a
    // series for beta*eps < 1e-6.
    double occupation(double eps) const { return 1.0 / std::expm1(beta * eps); }
    double bose_times_eps(double eps) const;
};

// gamma_t = (alpha eps / 2) coth(beta eps / 2), average of gain and loss.
double characteristic_rate(const BathModel& bath, double eps);
double characteristic_rate(const DrivingProtocol& p, const BathModel& bath, double t);

// Time average of gamma_t over the protocol (201-point uniform grid); the
// paper's tau scale is gammabar * tau.
double mean_characteristic_rate(const DrivingProtocol& p, const BathModel& bath);

// ----------------------------------------------------------------------------
// Superoperators act on column-stacked 2x2 operators (vec convention fixed
// project-wide: vec(A B C) = (C^T kron A) vec(B)).

using Superoperator = Eigen::Matrix4cd;

Eigen::Vector4cd vectorize(const ops::Matrix& m);
ops::Matrix unvectorize(const Eigen::Vector4cd& v);

// L_t(.) = -i[H_t, .] + alpha eps (N+1) D[L](.) + alpha eps N D[L^dag](.)
Superoperator liouvillian(const DrivingProtocol& p, const BathModel& bath, double t);

// Emission sandwich dressed by e^{-u eps}, absorption by e^{+u eps}:
// emission deposits +eps_t of heat in the bath.
Superoperator tilted_liouvillian(const DrivingProtocol& p, const BathModel& bath, double t,
                                 double u);

// Action of the (tilted) generator on a 2x2 density operator without
// forming the 4x4 matrix; this is the hot path of propagate_fcs.
ops::Matrix apply_tilted(const DrivingProtocol& p, const BathModel& bath, double t, double u,
                         const ops::Matrix& rho);

// Bloch-space form of the adjoint generator: d<O>/dnu = G <O> + b for
// O = (sigma_x, sigma_y, sigma_z).
struct BlochAffine {
    Eigen::Matrix3d G;
    Eigen::Vector3d b;
};

BlochAffine bloch_affine(const DrivingProtocol& p, const BathModel& bath, double t);

// Homogeneous part of the Heisenberg Bloch solution, A(nu) = exp(nu G);
// closed form via rotation to the theta = 0 frame.
Eigen::Matrix3d heisenberg_coefficients(const DrivingProtocol& p, const BathModel& bath,
                                        double t, double nu);

// Drazin inverse of a Liouvillian with unique stationary state pi:
// Lp L(A) = L Lp(A) = A - tr{A} pi.
Superoperator drazin_inverse(const Superoperator& L, const ops::Matrix& pi);

// First-order slow-driving correction, rho_t ~ pi_t + delta_rho_t with the
// 1/tau factor absorbed through the physical-time derivative:
// delta_rho = -beta Lp J_pi(dH/dt - <dH/dt>).
ops::Matrix state_correction(const DrivingProtocol& p, const BathModel& bath, double t);

// ----------------------------------------------------------------------------
// Exact propagation.

struct FcsOptions {
    RkTolerances tol{1e-9, 1e-12};
};

// Exact excess-heat CGF K(u) = ln tr rho_u(tau) + u k_B T ln 2, propagating
// d(rho_u)/dt = L_t(u) rho_u from rho_u(0) = pi_0.
double propagate_fcs(const DrivingProtocol& p, const BathModel& bath, double u,
                     FcsOptions opt = {});

// The tau-independent boundary part of the exact CGF.  With a finite
// initial gap and a finite final gap the quasistatic limit of
// ln tr rho_u(tau) + u k_B T ln 2 is nonzero: the dominant eigenvector of
// the tilted generator (a Gibbs state at inverse temperature beta - u)
// mismatches pi at both ends, and its adiabatic transport contributes a
// geometric term.  Closed form: with x0 = beta eps(0), x1 = beta eps(tau),
// r = u/beta,
//   K_qs(u) = ln[(1+e^{-(1+r)x0})/(1+e^{-x0})]
//           - r ln[(1+e^{-x0})/(1+e^{-x1})]
//           + ln[(1+e^{-(1-r)x1})/(1+e^{-x1})] + r ln 2.
// It vanishes in the ideal-boundary limit eps(0) -> 0, beta eps(tau) -> inf
// for 0 <= u < beta, and is independent of alpha and of the theta schedule.
// K_exact - K_qs - K_slow_driving is O(tau^{-2}).
double cgf_quasistatic(const DrivingProtocol& p, const BathModel& bath, double u);

struct MasterSolution {
    std::vector<double> times;
    std::vector<ops::Matrix> states;
    double heat = 0.0;  // heat into the bath, -integral of tr{H_t d(rho)/dt} dt
};

// Master-equation propagation from pi_0, recording rho at the requested
// checkpoints and accumulating the mean-heat integral.
MasterSolution propagate_state(const DrivingProtocol& p, const BathModel& bath,
                               const std::vector<double>& checkpoints, FcsOptions opt = {});

}  // namespace erasure
