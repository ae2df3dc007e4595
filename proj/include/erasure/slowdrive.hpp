// slowdrive.hpp — Analytic slow-driving heat statistics: quantum
// covariances, the nested counting-field average, the classical/coherent
// CGF split, closed-form qubit covariances, integrated Heisenberg
// coefficients and finite-difference cumulant extraction.

#pragma once

#include "erasure/lindblad.hpp"
#include "erasure/operators.hpp"
#include "erasure/protocol.hpp"

#include <array>
#include <functional>
#include <vector>

namespace erasure {

// cov^y(A, B) = tr{A pi^y B pi^(1-y)} - tr{A pi} tr{B pi}
ops::Complex quantum_covariance(const ops::Matrix& A, const ops::Matrix& B,
                                const ops::Matrix& pi, double y);

// [[f]](u) = int_0^{u k_B T} dy int_y^{1-y} dy' f(y')
double double_average(const std::function<double(double)>& f, double u, double temperature);

// Closed-form counting-field-averaged qubit covariances
// [[cov^u(sx,sx)]], [[cov^u(sx,sz)]], [[cov^u(sz,sz)]] for pi the Gibbs
// state of H = eps/2 (cos theta sz + sin theta sx).
struct AveragedCovariances {
    double xx;
    double xz;
    double zz;
};

AveragedCovariances qubit_covariances_closed_form(double theta, double eps, double beta,
                                                  double u);

// Symmetrised (u-independent) covariances cov_t(si, sj), the classical
// counterparts.
AveragedCovariances qubit_covariances_symmetric(double theta, double eps, double beta);

// Atilde_jk = int_0^inf A_jk(nu) dnu, closed form (equals -G^{-1}).
Eigen::Matrix3d integrated_heisenberg(const DrivingProtocol& p, const BathModel& bath,
                                      double t);

// Largest v_t / gamma_t over the protocol; slow driving needs << 1.
double slow_driving_ratio(const DrivingProtocol& p, const BathModel& bath);

// Slow-driving CGF values at a single u.  All three carry the 1/tau
// prefactor explicitly: doubling tau halves every value.
double cgf_slow_driving(const DrivingProtocol& p, const BathModel& bath, double u);
double cgf_classical(const DrivingProtocol& p, const BathModel& bath, double u);
double cgf_coherent(const DrivingProtocol& p, const BathModel& bath, double u);

struct CgfCurve {
    std::vector<double> u_grid;
    std::vector<double> total;
    std::vector<double> classical;
    std::vector<double> coherent;
};

CgfCurve cgf_curve(const DrivingProtocol& p, const BathModel& bath,
                   const std::vector<double>& u_grid);

// kappa_k = (-1)^k d^k K / du^k at u = 0, central differences with
// Richardson refinement at steps h and h/2; default h = 0.02 beta.
std::array<double, 4> extract_cumulants(const std::function<double(double)>& K, double beta,
                                        double h = -1.0);

}  // namespace erasure
