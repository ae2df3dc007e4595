// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// criterion fails.  Ensembles are generated once and shared between the
// criteria that need them.

#include "erasure/lindblad.hpp"
#include "erasure/operators.hpp"
#include "erasure/protocol.hpp"
#include "erasure/rk45.hpp"
#include "erasure/rng.hpp"
#include "erasure/slowdrive.hpp"
#include "erasure/stats.hpp"
#include "erasure/trajectories.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

using namespace erasure;
using ops::Complex;
using ops::Matrix;

namespace {

int n_failed = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++n_failed;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

// Paper-figure parameters: alpha = 0.191, beta eps_tau = 20, eps_0 = 0.02.
const BathModel kBath{0.191, 20.0};

DrivingProtocol protocol(ThetaMode mode, double gammabar_tau) {
    DrivingProtocol unit(0.02, 1.0, 1.0, mode);
    return DrivingProtocol(0.02, 1.0, gammabar_tau / mean_characteristic_rate(unit, kBath),
                           mode);
}

double trace_distance(const Matrix& a, const Matrix& b) {
    const auto s = ops::eigh(a - b);
    return 0.5 * s.values.cwiseAbs().sum();
}

}  // namespace

int main() {
    const double T = 1.0 / kBath.beta;
    const double landauer = T * std::log(2.0);
    const auto pq = protocol(ThetaMode::quantum, 250.0);
    const auto pc = protocol(ThetaMode::classical, 250.0);

    // ----- criterion 1: fixed point on 200 time points, both modes, < 1 s
    {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (const auto* p : {&pq, &pc}) {
            for (int i = 0; i < 200; ++i) {
                const double t = p->tau() * (i + 0.5) / 200.0;
                const Matrix pi = ops::gibbs_state(hamiltonian_at(*p, t), kBath.beta);
                worst = std::max(worst, (liouvillian(*p, kBath, t) * vectorize(pi)).norm());
            }
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report(1, worst < 1e-12 && secs < 1.0,
               fmt("Gibbs fixed point, 200 points x 2 modes: max |L(pi)| = %.2e (%.2f s)",
                   worst, secs));
    }

    // ----- criterion 2: closed forms vs quadrature oracles at 50 random points
    {
        const auto t0 = std::chrono::steady_clock::now();
        CounterRng rng(20260826, 2);
        double worst_cov = 0.0, worst_at = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double theta = (2.0 * rng.uniform() - 1.0) * M_PI;
            const double eps = 0.2 + 1.3 * rng.uniform();
            const double beta = 0.5 + 10.0 * rng.uniform();
            const double u = beta * rng.uniform();
            const auto cf = qubit_covariances_closed_form(theta, eps, beta, u);
            const Matrix H = 0.5 * eps *
                             (std::cos(theta) * ops::sigma_z() + std::sin(theta) * ops::sigma_x());
            const Matrix pi = ops::gibbs_state(H, beta);
            auto avg = [&](const Matrix& A, const Matrix& B) {
                return double_average(
                    [&](double y) { return quantum_covariance(A, B, pi, y).real(); }, u,
                    1.0 / beta);
            };
            worst_cov = std::max(worst_cov, std::abs(cf.xx - avg(ops::sigma_x(), ops::sigma_x())));
            worst_cov = std::max(worst_cov, std::abs(cf.xz - avg(ops::sigma_x(), ops::sigma_z())));
            worst_cov = std::max(worst_cov, std::abs(cf.zz - avg(ops::sigma_z(), ops::sigma_z())));

            // integrated Heisenberg coefficients vs brute-force ODE quadrature:
            // d/dnu [A | B] = [G A | A],  Atilde = B(infinity)
            const double t = pq.tau() * rng.uniform();
            const auto pr = protocol(ThetaMode::quantum, 100.0 + 400.0 * rng.uniform());
            const auto [G, b] = bloch_affine(pr, kBath, t / pq.tau() * pr.tau());
            using M36 = Eigen::Matrix<Complex, 3, 6>;
            auto rhs = [&](double, const M36& y, M36& out) {
                out.leftCols<3>() = G.cast<Complex>() * y.leftCols<3>();
                out.rightCols<3>() = y.leftCols<3>();
            };
            M36 y0 = M36::Zero();
            y0.leftCols<3>() = Eigen::Matrix3cd::Identity();
            Rk45<M36, decltype(rhs)> solver(rhs, 0.0, y0, {1e-11, 1e-13});
            const double gamma = characteristic_rate(pr, kBath, t / pq.tau() * pr.tau());
            solver.integrate_to(45.0 / gamma);
            const Eigen::Matrix3d At =
                integrated_heisenberg(pr, kBath, t / pq.tau() * pr.tau());
            worst_at = std::max(worst_at, (At - solver.y().rightCols<3>().real()).norm());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report(2, worst_cov < 1e-8 && worst_at < 1e-8 && secs < 10.0,
               fmt("closed forms vs quadrature, 50 points: cov err %.2e, Atilde err %.2e "
                   "(%.2f s)",
                   worst_cov, worst_at, secs));
    }

    // ----- criterion 3: CGF split additivity and classical-mode coherent zero
    {
        double worst = 0.0, worst_cl = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double u = kBath.beta * i / 40.0;
            worst = std::max(worst, std::abs(cgf_slow_driving(pq, kBath, u) -
                                             cgf_classical(pq, kBath, u) -
                                             cgf_coherent(pq, kBath, u)));
            worst_cl = std::max(worst_cl, std::abs(cgf_coherent(pc, kBath, u)));
        }
        report(3, worst < 1e-9 && worst_cl == 0.0,
               fmt("split total = classical + coherent: max err %.2e; classical-mode "
                   "coherent max %.1e",
                   worst, worst_cl));
    }

    // ----- criterion 4: coherent cumulants non-negative, paper + 20 random protocols
    {
        bool ok = true;
        double most_negative = 0.0;
        CounterRng rng(20260826, 4);
        for (int i = 0; i <= 20; ++i) {
            BathModel bath = kBath;
            DrivingProtocol p = pq;
            if (i > 0) {
                bath = BathModel(0.05 + 0.4 * rng.uniform(), 2.0 + 18.0 * rng.uniform());
                const double eps0 = 0.01 + 0.25 * rng.uniform();
                DrivingProtocol unit(eps0, 1.0, 1.0, ThetaMode::quantum);
                const double gt = 100.0 + 900.0 * rng.uniform();
                p = DrivingProtocol(eps0, 1.0, gt / mean_characteristic_rate(unit, bath),
                                    ThetaMode::quantum);
            }
            const auto k = extract_cumulants(
                [&](double u) { return cgf_coherent(p, bath, u); }, bath.beta);
            for (double v : k) {
                most_negative = std::min(most_negative, v);
                ok = ok && (v >= -1e-10);
            }
        }
        report(4, ok, fmt("coherent cumulants >= -1e-10 on 21 protocols: most negative %.2e",
                          most_negative));
    }

    // ----- shared ensembles
    std::vector<double> checkpoints;
    for (int k = 1; k <= 10; ++k) checkpoints.push_back(pq.tau() * k / 10.0);
    TrajectoryOptions opt_q;
    opt_q.checkpoints = checkpoints;
    const int ntraj = 30000;
    const std::uint64_t seed = 20260826;
    const auto ens_q = run_ensemble(pq, kBath, ntraj, seed, opt_q);
    const auto ens_c = run_ensemble(pc, kBath, ntraj, seed);

    std::vector<double> excess_q, excess_c, heat_q;
    for (const auto& r : ens_q.records) {
        excess_q.push_back(r.excess_heat);
        heat_q.push_back(r.heat);
    }
    for (const auto& r : ens_c.records) excess_c.push_back(r.excess_heat);

    // ----- criterion 5: classical Fano factor = 2T from CGF and ensemble
    {
        const auto ka = extract_cumulants(
            [&](double u) { return cgf_slow_driving(pc, kBath, u); }, kBath.beta);
        const double fano_cgf = ka[1] / ka[0];
        // The ensemble measures the full excess-heat distribution, which
        // includes the tau-independent boundary (quasistatic) cumulants on
        // top of the dissipative 1/tau part the Fano relation refers to;
        // subtract them analytically before forming the ratio.
        const auto kqs = extract_cumulants(
            [&](double u) { return cgf_quasistatic(pc, kBath, u); }, kBath.beta);
        const auto ke = stats::empirical_cumulants(excess_c, 1000, seed);
        const double fano_ens = (ke.k2 - kqs[1]) / (ke.k1 - kqs[0]);
        const bool ok = fano_cgf > 1.9 * T && fano_cgf < 2.1 * T && fano_ens > 1.9 * T &&
                        fano_ens < 2.1 * T;
        report(5, ok,
               fmt("classical Fano: CGF %.4f T, ensemble (boundary-subtracted) %.4f T, "
                   "window [1.9, 2.1] T",
                   fano_cgf / T, fano_ens / T));
    }

    // ----- criterion 6: slow-driving residual shrinks by 4.0 +- 0.5 for tau -> 2 tau
    {
        const auto p500 = protocol(ThetaMode::quantum, 500.0);
        const double u = kBath.beta / 2.0;
        // The exact CGF contains a tau-independent boundary part (finite
        // initial and final gaps); the 1/tau slow-driving law holds for the
        // remainder, so the residual is measured against qs + slow-driving.
        const double r250 = std::abs(propagate_fcs(pq, kBath, u) -
                                     cgf_quasistatic(pq, kBath, u) -
                                     cgf_slow_driving(pq, kBath, u));
        const double r500 = std::abs(propagate_fcs(p500, kBath, u) -
                                     cgf_quasistatic(p500, kBath, u) -
                                     cgf_slow_driving(p500, kBath, u));
        const double ratio = r250 / r500;
        report(6, ratio > 3.5 && ratio < 4.5,
               fmt("O(tau^-2) residual at u = beta/2: %.3e -> %.3e, ratio %.2f (want 4.0 "
                   "+- 0.5)",
                   r250, r500, ratio));
    }

    // ----- criterion 7: rare events
    {
        const auto sq = stats::rare_event_scan(ens_q.records);
        const auto sc = stats::rare_event_scan(ens_c.records);
        const double frac_q = double(sq.n_repeated_kind) / ntraj;
        double max_heat_q = 0.0, max_heat_c = 0.0;
        for (const auto& r : ens_q.records) max_heat_q = std::max(max_heat_q, r.heat);
        for (const auto& r : ens_c.records) max_heat_c = std::max(max_heat_c, r.heat);
        const bool ok = frac_q >= 2e-4 && frac_q <= 5e-3 && sc.n_repeated_kind == 0 &&
                        max_heat_c < 6.0 * landauer && max_heat_q > 10.0 * landauer;
        report(7, ok,
               fmt("rare events: quantum fraction %.2e in [2e-4, 5e-3], classical 0 ("
                   "got %d), max heat q %.1f / c %.1f Landauer (want > 10 / < 6)",
                   frac_q, int(sc.n_repeated_kind), max_heat_q / landauer,
                   max_heat_c / landauer));
    }

    // ----- criterion 8: unraveling vs master equation, 10 checkpoints, 1e4 traj.
    {
        const auto sol = propagate_state(pq, kBath, checkpoints);
        double worst = 0.0;
        const int n8 = 10000;
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            Matrix avg = Matrix::Zero(2, 2);
            for (int i = 0; i < n8; ++i) {
                const auto& psi = ens_q.checkpoint_states[i][c];
                avg += psi * psi.adjoint();
            }
            avg /= double(n8);
            worst = std::max(worst, trace_distance(avg, sol.states[c]));
        }
        report(8, worst < 0.02,
               fmt("trajectory average vs master equation: max trace distance %.4f "
                   "(want < 0.02)",
                   worst));
    }

    // ----- criterion 9: mean heat identity and Landauer bound
    {
        const auto sol = propagate_state(pq, kBath, {pq.tau()});
        const auto kq = stats::empirical_cumulants(heat_q, 1000, seed + 9);
        const auto kx = stats::empirical_cumulants(excess_q, 1000, seed + 9);
        const double dev = std::abs(kq.k1 - sol.heat);
        const bool ok = dev <= 3.0 * kq.se1 && kx.k1 >= -3.0 * kx.se1;
        report(9, ok,
               fmt("mean heat: ensemble %.5f vs master %.5f (|diff| %.1e <= 3 se = %.1e); "
                   "mean excess %.4f T >= 0 within error",
                   kq.k1, sol.heat, dev, 3.0 * kq.se1, kx.k1 / T));
    }

    // ----- criterion 10: Gallavotti-Cohen symmetry K(u) = K(beta - u)
    {
        double worst_slow = 0.0;
        for (const auto* p : {&pq, &pc}) {
            for (int i = 0; i <= 40; ++i) {
                const double u = kBath.beta * i / 40.0;
                worst_slow = std::max(worst_slow,
                                      std::abs(cgf_slow_driving(*p, kBath, u) -
                                               cgf_slow_driving(*p, kBath, kBath.beta - u)));
            }
        }
        // Exact curve: the boundary part K_qs is tau-independent and not
        // symmetric for finite gaps, so the O(tau^-2) envelope applies to
        // the boundary-subtracted curve; check the magnitude at gammabar
        // tau = 500 and the tau^-2 shrink from 250 to 500.
        const auto p500 = protocol(ThetaMode::quantum, 500.0);
        double worst_sub = 0.0, worst_ratio_lo = 10.0, worst_ratio_hi = 0.0;
        for (double u : {2.0, 4.0, 6.0}) {
            auto sub_asym = [&](const DrivingProtocol& p) {
                return (propagate_fcs(p, kBath, u) - cgf_quasistatic(p, kBath, u)) -
                       (propagate_fcs(p, kBath, kBath.beta - u) -
                        cgf_quasistatic(p, kBath, kBath.beta - u));
            };
            const double a250 = sub_asym(pq);
            const double a500 = sub_asym(p500);
            worst_sub = std::max(worst_sub, std::abs(a500));
            worst_ratio_lo = std::min(worst_ratio_lo, a250 / a500);
            worst_ratio_hi = std::max(worst_ratio_hi, a250 / a500);
        }
        const bool ok = worst_slow < 1e-9 && worst_sub < 3.5e-4 && worst_ratio_lo > 3.0 &&
                        worst_ratio_hi < 5.0;
        report(10, ok,
               fmt("symmetry: slow-driving max asym %.1e (< 1e-9); exact boundary-"
                   "subtracted asym at 2 tau: %.2e (< 3.5e-4), shrink ratios in [%.2f, "
                   "%.2f] (want within [3, 5])",
                   worst_slow, worst_sub, worst_ratio_lo, worst_ratio_hi));
    }

    // ----- criterion 11: first coherent cumulant via relative entropy of coherence
    {
        // kappa_1^c = T int_0^tau dt d/dt S(rho_t || D_s(rho_t)) |_{s=t}
        // with rho_t = pi_t + delta rho_t to first order in 1/tau.
        auto rho_at = [&](double t) {
            return ops::gibbs_state(hamiltonian_at(pq, t), kBath.beta) +
                   state_correction(pq, kBath, t);
        };
        auto coherence = [&](double t, double s) {
            const Matrix rho = rho_at(t);
            return ops::relative_entropy(rho, ops::dephase(rho, hamiltonian_at(pq, s)));
        };
        // Composite 4-point Gauss-Legendre (16 panels) on [0, tau] of the
        // frozen-basis t-derivative.
        const int n = 64;
        double integral = 0.0;
        for (int i = 0; i < n; ++i) {
            const int panel = i / 4, node = i % 4;
            static const double xg[4] = {-0.861136311594053, -0.339981043584856,
                                         0.339981043584856, 0.861136311594053};
            static const double wg[4] = {0.347854845137454, 0.652145154862546,
                                         0.652145154862546, 0.347854845137454};
            const double a = pq.tau() * panel / 16.0, b = pq.tau() * (panel + 1) / 16.0;
            const double t = 0.5 * (a + b) + 0.5 * (b - a) * xg[node];
            const double h = 1e-5 * pq.tau();
            const double deriv = (coherence(t + h, t) - coherence(t - h, t)) / (2.0 * h);
            integral += 0.5 * (b - a) * wg[node] * deriv;
        }
        const double via_entropy = T * integral;
        const auto kc = extract_cumulants(
            [&](double u) { return cgf_coherent(pq, kBath, u); }, kBath.beta);
        const double rel = std::abs(via_entropy - kc[0]) / std::abs(kc[0]);
        report(11, rel < 0.01,
               fmt("first coherent cumulant: entropy route %.6e vs CGF %.6e, rel. diff "
                   "%.2e (< 1e-2)",
                   via_entropy, kc[0], rel));
    }

    std::printf("%s: %d criterion(s) failed\n", n_failed == 0 ? "ALL PASS" : "FAILURES",
                n_failed);
    return n_failed == 0 ? 0 : 1;
}
