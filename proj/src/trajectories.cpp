#include "erasure/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace erasure {

namespace {

using Eigen::Matrix2cd;
using Eigen::Vector2cd;
using ops::Complex;

constexpr Complex kI{0.0, 1.0};

// d|psi>/dt = -i H_eff |psi| expanded in the Hamiltonian axis
// (sin th, 0, cos th):  -i H_eff = -(i eps/2) n.sigma
//                                  - ((rd + ru) I + (rd - ru) n.sigma) / 4.
struct NonHermitianRhs {
    const DrivingProtocol& p;
    const BathModel& bath;

    void operator()(double t, const Vector2cd& psi, Vector2cd& out) const {
        const double eps = p.eps(t);
        const double theta = p.theta(t);
        const double c = std::cos(theta), s = std::sin(theta);
        const double ne = bath.bose_times_eps(eps);
        const double rd = bath.alpha * (eps + ne);
        const double ru = bath.alpha * ne;
        const Complex axis = -kI * (0.5 * eps) - 0.25 * (rd - ru);
        const Complex iso = -0.25 * (rd + ru);
        // (axis * n.sigma + iso * I) psi
        out[0] = axis * (c * psi[0] + s * psi[1]) + iso * psi[0];
        out[1] = axis * (s * psi[0] - c * psi[1]) + iso * psi[1];
    }
};

using Solver = Rk45<Vector2cd, NonHermitianRhs>;

// Bisects norm^2(t) = target on the Hermite interpolant of the last step.
double locate_jump(const Solver& solver, double target, double time_tol) {
    double lo = solver.t_prev(), hi = solver.t();
    while (hi - lo > time_tol) {
        const double mid = 0.5 * (lo + hi);
        if (solver.interpolate(mid).squaredNorm() > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct SegmentOutcome {
    std::optional<double> jump_time;
    PureState state;  // normalised at a jump, raw at tau
};

// Evolves from (t0, psi) until either the survival probability crosses the
// drawn threshold or the protocol ends.  Checkpoint recorder is optional.
template <typename Recorder>
SegmentOutcome evolve_until_jump(const PureState& psi, double t0, double target,
                                 const DrivingProtocol& p, const BathModel& bath,
                                 const TrajectoryOptions& opt, Recorder&& record) {
    Solver solver(NonHermitianRhs{p, bath}, t0, psi, opt.tol);
    const double tau = p.tau();
    const double time_tol = 1e-10 * tau;
    while (solver.t() < tau) {
        solver.step(tau);
        if (solver.y().squaredNorm() < target) {
            const double tj = locate_jump(solver, target, time_tol);
            record(solver, solver.t_prev(), tj);
            PureState at_jump = solver.interpolate(tj);
            at_jump.normalize();
            return {tj, at_jump};
        }
        record(solver, solver.t_prev(), solver.t());
    }
    return {std::nullopt, solver.y()};
}

PureState draw_initial_state(const DrivingProtocol& p, const BathModel& bath,
                             CounterRng& rng) {
    const auto s = ops::eigh(hamiltonian_at(p, 0.0));
    const double eps0 = s.values[1] - s.values[0];
    const double p_excited = 1.0 / (1.0 + std::exp(bath.beta * eps0));
    const int pick = (rng.uniform() < p_excited) ? 1 : 0;
    return s.vectors.col(pick);
}

}  // namespace

ops::Matrix effective_hamiltonian(const DrivingProtocol& p, const BathModel& bath, double t) {
    const double eps = p.eps(t);
    const ops::Matrix H = hamiltonian_at(p, t);
    const ops::Matrix L = lowering_operator(p, t);
    const double ne = bath.bose_times_eps(eps);
    const double rd = bath.alpha * (eps + ne);
    const double ru = bath.alpha * ne;
    return H - 0.5 * kI * (rd * (L.adjoint() * L) + ru * (L * L.adjoint()));
}

PureState evolve_nonhermitian(const PureState& psi, double t0, double t1,
                              const DrivingProtocol& p, const BathModel& bath,
                              RkTolerances tol) {
    if (!(t0 < t1)) throw std::invalid_argument("evolve_nonhermitian: need t0 < t1");
    Solver solver(NonHermitianRhs{p, bath}, t0, psi, tol);
    solver.integrate_to(t1);
    return solver.y();
}

WaitingTimeResult sample_waiting_time(const PureState& psi, double t0,
                                      const DrivingProtocol& p, const BathModel& bath,
                                      CounterRng& rng, const TrajectoryOptions& opt) {
    const double target = rng.uniform() * psi.squaredNorm();
    auto outcome = evolve_until_jump(psi, t0, target, p, bath, opt,
                                     [](const Solver&, double, double) {});
    return {outcome.jump_time, outcome.state};
}

std::pair<PureState, JumpEvent> apply_jump(const PureState& psi, double t,
                                           const DrivingProtocol& p, const BathModel& bath,
                                           CounterRng& rng) {
    const double eps = p.eps(t);
    const Matrix2cd L = Matrix2cd(lowering_operator(p, t));
    const double ne = bath.bose_times_eps(eps);
    const Vector2cd down = L * psi;
    const Vector2cd up = L.adjoint() * psi;
    const double w_down = bath.alpha * (eps + ne) * down.squaredNorm();
    const double w_up = bath.alpha * ne * up.squaredNorm();
    const double total = w_down + w_up;
    if (!(total > 0.0)) {
        throw std::runtime_error("apply_jump: both jump channels have zero weight");
    }
    if (rng.uniform() * total < w_down) {
        return {down.normalized(), JumpEvent{t, JumpKind::emission, eps}};
    }
    return {up.normalized(), JumpEvent{t, JumpKind::absorption, eps}};
}

TrajectoryResult run_trajectory(const DrivingProtocol& p, const BathModel& bath,
                                std::uint64_t master_seed, std::uint64_t index,
                                const TrajectoryOptions& opt) {
    CounterRng rng(master_seed, index);
    TrajectoryResult result;
    result.record.seed = rng.stream_key();
    result.checkpoint_states.reserve(opt.checkpoints.size());
    std::size_t next_cp = 0;

    PureState psi = draw_initial_state(p, bath, rng);
    double t = 0.0;
    auto recorder = [&](const Solver& solver, double t_from, double t_to) {
        while (next_cp < opt.checkpoints.size() && opt.checkpoints[next_cp] <= t_to) {
            const double tc = opt.checkpoints[next_cp];
            PureState at_cp = (tc <= t_from) ? solver.y_prev() : solver.interpolate(tc);
            at_cp.normalize();
            result.checkpoint_states.push_back(at_cp);
            ++next_cp;
        }
    };

    while (t < p.tau()) {
        const double target = rng.uniform();  // psi is normalised here
        auto outcome = evolve_until_jump(psi, t, target, p, bath, opt, recorder);
        if (!outcome.jump_time) break;
        t = *outcome.jump_time;
        auto [post, event] = apply_jump(outcome.state, t, p, bath, rng);
        psi = post;
        result.record.events.push_back(event);
        result.record.heat += (event.kind == JumpKind::emission) ? event.quantum
                                                                 : -event.quantum;
    }
    result.record.excess_heat = result.record.heat - std::log(2.0) / bath.beta;
    return result;
}

EnsembleResult run_ensemble(const DrivingProtocol& p, const BathModel& bath, int n,
                            std::uint64_t master_seed, const TrajectoryOptions& opt,
                            int n_threads) {
    if (n < 1) throw std::invalid_argument("run_ensemble: n must be >= 1");
    if (n_threads <= 0) {
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    }
    n_threads = std::min<int>(n_threads, n);

    EnsembleResult out;
    out.records.resize(n);
    out.checkpoint_states.resize(n);
    std::atomic<int> cursor{0};
    auto worker = [&]() {
        for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) {
            auto res = run_trajectory(p, bath, master_seed, static_cast<std::uint64_t>(i), opt);
            out.records[i] = std::move(res.record);
            out.checkpoint_states[i] = std::move(res.checkpoint_states);
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace erasure
