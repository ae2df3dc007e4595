// trajectories.hpp — Quantum-jump Monte Carlo unraveling of the adiabatic
// master equation: non-Hermitian evolution between detector clicks, jump
// sampling from the waiting-time distribution, per-run heat records.

#pragma once

#include "erasure/lindblad.hpp"
#include "erasure/protocol.hpp"
#include "erasure/rk45.hpp"
#include "erasure/rng.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace erasure {

enum class JumpKind { emission, absorption };

struct JumpEvent {
    double time;
    JumpKind kind;
    double quantum;  // eps_t at the jump time, always > 0
};

struct TrajectoryRecord {
    std::uint64_t seed;
    std::vector<JumpEvent> events;
    double heat = 0.0;         // +quantum per emission, -quantum per absorption
    double excess_heat = 0.0;  // heat - k_B T ln 2
};

using PureState = Eigen::Vector2cd;

struct TrajectoryOptions {
    RkTolerances tol{1e-8, 1e-12};
    // Normalised states recorded at these times (projector average over the
    // ensemble reproduces the master-equation state).
    std::vector<double> checkpoints;
};

// H_eff = H_t - (i alpha eps / 2) [(N+1) L^dag L + N L L^dag]
ops::Matrix effective_hamiltonian(const DrivingProtocol& p, const BathModel& bath, double t);

// Integrates d|psi>/dt = -i H_eff |psi> from t0 to t1; the returned state
// is unnormalised, its squared norm is the no-jump survival probability.
PureState evolve_nonhermitian(const PureState& psi, double t0, double t1,
                              const DrivingProtocol& p, const BathModel& bath,
                              RkTolerances tol = {1e-8, 1e-12});

struct WaitingTimeResult {
    std::optional<double> jump_time;  // empty: survived to tau
    PureState state;                  // normalised at jump, unnormalised at tau
};

// Draws r ~ U(0,1) and locates norm^2(t) = r by bisection on the dense
// integrator output (time tolerance 1e-10 tau).
WaitingTimeResult sample_waiting_time(const PureState& psi, double t0,
                                      const DrivingProtocol& p, const BathModel& bath,
                                      CounterRng& rng, const TrajectoryOptions& opt = {});

// Channel selection is rate-weighted: emission with probability
// proportional to (N+1) <L^dag L>, absorption to N <L L^dag>.  For the
// qubit these weights reduce to the excited/ground populations times the
// rates, because L^dag L and L L^dag are the instantaneous excited and
// ground projectors.
std::pair<PureState, JumpEvent> apply_jump(const PureState& psi, double t,
                                           const DrivingProtocol& p, const BathModel& bath,
                                           CounterRng& rng);

struct TrajectoryResult {
    TrajectoryRecord record;
    // One normalised state per requested checkpoint time.
    std::vector<PureState> checkpoint_states;
};

TrajectoryResult run_trajectory(const DrivingProtocol& p, const BathModel& bath,
                                std::uint64_t master_seed, std::uint64_t index,
                                const TrajectoryOptions& opt = {});

struct EnsembleResult {
    std::vector<TrajectoryRecord> records;               // ordered by index
    std::vector<std::vector<PureState>> checkpoint_states;  // per trajectory
};

// Per-trajectory streams are derived from (master_seed, index); results are
// independent of thread count and execution order.
EnsembleResult run_ensemble(const DrivingProtocol& p, const BathModel& bath, int n,
                            std::uint64_t master_seed, const TrajectoryOptions& opt = {},
                            int n_threads = 0);

}  // namespace erasure
