#include "erasure/lindblad.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace erasure {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix3d;
using Eigen::Vector3d;
using Eigen::Vector4cd;
using ops::Complex;

constexpr Complex kI{0.0, 1.0};

Matrix2cd hamiltonian2(double eps, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix2cd H;
    H << 0.5 * eps * c, 0.5 * eps * s, 0.5 * eps * s, -0.5 * eps * c;
    return H;
}

Matrix2cd lowering2(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix2cd L;
    L << -0.5 * s, 0.5 * (c - 1.0), 0.5 * (c + 1.0), 0.5 * s;
    return L;
}

// Rotation about the y axis carrying the z axis onto the Hamiltonian axis
// (sin theta, 0, cos theta).
Matrix3d axis_rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix3d R;
    R << c, 0, s, 0, 1, 0, -s, 0, c;
    return R;
}

}  // namespace

double BathModel::bose_times_eps(double eps) const {
    const double x = beta * eps;
    if (x < 1e-6) {
        // eps * N -> 1/beta (1 - x/2 + x^2/12)
        return (1.0 - 0.5 * x + x * x / 12.0) / beta;
    }
    return eps / std::expm1(x);
}

double characteristic_rate(const BathModel& bath, double eps) {
    return bath.alpha * (bath.bose_times_eps(eps) + 0.5 * eps);
}

double characteristic_rate(const DrivingProtocol& p, const BathModel& bath, double t) {
    return characteristic_rate(bath, p.eps(t));
}

double mean_characteristic_rate(const DrivingProtocol& p, const BathModel& bath) {
    const int n = 200;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;  // trapezoid
        sum += w * characteristic_rate(p, bath, p.tau() * i / n);
    }
    return sum / n;
}

Vector4cd vectorize(const ops::Matrix& m) {
    Vector4cd v;
    v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);  // column stacking
    return v;
}

ops::Matrix unvectorize(const Vector4cd& v) {
    ops::Matrix m(2, 2);
    m << v[0], v[2], v[1], v[3];
    return m;
}

namespace {

// vec(A X B) = (B^T kron A) vec(X)
Superoperator left_right(const Matrix2cd& A, const Matrix2cd& B) {
    return Eigen::kroneckerProduct(B.transpose(), A);
}

Superoperator dissipator(const Matrix2cd& J, double sandwich_weight) {
    const Matrix2cd JdJ = J.adjoint() * J;
    const Matrix2cd id = Matrix2cd::Identity();
    return sandwich_weight * left_right(J, J.adjoint()) -
           0.5 * (left_right(JdJ, id) + left_right(id, JdJ));
}

Superoperator build_tilted(const DrivingProtocol& p, const BathModel& bath, double t,
                           double u) {
    const double eps = p.eps(t);
    const double theta = p.theta(t);
    const Matrix2cd H = hamiltonian2(eps, theta);
    const Matrix2cd L = lowering2(theta);
    const double ne = bath.bose_times_eps(eps);           // eps * N
    const double rate_down = bath.alpha * (eps + ne);     // emission
    const double rate_up = bath.alpha * ne;               // absorption
    const Matrix2cd id = Matrix2cd::Identity();
    Superoperator out = -kI * (left_right(H, id) - left_right(id, H));
    out += rate_down * dissipator(L, std::exp(-u * eps));
    out += rate_up * dissipator(Matrix2cd(L.adjoint()), std::exp(u * eps));
    return out;
}

}  // namespace

Superoperator liouvillian(const DrivingProtocol& p, const BathModel& bath, double t) {
    return build_tilted(p, bath, t, 0.0);
}

Superoperator tilted_liouvillian(const DrivingProtocol& p, const BathModel& bath, double t,
                                 double u) {
    return build_tilted(p, bath, t, u);
}

namespace {

// Hot path: generator action without forming the 4x4 matrix.
Matrix2cd tilted_action(const DrivingProtocol& p, const BathModel& bath, double t, double u,
                        const Matrix2cd& rho) {
    const double eps = p.eps(t);
    const double theta = p.theta(t);
    const Matrix2cd H = hamiltonian2(eps, theta);
    const Matrix2cd L = lowering2(theta);
    const double ne = bath.bose_times_eps(eps);
    const double rd = bath.alpha * (eps + ne);
    const double ru = bath.alpha * ne;
    const Matrix2cd LdL = L.adjoint() * L;
    const Matrix2cd LLd = L * L.adjoint();
    Matrix2cd out = -kI * (H * rho - rho * H);
    out += rd * (std::exp(-u * eps) * (L * rho * L.adjoint()) -
                 0.5 * (LdL * rho + rho * LdL));
    out += ru * (std::exp(u * eps) * (L.adjoint() * rho * L) -
                 0.5 * (LLd * rho + rho * LLd));
    return out;
}

}  // namespace

ops::Matrix apply_tilted(const DrivingProtocol& p, const BathModel& bath, double t, double u,
                         const ops::Matrix& rho) {
    return tilted_action(p, bath, t, u, Matrix2cd(rho));
}

BlochAffine bloch_affine(const DrivingProtocol& p, const BathModel& bath, double t) {
    const double eps = p.eps(t);
    const double theta = p.theta(t);
    // alpha (2N+1) eps = 2 gamma
    const double a2n1 = 2.0 * characteristic_rate(bath, eps);
    const double c = std::cos(theta), s = std::sin(theta);
    const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
    BlochAffine out;
    out.G << 0.25 * a2n1 * (c2 - 3.0), eps * c, -0.25 * a2n1 * s2,
        -eps * c, -0.5 * a2n1, eps * s,
        -0.25 * a2n1 * s2, -eps * s, -0.25 * a2n1 * (c2 + 3.0);
    out.b << -bath.alpha * eps * s, 0.0, -bath.alpha * eps * c;
    return out;
}

Eigen::Matrix3d heisenberg_coefficients(const DrivingProtocol& p, const BathModel& bath,
                                        double t, double nu) {
    const double eps = p.eps(t);
    const double theta = p.theta(t);
    const double gamma = characteristic_rate(bath, eps);
    const double e1 = std::exp(-gamma * nu);
    const double c = std::cos(nu * eps), s = std::sin(nu * eps);
    Matrix3d M0;
    M0 << e1 * c, e1 * s, 0.0,
        -e1 * s, e1 * c, 0.0,
        0.0, 0.0, e1 * e1;
    const Matrix3d R = axis_rotation(theta);
    return R * M0 * R.transpose();
}

Superoperator drazin_inverse(const Superoperator& L, const ops::Matrix& pi) {
    const Vector4cd r = vectorize(pi);
    Vector4cd l;
    l << 1.0, 0.0, 0.0, 1.0;  // trace functional under column stacking
    const Superoperator P = r * l.transpose();
    // zero eigenvalue must be simple: (L - P) is then invertible
    Eigen::FullPivLU<Superoperator> lu(L - P);
    if (!lu.isInvertible()) {
        throw std::runtime_error("drazin_inverse: stationary state is not unique");
    }
    return lu.solve(Superoperator(Superoperator::Identity() - P));
}

ops::Matrix state_correction(const DrivingProtocol& p, const BathModel& bath, double t) {
    const ops::Matrix H = hamiltonian_at(p, t);
    const ops::Matrix pi = ops::gibbs_state(H, bath.beta);
    const ops::Matrix power = power_operator(p, t);
    const double mean_power = (power * pi).trace().real();
    const ops::Matrix centered = power - mean_power * ops::identity(2);
    const Superoperator Lp = drazin_inverse(liouvillian(p, bath, t), pi);
    const Vector4cd v = Lp * vectorize(ops::matrix_mean(pi, centered));
    return -bath.beta * unvectorize(v);
}

double propagate_fcs(const DrivingProtocol& p, const BathModel& bath, double u,
                     FcsOptions opt) {
    const Matrix2cd rho0 = ops::gibbs_state(hamiltonian_at(p, 0.0), bath.beta);
    auto rhs = [&](double t, const Matrix2cd& rho, Matrix2cd& out) {
        out = tilted_action(p, bath, t, u, rho);
    };
    Rk45<Matrix2cd, decltype(rhs)> solver(rhs, 0.0, rho0, opt.tol);
    solver.integrate_to(p.tau());
    const double trace = solver.y().trace().real();
    if (!(trace > 0.0)) {
        throw std::runtime_error("propagate_fcs: non-positive trace, counting field too large");
    }
    return std::log(trace) + u * std::log(2.0) / bath.beta;
}

double cgf_quasistatic(const DrivingProtocol& p, const BathModel& bath, double u) {
    const double x0 = bath.beta * p.eps(0.0);
    const double x1 = bath.beta * p.eps(p.tau());
    const double r = u / bath.beta;
    return std::log1p(std::exp(-(1.0 + r) * x0)) - std::log1p(std::exp(-x0)) -
           r * (std::log1p(std::exp(-x0)) - std::log1p(std::exp(-x1))) +
           std::log1p(std::exp(-(1.0 - r) * x1)) - std::log1p(std::exp(-x1)) +
           r * std::log(2.0);
}

MasterSolution propagate_state(const DrivingProtocol& p, const BathModel& bath,
                               const std::vector<double>& checkpoints, FcsOptions opt) {
    using State = Eigen::Matrix<Complex, 5, 1>;
    State y0;
    const ops::Matrix pi0 = ops::gibbs_state(hamiltonian_at(p, 0.0), bath.beta);
    y0 << vectorize(pi0), Complex(0.0);
    auto rhs = [&](double t, const State& y, State& out) {
        const Matrix2cd rho = Matrix2cd(unvectorize(y.head<4>()));
        const Matrix2cd drho = tilted_action(p, bath, t, 0.0, rho);
        out.head<4>() = vectorize(drho);
        const Matrix2cd H = hamiltonian2(p.eps(t), p.theta(t));
        // Heat flux into the bath; the system loses tr{H d(rho)/dt}.
        out[4] = -(H * drho).trace();
    };
    Rk45<State, decltype(rhs)> solver(rhs, 0.0, y0, opt.tol);
    MasterSolution sol;
    for (double tc : checkpoints) {
        solver.integrate_to(tc);
        sol.times.push_back(tc);
        sol.states.push_back(unvectorize(solver.y().head<4>()));
    }
    solver.integrate_to(p.tau());
    sol.heat = solver.y()[4].real();
    return sol;
}

}  // namespace erasure
