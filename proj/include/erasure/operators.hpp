// operators.hpp — Dense complex-matrix algebra for d-level systems: Pauli
// matrices, Hermitian eigendecompositions, Gibbs states, dephasing maps,
// logarithmic matrix means and entropic divergences.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>

namespace erasure::ops {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

constexpr double kHermTol = 1e-12;

inline Matrix identity(int d) { return Matrix::Identity(d, d); }

inline Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

inline Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

// sigma_minus = |0><1| in the convention where |1> = (1,0) is the excited
// state of sigma_z with eigenvalue +1 ... here |ground> = (0,1).
inline Matrix sigma_minus() {
    Matrix m(2, 2);
    m << 0.0, 0.0, 1.0, 0.0;
    return m;
}

bool is_hermitian(const Matrix& m, double tol = kHermTol);

// Eigenvalues ascending, columns of `vectors` the matching orthonormal
// eigenvectors.
struct SpectralDecomposition {
    Eigen::VectorXd values;
    Matrix vectors;
};

SpectralDecomposition eigh(const Matrix& m);

// f applied to a Hermitian matrix through its eigendecomposition.
Matrix spectral_map(const Matrix& m, const std::function<double(double)>& f);

// pi = exp(-beta H) / tr exp(-beta H).  The spectrum is shifted before
// exponentiation so large beta cannot overflow.
Matrix gibbs_state(const Matrix& H, double beta);

// Sum_n |n><n| A |n><n| over the eigenbasis of H.  H must have a
// non-degenerate spectrum (relative gap > 1e-10).
Matrix dephase(const Matrix& A, const Matrix& H);

// J_rho(A) = int_0^1 rho^x A rho^(1-x) dx, evaluated in the eigenbasis of
// rho with the log-mean kernel (p_i - p_j)/(ln p_i - ln p_j).
Matrix matrix_mean(const Matrix& rho, const Matrix& A);

// Inverse of matrix_mean: kernel (ln p_i - ln p_j)/(p_i - p_j).
Matrix matrix_mean_inverse(const Matrix& rho, const Matrix& A);

// S(rho||sigma) = tr rho ln rho - tr rho ln sigma.
double relative_entropy(const Matrix& rho, const Matrix& sigma);

// S_alpha(rho||sigma) = (alpha-1)^-1 ln tr rho^alpha sigma^(1-alpha).
double renyi_divergence(const Matrix& rho, const Matrix& sigma, double alpha);

}  // namespace erasure::ops
