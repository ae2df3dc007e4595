#include "erasure/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace erasure::ops {

namespace {

// Divided difference of the log-mean kernel (p - q)/(ln p - ln q) with a
// series switch at small relative separation to avoid cancellation.
double log_mean_kernel(double p, double q) {
    const double diff = p - q;
    if (std::abs(diff) < 1e-8 * std::max(p, q)) {
        // symmetric expansion around the midpoint, second-order accurate
        const double m = 0.5 * (p + q);
        const double r = diff / m;
        return m * (1.0 - r * r / 24.0);
    }
    return diff / (std::log(p) - std::log(q));
}

void require_hermitian(const Matrix& m, const char* what) {
    if (!is_hermitian(m)) {
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
    }
}

void require_full_rank_state(const SpectralDecomposition& s, const char* what) {
    if (s.values.minCoeff() <= 1e-14) {
        throw std::invalid_argument(std::string(what) + ": state is rank-deficient");
    }
}

}  // namespace

bool is_hermitian(const Matrix& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

SpectralDecomposition eigh(const Matrix& m) {
    require_hermitian(m, "eigh");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigh: eigensolver failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix spectral_map(const Matrix& m, const std::function<double(double)>& f) {
    const auto s = eigh(m);
    Eigen::VectorXd mapped(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) mapped[i] = f(s.values[i]);
    return s.vectors * mapped.asDiagonal() * s.vectors.adjoint();
}

Matrix gibbs_state(const Matrix& H, double beta) {
    require_hermitian(H, "gibbs_state");
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("gibbs_state: beta must be finite and non-negative");
    }
    const auto s = eigh(H);
    const double emin = s.values.minCoeff();
    Eigen::VectorXd weights(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        weights[i] = std::exp(-beta * (s.values[i] - emin));
    }
    weights /= weights.sum();
    return s.vectors * weights.asDiagonal() * s.vectors.adjoint();
}

Matrix dephase(const Matrix& A, const Matrix& H) {
    const auto s = eigh(H);
    const double scale = std::max(1.0, s.values.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i + 1 < s.values.size(); ++i) {
        if (s.values[i + 1] - s.values[i] <= 1e-10 * scale) {
            throw std::invalid_argument("dephase: degenerate Hamiltonian spectrum");
        }
    }
    Matrix out = Matrix::Zero(A.rows(), A.cols());
    for (Eigen::Index n = 0; n < s.values.size(); ++n) {
        const Vector v = s.vectors.col(n);
        out += (v.adjoint() * A * v)(0, 0) * (v * v.adjoint());
    }
    return out;
}

Matrix matrix_mean(const Matrix& rho, const Matrix& A) {
    const auto s = eigh(rho);
    require_full_rank_state(s, "matrix_mean");
    const Matrix a = s.vectors.adjoint() * A * s.vectors;
    Matrix k(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            k(i, j) = a(i, j) * log_mean_kernel(s.values[i], s.values[j]);
        }
    }
    return s.vectors * k * s.vectors.adjoint();
}

Matrix matrix_mean_inverse(const Matrix& rho, const Matrix& A) {
    const auto s = eigh(rho);
    require_full_rank_state(s, "matrix_mean_inverse");
    const Matrix a = s.vectors.adjoint() * A * s.vectors;
    Matrix k(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            k(i, j) = a(i, j) / log_mean_kernel(s.values[i], s.values[j]);
        }
    }
    return s.vectors * k * s.vectors.adjoint();
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
    const auto sr = eigh(rho);
    const auto ss = eigh(sigma);
    if (ss.values.minCoeff() <= 1e-14) {
        throw std::invalid_argument("relative_entropy: sigma support does not cover rho");
    }
    double tr_rho_ln_rho = 0.0;
    for (Eigen::Index i = 0; i < sr.values.size(); ++i) {
        const double p = sr.values[i];
        if (p > 1e-15) tr_rho_ln_rho += p * std::log(p);
    }
    double tr_rho_ln_sigma = 0.0;
    for (Eigen::Index j = 0; j < ss.values.size(); ++j) {
        const Vector v = ss.vectors.col(j);
        const double overlap = (v.adjoint() * rho * v)(0, 0).real();
        tr_rho_ln_sigma += overlap * std::log(ss.values[j]);
    }
    return tr_rho_ln_rho - tr_rho_ln_sigma;
}

double renyi_divergence(const Matrix& rho, const Matrix& sigma, double alpha) {
    if (alpha <= 0.0) {
        throw std::invalid_argument("renyi_divergence: alpha must be positive");
    }
    if (alpha == 1.0) {
        throw std::invalid_argument("renyi_divergence: alpha=1 is the relative entropy");
    }
    const auto ss = eigh(sigma);
    if (ss.values.minCoeff() <= 1e-14) {
        throw std::invalid_argument("renyi_divergence: sigma is rank-deficient");
    }
    const Matrix rho_a = spectral_map(rho, [alpha](double p) {
        return p > 1e-15 ? std::pow(p, alpha) : 0.0;
    });
    const Matrix sigma_1a = spectral_map(sigma, [alpha](double p) {
        return std::pow(p, 1.0 - alpha);
    });
    const double tr = (rho_a * sigma_1a).trace().real();
    return std::log(tr) / (alpha - 1.0);
}

}  // namespace erasure::ops
