#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace nesslat {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

struct EigResult {
    RVec values;
    Mat vectors; // columns are eigenvectors
};

// Dense Hermitian eigendecomposition. LAPACK zheevd for anything nontrivial,
// Eigen for tiny matrices (avoids LAPACK call overhead in hot small loops).
inline EigResult hermitian_eig(const Mat& H) {
    const lapack_int n = static_cast<lapack_int>(H.rows());
    if (H.cols() != H.rows()) throw std::invalid_argument("hermitian_eig: square matrix required");
    if (n <= 32) {
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        return {es.eigenvalues(), es.eigenvectors()};
    }
    EigResult r;
    r.vectors = H;
    r.values.resize(n);
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                     r.vectors.data(), n, r.values.data());
    if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
    return r;
}

// Largest singular value of a dense matrix.
inline double operator_norm_dense(const Mat& A) {
    if (A.rows() == 0) return 0.0;
    if (A.rows() <= 64 && A.cols() <= 64)
        return Eigen::JacobiSVD<Mat>(A).singularValues()(0);
    return Eigen::BDCSVD<Mat>(A).singularValues()(0);
}

// Spectral norm max|eig| of a Hermitian operator given only through its
// matrix-vector product, via Lanczos with full reorthogonalization.
// Deterministic (fixed start vector). Converges from below.
inline double lanczos_spectral_norm(const std::function<void(const Vec&, Vec&)>& matvec,
                                    Eigen::Index dim, double rel_tol = 1e-9,
                                    int max_iter = 120) {
    if (dim == 0) return 0.0;
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = cd(gauss(rng), gauss(rng));
    v /= v.norm();

    std::vector<Vec> basis;
    std::vector<double> alpha, beta;
    Vec w(dim);
    double prev = 0.0;
    int m = static_cast<int>(std::min<Eigen::Index>(max_iter, dim));
    for (int j = 0; j < m; ++j) {
        basis.push_back(v);
        matvec(v, w);
        double a = std::real(v.dot(w));
        alpha.push_back(a);
        w -= a * v;
        if (j > 0) w -= beta.back() * basis[j - 1];
        for (const auto& q : basis) w -= q.dot(w) * q; // reorthogonalize
        double b = w.norm();

        // current Ritz estimate of max|eig| from the tridiagonal
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j + 1, j + 1);
        for (int i = 0; i <= j; ++i) T(i, i) = alpha[i];
        for (int i = 0; i + 1 <= j; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
        double cur = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(j)));

        if (b < 1e-13 * std::max(1.0, cur)) return cur; // invariant subspace exhausted
        if (j >= 8 && std::abs(cur - prev) <= rel_tol * std::max(1.0, cur)) return cur;
        prev = cur;
        beta.push_back(b);
        v = w / b;
    }
    return prev;
}

inline double max_abs(const Mat& A) { return A.cwiseAbs().maxCoeff(); }

} // namespace nesslat
