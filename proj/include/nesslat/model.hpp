#pragma once

#include "nesslat/local_operator.hpp"

#include <map>
#include <string>

namespace nesslat {

inline Mat pauli_x() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat pauli_y() { Mat m(2, 2); m << 0, cd(0, -1), cd(0, 1), 0; return m; }
inline Mat pauli_z() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Translation-invariant nearest-neighbor model: the bond interaction h_{0,1}
// and the on-site conserved charge n_0. Every accepted model satisfies
// [h, n (x) 1 + 1 (x) n] = 0, checked at construction.
struct ModelSpec {
    std::string name;
    int local_dim = 2;
    Mat bond;   // d^2 x d^2, Hermitian
    Mat charge; // d x d, Hermitian
    std::map<std::string, double> params;
};

constexpr double kIdentityTol = 1e-12;

inline double conservation_residual(const ModelSpec& m) {
    const int d = m.local_dim;
    Mat nn = kron(m.charge, Mat::Identity(d, d)) + kron(Mat::Identity(d, d), m.charge);
    return max_abs(m.bond * nn - nn * m.bond);
}

inline void validate_model(const ModelSpec& m) {
    const int d = m.local_dim;
    if (d < 2) throw std::invalid_argument("model: local_dim must be >= 2");
    if (m.bond.rows() != d * d || m.bond.cols() != d * d)
        throw std::invalid_argument("model: bond must be d^2 x d^2");
    if (m.charge.rows() != d || m.charge.cols() != d)
        throw std::invalid_argument("model: charge must be d x d");
    double scale = std::max(1.0, std::max(max_abs(m.bond), max_abs(m.charge)));
    if (max_abs(Mat(m.bond - m.bond.adjoint())) > kIdentityTol * scale)
        throw std::invalid_argument("model: bond is not Hermitian");
    if (max_abs(Mat(m.charge - m.charge.adjoint())) > kIdentityTol * scale)
        throw std::invalid_argument("model: charge is not Hermitian");
    double res = conservation_residual(m);
    if (res > kIdentityTol * std::max(1.0, max_abs(m.bond) * max_abs(m.charge)))
        throw std::invalid_argument("model: charge is not conserved by the bond, ||[h, n+n]|| = " +
                                    std::to_string(res));
}

// Built-in models. "xxz": S1S1 + S2S2 + lambda S3S3 with charge S3.
// "fermion": spinless fermions through Jordan-Wigner at the spin level,
// n = (1+sigma_z)/2, hopping -t, chemical potential -mu n on the left site,
// nearest-neighbor repulsion v n n; strings cancel for these terms.
inline ModelSpec builtin_model(const std::string& name,
                               const std::map<std::string, double>& params) {
    auto need = [&](const char* p) {
        auto it = params.find(p);
        if (it == params.end())
            throw std::invalid_argument("builtin model '" + name + "' missing parameter '" + p + "'");
        return it->second;
    };
    ModelSpec m;
    m.name = name;
    m.local_dim = 2;
    m.params = params;
    if (name == "xxz") {
        double lambda = need("lambda");
        Mat sx = 0.5 * pauli_x(), sy = 0.5 * pauli_y(), sz = 0.5 * pauli_z();
        m.bond = kron(sx, sx) + kron(sy, sy) + lambda * kron(sz, sz);
        m.charge = sz;
    } else if (name == "fermion") {
        double t = need("t"), mu = need("mu"), v = need("v");
        Mat id = Mat::Identity(2, 2);
        Mat n = 0.5 * (id + pauli_z());
        m.bond = -0.5 * t * (kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()))
                 - mu * kron(n, id) + v * kron(n, n);
        m.charge = n;
    } else {
        throw std::invalid_argument("unknown builtin model '" + name + "'");
    }
    validate_model(m);
    return m;
}

inline LocalOperator bond_op(const ModelSpec& m, int x) {
    return {{x, x + 1}, m.local_dim, m.bond};
}

inline LocalOperator charge_op(const ModelSpec& m, int x) {
    return {{x, x}, m.local_dim, m.charge};
}

// Current across bond (x, x+1): -i[n_{x+1}, h_{x,x+1}] = i[n_x, h_{x,x+1}].
inline LocalOperator current(const ModelSpec& m, int x) {
    const int d = m.local_dim;
    Mat n_right = kron(Mat::Identity(d, d), m.charge);
    Mat n_left = kron(m.charge, Mat::Identity(d, d));
    Mat j = cd(0, -1) * (n_right * m.bond - m.bond * n_right);
    Mat j2 = cd(0, 1) * (n_left * m.bond - m.bond * n_left);
    if (max_abs(Mat(j - j2)) > kIdentityTol * std::max(1.0, max_abs(m.bond) * max_abs(m.charge)))
        throw std::logic_error("current: the two defining expressions disagree (charge not conserved?)");
    return {{x, x + 1}, d, std::move(j)};
}

// Energy current through site x: i[h_{x-1,x}, h_{x,x+1}], support [x-1, x+1].
inline LocalOperator energy_current(const ModelSpec& m, int x) {
    const int d = m.local_dim;
    Mat hl = kron(m.bond, Mat::Identity(d, d));
    Mat hr = kron(Mat::Identity(d, d), m.bond);
    return {{x - 1, x + 1}, d, cd(0, 1) * (hl * hr - hr * hl)};
}

// H_Lambda = sum of bonds inside [a, b] (open-interval region operator).
inline LocalOperator region_hamiltonian(const ModelSpec& m, Support lambda,
                                        const LatticeGeometry& geom) {
    if (!geom.contains(lambda)) throw std::domain_error("region_hamiltonian: region outside lattice");
    LocalOperator H = scale(identity_op(lambda, m.local_dim), 0.0);
    for (int x = lambda.a; x + 1 <= lambda.b; ++x)
        H = add(H, tensor_embed(bond_op(m, x), lambda, geom), geom);
    return H;
}

// N_Lambda = sum of charges on sites of [a, b].
inline LocalOperator region_charge(const ModelSpec& m, Support lambda,
                                   const LatticeGeometry& geom) {
    if (!geom.contains(lambda)) throw std::domain_error("region_charge: region outside lattice");
    LocalOperator N = scale(identity_op(lambda, m.local_dim), 0.0);
    for (int x = lambda.a; x <= lambda.b; ++x)
        N = add(N, tensor_embed(charge_op(m, x), lambda, geom), geom);
    return N;
}

} // namespace nesslat
