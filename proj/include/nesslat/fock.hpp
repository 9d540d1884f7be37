#pragma once

#include "nesslat/linalg.hpp"

#include <tuple>
#include <vector>

namespace nesslat {

// One quadratic fermion operator sum a_{xy} c^dag_x c_y, kept as its sparse
// coefficient list. Site labels are integers mod R.
struct QuadraticOp {
    struct Term { int x, y; cd a; };
    std::vector<Term> terms;

    QuadraticOp& add(int x, int y, cd a) { terms.push_back({x, y, a}); return *this; }

    QuadraticOp adjoint() const {
        QuadraticOp r;
        for (const auto& t : terms) r.add(t.y, t.x, std::conj(t.a));
        return r;
    }
    QuadraticOp translated(int s) const {
        QuadraticOp r;
        for (const auto& t : terms) r.add(t.x + s, t.y + s, t.a);
        return r;
    }
};

inline QuadraticOp quad_charge(int x) { return QuadraticOp{}.add(x, x, 1.0); }

// h_{x,x+1} = -t (c^dag_{x+1} c_x + c^dag_x c_{x+1}) - mu n_x  (v = 0 only)
inline QuadraticOp quad_bond(int x, double t_hop, double mu) {
    QuadraticOp q;
    q.add(x + 1, x, -t_hop).add(x, x + 1, -t_hop);
    if (mu != 0.0) q.add(x, x, -mu);
    return q;
}

// j_{x,x+1} = i t (c^dag_{x+1} c_x - c^dag_x c_{x+1})
inline QuadraticOp quad_current(int x, double t_hop) {
    QuadraticOp q;
    q.add(x + 1, x, cd(0, 1) * t_hop).add(x, x + 1, cd(0, -1) * t_hop);
    return q;
}

// Dense many-body representation of R spinless fermion modes (Jordan-Wigner
// construction in the occupation basis; site 0 is the most significant bit,
// bit set = occupied, vacuum = index 0).
struct FermionFock {
    int R = 0;
    std::vector<Mat> c; // annihilators, dimension 2^R

    static FermionFock build(int R) {
        if (R < 1 || R > 14) throw std::invalid_argument("FermionFock: R out of range");
        FermionFock f;
        f.R = R;
        Mat a(2, 2), parity(2, 2), id = Mat::Identity(2, 2);
        a << 0, 1, 0, 0;            // occupied = index 1
        parity << 1, 0, 0, -1;
        const std::int64_t D = std::int64_t(1) << R;
        for (int x = 0; x < R; ++x) {
            Mat op = Mat::Ones(1, 1);
            for (int y = 0; y < R; ++y) {
                const Mat& factor = (y < x) ? parity : (y == x ? a : id);
                Mat next(op.rows() * 2, op.cols() * 2);
                next.block(0, 0, op.rows(), op.cols()) = factor(0, 0) * op;
                next.block(0, op.cols(), op.rows(), op.cols()) = factor(0, 1) * op;
                next.block(op.rows(), 0, op.rows(), op.cols()) = factor(1, 0) * op;
                next.block(op.rows(), op.cols(), op.rows(), op.cols()) = factor(1, 1) * op;
                op = std::move(next);
            }
            f.c.push_back(std::move(op));
        }
        (void)D;
        return f;
    }

    int site(int x) const { return ((x % R) + R) % R; }

    Mat matrix(const QuadraticOp& q) const {
        const auto D = c[0].rows();
        Mat m = Mat::Zero(D, D);
        for (const auto& t : q.terms) m += t.a * (c[site(t.x)].adjoint() * c[site(t.y)]);
        return m;
    }

    // Ring Hamiltonian sum_x h_{x,x+1} with periodic wrap.
    Mat ring_hamiltonian(double t_hop, double mu) const {
        QuadraticOp H;
        for (int x = 0; x < R; ++x) {
            auto b = quad_bond(x, t_hop, mu);
            for (auto& t : b.terms) H.terms.push_back(t);
        }
        return matrix(H);
    }

    // Slater determinant prod_k c^dag_k |0>, modes applied in the given order.
    Vec slater(const std::vector<double>& ks) const {
        const auto D = c[0].rows();
        Vec psi = Vec::Zero(D);
        psi(0) = 1.0;
        for (double k : ks) {
            Mat cdk = Mat::Zero(D, D);
            for (int x = 0; x < R; ++x)
                cdk += (std::exp(cd(0, k * x)) / std::sqrt(double(R))) * c[x].adjoint();
            psi = cdk * psi;
        }
        double nrm = psi.norm();
        if (nrm < 1e-12) throw std::runtime_error("slater: vanishing state (duplicate momentum?)");
        return psi / nrm;
    }
};

} // namespace nesslat
