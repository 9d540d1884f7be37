#pragma once

#include "nesslat/fock.hpp"
#include "nesslat/freefermion.hpp"
#include "nesslat/model.hpp"

#include <memory>
#include <numeric>

namespace nesslat {

// ---- full-space embedding helpers (no intermediate D x D temporaries) ----

namespace detail {

struct EmbedPlan {
    int d, lenA;
    std::vector<std::int64_t> stride;  // full-space stride per support position
    std::vector<std::int64_t> strideA; // local stride per support position

    EmbedPlan(const LocalOperator& A, const LatticeGeometry& geom) {
        d = geom.local_dim;
        lenA = A.support.length();
        const int n = geom.site_count();
        stride.resize(lenA);
        strideA.resize(lenA);
        for (int p = 0; p < lenA; ++p) {
            int site = geom.site_index(A.support.a + p);
            stride[p] = ipow(d, n - 1 - site);
            strideA[p] = ipow(d, lenA - 1 - p);
        }
    }
};

template <typename F>
void for_each_entry(const LocalOperator& A, const LatticeGeometry& geom, F&& f) {
    // f(I, J, value): full-space element (I, J) of the embedding of A
    EmbedPlan plan(A, geom);
    const std::int64_t D = ipow(plan.d, geom.site_count());
    const auto m = A.matrix.rows();
    std::vector<int> digits(plan.lenA);
    for (std::int64_t J = 0; J < D; ++J) {
        std::int64_t cA = 0;
        for (int p = 0; p < plan.lenA; ++p) {
            digits[p] = static_cast<int>((J / plan.stride[p]) % plan.d);
            cA += digits[p] * plan.strideA[p];
        }
        for (std::int64_t r = 0; r < m; ++r) {
            cd v = A.matrix(r, cA);
            if (v == cd(0.0, 0.0)) continue;
            std::int64_t I = J;
            for (int p = 0; p < plan.lenA; ++p)
                I += (static_cast<int>((r / plan.strideA[p]) % plan.d) - digits[p]) * plan.stride[p];
            f(I, J, v);
        }
    }
}

} // namespace detail

inline void add_embedded(Mat& H, const LocalOperator& A, const LatticeGeometry& geom, cd coeff = 1.0) {
    detail::for_each_entry(A, geom, [&](std::int64_t I, std::int64_t J, cd v) { H(I, J) += coeff * v; });
}

// Y = embed(A) * X, computed sparsely.
inline Mat apply_local_left(const LocalOperator& A, const LatticeGeometry& geom, const Mat& X) {
    Mat Y = Mat::Zero(X.rows(), X.cols());
    detail::for_each_entry(A, geom, [&](std::int64_t I, std::int64_t J, cd v) { Y.row(I) += v * X.row(J); });
    return Y;
}

// Y = X * embed(A), computed sparsely.
inline Mat apply_local_right(const Mat& X, const LocalOperator& A, const LatticeGeometry& geom) {
    Mat Y = Mat::Zero(X.rows(), X.cols());
    detail::for_each_entry(A, geom, [&](std::int64_t I, std::int64_t J, cd v) { Y.col(J) += v * X.col(I); });
    return Y;
}

inline void apply_local_vec(const LocalOperator& A, const LatticeGeometry& geom, const Vec& x, Vec& y) {
    detail::for_each_entry(A, geom, [&](std::int64_t I, std::int64_t J, cd v) { y(I) += v * x(J); });
}

// Full Hamiltonian: all bonds of the lattice (ring mode includes the wrap bond).
inline Mat hamiltonian_full(const ModelSpec& m, const LatticeGeometry& geom) {
    const std::int64_t D = detail::ipow(geom.local_dim, geom.site_count());
    Mat H = Mat::Zero(D, D);
    if (geom.is_ring()) {
        for (int x = 0; x < geom.ring_size; ++x) add_embedded(H, bond_op(m, x), geom);
    } else {
        for (int x = geom.lo; x + 1 <= geom.hi; ++x) add_embedded(H, bond_op(m, x), geom);
    }
    return H;
}

inline bool charge_is_diagonal(const ModelSpec& m) {
    Mat off = m.charge;
    off.diagonal().setZero();
    return max_abs(off) == 0.0;
}

// Diagonal of the total charge sum_x n_x in the full basis (diagonal charges only).
inline RVec total_charge_diagonal(const ModelSpec& m, const LatticeGeometry& geom) {
    if (!charge_is_diagonal(m)) throw std::logic_error("total_charge_diagonal: charge not diagonal");
    const int n = geom.site_count(), d = geom.local_dim;
    const std::int64_t D = detail::ipow(d, n);
    RVec out = RVec::Zero(D);
    for (std::int64_t I = 0; I < D; ++I) {
        std::int64_t rest = I;
        for (int s = n - 1; s >= 0; --s) {
            out(I) += m.charge(rest % d, rest % d).real();
            rest /= d;
        }
    }
    return out;
}

// ---- spectral decomposition -------------------------------------------------

struct SpectralData {
    LatticeGeometry geom;
    RVec evals;
    Mat evecs;
};

enum class Blocking { Auto, Off };

// Full diagonalization of the lattice Hamiltonian. When the charge is diagonal
// the solve is done per total-charge sector (same spectrum, much faster).
inline SpectralData diagonalize(const ModelSpec& m, const LatticeGeometry& geom,
                                std::int64_t dim_cap = 16384, Blocking blocking = Blocking::Auto) {
    const std::int64_t D = detail::ipow(geom.local_dim, geom.site_count());
    if (D > dim_cap)
        throw std::domain_error("diagonalize: dimension " + std::to_string(D) +
                                " exceeds cap " + std::to_string(dim_cap));
    Mat H = hamiltonian_full(m, geom);
    SpectralData sd;
    sd.geom = geom;
    if (blocking == Blocking::Auto && charge_is_diagonal(m) && D > 64) {
        RVec q = total_charge_diagonal(m, geom);
        std::map<long long, std::vector<std::int64_t>> sectors;
        for (std::int64_t I = 0; I < D; ++I)
            sectors[std::llround(q(I) * 4096.0)].push_back(I);
        sd.evals.resize(D);
        sd.evecs = Mat::Zero(D, D);
        std::int64_t col = 0;
        for (const auto& [key, idx] : sectors) {
            const auto ns = static_cast<std::int64_t>(idx.size());
            Mat Hs(ns, ns);
            for (std::int64_t i = 0; i < ns; ++i)
                for (std::int64_t j = 0; j < ns; ++j) Hs(i, j) = H(idx[i], idx[j]);
            EigResult es = hermitian_eig(Hs);
            for (std::int64_t j = 0; j < ns; ++j) {
                sd.evals(col + j) = es.values(j);
                for (std::int64_t i = 0; i < ns; ++i) sd.evecs(idx[i], col + j) = es.vectors(i, j);
            }
            col += ns;
        }
    } else {
        EigResult es = hermitian_eig(H);
        sd.evals = std::move(es.values);
        sd.evecs = std::move(es.vectors);
    }
    return sd;
}

inline SpectralData spectral_of_matrix(const Mat& H, const LatticeGeometry& geom) {
    EigResult es = hermitian_eig(H);
    return {geom, std::move(es.values), std::move(es.vectors)};
}

// Heisenberg evolution A(t) = e^{iHt} A e^{-iHt} as a full-space matrix.
inline Mat evolve(const LocalOperator& A, const SpectralData& sd, double t) {
    Mat At = apply_local_left(A, sd.geom, sd.evecs); // A U
    At = sd.evecs.adjoint() * At;                    // U^dag A U
    for (Eigen::Index i = 0; i < At.rows(); ++i)
        for (Eigen::Index j = 0; j < At.cols(); ++j)
            At(i, j) *= std::exp(cd(0, (sd.evals(i) - sd.evals(j)) * t));
    return sd.evecs * At * sd.evecs.adjoint();
}

// ---- stationary states ------------------------------------------------------

enum class StateKind { InfiniteTemperature, Gibbs, MomentumOccupation };

// Expectation functional of a stationary, translation invariant state,
// realized either as a density matrix diagonal in the ring eigenbasis or as a
// pure Slater determinant on the fermion Fock space.
struct StationaryState {
    StateKind kind{};
    LatticeGeometry geom;
    std::shared_ptr<const SpectralData> spec;
    RVec rho_diag; // mixed kinds: weights in the eigenbasis
    Vec psi_eig;   // pure kind: state vector in the eigenbasis
    bool pure = false;
    std::shared_ptr<const FermionFock> fock; // set for MomentumOccupation
    Occupation occ;                          // metadata for MomentumOccupation

    cd expect_full(const Mat& A) const {
        if (pure) {
            Vec a = spec->evecs.adjoint() * (A * (spec->evecs * psi_eig));
            return psi_eig.dot(a);
        }
        Mat W = A * spec->evecs;
        cd s = 0.0;
        for (Eigen::Index i = 0; i < W.cols(); ++i)
            s += rho_diag(i) * spec->evecs.col(i).dot(W.col(i));
        return s;
    }

    // omega(A B(t)) for full-space matrices
    cd two_time_full(const Mat& A, const Mat& B, double t) const {
        const Mat& U = spec->evecs;
        const RVec& E = spec->evals;
        if (pure) {
            Vec w = psi_eig;
            for (Eigen::Index i = 0; i < w.size(); ++i) w(i) *= std::exp(cd(0, -E(i) * t));
            w = U.adjoint() * (B * (U * w)); // B~ e^{-iEt} psi
            for (Eigen::Index i = 0; i < w.size(); ++i) w(i) *= std::exp(cd(0, E(i) * t));
            Vec a = U.adjoint() * (A.adjoint() * (U * psi_eig));
            return a.dot(w);
        }
        Mat At = U.adjoint() * (A * U);
        Mat Bt = U.adjoint() * (B * U);
        cd s = 0.0;
        for (Eigen::Index mth = 0; mth < At.rows(); ++mth)
            for (Eigen::Index nth = 0; nth < At.cols(); ++nth)
                s += rho_diag(mth) * At(mth, nth) * Bt(nth, mth) *
                     std::exp(cd(0, (E(nth) - E(mth)) * t));
        return s;
    }
};

inline StationaryState make_infinite_temperature(const ModelSpec& m, const LatticeGeometry& geom,
                                                 std::int64_t dim_cap = 16384) {
    StationaryState st;
    st.kind = StateKind::InfiniteTemperature;
    st.geom = geom;
    st.spec = std::make_shared<SpectralData>(diagonalize(m, geom, dim_cap));
    st.rho_diag = RVec::Constant(st.spec->evals.size(), 1.0 / double(st.spec->evals.size()));
    return st;
}

inline StationaryState make_gibbs(const ModelSpec& m, const LatticeGeometry& geom, double beta,
                                  std::int64_t dim_cap = 16384) {
    StationaryState st;
    st.kind = StateKind::Gibbs;
    st.geom = geom;
    st.spec = std::make_shared<SpectralData>(diagonalize(m, geom, dim_cap));
    const RVec& E = st.spec->evals;
    double e0 = E.minCoeff();
    st.rho_diag = ((-beta) * (E.array() - e0)).exp().matrix();
    st.rho_diag /= st.rho_diag.sum();
    return st;
}

// Pure Slater-determinant realization of a sharp momentum occupation on a
// small fermion ring (v = 0). The many-body state is an eigenstate of the
// periodic fermion Hamiltonian, hence exactly stationary.
inline StationaryState make_momentum_occupation(const Occupation& occ) {
    for (int i = 0; i < occ.R; ++i)
        if (occ.n(i) != 0.0 && occ.n(i) != 1.0)
            throw std::invalid_argument("momentum-occupation ED state needs a sharp n(k)");
    if (occ.R > 14) throw std::domain_error("momentum-occupation ED state: ring too large");
    StationaryState st;
    st.kind = StateKind::MomentumOccupation;
    st.geom = LatticeGeometry::ring(occ.R, 2);
    st.occ = occ;
    auto fock = std::make_shared<FermionFock>(FermionFock::build(occ.R));
    st.fock = fock;
    Mat H = fock->ring_hamiltonian(occ.hopping, occ.mu);
    st.spec = std::make_shared<SpectralData>(spectral_of_matrix(H, st.geom));
    std::vector<double> ks;
    for (int i = 0; i < occ.R; ++i)
        if (occ.n(i) == 1.0) ks.push_back(occ.k(i));
    Vec psi = fock->slater(ks);
    st.psi_eig = st.spec->evecs.adjoint() * psi;
    st.pure = true;
    return st;
}

// Convenience wrappers for local (spin picture) observables.
inline cd expect(const StationaryState& st, const LocalOperator& A) {
    return st.expect_full(to_full(A, st.geom));
}
inline cd two_time(const StationaryState& st, const LocalOperator& A, const LocalOperator& B,
                   double t) {
    return st.two_time_full(to_full(A, st.geom), to_full(B, st.geom), t);
}

// Quadratic fermion observables evaluated in the Fock realization.
inline cd expect_quad(const StationaryState& st, const QuadraticOp& A) {
    if (!st.fock) throw std::logic_error("expect_quad: state has no fermion realization");
    return st.expect_full(st.fock->matrix(A));
}
inline cd two_time_quad(const StationaryState& st, const QuadraticOp& A, const QuadraticOp& B,
                        double t, bool connected) {
    if (!st.fock) throw std::logic_error("two_time_quad: state has no fermion realization");
    Mat Am = st.fock->matrix(A), Bm = st.fock->matrix(B);
    if (connected) {
        const auto D = Am.rows();
        Am -= st.expect_full(Am) * Mat::Identity(D, D);
        Bm -= st.expect_full(Bm) * Mat::Identity(D, D);
    }
    return st.two_time_full(Am, Bm, t);
}

// A - omega(A) * identity on the same support.
inline LocalOperator center(const LocalOperator& A, const StationaryState& st) {
    cd mean = expect(st, A);
    LocalOperator out = A;
    out.matrix -= mean * Mat::Identity(A.dim(), A.dim());
    return out;
}

} // namespace nesslat
