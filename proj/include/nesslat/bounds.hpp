#pragma once

#include "nesslat/ed.hpp"

namespace nesslat {

// Lieb-Robinson group-velocity constant V(h) = 4 (N+1)^4 e^2 ||h||.
inline double group_velocity_constant(const ModelSpec& m) {
    double d = m.local_dim;
    return 4.0 * d * d * d * d * std::exp(2.0) * operator_norm_dense(m.bond);
}

struct LRParams {
    double V = 0.0;   // group-velocity constant
    int local_dim = 2;
    int dA = 1, dB = 1; // support sizes (site counts)
    double normA = 1.0, normB = 1.0;
};

inline LRParams lr_params(const ModelSpec& m, const LocalOperator& A, const LocalOperator& B) {
    return {group_velocity_constant(m), m.local_dim, A.support.length(), B.support.length(),
            operator_norm(A), operator_norm(B)};
}

inline bool lr_valid(const LRParams& p, int x) { return std::abs(x) - (p.dA + p.dB) > 0; }

// ||[tau_x alpha_t(A), B]|| <= 2 (N+1)^{dA+dB} ||A|| ||B|| dA dB e^{-(|x|-dA-dB)} e^{2V|t|},
// asserted only where |x| - (dA + dB) > 0.
inline double lr_bound(const LRParams& p, int x, double t) {
    if (!lr_valid(p, x))
        throw std::domain_error("lr_bound: |x| <= dA + dB, the bound is not asserted there");
    double pref = 2.0 * std::pow(double(p.local_dim), p.dA + p.dB) * p.normA * p.normB *
                  double(p.dA) * double(p.dB);
    return pref * std::exp(-(std::abs(x) - (p.dA + p.dB)) + 2.0 * p.V * std::abs(t));
}

// Z_{M,L}(t), transcribed term by term; L >= M > 0.
inline double z_envelope(const ModelSpec& m, int M, int L, double t) {
    if (L < M || M <= 0) throw std::domain_error("z_envelope: need L >= M > 0");
    const double d = m.local_dim;
    const double V = group_velocity_constant(m);
    const double nJ = operator_norm(energy_current(m, 0));
    const double nn = operator_norm_dense(m.charge);
    const double nj = operator_norm(current(m, 0));
    const double at = std::abs(t);
    const double egrow = std::expm1(2.0 * V * at); // e^{2V|t|} - 1
    double term1 = 6.0 * std::pow(d, 4) * nn * nJ * (std::exp(-double(M)) / (1.0 - std::exp(-1.0))) *
                   std::exp(3.0) * egrow / (2.0 * V);
    double term2 = 12.0 * std::exp(5.0) * std::pow(d, 5) * nj * nJ *
                   (std::exp(-double(M)) + std::exp(-double(L - M))) *
                   (1.0 / (2.0 * V)) * (egrow / (2.0 * V) - at);
    return term1 + term2;
}

// ---- measured commutator norms on guarded rings -----------------------------

namespace detail {

// max |eigenvalue| of the anti-Hermitian commutator i[Afull(t), Bx] given the
// dense evolved operator and the sparse local one.
inline double commutator_norm(const Mat& At, const LocalOperator& Bx, const LatticeGeometry& geom) {
    const auto D = At.rows();
    return lanczos_spectral_norm(
        [&](const Vec& v, Vec& out) {
            Vec bv = Vec::Zero(D);
            apply_local_vec(Bx, geom, v, bv);
            out = At * bv;          // A(t) B v
            bv = At * v;
            Vec tmp = Vec::Zero(D);
            apply_local_vec(Bx, geom, bv, tmp); // B A(t) v
            out -= tmp;
            out *= cd(0, 1); // i [A(t), B] is Hermitian
        },
        D, 1e-6, 60);
}

} // namespace detail

struct ConeGrid {
    int ring = 0;          // accepted ring size
    double guard_diff = 0; // grid change in the last ring-doubling step
    std::vector<int> xs;
    std::vector<double> ts;
    Eigen::MatrixXd measured; // rows: xs, cols: ts
};

struct RingGuardOptions {
    int start_ring = 10;
    int max_ring = 12;
    double tol = 1e-3;
    std::int64_t dim_cap = 16384;
};

namespace detail {

inline Eigen::MatrixXd cone_measure(const ModelSpec& m, const LocalOperator& A,
                                    const LocalOperator& B, const std::vector<int>& xs,
                                    const std::vector<double>& ts, int R, std::int64_t dim_cap) {
    LatticeGeometry geom = LatticeGeometry::ring(R, m.local_dim);
    SpectralData sd = diagonalize(m, geom, dim_cap);
    const Mat& U = sd.evecs;

    Mat Atil = U.adjoint() * apply_local_left(A, geom, U); // U^dag A U, t-independent

    // with real H and real A, B, complex conjugation maps t -> -t without
    // changing any norm, so +-t columns coincide
    auto is_real = [](const Mat& X) {
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            for (Eigen::Index j = 0; j < X.cols(); ++j)
                if (X(i, j).imag() != 0.0) return false;
        return true;
    };
    bool time_symmetric = is_real(m.bond) && is_real(A.matrix) && is_real(B.matrix);

    Eigen::MatrixXd out(xs.size(), ts.size());
    std::map<double, size_t> done; // |t| -> column already computed
    for (size_t it = 0; it < ts.size(); ++it) {
        double t = ts[it];
        if (time_symmetric) {
            auto hit = done.find(std::abs(t));
            if (hit != done.end()) {
                out.col(it) = out.col(hit->second);
                continue;
            }
            done[std::abs(t)] = it;
        }
        if (t == 0.0) {
            for (size_t ix = 0; ix < xs.size(); ++ix)
                out(ix, it) = operator_norm(commutator(translate(A, xs[ix], geom), B, geom));
            continue;
        }
        Mat Ph = Atil;
        for (Eigen::Index i = 0; i < Ph.rows(); ++i)
            for (Eigen::Index j = 0; j < Ph.cols(); ++j)
                Ph(i, j) *= std::exp(cd(0, (sd.evals(i) - sd.evals(j)) * t));
        Mat At = U * Ph * U.adjoint(); // A(t) in the computational basis
        for (size_t ix = 0; ix < xs.size(); ++ix) {
            // ||[tau_x A(t), B]|| = ||[A(t), tau_{-x} B]||
            LocalOperator Bx = translate(B, -xs[ix], geom);
            out(ix, it) = commutator_norm(At, Bx, geom);
        }
    }
    return out;
}

} // namespace detail

// Measured ||[tau_x alpha_t(A), B]|| over a grid, on a ring grown by doubling
// steps of two sites until the whole grid is stable to opts.tol.
inline ConeGrid cone_profile(const ModelSpec& m, const LocalOperator& A, const LocalOperator& B,
                             const std::vector<int>& xs, const std::vector<double>& ts,
                             const RingGuardOptions& opts = {}) {
    ConeGrid g;
    g.xs = xs;
    g.ts = ts;
    Eigen::MatrixXd prev = detail::cone_measure(m, A, B, xs, ts, opts.start_ring, opts.dim_cap);
    for (int R = opts.start_ring + 2;; R += 2) {
        if (R > opts.max_ring)
            throw std::domain_error("cone_profile: ring guard did not converge within max_ring");
        Eigen::MatrixXd cur = detail::cone_measure(m, A, B, xs, ts, R, opts.dim_cap);
        double diff = (cur - prev).cwiseAbs().maxCoeff();
        if (diff <= opts.tol * std::max(1.0, cur.cwiseAbs().maxCoeff())) {
            g.ring = R;
            g.guard_diff = diff;
            g.measured = cur;
            return g;
        }
        prev = cur;
    }
}

// Measured ||[N_{[-L,0]}, H_{[-M,M+1]}(t)] - [N_{[-L,0]}, H_{[-M,M+1]}]|| on ring R.
// The charge must be diagonal (true for both built-ins), so [N, X] is an
// entrywise weighting.
// diagonal of N_{[-L,0]} in the computational basis (diagonal charge only)
inline RVec region_charge_diagonal(const ModelSpec& m, int L, const LatticeGeometry& geom) {
    const int d = geom.local_dim, n = geom.site_count();
    const std::int64_t D = detail::ipow(d, n);
    RVec nfull = RVec::Zero(D);
    for (int x = -L; x <= 0; ++x) {
        int site = geom.site_index(x);
        std::int64_t stride = detail::ipow(d, n - 1 - site);
        for (std::int64_t I = 0; I < D; ++I)
            nfull(I) += m.charge((I / stride) % d, (I / stride) % d).real();
    }
    return nfull;
}

// per-ring precomputation shared across evolution times: the diagonalization
// and the eigenbasis image of the region Hamiltonian
struct EnvelopeWorkspace {
    LatticeGeometry geom;
    SpectralData sd;
    Mat Hm;    // embedded H_{[-M,M+1]}
    Mat Htil0; // U^dag H_{[-M,M+1]} U
};

inline EnvelopeWorkspace envelope_workspace(const ModelSpec& m, int M, int R,
                                            std::int64_t dim_cap = 16384) {
    EnvelopeWorkspace ws{LatticeGeometry::ring(R, m.local_dim), {}, {}, {}};
    ws.sd = diagonalize(m, ws.geom, dim_cap);
    LocalOperator Hreg = region_hamiltonian(m, {-M, M + 1}, ws.geom);
    ws.Hm = Mat::Zero(ws.sd.evecs.rows(), ws.sd.evecs.cols());
    add_embedded(ws.Hm, Hreg, ws.geom);
    ws.Htil0 = ws.sd.evecs.adjoint() * apply_local_left(Hreg, ws.geom, ws.sd.evecs);
    return ws;
}

// dense H_{[-M,M+1]}(t) - H_{[-M,M+1]}
inline Mat envelope_evolved_difference(const EnvelopeWorkspace& ws, double t) {
    Mat Htil = ws.Htil0;
    for (Eigen::Index i = 0; i < Htil.rows(); ++i)
        for (Eigen::Index j = 0; j < Htil.cols(); ++j)
            Htil(i, j) *= std::exp(cd(0, (ws.sd.evals(i) - ws.sd.evals(j)) * t));
    Mat Ht = ws.sd.evecs * Htil * ws.sd.evecs.adjoint();
    Ht -= ws.Hm;
    return Ht;
}

// ||[N, H(t) - H]||; with diagonal N this is the norm of (n_I - n_J) diff_{IJ}
inline double envelope_deviation(Mat diff, const RVec& nfull) {
    for (Eigen::Index i = 0; i < diff.rows(); ++i)
        for (Eigen::Index j = 0; j < diff.cols(); ++j)
            diff(i, j) *= (nfull(i) - nfull(j));
    return lanczos_spectral_norm(
        [&](const Vec& v, Vec& out) { out = cd(0, 1) * (diff * v); }, diff.rows(), 1e-6, 60);
}

inline double envelope_deviation_on_ring(const ModelSpec& m, int L, int M, double t, int R,
                                         std::int64_t dim_cap = 16384) {
    if (L + M + 2 > R) throw std::domain_error("envelope: ring too small for the regions");
    if (!charge_is_diagonal(m)) throw std::logic_error("envelope: needs a diagonal charge");
    EnvelopeWorkspace ws = envelope_workspace(m, M, R, dim_cap);
    return envelope_deviation(envelope_evolved_difference(ws, t),
                              region_charge_diagonal(m, L, ws.geom));
}

struct EnvelopePoint {
    int L, M;
    double t;
    double measured;
    double envelope;
    int ring;
    double guard_diff;
};

inline EnvelopePoint envelope_check(const ModelSpec& m, int L, int M, double t,
                                    const RingGuardOptions& opts = {}) {
    double prev = envelope_deviation_on_ring(m, L, M, t, opts.start_ring, opts.dim_cap);
    for (int R = opts.start_ring + 2;; R += 2) {
        if (R > opts.max_ring)
            throw std::domain_error("envelope_check: ring guard did not converge within max_ring");
        double cur = envelope_deviation_on_ring(m, L, M, t, R, opts.dim_cap);
        double diff = std::abs(cur - prev);
        if (diff <= opts.tol * std::max(1.0, std::abs(cur)))
            return {L, M, t, cur, z_envelope(m, M, L, t), R, diff};
        prev = cur;
    }
}

} // namespace nesslat
