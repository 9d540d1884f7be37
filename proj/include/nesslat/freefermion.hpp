#pragma once

#include "nesslat/fock.hpp"

#include <map>

namespace nesslat {

// Translationally invariant Gaussian state of the quadratic (v = 0) fermion
// ring: a momentum occupation n(k) at momenta k_j = 2 pi j / R with
// j = -floor(R/2)+1 .. ceil(R/2) (for even R this includes +pi, excludes -pi).
struct Occupation {
    int R = 0;
    double hopping = 1.0;
    double mu = 0.0;
    RVec n; // n(k_j), index i = j - jmin

    int jmin() const { return R % 2 == 0 ? -(R / 2) + 1 : -((R - 1) / 2); }
    double k(int i) const { return 2.0 * M_PI * (jmin() + i) / R; }
    double dispersion(double kk) const { return -2.0 * hopping * std::cos(kk) - mu; }
};

inline Occupation make_occupation(int R, double hopping, double mu) {
    Occupation o;
    o.R = R;
    o.hopping = hopping;
    o.mu = mu;
    o.n = RVec::Zero(R);
    return o;
}

// Sharp boosted Fermi sea: n(k) = 1 iff |k - phi| <= pi nu on the momentum
// circle. The window is closed on both sides so that it is exactly symmetric
// about the boost; in particular phi = 0 gives n(k) = n(-k) and zero current
// even when the window edge falls on a grid momentum.
inline Occupation boosted_fermi(int R, double nu, double phi, double hopping = 1.0,
                                double mu = 0.0) {
    if (nu <= 0.0 || nu >= 1.0) throw std::invalid_argument("boosted_fermi: need 0 < nu < 1");
    Occupation o = make_occupation(R, hopping, mu);
    for (int i = 0; i < R; ++i) {
        double delta = std::remainder(o.k(i) - phi, 2.0 * M_PI); // [-pi, pi]
        o.n(i) = (std::abs(delta) <= M_PI * nu + 1e-12) ? 1.0 : 0.0;
    }
    return o;
}

// Smooth alternative: boosted Fermi-Dirac occupation n(k) = 1/(1+e^{beta eps(k-phi)}).
inline Occupation fermi_dirac(int R, double beta, double phi, double hopping = 1.0,
                              double mu = 0.0) {
    Occupation o = make_occupation(R, hopping, mu);
    for (int i = 0; i < R; ++i)
        o.n(i) = 1.0 / (1.0 + std::exp(beta * o.dispersion(o.k(i) - phi)));
    return o;
}

inline Occupation infinite_temperature_occupation(int R, double hopping = 1.0, double mu = 0.0) {
    Occupation o = make_occupation(R, hopping, mu);
    o.n.setConstant(0.5);
    return o;
}

// omega(j_{0,1}) = (1/R) sum_k v(k) n(k), v(k) = d eps / dk = 2 t sin k.
inline double current_expectation(const Occupation& o) {
    double s = 0.0;
    for (int i = 0; i < o.R; ++i) s += 2.0 * o.hopping * std::sin(o.k(i)) * o.n(i);
    return s / o.R;
}

// One-particle propagator U(t)_{xy} = (1/R) sum_k e^{ik(x-y)} e^{-i eps(k) t}.
inline Mat propagator(const Occupation& o, double t) {
    Vec u = Vec::Zero(o.R);
    for (int d = 0; d < o.R; ++d)
        for (int i = 0; i < o.R; ++i)
            u(d) += std::exp(cd(0, o.k(i) * d - o.dispersion(o.k(i)) * t)) / double(o.R);
    Mat U(o.R, o.R);
    for (int x = 0; x < o.R; ++x)
        for (int y = 0; y < o.R; ++y) U(x, y) = u((x - y + o.R * o.R) % o.R);
    return U;
}

// Two-time Wick contractions for a Gaussian occupation state. With
//   P_t(d) = (1/R) sum_k e^{ikd} e^{-i eps(k) t} n(k)      = omega(c^dag_0 c_d(t))
//   Q_t(d) = (1/R) sum_k e^{ikd} e^{+i eps(k) t} (1 - n(k)) = omega(c_0 c^dag_d(t))
// the connected correlator of quadratic A, B factorizes as
//   omega(A^ B^(t)) = sum a_{wx} b_{yz} P_t(z - w) Q_t(x - y).
class WickEvaluator {
public:
    explicit WickEvaluator(Occupation occ) : occ_(std::move(occ)) {}

    const Occupation& occupation() const { return occ_; }

    cd two_time(const QuadraticOp& A, const QuadraticOp& B, double t) const {
        const auto& [P, Q] = kernels(t);
        cd s = 0.0;
        for (const auto& ta : A.terms)
            for (const auto& tb : B.terms)
                s += ta.a * tb.a * P(idx(tb.y - ta.x)) * Q(idx(ta.y - tb.x));
        return s;
    }

    cd expect(const QuadraticOp& A) const {
        const auto& [P, Q] = kernels(0.0);
        (void)Q;
        cd s = 0.0;
        for (const auto& ta : A.terms) s += ta.a * P(idx(ta.y - ta.x));
        return s;
    }

    // omega(n^_0 h^_{w,w+1}(t)), the correlator behind rho(z, t)
    cd charge_bond_correlator(int w, double t) const {
        return two_time(quad_charge(0), quad_bond(w, occ_.hopping, occ_.mu), t);
    }

private:
    int idx(int d) const { return ((d % occ_.R) + occ_.R) % occ_.R; }

    const std::pair<Vec, Vec>& kernels(double t) const {
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
        Vec P = Vec::Zero(occ_.R), Q = Vec::Zero(occ_.R);
        for (int d = 0; d < occ_.R; ++d)
            for (int i = 0; i < occ_.R; ++i) {
                double kk = occ_.k(i), e = occ_.dispersion(kk);
                P(d) += std::exp(cd(0, kk * d - e * t)) * occ_.n(i) / double(occ_.R);
                Q(d) += std::exp(cd(0, kk * d + e * t)) * (1.0 - occ_.n(i)) / double(occ_.R);
            }
        return cache_.emplace(t, std::make_pair(std::move(P), std::move(Q))).first->second;
    }

    Occupation occ_;
    mutable std::map<double, std::pair<Vec, Vec>> cache_;
};

} // namespace nesslat
