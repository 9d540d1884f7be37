#pragma once

#include "nesslat/window.hpp"

#include <functional>
#include <thread>

namespace nesslat {

// omega(n^_0 h^_{w,w+1}(t)) of the state under study; the single correlator
// everything in this header is built from.
using CorrFn = std::function<cd(int w, double t)>;

// Sampled rho(z, t) = (1/(2 pi sqrt(2 pi))) omega(i n^_0 h^_{-z,-z+1}(-t))
// for |z| <= zmax on a uniform symmetric t-grid.
struct CorrelationGrid {
    int zmax = 0;
    double dt = 0.0;
    std::vector<double> ts; // symmetric: ts[n-1-i] = -ts[i]
    Mat rho;                // row z + zmax, column time index
    double omega_j = 0.0;   // omega(j_{0,1}) of the state (target bookkeeping)

    int tcount() const { return static_cast<int>(ts.size()); }
    cd at(int z, int it) const { return rho(z + zmax, it); }
    int neg_time_index(int it) const { return tcount() - 1 - it; }
};

inline CorrelationGrid correlation_grid(const CorrFn& corr, double omega_j, int zmax, double T,
                                        double dt, int workers = 1) {
    CorrelationGrid g;
    g.zmax = zmax;
    g.omega_j = omega_j;
    int m = static_cast<int>(std::llround(T / dt));
    g.dt = T / m;
    g.ts.resize(2 * m + 1);
    for (int i = 0; i <= 2 * m; ++i) g.ts[i] = g.dt * (i - m);
    g.rho.resize(2 * zmax + 1, 2 * m + 1);

    const double pref = 1.0 / (2.0 * M_PI * std::sqrt(2.0 * M_PI));
    auto fill_rows = [&](int z0, int z1) {
        for (int z = z0; z < z1; ++z)
            for (int it = 0; it < g.tcount(); ++it)
                g.rho(z, it) = pref * cd(0, 1) * corr(-(z - zmax), -g.ts[it]);
    };
    int nw = std::max(1, workers);
    if (nw == 1) {
        fill_rows(0, 2 * zmax + 1);
    } else {
        std::vector<std::thread> pool;
        int rows = 2 * zmax + 1, chunk = (rows + nw - 1) / nw;
        for (int w = 0; w < nw; ++w)
            pool.emplace_back(fill_rows, std::min(rows, w * chunk), std::min(rows, (w + 1) * chunk));
        for (auto& th : pool) th.join();
    }
    return g;
}

// z-truncation guard: max |rho| on the outermost |z| rows relative to the
// z = 0 row. Small (< 1e-3) certifies the grid extent.
inline double edge_decay_ratio(const CorrelationGrid& g) {
    double edge = 0.0, center = 0.0;
    for (int it = 0; it < g.tcount(); ++it) {
        edge = std::max({edge, std::abs(g.at(-g.zmax, it)), std::abs(g.at(g.zmax, it))});
        center = std::max(center, std::abs(g.at(0, it)));
    }
    return edge / std::max(center, 1e-300);
}

// sum_x r_L(x) s_M(x - z); L < 0 means the L -> infinity piecewise form.
inline long overlap_weight(long L, long M, long z) {
    if (M < 0) throw std::domain_error("overlap_weight: need M >= 0");
    if (L < 0) {
        if (z < -M) return 2 * M + 1;
        if (z <= M) return M + 1 - z;
        return 0;
    }
    long xlo = std::max(-L, z - M), xhi = std::min(0L, z + M);
    return xhi >= xlo ? xhi - xlo + 1 : 0;
}

// omega(i [N_{[-L,0]}, H_{[-M,M+1]}(t)]) at grid time index it, expanded as
// sum_z weight(z) * 4 pi sqrt(2 pi) Re rho(z, -t). Requires zmax >= L + M.
inline double sumrule_integrand(const CorrelationGrid& g, long L, long M, int it) {
    if (g.zmax < L + M)
        throw std::domain_error("sumrule_integrand: grid zmax < L + M");
    const double pref = 4.0 * M_PI * std::sqrt(2.0 * M_PI);
    int itn = g.neg_time_index(it);
    double s = 0.0;
    for (long z = -(L + M); z <= M; ++z)
        s += double(overlap_weight(L, M, z)) * g.at(int(z), itn).real();
    return pref * s;
}

struct SumruleResult {
    double value = 0.0;
    double target = 0.0;
    double rel_dev = 0.0;
};

// Finite-region smeared transport integral against the window, reported with
// the target sqrt(2 pi) omega(j) f~(0).
inline SumruleResult sumrule_integral(const CorrelationGrid& g, const TestWindow& w, long L, long M) {
    if (g.tcount() != int(w.ts.size()) || std::abs(g.dt - w.dt) > 1e-12)
        throw std::invalid_argument("sumrule_integral: grid and window use different t-grids");
    std::vector<double> integ(w.ts.size());
    for (size_t it = 0; it < w.ts.size(); ++it)
        integ[it] = w.f[it] * sumrule_integrand(g, L, M, int(it));
    SumruleResult r;
    r.value = simpson(integ, g.dt);
    r.target = std::sqrt(2.0 * M_PI) * g.omega_j * w.f0();
    r.rel_dev = std::abs(r.value - r.target) / std::max(1e-300, std::abs(r.target));
    return r;
}

struct TermDecomposition {
    double term8 = 0.0;  // (2M+1) tail, z < -M
    double term9 = 0.0;  // (M+1) bulk
    double term10 = 0.0; // -z weighted bulk
    double sum() const { return term8 + term9 + term10; }
};

// The three displayed terms of the L -> infinity decomposition, computed from
// the grid (the z < -M tail is truncated at the grid edge).
inline TermDecomposition term_decomposition(const CorrelationGrid& g, const TestWindow& w, long M) {
    if (g.zmax <= M) throw std::domain_error("term_decomposition: grid zmax must exceed M");
    const double pref = 4.0 * M_PI * std::sqrt(2.0 * M_PI);
    std::vector<double> i8(w.ts.size()), i9(w.ts.size()), i10(w.ts.size());
    for (size_t it = 0; it < w.ts.size(); ++it) {
        int itn = g.neg_time_index(int(it));
        double s8 = 0.0, s9 = 0.0, s10 = 0.0;
        for (long z = -g.zmax; z < -M; ++z) s8 += g.at(int(z), itn).real();
        for (long z = -M; z <= M; ++z) {
            double re = g.at(int(z), itn).real();
            s9 += re;
            s10 -= double(z) * re;
        }
        i8[it] = w.f[it] * double(2 * M + 1) * s8 * pref;
        i9[it] = w.f[it] * double(M + 1) * s9 * pref;
        i10[it] = w.f[it] * s10 * pref;
    }
    return {simpson(i8, g.dt), simpson(i9, g.dt), simpson(i10, g.dt)};
}

// ---- spectral density -------------------------------------------------------

struct SpectralDensity {
    std::vector<double> ks, es;
    Mat values; // values(ik, ie) = rho~(k, eps), windowed estimate
};

// rho~(k, eps) ~= (1/sqrt(2 pi)) sum_z Dt sum_t w(t) rho(z, t) e^{-i(kz - eps t)}
// (Simpson weights in t; the window tapers the finite t-extent).
inline SpectralDensity spectral_density(const CorrelationGrid& g, const TestWindow& w,
                                        const std::vector<double>& ks,
                                        const std::vector<double>& es) {
    if (g.tcount() != int(w.ts.size()))
        throw std::invalid_argument("spectral_density: grid and window use different t-grids");
    SpectralDensity sd;
    sd.ks = ks;
    sd.es = es;
    sd.values.resize(ks.size(), es.size());
    const double pref = 1.0 / std::sqrt(2.0 * M_PI);
    // z-transform first, then the time quadrature
    for (size_t ik = 0; ik < ks.size(); ++ik) {
        std::vector<cd> zt(g.tcount());
        for (int it = 0; it < g.tcount(); ++it) {
            cd s = 0.0;
            for (int z = -g.zmax; z <= g.zmax; ++z)
                s += g.at(z, it) * std::exp(cd(0, -ks[ik] * z));
            zt[it] = s * w.f[it];
        }
        for (size_t ie = 0; ie < es.size(); ++ie) {
            std::vector<cd> integ(g.tcount());
            for (int it = 0; it < g.tcount(); ++it)
                integ[it] = zt[it] * std::exp(cd(0, es[ie] * g.ts[it]));
            sd.values(ik, ie) = pref * simpson_cd(integ, g.dt);
        }
    }
    return sd;
}

struct TheoremResult {
    cd S = 0.0;          // smeared singularity functional
    double target = 0.0; // omega(j_{0,1}) f~(0)
    double rel_dev = 0.0;
};

// S(f) = -2 pi i int deps f~(eps) (d_k rho~(k,eps) + d_k rho~(-k,-eps)^*)|_{k=0},
// with the k-derivative evaluated through the z-weighted transform
// d_k rho~|_0 = (1/sqrt(2 pi)) int dt sum_z (-iz) rho(z, t) e^{i eps t}.
inline TheoremResult theorem_sumrule(const CorrelationGrid& g, const TestWindow& w,
                                     double eps_max = 6.0, double eps_step = 0.02) {
    // combined k-derivative: both pieces together give the kernel
    // (1/sqrt(2 pi)) sum_z (-iz) int dt [rho + rho^*](z, t) e^{i eps t};
    // the z-sum is eps-independent, so fold it into s(t) once
    std::vector<cd> s(g.tcount(), 0.0);
    for (int it = 0; it < g.tcount(); ++it)
        for (int z = -g.zmax; z <= g.zmax; ++z)
            s[it] += cd(0, -double(z)) * 2.0 * g.at(z, it).real();
    int me = static_cast<int>(std::llround(eps_max / eps_step));
    double de = eps_max / me;
    std::vector<cd> outer(2 * me + 1);
    std::vector<cd> integ(g.tcount());
    for (int ie = -me; ie <= me; ++ie) {
        double eps = de * ie;
        for (int it = 0; it < g.tcount(); ++it)
            integ[it] = s[it] * std::exp(cd(0, eps * g.ts[it]));
        outer[ie + me] = w.ftilde(eps) * simpson_cd(integ, g.dt) / std::sqrt(2.0 * M_PI);
    }
    TheoremResult r;
    r.S = cd(0, -2.0 * M_PI) * simpson_cd(outer, de);
    r.target = g.omega_j * w.f0();
    r.rel_dev = std::abs(r.S - r.target) / std::max(1e-300, std::abs(r.target));
    return r;
}

// Time-domain evaluation of the same functional (exact eps-integral),
// S = 4 pi int dt f(t) sum_z (-z) Re rho(z, -t).
inline double theorem_sumrule_timedomain(const CorrelationGrid& g, const TestWindow& w) {
    std::vector<double> integ(w.ts.size());
    for (size_t it = 0; it < w.ts.size(); ++it) {
        int itn = g.neg_time_index(int(it));
        double s = 0.0;
        for (int z = -g.zmax; z <= g.zmax; ++z) s -= double(z) * g.at(z, itn).real();
        integ[it] = w.f[it] * s;
    }
    return 4.0 * M_PI * simpson(integ, g.dt);
}

} // namespace nesslat
