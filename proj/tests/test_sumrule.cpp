#include <doctest.h>

#include "nesslat/freefermion.hpp"
#include "nesslat/sumrule.hpp"

using namespace nesslat;

namespace {

CorrelationGrid wick_grid(const Occupation& occ, int zmax, double T, double dt) {
    WickEvaluator wick(occ);
    CorrFn corr = [&wick](int z, double t) { return wick.charge_bond_correlator(z, t); };
    return correlation_grid(corr, current_expectation(occ), zmax, T, dt);
}

} // namespace

TEST_CASE("overlap weights: brute force, infinite-L form, boundary cases") {
    auto brute = [](long L, long M, long z) {
        long s = 0;
        for (long x = -L; x <= 0; ++x)
            if (std::abs(x - z) <= M) ++s;
        return s;
    };
    for (long L : {0L, 1L, 3L, 8L})
        for (long M : {0L, 1L, 2L, 5L})
            for (long z = -L - M - 2; z <= M + 2; ++z)
                CHECK(overlap_weight(L, M, z) == brute(L, M, z));

    // the piecewise L -> infinity form agrees with finite L once L >= |z| + M
    for (long M : {1L, 3L})
        for (long z = -6; z <= M + 1; ++z)
            CHECK(overlap_weight(-1, M, z) == overlap_weight(100, M, z));
    CHECK(overlap_weight(-1, 2, -3) == 5);  // 2M + 1 plateau
    CHECK(overlap_weight(-1, 2, 0) == 3);   // M + 1 - z ramp
    CHECK(overlap_weight(-1, 2, 3) == 0);   // beyond the ramp
    CHECK_THROWS(overlap_weight(4, -1, 0));
}

TEST_CASE("correlation grid stores rho(z,t) = i/(2 pi sqrt(2 pi)) a(-z,-t)") {
    CorrFn corr = [](int w, double t) { return cd(w + 0.25 * t, 2.0 * w - t); };
    CorrelationGrid g = correlation_grid(corr, 0.1, 3, 1.0, 0.25);
    CHECK(g.tcount() == 9);
    CHECK(g.ts.front() == doctest::Approx(-1.0));
    const double pref = 1.0 / (2.0 * M_PI * std::sqrt(2.0 * M_PI));
    for (int z = -3; z <= 3; ++z)
        for (int it = 0; it < g.tcount(); ++it) {
            cd expect = pref * cd(0, 1) * corr(-z, -g.ts[it]);
            CHECK(std::abs(g.at(z, it) - expect) < 1e-15);
        }
    // multi-threaded fill is bit-identical
    CorrelationGrid g4 = correlation_grid(corr, 0.1, 3, 1.0, 0.25, 4);
    CHECK(max_abs(Mat(g.rho - g4.rho)) == 0.0);
}

TEST_CASE("infinite-temperature state: centered correlators vanish off-support at t=0") {
    CorrelationGrid g = wick_grid(infinite_temperature_occupation(32), 6, 1.0, 0.25);
    int it0 = g.tcount() / 2; // t = 0
    for (int z = -6; z <= 6; ++z) {
        if (std::abs(z) >= 2)
            CHECK(std::abs(g.at(z, it0)) < 1e-14); // disjoint supports, product state
    }
    // flat occupation also means zero current and zero integrand
    CHECK(g.omega_j == doctest::Approx(0.0));
    CHECK(std::abs(sumrule_integrand(g, 2, 1, it0)) < 1e-12);
}

TEST_CASE("sum rule on a small boosted sea: convergence in L and order swap") {
    Occupation occ = boosted_fermi(64, 0.5, M_PI / 8.0);
    TestWindow w = TestWindow::gaussian(1.0, 4.0, 0.1);
    CorrelationGrid g = wick_grid(occ, 40, w.T, w.dt);

    SumruleResult r8 = sumrule_integral(g, w, 8, 4);
    SumruleResult r16 = sumrule_integral(g, w, 16, 4);
    SumruleResult r32 = sumrule_integral(g, w, 32, 4);
    CHECK(r16.rel_dev < r8.rel_dev);
    CHECK(r32.rel_dev < 0.05);
    CHECK(r32.target == doctest::Approx(std::sqrt(2.0 * M_PI) * g.omega_j * w.f0()));

    // wrong order of limits: M >> L makes the integral vanish
    SumruleResult swapped = sumrule_integral(g, w, 4, 32);
    CHECK(std::abs(swapped.value) < 0.05 * std::abs(swapped.target));
}

TEST_CASE("term decomposition sums to the direct integral") {
    Occupation occ = boosted_fermi(64, 0.5, M_PI / 8.0);
    TestWindow w = TestWindow::gaussian(1.0, 4.0, 0.1);
    CorrelationGrid g = wick_grid(occ, 40, w.T, w.dt);
    int M = 4, Lbig = 32;
    TermDecomposition td = term_decomposition(g, w, M);
    SumruleResult direct = sumrule_integral(g, w, Lbig, M);
    CHECK(td.sum() == doctest::Approx(direct.value).epsilon(1e-6));
    CHECK_THROWS(term_decomposition(g, w, 40)); // zmax must exceed M
    CHECK_THROWS(sumrule_integrand(g, 64, 16, 0)); // zmax < L + M
}

TEST_CASE("synthetic plane-wave grid peaks the spectral density at (k0, eps0)") {
    double k0 = 0.8, e0 = -1.2;
    int zmax = 24;
    TestWindow w = TestWindow::gaussian(1.5, 6.0, 0.1);
    CorrelationGrid g;
    g.zmax = zmax;
    g.dt = w.dt;
    g.ts = w.ts;
    g.rho.resize(2 * zmax + 1, w.ts.size());
    for (int z = -zmax; z <= zmax; ++z)
        for (size_t it = 0; it < w.ts.size(); ++it)
            g.rho(z + zmax, it) = std::exp(cd(0, k0 * z - e0 * w.ts[it])) *
                                  std::exp(-z * z / 64.0);
    std::vector<double> ks, es;
    for (double k = -1.6; k <= 1.6 + 1e-9; k += 0.2) ks.push_back(k);
    for (double e = -2.4; e <= 2.4 + 1e-9; e += 0.3) es.push_back(e);
    SpectralDensity sd = spectral_density(g, w, ks, es);
    size_t bik = 0, bie = 0;
    double best = 0.0;
    for (size_t ik = 0; ik < ks.size(); ++ik)
        for (size_t ie = 0; ie < es.size(); ++ie)
            if (std::abs(sd.values(ik, ie)) > best) {
                best = std::abs(sd.values(ik, ie));
                bik = ik;
                bie = ie;
            }
    CHECK(ks[bik] == doctest::Approx(k0).epsilon(1e-12));
    CHECK(es[bie] == doctest::Approx(e0).epsilon(1e-12));

    // zero grid -> zero density
    g.rho.setZero();
    SpectralDensity zero = spectral_density(g, w, ks, es);
    CHECK(max_abs(zero.values) == 0.0);
}

TEST_CASE("theorem sum rule: boosted sea hits the target, S is real") {
    Occupation occ = boosted_fermi(64, 0.5, M_PI / 8.0);
    TestWindow w = TestWindow::gaussian(1.0, 4.0, 0.1);
    CorrelationGrid g = wick_grid(occ, 40, w.T, w.dt);
    TheoremResult th = theorem_sumrule(g, w, 6.0, 0.05);
    CHECK(th.rel_dev < 0.10);
    CHECK(std::abs(th.S.imag()) < 1e-8 * std::abs(th.S.real()));
    // the epsilon-route and the exact time-domain route agree
    double td = theorem_sumrule_timedomain(g, w);
    CHECK(th.S.real() == doctest::Approx(td).epsilon(1e-3));
    CHECK(th.target == doctest::Approx(g.omega_j * w.f0()));
}

TEST_CASE("equilibrium sea: theorem functional vanishes") {
    Occupation occ = boosted_fermi(64, 0.5, 0.0);
    TestWindow w = TestWindow::gaussian(1.0, 4.0, 0.1);
    CorrelationGrid g = wick_grid(occ, 40, w.T, w.dt);
    CHECK(std::abs(g.omega_j) < 1e-14);
    TheoremResult th = theorem_sumrule(g, w, 6.0, 0.05);
    CHECK(std::abs(th.S) < 1e-6);
}

TEST_CASE("whole construction is invariant under a lattice translation") {
    Occupation occ = boosted_fermi(48, 0.5, M_PI / 8.0);
    WickEvaluator wick(occ);
    CorrFn corr0 = [&wick](int z, double t) { return wick.charge_bond_correlator(z, t); };
    CorrFn corr1 = [&wick](int z, double t) {
        return wick.two_time(quad_charge(1), quad_bond(z + 1, 1.0, 0.0), t);
    };
    TestWindow w = TestWindow::gaussian(1.0, 4.0, 0.1);
    CorrelationGrid g0 = correlation_grid(corr0, current_expectation(occ), 20, w.T, w.dt);
    CorrelationGrid g1 = correlation_grid(corr1, current_expectation(occ), 20, w.T, w.dt);
    SumruleResult a = sumrule_integral(g0, w, 12, 4), b = sumrule_integral(g1, w, 12, 4);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-8));
}

TEST_CASE("edge decay ratio certifies the z truncation") {
    Occupation occ = boosted_fermi(64, 0.5, M_PI / 8.0);
    CorrelationGrid wide = wick_grid(occ, 30, 2.0, 0.1);
    CHECK(edge_decay_ratio(wide) < 5e-3); // sharp Fermi edge: slow power-law tail
    CorrelationGrid narrow = wick_grid(occ, 3, 2.0, 0.1);
    CHECK(edge_decay_ratio(narrow) > edge_decay_ratio(wide));
}
