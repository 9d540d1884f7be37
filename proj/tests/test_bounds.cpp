#include <doctest.h>

#include "nesslat/bounds.hpp"

using namespace nesslat;

namespace {

ModelSpec xxz1() { return builtin_model("xxz", {{"lambda", 1.0}}); }

} // namespace

TEST_CASE("group-velocity constant: 4 d^4 e^2 ||h||") {
    ModelSpec m = xxz1();
    // the isotropic bond has eigenvalues {1/4, 1/4, 1/4, -3/4}, so ||h|| = 3/4
    CHECK(operator_norm_dense(m.bond) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(group_velocity_constant(m) ==
          doctest::Approx(4.0 * 16.0 * std::exp(2.0) * 0.75).epsilon(1e-12));
}

TEST_CASE("light-cone bound: validity domain, symmetry, monotonicity") {
    ModelSpec m = xxz1();
    LRParams p = lr_params(m, charge_op(m, 0), charge_op(m, 0));
    CHECK(p.dA == 1);
    CHECK(p.normA == doctest::Approx(0.5));

    CHECK(!lr_valid(p, 2)); // |x| = dA + dB is outside the asserted domain
    CHECK(lr_valid(p, 3));
    CHECK_THROWS(lr_bound(p, 2, 0.1));

    for (int x : {3, 4, 7}) {
        CHECK(lr_bound(p, x, 0.3) == doctest::Approx(lr_bound(p, -x, 0.3)));
        CHECK(lr_bound(p, x, 0.3) == doctest::Approx(lr_bound(p, x, -0.3)));
        CHECK(lr_bound(p, x + 1, 0.3) < lr_bound(p, x, 0.3));
        CHECK(lr_bound(p, x, 0.4) > lr_bound(p, x, 0.3));
    }
    // exact exponential decay rate 1 in distance
    CHECK(lr_bound(p, 5, 0.2) / lr_bound(p, 6, 0.2) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("evolved-region envelope function Z_{M,L}") {
    ModelSpec m = xxz1();
    CHECK_THROWS(z_envelope(m, 3, 2, 0.1)); // needs L >= M
    CHECK_THROWS(z_envelope(m, 0, 2, 0.1)); // needs M > 0
    CHECK(z_envelope(m, 2, 4, 0.0) == doctest::Approx(0.0)); // no evolution, no deviation
    CHECK(z_envelope(m, 2, 4, 0.01) > 0.0);
    CHECK(z_envelope(m, 2, 4, 0.02) > z_envelope(m, 2, 4, 0.01));
    CHECK(z_envelope(m, 3, 6, 0.01) < z_envelope(m, 2, 4, 0.01)); // larger buffers help
}

TEST_CASE("cone measurement on a small ring matches direct commutator norms at t=0") {
    ModelSpec m = xxz1();
    LocalOperator A = charge_op(m, 0);
    std::vector<int> xs{-3, -2, -1, 0, 1, 2, 3};
    std::vector<double> ts{-0.4, 0.0, 0.4};
    Eigen::MatrixXd meas = detail::cone_measure(m, A, A, xs, ts, 8, 16384);

    LatticeGeometry ring = LatticeGeometry::ring(8, 2);
    for (size_t ix = 0; ix < xs.size(); ++ix) {
        double direct = operator_norm(commutator(translate(A, xs[ix], ring), A, ring));
        CHECK(meas(ix, 1) == doctest::Approx(direct).epsilon(1e-10));
        if (std::abs(xs[ix]) >= 2) CHECK(meas(ix, 1) <= 1e-14); // exact spacelike zero
        // real H, A, B: time reversal is complex conjugation, norms agree at +-t
        CHECK(meas(ix, 0) == doctest::Approx(meas(ix, 2)).epsilon(1e-12));
    }

    // measured norms sit below the light-cone bound wherever it applies
    LRParams p = lr_params(m, A, A);
    for (size_t ix = 0; ix < xs.size(); ++ix)
        if (lr_valid(p, xs[ix]))
            for (size_t it = 0; it < ts.size(); ++it)
                CHECK(meas(ix, it) <= lr_bound(p, xs[ix], ts[it]));
}

TEST_CASE("ring guard gives up past max_ring") {
    ModelSpec m = xxz1();
    LocalOperator A = charge_op(m, 0);
    RingGuardOptions opts;
    opts.start_ring = 4;
    opts.max_ring = 4; // no room for even one guard step
    CHECK_THROWS(cone_profile(m, A, A, {0, 1}, {0.0, 0.1}, opts));
}

TEST_CASE("envelope deviation on a small ring: dense oracle and envelope bound") {
    ModelSpec m = xxz1();
    const int R = 8, L = 3, M = 1;
    const double t = 0.01;
    double fast = envelope_deviation_on_ring(m, L, M, t, R);

    // dense oracle: build [N_{[-L,0]}, H_reg(t) - H_reg] with full matrices
    LatticeGeometry geom = LatticeGeometry::ring(R, 2);
    SpectralData sd = diagonalize(m, geom);
    Mat N = Mat::Zero(1 << R, 1 << R);
    for (int x = -L; x <= 0; ++x) add_embedded(N, charge_op(m, x), geom);
    LocalOperator Hreg = region_hamiltonian(m, {-M, M + 1}, geom);
    Mat Hm = Mat::Zero(1 << R, 1 << R);
    add_embedded(Hm, Hreg, geom);
    Mat Ht = evolve(Hreg, sd, t) - Hm;
    Mat C = cd(0, 1) * (N * Ht - Ht * N);
    double oracle = operator_norm_dense(C);
    CHECK(fast == doctest::Approx(oracle).epsilon(1e-5));

    // and it sits below the analytic envelope
    CHECK(fast <= z_envelope(m, M, L, t));
    CHECK_THROWS(envelope_deviation_on_ring(m, 4, 2, t, 6)); // ring too small
}
