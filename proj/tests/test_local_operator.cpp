#include <doctest.h>

#include "nesslat/model.hpp" // kron + local-operator algebra

#include <random>

using namespace nesslat;

namespace {

Mat random_matrix(int n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
    return m;
}

LocalOperator random_local(Support sup, int d, std::mt19937& rng) {
    return make_local(sup, d, random_matrix(int(detail::ipow(d, sup.length())), rng));
}

// cyclic left shift by one site on a ring of n sites with local dimension d
Mat shift_matrix(int n, int d) {
    const std::int64_t D = detail::ipow(d, n);
    Mat P = Mat::Zero(D, D);
    for (std::int64_t I = 0; I < D; ++I) {
        // site 0 is most significant; shifting the operator right by one site
        // maps basis index I = (i_0 i_1 ... i_{n-1}) to (i_{n-1} i_0 ... i_{n-2})
        std::int64_t J = (I / d) + (I % d) * detail::ipow(d, n - 1);
        P(J, I) = 1.0;
    }
    return P;
}

} // namespace

TEST_CASE("identity and make_local basics") {
    LocalOperator id = identity_op({2, 4}, 2);
    CHECK(id.support.length() == 3);
    CHECK(max_abs(Mat(id.matrix - Mat::Identity(8, 8))) == 0.0);
    CHECK_THROWS(make_local({0, 1}, 2, Mat::Identity(3, 3))); // wrong dimension
}

TEST_CASE("tensor_embed against explicit Kronecker products") {
    std::mt19937 rng(7);
    Mat a = random_matrix(2, rng);
    LocalOperator A = make_local({0, 0}, 2, a);
    LatticeGeometry g = LatticeGeometry::open(-1, 1, 2);

    Mat id = Mat::Identity(2, 2);
    LocalOperator left = tensor_embed(A, {0, 1}, g);
    CHECK(max_abs(Mat(left.matrix - kron(Mat(a), id))) == 0.0);
    LocalOperator right = tensor_embed(A, {-1, 0}, g);
    CHECK(max_abs(Mat(right.matrix - kron(id, Mat(a)))) == 0.0);
    LocalOperator mid = tensor_embed(A, {-1, 1}, g);
    CHECK(max_abs(Mat(mid.matrix - kron(kron(id, Mat(a)), id))) == 0.0);
}

TEST_CASE("embedding preserves the operator norm") {
    std::mt19937 rng(8);
    LatticeGeometry g = LatticeGeometry::open(0, 4, 2);
    LocalOperator A = random_local({1, 2}, 2, rng);
    LocalOperator big = tensor_embed(A, {0, 4}, g);
    CHECK(operator_norm(big) == doctest::Approx(operator_norm(A)).epsilon(1e-12));
}

TEST_CASE("multiply, add, commutator agree with full-space matrices") {
    std::mt19937 rng(9);
    LatticeGeometry g = LatticeGeometry::open(0, 4, 2);
    for (auto [sa, sb] : {std::pair<Support, Support>{{0, 1}, {1, 2}},
                          {{0, 1}, {3, 4}},
                          {{1, 3}, {2, 4}},
                          {{2, 2}, {2, 3}}}) {
        LocalOperator A = random_local(sa, 2, rng), B = random_local(sb, 2, rng);
        Mat fa = to_full(A, g), fb = to_full(B, g);
        CHECK(max_abs(Mat(to_full(multiply(A, B, g), g) - fa * fb)) < 1e-12);
        CHECK(max_abs(Mat(to_full(add(A, B, g), g) - (fa + fb))) < 1e-12);
        CHECK(max_abs(Mat(to_full(commutator(A, B, g), g) - (fa * fb - fb * fa))) < 1e-12);
    }
}

TEST_CASE("disjoint supports commute exactly") {
    std::mt19937 rng(10);
    LatticeGeometry g = LatticeGeometry::open(0, 5, 2);
    LocalOperator A = random_local({0, 1}, 2, rng), B = random_local({3, 5}, 2, rng);
    CHECK(max_abs(commutator(A, B, g).matrix) == 0.0);
}

TEST_CASE("commutator norm bound and Jacobi identity") {
    std::mt19937 rng(11);
    LatticeGeometry g = LatticeGeometry::open(0, 3, 2);
    LocalOperator A = random_local({0, 1}, 2, rng);
    LocalOperator B = random_local({1, 2}, 2, rng);
    LocalOperator C = random_local({2, 3}, 2, rng);
    CHECK(operator_norm(commutator(A, B, g)) <= 2.0 * operator_norm(A) * operator_norm(B) + 1e-10);

    LocalOperator j1 = commutator(commutator(A, B, g), C, g);
    LocalOperator j2 = commutator(commutator(B, C, g), A, g);
    LocalOperator j3 = commutator(commutator(C, A, g), B, g);
    CHECK(max_abs(add(add(j1, j2, g), j3, g).matrix) < 1e-10);
}

TEST_CASE("adjoint and scale") {
    std::mt19937 rng(12);
    LocalOperator A = random_local({0, 1}, 2, rng);
    CHECK(max_abs(Mat(adjoint(A).matrix - A.matrix.adjoint())) == 0.0);
    CHECK(max_abs(Mat(scale(A, cd(0, 2)).matrix - cd(0, 2) * A.matrix)) == 0.0);
}

TEST_CASE("ring translation matches the cyclic shift permutation") {
    std::mt19937 rng(13);
    const int R = 4;
    LatticeGeometry g = LatticeGeometry::ring(R, 2);
    LocalOperator A = random_local({0, 1}, 2, rng);
    Mat P = shift_matrix(R, 2);
    Mat cur = to_full(A, g);
    for (int s = 1; s <= R; ++s) {
        cur = P * cur * P.adjoint();
        CHECK(max_abs(Mat(to_full(translate(A, s, g), g) - cur)) < 1e-12);
    }
    // full revolution is the identity map
    CHECK(max_abs(Mat(to_full(translate(A, R, g), g) - to_full(A, g))) < 1e-12);
}

TEST_CASE("ring seam: operators crossing the wrap point") {
    std::mt19937 rng(14);
    const int R = 4;
    LatticeGeometry g = LatticeGeometry::ring(R, 2);
    LocalOperator A = random_local({3, 4}, 2, rng); // sites 3 and 0
    LocalOperator B = random_local({0, 1}, 2, rng);
    Mat fa = to_full(A, g), fb = to_full(B, g);
    CHECK(max_abs(Mat(to_full(multiply(A, B, g), g) - fa * fb)) < 1e-12);
    CHECK(max_abs(Mat(to_full(commutator(A, B, g), g) - (fa * fb - fb * fa))) < 1e-12);

    // seam operator equals its translate by -3 conjugated back
    Mat P = shift_matrix(R, 2);
    LocalOperator A0 = translate(A, -3, g);
    Mat expect = P * P * P * to_full(A0, g) * (P * P * P).adjoint();
    CHECK(max_abs(Mat(fa - expect)) < 1e-12);
}

TEST_CASE("open-interval geometry rejects out-of-range supports") {
    LatticeGeometry g = LatticeGeometry::open(0, 3, 2);
    CHECK(g.contains({0, 3}));
    CHECK(!g.contains({-1, 2}));
    CHECK(!g.contains({2, 4}));
}
