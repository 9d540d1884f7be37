#pragma once

#include "nesslat/geometry.hpp"
#include "nesslat/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace nesslat {

// Finitely supported observable: contiguous site interval plus a dense
// complex matrix of dimension d^|support|, tensor factors ordered by site
// index ascending with the leftmost site as the most significant index.
struct LocalOperator {
    Support support;
    int local_dim = 2;
    Mat matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

namespace detail {

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

} // namespace detail

inline LocalOperator identity_op(Support sup, int d) {
    auto D = detail::ipow(d, sup.length());
    return {sup, d, Mat::Identity(D, D)};
}

inline LocalOperator make_local(Support sup, int d, Mat m) {
    if (m.rows() != m.cols() || m.rows() != detail::ipow(d, sup.length()))
        throw std::invalid_argument("local operator matrix dimension does not match d^|support|");
    return {sup, d, std::move(m)};
}

// Embed A into a target interval. The target must cover A's sites: either by
// integer containment, or (ring mode) after reduction mod R, in which case
// A's arc may sit across the target's seam. Tensor factors of the result are
// ordered by the target's own site order.
inline LocalOperator embed_general(const LocalOperator& A, Support target,
                                   const LatticeGeometry& geom) {
    const int d = A.local_dim;
    const int lenA = A.support.length(), lenT = target.length();
    if (!geom.contains(target)) throw std::domain_error("embed: target outside lattice");
    if (geom.is_ring() && lenT > geom.ring_size)
        throw std::domain_error("embed: target longer than ring");

    std::vector<int> pos(lenA); // position of A's p-th site inside target
    for (int p = 0; p < lenA; ++p) {
        int q = A.support.a + p - target.a;
        if (geom.is_ring()) q = ((q % geom.ring_size) + geom.ring_size) % geom.ring_size;
        if (q < 0 || q >= lenT) throw std::domain_error("embed: target does not contain support");
        pos[p] = q;
    }

    const auto D = detail::ipow(d, lenT);
    std::vector<std::int64_t> stride(lenT);
    for (int q = 0; q < lenT; ++q) stride[q] = detail::ipow(d, lenT - 1 - q);
    std::vector<std::int64_t> strideA(lenA);
    for (int p = 0; p < lenA; ++p) strideA[p] = detail::ipow(d, lenA - 1 - p);

    Mat out = Mat::Zero(D, D);
    const auto mA = A.matrix.rows();
    std::vector<int> digits(lenA);
    for (std::int64_t J = 0; J < D; ++J) {
        std::int64_t cA = 0;
        for (int p = 0; p < lenA; ++p) {
            digits[p] = static_cast<int>((J / stride[pos[p]]) % d);
            cA += digits[p] * strideA[p];
        }
        for (std::int64_t r = 0; r < mA; ++r) {
            cd v = A.matrix(r, cA);
            if (v == cd(0.0, 0.0)) continue;
            std::int64_t I = J;
            for (int p = 0; p < lenA; ++p) {
                int rd = static_cast<int>((r / strideA[p]) % d);
                I += (rd - digits[p]) * stride[pos[p]];
            }
            out(I, J) += v;
        }
    }
    return {target, d, std::move(out)};
}

// A tensor identity on target \ support; requires integer containment.
inline LocalOperator tensor_embed(const LocalOperator& A, Support target,
                                  const LatticeGeometry& geom) {
    if (target.a > A.support.a || target.b < A.support.b)
        throw std::domain_error("tensor_embed: target does not contain support");
    return embed_general(A, target, geom);
}

namespace detail {

// Smallest contiguous interval covering both supports. On a ring, one operand
// may be re-labelled by a multiple of R to find the shorter arc; if the union
// still covers the whole circle the result acts on all R sites.
inline Support merge_support(Support s1, Support s2, const LatticeGeometry& geom,
                             int* shift2 = nullptr) {
    if (!geom.is_ring()) {
        Support h = hull(s1, s2);
        if (!geom.contains(h)) throw std::domain_error("operator product exceeds open lattice bounds");
        if (shift2) *shift2 = 0;
        return h;
    }
    const int R = geom.ring_size;
    int c1 = s1.a + s1.b, c2 = s2.a + s2.b;
    int k0 = static_cast<int>(std::lround(double(c1 - c2) / (2.0 * R)));
    Support best{};
    int bestlen = -1, bestk = 0;
    for (int k = k0 - 1; k <= k0 + 1; ++k) {
        Support h = hull(s1, {s2.a + k * R, s2.b + k * R});
        if (bestlen < 0 || h.length() < bestlen) { bestlen = h.length(); best = h; bestk = k; }
    }
    if (bestlen >= R) best = {s1.a, s1.a + R - 1}; // whole ring
    if (shift2) *shift2 = bestk;
    return best;
}

} // namespace detail

inline LocalOperator multiply(const LocalOperator& A, const LocalOperator& B,
                              const LatticeGeometry& geom) {
    if (A.local_dim != B.local_dim) throw std::invalid_argument("local_dim mismatch");
    int k = 0;
    Support target = detail::merge_support(A.support, B.support, geom, &k);
    LocalOperator Bs = B;
    if (geom.is_ring() && k != 0)
        Bs.support = {B.support.a + k * geom.ring_size, B.support.b + k * geom.ring_size};
    LocalOperator Ae = embed_general(A, target, geom);
    LocalOperator Be = embed_general(Bs, target, geom);
    return {target, A.local_dim, Ae.matrix * Be.matrix};
}

inline LocalOperator commutator(const LocalOperator& A, const LocalOperator& B,
                                const LatticeGeometry& geom) {
    int k = 0;
    Support target = detail::merge_support(A.support, B.support, geom, &k);
    LocalOperator Bs = B;
    if (geom.is_ring() && k != 0)
        Bs.support = {B.support.a + k * geom.ring_size, B.support.b + k * geom.ring_size};
    LocalOperator Ae = embed_general(A, target, geom);
    LocalOperator Be = embed_general(Bs, target, geom);
    return {target, A.local_dim, Ae.matrix * Be.matrix - Be.matrix * Ae.matrix};
}

inline LocalOperator add(const LocalOperator& A, const LocalOperator& B,
                         const LatticeGeometry& geom, cd ca = 1.0, cd cb = 1.0) {
    int k = 0;
    Support target = detail::merge_support(A.support, B.support, geom, &k);
    LocalOperator Bs = B;
    if (geom.is_ring() && k != 0)
        Bs.support = {B.support.a + k * geom.ring_size, B.support.b + k * geom.ring_size};
    LocalOperator Ae = embed_general(A, target, geom);
    LocalOperator Be = embed_general(Bs, target, geom);
    return {target, A.local_dim, ca * Ae.matrix + cb * Be.matrix};
}

inline LocalOperator adjoint(const LocalOperator& A) {
    return {A.support, A.local_dim, A.matrix.adjoint()};
}

inline LocalOperator scale(const LocalOperator& A, cd c) {
    return {A.support, A.local_dim, c * A.matrix};
}

inline double operator_norm(const LocalOperator& A) { return operator_norm_dense(A.matrix); }

inline LocalOperator translate(const LocalOperator& A, int x, const LatticeGeometry& geom) {
    Support s{A.support.a + x, A.support.b + x};
    if (!geom.is_ring() && !geom.contains(s))
        throw std::domain_error("translate: support leaves open lattice");
    return {s, A.local_dim, A.matrix};
}

// Dense embedding onto the whole lattice (site order: lo..hi, or 0..R-1).
inline Mat to_full(const LocalOperator& A, const LatticeGeometry& geom) {
    Support all = geom.is_ring() ? Support{0, geom.ring_size - 1} : Support{geom.lo, geom.hi};
    return embed_general(A, all, geom).matrix;
}

} // namespace nesslat
