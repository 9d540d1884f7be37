#pragma once

#include <stdexcept>
#include <string>

namespace nesslat {

// Site interval [a, b], inclusive. On a ring, site labels are arbitrary
// integers understood mod R; an interval of length <= R is a contiguous arc.
struct Support {
    int a = 0;
    int b = 0;

    int length() const { return b - a + 1; }
};

inline Support hull(const Support& s1, const Support& s2) {
    return {std::min(s1.a, s2.a), std::max(s1.b, s2.b)};
}

struct LatticeGeometry {
    enum class Mode { OpenInterval, Ring };

    Mode mode = Mode::OpenInterval;
    int lo = 0;        // open mode: first site
    int hi = 0;        // open mode: last site
    int ring_size = 0; // ring mode: R >= 2
    int local_dim = 2; // d = N+1 >= 2

    static LatticeGeometry open(int lo, int hi, int d = 2) {
        if (hi - lo + 1 < 2 || d < 2) throw std::invalid_argument("open lattice needs >= 2 sites, d >= 2");
        return {Mode::OpenInterval, lo, hi, 0, d};
    }
    static LatticeGeometry ring(int R, int d = 2) {
        if (R < 2 || d < 2) throw std::invalid_argument("ring needs R >= 2, d >= 2");
        return {Mode::Ring, 0, 0, R, d};
    }

    bool is_ring() const { return mode == Mode::Ring; }
    int site_count() const { return is_ring() ? ring_size : hi - lo + 1; }

    // physical site index in 0..site_count()-1
    int site_index(int s) const {
        if (is_ring()) {
            int r = s % ring_size;
            return r < 0 ? r + ring_size : r;
        }
        if (s < lo || s > hi) throw std::domain_error("site " + std::to_string(s) + " outside open lattice");
        return s - lo;
    }

    bool contains(const Support& sup) const {
        if (is_ring()) return sup.length() <= ring_size;
        return sup.a >= lo && sup.b <= hi;
    }
};

} // namespace nesslat
