#pragma once

#include "nesslat/linalg.hpp"

#include <cmath>

namespace nesslat {

// Composite Simpson on a uniform grid with an odd number of points.
inline double simpson(const std::vector<double>& v, double dt) {
    if (v.size() < 3 || v.size() % 2 == 0)
        throw std::invalid_argument("simpson: need an odd number of points >= 3");
    double s = v.front() + v.back();
    for (size_t i = 1; i + 1 < v.size(); ++i) s += v[i] * (i % 2 ? 4.0 : 2.0);
    return s * dt / 3.0;
}

inline cd simpson_cd(const std::vector<cd>& v, double dt) {
    if (v.size() < 3 || v.size() % 2 == 0)
        throw std::invalid_argument("simpson: need an odd number of points >= 3");
    cd s = v.front() + v.back();
    for (size_t i = 1; i + 1 < v.size(); ++i) s += v[i] * (i % 2 ? 4.0 : 2.0);
    return s * (dt / 3.0);
}

// Compactly supported test function f on [-T, T], sampled on a uniform grid
// symmetric about t = 0, with its Fourier transform
// f~(eps) = (1/sqrt(2 pi)) int f(t) e^{i eps t} dt.
struct TestWindow {
    enum class Shape { GaussianTruncated, Hann, Custom };

    Shape shape = Shape::GaussianTruncated;
    double T = 6.0;
    double sigma = 1.5; // gaussian width
    double dt = 0.05;
    std::vector<double> ts;
    std::vector<double> f;

    int half() const { return (static_cast<int>(ts.size()) - 1) / 2; }

    static TestWindow gaussian(double sigma, double T, double dt) {
        if (dt > sigma / 8.0)
            throw std::invalid_argument("window: quadrature step too coarse (need dt <= sigma/8)");
        TestWindow w;
        w.shape = Shape::GaussianTruncated;
        w.sigma = sigma;
        w.init_grid(T, dt);
        for (size_t i = 0; i < w.ts.size(); ++i)
            w.f[i] = std::exp(-w.ts[i] * w.ts[i] / (2.0 * sigma * sigma));
        return w;
    }

    static TestWindow hann(double T, double dt) {
        TestWindow w;
        w.shape = Shape::Hann;
        w.init_grid(T, dt);
        for (size_t i = 0; i < w.ts.size(); ++i)
            w.f[i] = 0.5 * (1.0 + std::cos(M_PI * w.ts[i] / T));
        return w;
    }

    static TestWindow custom(double T, double dt, std::vector<double> samples) {
        TestWindow w;
        w.shape = Shape::Custom;
        w.init_grid(T, dt);
        if (samples.size() != w.ts.size())
            throw std::invalid_argument("window: wrong number of custom samples");
        w.f = std::move(samples);
        return w;
    }

    cd ftilde(double eps) const {
        std::vector<cd> integ(ts.size());
        for (size_t i = 0; i < ts.size(); ++i) integ[i] = f[i] * std::exp(cd(0, eps * ts[i]));
        return simpson_cd(integ, dt) / std::sqrt(2.0 * M_PI);
    }

    double f0() const { return ftilde(0.0).real(); }

private:
    void init_grid(double T_, double dt_) {
        int m = static_cast<int>(std::llround(T_ / dt_));
        if (m < 2) throw std::invalid_argument("window: support too short for the step");
        T = T_;
        dt = T_ / m; // exact uniform grid hitting both endpoints
        ts.resize(2 * m + 1);
        f.assign(2 * m + 1, 0.0);
        for (int i = 0; i <= 2 * m; ++i) ts[i] = dt * (i - m);
    }
};

} // namespace nesslat
