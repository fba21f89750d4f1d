#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace ingleton {

/// Derivative-free simplex minimization.  Deterministic given the start
/// point and the fixed coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2); stops when the simplex diameter falls
/// below `tol`.
template <std::size_t N>
struct NelderMead {
    using Point = std::array<double, N>;

    double tol = 1e-10;
    long max_iter = 200000;
    double initial_step = 0.05;  // relative step, with an absolute floor

    template <class Fn>
    std::pair<Point, double> minimize(Fn&& f, const Point& start) const {
        constexpr std::size_t M = N + 1;
        std::array<Point, M> xs;
        std::array<double, M> fs;
        xs[0] = start;
        for (std::size_t i = 0; i < N; ++i) {
            xs[i + 1] = start;
            double step = std::max(std::abs(start[i]) * initial_step, 0.00025);
            xs[i + 1][i] += step;
        }
        for (std::size_t i = 0; i < M; ++i) fs[i] = f(xs[i]);

        auto order = [&] {
            std::array<std::size_t, M> idx;
            for (std::size_t i = 0; i < M; ++i) idx[i] = i;
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
            std::array<Point, M> nx;
            std::array<double, M> nf;
            for (std::size_t i = 0; i < M; ++i) { nx[i] = xs[idx[i]]; nf[i] = fs[idx[i]]; }
            xs = nx; fs = nf;
        };

        for (long it = 0; it < max_iter; ++it) {
            order();
            double diam = 0;
            for (std::size_t i = 1; i < M; ++i)
                for (std::size_t k = 0; k < N; ++k)
                    diam = std::max(diam, std::abs(xs[i][k] - xs[0][k]));
            if (diam < tol) break;

            Point centroid{};
            for (std::size_t i = 0; i + 1 < M; ++i)
                for (std::size_t k = 0; k < N; ++k) centroid[k] += xs[i][k] / double(N);

            auto affine = [&](double t) {
                Point p;
                for (std::size_t k = 0; k < N; ++k) p[k] = centroid[k] + t * (xs[M - 1][k] - centroid[k]);
                return p;
            };

            Point xr = affine(-1.0);
            double fr = f(xr);
            if (fr < fs[0]) {
                Point xe = affine(-2.0);
                double fe = f(xe);
                if (fe < fr) { xs[M - 1] = xe; fs[M - 1] = fe; }
                else         { xs[M - 1] = xr; fs[M - 1] = fr; }
                continue;
            }
            if (fr < fs[M - 2]) { xs[M - 1] = xr; fs[M - 1] = fr; continue; }
            // contraction (outside if the reflected point improved on the worst)
            Point xc = affine(fr < fs[M - 1] ? -0.5 : 0.5);
            double fc = f(xc);
            if (fc <= std::min(fr, fs[M - 1])) { xs[M - 1] = xc; fs[M - 1] = fc; continue; }
            // shrink toward the best vertex
            for (std::size_t i = 1; i < M; ++i) {
                for (std::size_t k = 0; k < N; ++k) xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
                fs[i] = f(xs[i]);
            }
        }
        order();
        return {xs[0], fs[0]};
    }
};

}  // namespace ingleton
