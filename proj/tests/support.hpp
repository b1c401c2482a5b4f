// Copyright 2026 The diracwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "diracwalk/evolution.hpp"
#include "diracwalk/lattice.hpp"

namespace diracwalk::testing {

inline SpinorField random_field(const Grid &grid, std::mt19937_64 &rng) {
    std::normal_distribution<double> d;
    SpinorField f(grid);
    for (cplx &v : f.amplitudes())
        v = {d(rng), d(rng)};
    f.normalize();
    return f;
}

inline std::vector<cplx> random_vector(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> d;
    std::vector<cplx> v(n);
    double s = 0.0;
    for (cplx &x : v) {
        x = {d(rng), d(rng)};
        s += std::norm(x);
    }
    for (cplx &x : v)
        x /= std::sqrt(s);
    return v;
}

inline double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(const SpinorField &a, const SpinorField &b) { return max_diff(a.amplitudes(), b.amplitudes()); }

/// y = M x for row-major M.
inline std::vector<cplx> matvec(const std::vector<cplx> &m, std::span<const cplx> x) {
    const std::size_t n = x.size();
    std::vector<cplx> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += m[i * n + j] * x[j];
        y[i] = acc;
    }
    return y;
}

inline double max_abs_row_sum(const std::vector<cplx> &m, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += std::abs(m[i * n + j]);
        best = std::max(best, s);
    }
    return best;
}

/// exp(-i tau M) x by scaled Taylor series; independent of any
/// eigendecomposition. Each sub-step keeps |tau M / s| <= 1/4.
inline std::vector<cplx> expm_apply(const std::vector<cplx> &m, double tau, std::vector<cplx> x) {
    const std::size_t n = x.size();
    const double norm = max_abs_row_sum(m, n) * std::abs(tau);
    const int sub = std::max(1, static_cast<int>(std::ceil(norm * 4.0)));
    const cplx factor(0.0, -tau / sub);
    for (int s = 0; s < sub; ++s) {
        std::vector<cplx> term = x, acc = x;
        for (int k = 1; k < 30; ++k) {
            term = matvec(m, term);
            for (cplx &v : term)
                v *= factor / static_cast<double>(k);
            double mag = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc[i] += term[i];
                mag = std::max(mag, std::abs(term[i]));
            }
            if (mag < 1e-18)
                break;
        }
        x = std::move(acc);
    }
    return x;
}

inline std::vector<cplx> matmul(const std::vector<cplx> &a, const std::vector<cplx> &b, std::size_t n) {
    std::vector<cplx> c(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == 0.0)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                c[i * n + j] += aik * b[k * n + j];
        }
    return c;
}

/// Full matrix exp(-i tau M), row-major, by scaling and squaring a Taylor
/// series.
inline std::vector<cplx> expm(const std::vector<cplx> &m, double tau, std::size_t n) {
    const double norm = max_abs_row_sum(m, n) * std::abs(tau);
    int squarings = 0;
    while (norm / std::ldexp(1.0, squarings) > 0.25)
        ++squarings;
    const cplx factor(0.0, -tau / std::ldexp(1.0, squarings));
    std::vector<cplx> a(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        a[i] = factor * m[i];
    std::vector<cplx> out(n * n, 0.0), term(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        out[i * n + i] = term[i * n + i] = 1.0;
    for (int k = 1; k < 24; ++k) {
        term = matmul(term, a, n);
        for (cplx &v : term)
            v /= static_cast<double>(k);
        for (std::size_t i = 0; i < n * n; ++i)
            out[i] += term[i];
    }
    for (int s = 0; s < squarings; ++s)
        out = matmul(out, out, n);
    return out;
}

inline std::vector<cplx> subtract(std::vector<cplx> a, const std::vector<cplx> &b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] -= b[i];
    return a;
}

/// c alpha^axis p_axis built from the plane-wave sum, independent of the FFT.
inline std::vector<cplx> axis_kinetic_matrix(const Grid &g, int axis, double c) {
    const std::size_t n = g.n(), pts = g.points();
    const int s = g.spinor_components();
    const std::size_t dim = pts * static_cast<std::size_t>(s);
    std::vector<cplx> d(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (long p = -static_cast<long>(n / 2); p < static_cast<long>(n / 2); ++p) {
                const double k = 2.0 * std::numbers::pi * static_cast<double>(p) / g.omega();
                const double arg = 2.0 * std::numbers::pi * static_cast<double>(p) *
                                   (static_cast<double>(x) - static_cast<double>(y)) / static_cast<double>(n);
                d[x * n + y] += k * std::polar(1.0, arg) / static_cast<double>(n);
            }
    const auto alpha = dirac_alpha(g.dim(), axis);
    std::vector<cplx> m(dim * dim, 0.0);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            if (alpha[a * s + b] == 0.0)
                continue;
            for (std::size_t fi = 0; fi < pts; ++fi)
                for (std::size_t fj = 0; fj < pts; ++fj) {
                    bool along = true;
                    for (int other = 0; other < g.dim(); ++other)
                        if (other != axis && g.coordinate(fi, other) != g.coordinate(fj, other))
                            along = false;
                    if (along)
                        m[(a * pts + fi) * dim + b * pts + fj] =
                            c * alpha[a * s + b] * d[g.coordinate(fi, axis) * n + g.coordinate(fj, axis)];
                }
        }
    return m;
}

} // namespace diracwalk::testing
