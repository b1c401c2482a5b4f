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

#include "diracwalk/oracle.hpp"

#include <cmath>
#include <numbers>

#include <lapacke.h>

#include "diracwalk/error.hpp"
#include "fft.hpp"

namespace diracwalk {
namespace {

using Spinor = std::array<cplx, 4>;

double bin_wavenumber(const Grid &grid, std::size_t bin) {
    const long n = static_cast<long>(grid.n());
    const long m = static_cast<long>(bin) < n / 2 ? static_cast<long>(bin) : static_cast<long>(bin) - n;
    return 2.0 * std::numbers::pi * static_cast<double>(m) / grid.omega();
}

// Free Hamiltonian c alpha.k + beta m c^2 for one mode, s x s row-major.
std::vector<cplx> mode_hamiltonian(int dim, std::span<const double> k, const PhysParams &phys) {
    auto h = dirac_beta(dim);
    for (cplx &v : h)
        v *= phys.rest_energy();
    for (int axis = 0; axis < dim; ++axis) {
        const auto a = dirac_alpha(dim, axis);
        for (std::size_t i = 0; i < h.size(); ++i)
            h[i] += phys.c * k[axis] * a[i];
    }
    return h;
}

// exp(-i T M) for an s x s matrix with M^2 = E^2 I.
std::vector<cplx> involutory_exp(const std::vector<cplx> &m, double energy, double time, int s) {
    std::vector<cplx> u(m.size());
    const double cs = std::cos(energy * time);
    const double sn = energy > 0.0 ? std::sin(energy * time) / energy : time;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            u[i * s + j] = (i == j ? cs : 0.0) - cplx(0.0, sn) * m[i * s + j];
    return u;
}

void apply_at(SpinorField &field, std::size_t flat, const std::vector<cplx> &u) {
    const int s = field.components();
    Spinor in{}, out{};
    for (int a = 0; a < s; ++a)
        in[a] = field(a, flat);
    for (int a = 0; a < s; ++a) {
        cplx acc = 0.0;
        for (int b = 0; b < s; ++b)
            acc += u[a * s + b] * in[b];
        out[a] = acc;
    }
    for (int a = 0; a < s; ++a)
        field(a, flat) = out[a];
}

std::array<double, 3> mode_vector(const Grid &grid, std::size_t flat) {
    std::array<double, 3> k{};
    for (int axis = 0; axis < grid.dim(); ++axis)
        k[axis] = grid.wavenumber(grid.coordinate(flat, axis));
    return k;
}

double mode_energy(const Grid &grid, const std::array<double, 3> &k, const PhysParams &phys) {
    double k2 = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis)
        k2 += k[axis] * k[axis];
    return std::sqrt(phys.c * phys.c * k2 + phys.rest_energy() * phys.rest_energy());
}

} // namespace

std::vector<cplx> dense_hamiltonian(const DiracTerms &terms) {
    terms.validate();
    const Grid &grid = terms.grid;
    const PhysParams &phys = terms.phys;
    const int s = grid.spinor_components();
    const std::size_t points = grid.points();
    const std::size_t dim = static_cast<std::size_t>(s) * points;
    if (dim > kDenseBudget)
        fail(ErrorKind::Budget, "dense Hamiltonian of size " + std::to_string(dim) + " exceeds budget " +
                                    std::to_string(kDenseBudget));
    const std::size_t n = grid.n();
    std::vector<cplx> h(dim * dim, 0.0);
    const auto at = [&](int a, std::size_t f, int b, std::size_t g) -> cplx & {
        return h[(a * points + f) * dim + (b * points + g)];
    };

    // Spectral momentum matrix on one axis: (1/n) sum_p k_p exp(2 pi i p (x - x')/n).
    std::vector<cplx> pmat(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const long p = grid.centered(i);
                const double phase = 2.0 * std::numbers::pi * static_cast<double>(p) *
                                     (static_cast<double>(x) - static_cast<double>(y)) / static_cast<double>(n);
                acc += grid.wavenumber(i) * std::polar(1.0, phase);
            }
            pmat[x * n + y] = acc / static_cast<double>(n);
        }

    for (int axis = 0; axis < grid.dim(); ++axis) {
        const auto alpha = dirac_alpha(grid.dim(), axis);
        const std::size_t stride = grid.stride(axis);
        for (std::size_t f = 0; f < points; ++f) {
            const std::size_t xf = grid.coordinate(f, axis);
            const std::size_t base = f - xf * stride;
            for (std::size_t xg = 0; xg < n; ++xg) {
                const std::size_t g = base + xg * stride;
                const cplx pv = phys.c * pmat[xf * n + xg];
                for (int a = 0; a < s; ++a)
                    for (int b = 0; b < s; ++b)
                        if (alpha[a * s + b] != 0.0)
                            at(a, f, b, g) += alpha[a * s + b] * pv;
            }
        }
    }
    const auto beta = dirac_beta(grid.dim());
    for (std::size_t f = 0; f < points; ++f) {
        const double scalar = terms.has_scalar() ? -phys.e * terms.phi->at(grid, f) : 0.0;
        for (int a = 0; a < s; ++a) {
            at(a, f, a, f) += beta[a * s + a] * phys.rest_energy() + scalar;
        }
        for (int axis = 0; axis < grid.dim(); ++axis) {
            if (!terms.has_vector(axis))
                continue;
            const auto alpha = dirac_alpha(grid.dim(), axis);
            const double av = phys.c * phys.e * terms.vector_potential[axis]->at(grid, f);
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b)
                    at(a, f, b, f) += alpha[a * s + b] * av;
        }
    }
    return h;
}

// ---------------------------------------------------------------------------

struct ExactPropagator::Impl {
    explicit Impl(DiracTerms t) : terms(std::move(t)) {}
    DiracTerms terms;
    bool dense = false;
    std::size_t dim = 0;
    std::vector<cplx> vectors; // row-major, column j = eigenvector j
    std::vector<double> values;
};

ExactPropagator::ExactPropagator(DiracTerms terms) : impl_(std::make_unique<Impl>(std::move(terms))) {
    impl_->terms.validate();
    if (impl_->terms.is_free())
        return;
    impl_->dense = true;
    impl_->vectors = dense_hamiltonian(impl_->terms);
    const std::size_t dim = impl_->terms.grid.spinor_components() * impl_->terms.grid.points();
    impl_->dim = dim;
    impl_->values.resize(dim);
    const auto ld = static_cast<lapack_int>(dim);
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', ld, reinterpret_cast<lapack_complex_double *>(impl_->vectors.data()),
                       ld, impl_->values.data());
    if (info != 0)
        fail(ErrorKind::Domain, "dense eigendecomposition failed (zheevd info " + std::to_string(info) + ")");
}

ExactPropagator::~ExactPropagator() = default;
ExactPropagator::ExactPropagator(ExactPropagator &&) noexcept = default;
ExactPropagator &ExactPropagator::operator=(ExactPropagator &&) noexcept = default;

bool ExactPropagator::dense() const { return impl_->dense; }
std::span<const double> ExactPropagator::eigenvalues() const { return impl_->values; }

SpinorField ExactPropagator::evolve(const SpinorField &field, double total_time) const {
    const DiracTerms &terms = impl_->terms;
    if (!(field.grid() == terms.grid))
        fail(ErrorKind::Shape, "field grid does not match the propagator");
    if (!impl_->dense) {
        SpinorField mom = to_momentum(field);
        const Grid &grid = terms.grid;
        for (std::size_t f = 0; f < grid.points(); ++f) {
            const auto k = mode_vector(grid, f);
            const auto h = mode_hamiltonian(grid.dim(), k, terms.phys);
            apply_at(mom, f, involutory_exp(h, mode_energy(grid, k, terms.phys), total_time, field.components()));
        }
        return from_momentum(mom);
    }
    const std::size_t dim = impl_->dim;
    const std::vector<cplx> &v = impl_->vectors;
    const auto psi = field.amplitudes();
    std::vector<cplx> coeff(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx p = psi[i];
        const cplx *row = &v[i * dim];
        for (std::size_t j = 0; j < dim; ++j)
            coeff[j] += std::conj(row[j]) * p;
    }
    for (std::size_t j = 0; j < dim; ++j)
        coeff[j] *= std::polar(1.0, -impl_->values[j] * total_time);
    SpinorField out(field.grid());
    auto amps = out.amplitudes();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx *row = &v[i * dim];
        cplx acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j)
            acc += row[j] * coeff[j];
        amps[i] = acc;
    }
    return out;
}

SpinorField exact_evolve(const SpinorField &field, const DiracTerms &terms, double total_time) {
    return ExactPropagator(terms).evolve(field, total_time);
}

// ---------------------------------------------------------------------------

void apply_exp_op(SpinorField &field, const ExpOp &op, const DiracTerms &terms) {
    const Grid &grid = field.grid();
    const PhysParams &phys = terms.phys;
    const int s = field.components();
    const double tau = op.duration;
    switch (op.term) {
    case Term::kinetic: {
        detail::LineFft fft(grid.n());
        for (int a = 0; a < s; ++a)
            detail::for_each_line(field.component(a), grid, op.axis, [&](std::span<cplx> line) { fft.forward(line); });
        const auto alpha = dirac_alpha(grid.dim(), op.axis);
        for (std::size_t f = 0; f < grid.points(); ++f) {
            const double k = bin_wavenumber(grid, grid.coordinate(f, op.axis));
            apply_at(field, f, involutory_exp(alpha, 1.0, phys.c * k * tau, s));
        }
        const double scale = 1.0 / static_cast<double>(grid.n());
        for (int a = 0; a < s; ++a)
            detail::for_each_line(field.component(a), grid, op.axis, [&](std::span<cplx> line) {
                fft.backward(line);
                for (cplx &v : line)
                    v *= scale;
            });
        break;
    }
    case Term::mass: {
        const auto beta = dirac_beta(grid.dim());
        for (int a = 0; a < s; ++a) {
            const cplx ph = std::polar(1.0, -tau * phys.rest_energy() * beta[a * s + a].real());
            for (cplx &v : field.component(a))
                v *= ph;
        }
        break;
    }
    case Term::scalar: {
        if (!terms.phi)
            fail(ErrorKind::Domain, "scalar exponential requested without a scalar potential");
        for (std::size_t f = 0; f < grid.points(); ++f) {
            const cplx ph = std::polar(1.0, tau * phys.e * terms.phi->at(grid, f));
            for (int a = 0; a < s; ++a)
                field(a, f) *= ph;
        }
        break;
    }
    case Term::vector: {
        if (!terms.vector_potential[op.axis])
            fail(ErrorKind::Domain, "vector exponential requested without a vector potential on this axis");
        const auto alpha = dirac_alpha(grid.dim(), op.axis);
        for (std::size_t f = 0; f < grid.points(); ++f) {
            const double angle = tau * phys.c * phys.e * terms.vector_potential[op.axis]->at(grid, f);
            apply_at(field, f, involutory_exp(alpha, 1.0, angle, s));
        }
        break;
    }
    }
}

SpinorField split_step(const SpinorField &field, const DiracTerms &terms, const ProductFormula &formula, double t) {
    terms.validate();
    SpinorField out = field;
    for (const ExpOp &op : step_sequence(terms, formula, t))
        apply_exp_op(out, op, terms);
    return out;
}

double free_energy_expectation(const SpinorField &field, const PhysParams &phys) {
    const Grid &grid = field.grid();
    const SpinorField mom = to_momentum(field);
    const int s = field.components();
    double e = 0.0;
    for (std::size_t f = 0; f < grid.points(); ++f) {
        const auto h = mode_hamiltonian(grid.dim(), mode_vector(grid, f), phys);
        for (int a = 0; a < s; ++a)
            for (int b = 0; b < s; ++b)
                e += (std::conj(mom(a, f)) * h[a * s + b] * mom(b, f)).real();
    }
    return e;
}

double negative_energy_weight(const SpinorField &field, const PhysParams &phys) {
    const Grid &grid = field.grid();
    const SpinorField mom = to_momentum(field);
    const int s = field.components();
    double w = 0.0;
    for (std::size_t f = 0; f < grid.points(); ++f) {
        const auto k = mode_vector(grid, f);
        const double energy = mode_energy(grid, k, phys);
        if (!(energy > 0.0))
            continue;
        const auto h = mode_hamiltonian(grid.dim(), k, phys);
        for (int a = 0; a < s; ++a) {
            cplx acc = 0.5 * mom(a, f);
            for (int b = 0; b < s; ++b)
                acc -= 0.5 * h[a * s + b] / energy * mom(b, f);
            w += std::norm(acc);
        }
    }
    return w;
}

// ---------------------------------------------------------------------------

ZbSpectrum zitterbewegung_frequency(std::span<const double> times, std::span<const double> positions,
                                    double min_amplitude) {
    const std::size_t n = times.size();
    if (n != positions.size())
        fail(ErrorKind::Shape, "times and positions differ in length");
    if (n < 8)
        fail(ErrorKind::InsufficientData, "need at least 8 samples to estimate an oscillation");
    const double duration = times[n - 1] - times[0];
    if (!(duration > 0.0))
        fail(ErrorKind::InsufficientData, "trajectory spans no time");

    // Linear detrend.
    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        st += times[i];
        sx += positions[i];
        stt += times[i] * times[i];
        stx += times[i] * positions[i];
    }
    const double dn = static_cast<double>(n);
    const double slope = (dn * stx - st * sx) / (dn * stt - st * st);
    const double intercept = (sx - slope * st) / dn;
    std::vector<double> resid(n), window(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        resid[i] = positions[i] - (intercept + slope * times[i]);
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / (dn - 1.0)));
        wsum += window[i];
    }

    const double lowest = 2.0 * std::numbers::pi / duration;
    const double nyquist = std::numbers::pi * (dn - 1.0) / duration;
    const double step = lowest / 32.0;
    const auto amplitude = [&](double omega) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += window[i] * resid[i] * std::polar(1.0, -omega * (times[i] - times[0]));
        return 2.0 * std::abs(acc) / wsum;
    };
    std::vector<double> scan;
    for (double omega = lowest; omega <= nyquist; omega += step)
        scan.push_back(amplitude(omega));
    if (scan.size() < 3)
        fail(ErrorKind::InsufficientData, "too few samples per period to scan for an oscillation");
    std::size_t peak = 0;
    for (std::size_t i = 1; i < scan.size(); ++i)
        if (scan[i] > scan[peak])
            peak = i;

    ZbSpectrum out;
    out.amplitude = scan[peak];
    if (!(out.amplitude >= min_amplitude))
        return out;
    if (peak == 0)
        fail(ErrorKind::InsufficientData, "dominant oscillation period exceeds the trajectory length");
    double offset = 0.0;
    if (peak + 1 < scan.size()) {
        const double a = scan[peak - 1], b = scan[peak], c = scan[peak + 1];
        const double denom = a - 2.0 * b + c;
        if (denom != 0.0)
            offset = 0.5 * (a - c) / denom;
    }
    out.detected = true;
    out.angular_frequency = lowest + (static_cast<double>(peak) + offset) * step;
    return out;
}

} // namespace diracwalk
