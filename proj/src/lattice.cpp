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

#include "diracwalk/lattice.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "diracwalk/error.hpp"
#include "fft.hpp"

namespace diracwalk {

std::string to_string(UnitSystem units) { return units == UnitSystem::atomic ? "atomic" : "natural"; }

UnitSystem unit_system_from_string(const std::string &name) {
    if (name == "natural")
        return UnitSystem::natural;
    if (name == "atomic")
        return UnitSystem::atomic;
    fail(ErrorKind::Config, "unknown unit system '" + name + "' (expected natural or atomic)");
}

void PhysParams::validate() const {
    if (!(m >= 0.0) || !std::isfinite(m))
        fail(ErrorKind::Config, "mass must be finite and non-negative");
    if (!(c > 0.0) || !std::isfinite(c))
        fail(ErrorKind::Config, "speed of light must be finite and positive");
    if (!std::isfinite(e))
        fail(ErrorKind::Config, "charge must be finite");
}

Grid::Grid(int dim, std::size_t n, double omega, double n_star) : dim_(dim), n_(n), omega_(omega), n_star_(n_star) {
    if (dim != 1 && dim != 3)
        fail(ErrorKind::Dimension, "grid dimension must be 1 or 3, got " + std::to_string(dim));
    if (n < 2 || !std::has_single_bit(n))
        fail(ErrorKind::Shape, "points per axis must be a power of two >= 2, got " + std::to_string(n));
    if (!(omega > 0.0) || !std::isfinite(omega))
        fail(ErrorKind::Domain, "cell extent omega must be positive");
    q_ = std::countr_zero(n);
    points_ = 1;
    for (int i = 0; i < dim; ++i)
        points_ *= n;
}

std::size_t Grid::stride(int axis) const {
    std::size_t s = 1;
    for (int i = axis + 1; i < dim_; ++i)
        s *= n_;
    return s;
}

double Grid::position(std::size_t index) const { return static_cast<double>(centered(index)) * omega_ / n_; }

double Grid::wavenumber(std::size_t index) const {
    return 2.0 * std::numbers::pi * static_cast<double>(centered(index)) / omega_;
}

namespace {
void check_centered(const Grid &grid, long p) {
    const long half = static_cast<long>(grid.n() / 2);
    if (p < -half || p >= half)
        fail(ErrorKind::Domain, "grid index " + std::to_string(p) + " outside [-n/2, n/2)");
}
} // namespace

double position_grid(const Grid &grid, long p) {
    check_centered(grid, p);
    return static_cast<double>(p) * grid.omega() / static_cast<double>(grid.n());
}

double momentum_grid(const Grid &grid, long p) {
    check_centered(grid, p);
    return 2.0 * std::numbers::pi * static_cast<double>(p) / grid.omega();
}

double cfl_timestep(const Grid &grid) {
    const double twice = 2.0 * grid.n_star();
    if (!(twice >= 1.0) || twice != std::round(twice))
        fail(ErrorKind::Config, "n_star must be a positive half-integer");
    return grid.n_star() * grid.omega() / static_cast<double>(grid.n());
}

// ---------------------------------------------------------------------------

SpinorField::SpinorField(Grid grid)
    : grid_(grid), components_(grid.spinor_components()),
      amps_(static_cast<std::size_t>(components_) * grid.points()) {}

std::span<cplx> SpinorField::component(int a) {
    return std::span<cplx>(amps_).subspan(static_cast<std::size_t>(a) * grid_.points(), grid_.points());
}

std::span<const cplx> SpinorField::component(int a) const {
    return std::span<const cplx>(amps_).subspan(static_cast<std::size_t>(a) * grid_.points(), grid_.points());
}

double SpinorField::norm() const {
    double s = 0.0;
    for (const cplx &v : amps_)
        s += std::norm(v);
    return std::sqrt(s);
}

void SpinorField::normalize() {
    const double nrm = norm();
    if (!(nrm > 0.0))
        fail(ErrorKind::Degenerate, "cannot normalize a zero field");
    for (cplx &v : amps_)
        v /= nrm;
}

std::vector<double> SpinorField::density() const {
    std::vector<double> rho(grid_.points(), 0.0);
    for (int a = 0; a < components_; ++a) {
        auto comp = component(a);
        for (std::size_t i = 0; i < rho.size(); ++i)
            rho[i] += std::norm(comp[i]);
    }
    return rho;
}

// ---------------------------------------------------------------------------

namespace {

// Centered positions make exp(-i k_p r_x) = (-1)^p exp(-2 pi i p x / n); the
// sign factor is folded in around the plain FFT.
void spectral_transform(SpinorField &field, bool to_mom) {
    const Grid &grid = field.grid();
    const std::size_t n = grid.n();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    detail::LineFft fft(n);
    std::vector<cplx> tmp(n);
    for (int a = 0; a < field.components(); ++a) {
        for (int axis = 0; axis < grid.dim(); ++axis) {
            detail::for_each_line(field.component(a), grid, axis, [&](std::span<cplx> line) {
                if (to_mom) {
                    fft.forward(line);
                    // FFT bin (p mod n) -> storage index p + n/2.
                    for (std::size_t i = 0; i < n; ++i) {
                        const long p = grid.centered(i);
                        const std::size_t bin = static_cast<std::size_t>((p + static_cast<long>(n)) % static_cast<long>(n));
                        tmp[i] = line[bin] * ((p & 1) ? -scale : scale);
                    }
                } else {
                    for (std::size_t i = 0; i < n; ++i) {
                        const long p = grid.centered(i);
                        const std::size_t bin = static_cast<std::size_t>((p + static_cast<long>(n)) % static_cast<long>(n));
                        tmp[bin] = line[i] * ((p & 1) ? -scale : scale);
                    }
                    fft.backward(tmp);
                }
                std::copy(tmp.begin(), tmp.end(), line.begin());
            });
        }
    }
}

} // namespace

SpinorField to_momentum(const SpinorField &field) {
    SpinorField out = field;
    spectral_transform(out, true);
    return out;
}

SpinorField from_momentum(const SpinorField &field) {
    SpinorField out = field;
    spectral_transform(out, false);
    return out;
}

// ---------------------------------------------------------------------------

SpinorField gaussian_spinor_packet(const Grid &grid, const GaussianPacket &shape, std::span<const cplx> spinor_weights) {
    if (!(shape.sigma > 0.0))
        fail(ErrorKind::Domain, "packet width sigma must be positive");
    if (spinor_weights.size() != static_cast<std::size_t>(grid.spinor_components()))
        fail(ErrorKind::Shape, "spinor weight count must equal the number of spinor components");
    double wnorm = 0.0;
    for (const cplx &w : spinor_weights)
        wnorm += std::norm(w);
    if (!(wnorm > 0.0))
        fail(ErrorKind::Degenerate, "spinor weights are all zero");
    if (shape.sigma < 2.0 * grid.spacing())
        warn("gaussian packet under-resolved: sigma " + std::to_string(shape.sigma) + " < 2 * spacing " +
             std::to_string(grid.spacing()));

    const std::size_t n = grid.n();
    // Per-axis profiles, combined as a tensor product.
    std::vector<std::vector<cplx>> profile(grid.dim(), std::vector<cplx>(n));
    for (int axis = 0; axis < grid.dim(); ++axis) {
        if (std::abs(shape.center[axis]) + 4.0 * shape.sigma > 0.5 * grid.omega())
            warn("gaussian packet support reaches the periodic boundary on axis " + std::to_string(axis));
        for (std::size_t x = 0; x < n; ++x) {
            const double r = grid.position(x);
            const double d = r - shape.center[axis];
            profile[axis][x] = std::polar(std::exp(-d * d / (4.0 * shape.sigma * shape.sigma)), shape.p0[axis] * r);
        }
    }

    SpinorField field(grid);
    for (std::size_t flat = 0; flat < grid.points(); ++flat) {
        cplx v = 1.0;
        for (int axis = 0; axis < grid.dim(); ++axis)
            v *= profile[axis][grid.coordinate(flat, axis)];
        for (int a = 0; a < field.components(); ++a)
            field(a, flat) = spinor_weights[a] * v;
    }
    field.normalize();
    return field;
}

std::array<cplx, 4> positive_energy_projector(double p, const PhysParams &phys) {
    const double cp = phys.c * p;
    const double mc2 = phys.rest_energy();
    const double energy = std::hypot(cp, mc2);
    if (!(energy > 0.0))
        fail(ErrorKind::Degenerate, "positive-energy projector undefined at m = 0, p = 0");
    return {0.5 * (1.0 + mc2 / energy), 0.5 * cp / energy, 0.5 * cp / energy, 0.5 * (1.0 - mc2 / energy)};
}

SpinorField positive_energy_packet(const Grid &grid, double p0, double z0, double dz, const PhysParams &phys,
                                   std::array<cplx, 2> reference) {
    if (grid.dim() != 1)
        fail(ErrorKind::Dimension, "positive_energy_packet is defined for 1+1D grids only");
    if (!(dz > 0.0))
        fail(ErrorKind::Domain, "packet width dz must be positive");
    phys.validate();
    if (phys.m == 0.0 && p0 == 0.0)
        fail(ErrorKind::Degenerate, "m = 0 with central momentum 0 puts the packet on the undefined zero mode");

    SpinorField mom(grid);
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const double k = grid.wavenumber(i);
        // The massless zero mode has no particle branch; it is left empty.
        if (phys.m == 0.0 && k == 0.0)
            continue;
        const auto proj = positive_energy_projector(k, phys);
        const double envelope = std::exp(-(k - p0) * (k - p0) * dz * dz);
        const cplx weight = std::polar(envelope, -k * z0);
        mom(0, i) = weight * (proj[0] * reference[0] + proj[1] * reference[1]);
        mom(1, i) = weight * (proj[2] * reference[0] + proj[3] * reference[1]);
    }
    if (!(mom.norm() > 0.0))
        fail(ErrorKind::Degenerate, "reference spinor has no positive-energy component");
    SpinorField field = from_momentum(mom);
    field.normalize();
    return field;
}

// ---------------------------------------------------------------------------

double position_expectation(const SpinorField &field, int axis) {
    const Grid &grid = field.grid();
    if (axis < 0 || axis >= grid.dim())
        fail(ErrorKind::Dimension, "axis out of range");
    const auto rho = field.density();
    double s = 0.0;
    for (std::size_t flat = 0; flat < rho.size(); ++flat)
        s += grid.position(grid.coordinate(flat, axis)) * rho[flat];
    return s;
}

double transmission_probability(const SpinorField &field, double barrier_position) {
    const Grid &grid = field.grid();
    if (grid.dim() != 1)
        fail(ErrorKind::Dimension, "transmission_probability is defined for 1+1D fields");
    const auto rho = field.density();
    double s = 0.0;
    for (std::size_t x = 0; x < rho.size(); ++x)
        if (grid.position(x) > barrier_position)
            s += rho[x];
    return s;
}

DensityProjection density_projection(const SpinorField &field, Plane plane) {
    const Grid &grid = field.grid();
    if (grid.dim() != 3)
        fail(ErrorKind::Dimension, "density_projection requires a 3+1D field");
    int first = 0, second = 1;
    if (plane == Plane::yz) {
        first = 1;
        second = 2;
    } else if (plane == Plane::xz) {
        first = 0;
        second = 2;
    }
    const std::size_t n = grid.n();
    DensityProjection out{plane, n, std::vector<double>(n * n, 0.0)};
    const auto rho = field.density();
    for (std::size_t flat = 0; flat < rho.size(); ++flat)
        out.values[grid.coordinate(flat, first) * n + grid.coordinate(flat, second)] += rho[flat];
    return out;
}

double projection_variance(const DensityProjection &projection, const Grid &grid, int which) {
    const std::size_t n = projection.n;
    std::vector<double> marginal(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            marginal[which == 0 ? i : j] += projection.at(i, j);
            total += projection.at(i, j);
        }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        mean += grid.position(i) * marginal[i];
    mean /= total;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = grid.position(i) - mean;
        var += d * d * marginal[i];
    }
    return var / total;
}

SpinorField translate_cells(const SpinorField &field, int axis, long cells) {
    const Grid &grid = field.grid();
    if (axis < 0 || axis >= grid.dim())
        fail(ErrorKind::Dimension, "axis out of range");
    const long n = static_cast<long>(grid.n());
    const std::size_t stride = grid.stride(axis);
    SpinorField out(grid);
    for (int a = 0; a < field.components(); ++a)
        for (std::size_t flat = 0; flat < grid.points(); ++flat) {
            const long x = static_cast<long>(grid.coordinate(flat, axis));
            const long shifted = ((x + cells) % n + n) % n;
            const std::size_t dest = flat + (static_cast<std::size_t>(shifted) - static_cast<std::size_t>(x)) * stride;
            out(a, dest) = field(a, flat);
        }
    return out;
}

// ---------------------------------------------------------------------------

void write_snapshot(std::ostream &os, const SpinorField &field, UnitSystem units) {
    const Grid &grid = field.grid();
    os << "# diracwalk spinor snapshot v1\n";
    os << "# dim " << grid.dim() << '\n';
    os << "# n " << grid.n() << '\n';
    os << std::setprecision(17);
    os << "# omega " << grid.omega() << '\n';
    os << "# n_star " << grid.n_star() << '\n';
    os << "# components " << field.components() << '\n';
    os << "# units " << to_string(units) << '\n';
    os << "a index re im\n";
    for (int a = 0; a < field.components(); ++a)
        for (std::size_t i = 0; i < grid.points(); ++i) {
            const cplx v = field(a, i);
            os << a << ' ' << i << ' ' << v.real() << ' ' << v.imag() << '\n';
        }
}

void save_snapshot(const std::string &path, const SpinorField &field, UnitSystem units) {
    std::ofstream os(path);
    if (!os)
        fail(ErrorKind::Io, "cannot open snapshot for writing: " + path);
    write_snapshot(os, field, units);
}

Snapshot read_snapshot(std::istream &is) {
    std::map<std::string, std::string> header;
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) == 0) {
            std::istringstream ls(line.substr(2));
            std::string key, value;
            ls >> key >> value;
            if (!value.empty())
                header[key] = value;
            continue;
        }
        if (line != "a index re im")
            fail(ErrorKind::Io, "snapshot: expected column header, got '" + line + "'");
        break;
    }
    for (const char *key : {"dim", "n", "omega", "components", "units"})
        if (!header.count(key))
            fail(ErrorKind::Io, std::string("snapshot: missing header field ") + key);
    const double n_star = header.count("n_star") ? std::stod(header["n_star"]) : 0.5;
    Grid grid(std::stoi(header["dim"]), std::stoul(header["n"]), std::stod(header["omega"]), n_star);
    SpinorField field(grid);
    if (std::stoi(header["components"]) != field.components())
        fail(ErrorKind::Io, "snapshot: component count inconsistent with dimension");
    std::size_t rows = 0;
    int a;
    std::size_t index;
    double re, im;
    while (is >> a >> index >> re >> im) {
        if (a < 0 || a >= field.components() || index >= grid.points())
            fail(ErrorKind::Io, "snapshot: row index out of range");
        field(a, index) = {re, im};
        ++rows;
    }
    if (rows != field.size())
        fail(ErrorKind::Io, "snapshot: expected " + std::to_string(field.size()) + " rows, read " + std::to_string(rows));
    return {std::move(field), unit_system_from_string(header["units"])};
}

Snapshot load_snapshot(const std::string &path) {
    std::ifstream is(path);
    if (!is)
        fail(ErrorKind::Io, "cannot open snapshot: " + path);
    return read_snapshot(is);
}

} // namespace diracwalk
