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

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace diracwalk {

using cplx = std::complex<double>;

enum class UnitSystem { natural, atomic };

std::string to_string(UnitSystem units);
UnitSystem unit_system_from_string(const std::string &name);

/// Speed of light in atomic units (CODATA 2018 inverse fine-structure constant).
inline constexpr double kAtomicSpeedOfLight = 137.035999;

/// Mass, charge and speed of light. The Hamiltonian is
/// H = c alpha.(p + eA) + beta m c^2 - e phi, which reduces to the
/// natural-units form when c = 1.
struct PhysParams {
    double m = 0.0;
    double e = 1.0;
    double c = 1.0;
    UnitSystem units = UnitSystem::natural;

    static PhysParams natural(double mass) { return {mass, 1.0, 1.0, UnitSystem::natural}; }
    static PhysParams atomic(double mass) { return {mass, 1.0, kAtomicSpeedOfLight, UnitSystem::atomic}; }

    void validate() const;
    double rest_energy() const { return m * c * c; }
};

/// Uniform periodic grid with n = 2^q points per axis over a cell of extent
/// omega. Grid index x in [0, n) maps to the centered index p = x - n/2, so
/// positions run over [-omega/2, omega/2). Flat indices are row-major with
/// axis 0 (x) slowest.
class Grid {
  public:
    Grid(int dim, std::size_t n, double omega, double n_star = 0.5);

    int dim() const { return dim_; }
    std::size_t n() const { return n_; }
    int qubits_per_axis() const { return q_; }
    double omega() const { return omega_; }
    double spacing() const { return omega_ / static_cast<double>(n_); }
    double n_star() const { return n_star_; }
    std::size_t points() const { return points_; }
    /// 2 spinor components in 1+1D, 4 in 3+1D.
    int spinor_components() const { return dim_ == 1 ? 2 : 4; }

    long centered(std::size_t index) const { return static_cast<long>(index) - static_cast<long>(n_ / 2); }
    std::size_t stride(int axis) const;
    std::size_t coordinate(std::size_t flat, int axis) const { return (flat / stride(axis)) % n_; }
    /// Physical position of grid index `index` along any axis.
    double position(std::size_t index) const;
    /// Wavenumber stored at momentum-space index `index` (mode p = index - n/2).
    double wavenumber(std::size_t index) const;

    bool operator==(const Grid &) const = default;

  private:
    int dim_;
    std::size_t n_;
    int q_;
    double omega_;
    double n_star_;
    std::size_t points_;
};

double position_grid(const Grid &grid, long p);
double momentum_grid(const Grid &grid, long p);
double cfl_timestep(const Grid &grid);

/// Spinor amplitudes over the grid, indexed (a, flat). Amplitudes carry the
/// cell-volume weight, so sum |alpha|^2 is the discrete form of the integral
/// of psi^dagger psi and equals 1 for a normalized field. Component a has the
/// beta block (large/small) as its most significant bit and spin as the least.
class SpinorField {
  public:
    explicit SpinorField(Grid grid);

    const Grid &grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t size() const { return amps_.size(); }

    cplx &operator()(int a, std::size_t flat) { return amps_[static_cast<std::size_t>(a) * grid_.points() + flat]; }
    const cplx &operator()(int a, std::size_t flat) const {
        return amps_[static_cast<std::size_t>(a) * grid_.points() + flat];
    }

    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> component(int a);
    std::span<const cplx> component(int a) const;

    double norm() const;
    void normalize();
    /// Probability per grid cell, summed over spinor components.
    std::vector<double> density() const;

  private:
    Grid grid_;
    int components_;
    std::vector<cplx> amps_;
};

/// Unitary DFT of every component along every axis. Momentum-space data uses
/// the same index convention as positions: mode p is stored at index p + n/2,
/// with amplitude (1/sqrt n) sum_x psi(x) exp(-i k_p r_x) per axis.
SpinorField to_momentum(const SpinorField &field);
SpinorField from_momentum(const SpinorField &field);

struct GaussianPacket {
    double sigma = 0.05;
    std::array<double, 3> p0{};
    std::array<double, 3> center{};
};

SpinorField gaussian_spinor_packet(const Grid &grid, const GaussianPacket &shape, std::span<const cplx> spinor_weights);

/// Positive-energy wave packet built in momentum space: the per-mode
/// projector P+(p) is applied to `reference`, weighted by
/// exp(-(p - p0)^2 dz^2) and a phase placing the packet at z0.
SpinorField positive_energy_packet(const Grid &grid, double p0, double z0, double dz, const PhysParams &phys,
                                   std::array<cplx, 2> reference = {cplx{1.0}, cplx{0.0}});

/// 2x2 projector onto the positive-energy branch of c alpha^1 p + beta m c^2,
/// row-major.
std::array<cplx, 4> positive_energy_projector(double p, const PhysParams &phys);

double position_expectation(const SpinorField &field, int axis);
double transmission_probability(const SpinorField &field, double barrier_position);

enum class Plane { xy, yz, xz };

struct DensityProjection {
    Plane plane;
    std::size_t n;
    std::vector<double> values; // n*n, row-major over (first axis, second axis)
    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

DensityProjection density_projection(const SpinorField &field, Plane plane);
/// Variance of the marginal density of a projection along its first (0) or
/// second (1) axis, in physical length units squared.
double projection_variance(const DensityProjection &projection, const Grid &grid, int which);

/// Periodic roll by whole cells along one axis.
SpinorField translate_cells(const SpinorField &field, int axis, long cells);

/// Text snapshot: '#' header lines (dim, n, omega, components, units), a
/// column header "a index re im", then one row per amplitude in storage
/// order with 17 significant digits.
void write_snapshot(std::ostream &os, const SpinorField &field, UnitSystem units);
void save_snapshot(const std::string &path, const SpinorField &field, UnitSystem units);

struct Snapshot {
    SpinorField field;
    UnitSystem units;
};
Snapshot read_snapshot(std::istream &is);
Snapshot load_snapshot(const std::string &path);

} // namespace diracwalk
