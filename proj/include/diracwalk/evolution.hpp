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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diracwalk/gatesim.hpp"
#include "diracwalk/lattice.hpp"

namespace diracwalk {

/// Real function on the grid: either a sum of per-axis profiles
/// f(x1) + f(x2) + f(x3) (separable) or a full table over all grid points.
class GridFunction {
  public:
    /// One profile of n samples per axis; an empty profile means zero.
    static GridFunction separable(std::vector<std::vector<double>> per_axis);
    static GridFunction tabulated(std::vector<double> values);

    bool is_separable() const { return separable_; }
    const std::vector<double> &profile(int axis) const { return per_axis_.at(axis); }
    const std::vector<double> &values() const { return values_; }

    void validate(const Grid &grid) const;
    double at(const Grid &grid, std::size_t flat) const;
    std::vector<double> sample(const Grid &grid) const;
    double max_abs(const Grid &grid) const;
    bool is_zero() const;

  private:
    bool separable_ = true;
    std::vector<std::vector<double>> per_axis_;
    std::vector<double> values_;
};

/// Step potential of height v0 for positions >= edge along `axis`
/// (1D grids: the only axis).
GridFunction step_function(const Grid &grid, double v0, double edge, int axis = 0);

/// The four pieces of H = c alpha.(p + eA) + beta m c^2 - e phi:
/// kinetic c alpha.p, mass beta m c^2, scalar -e phi, vector c e alpha.A.
struct DiracTerms {
    Grid grid;
    PhysParams phys;
    std::optional<GridFunction> phi;
    std::array<std::optional<GridFunction>, 3> vector_potential;

    explicit DiracTerms(Grid g, PhysParams p = {}) : grid(g), phys(p) {}

    void validate() const;
    bool has_scalar() const { return phi && !phi->is_zero(); }
    bool has_vector(int axis) const { return vector_potential[axis] && !vector_potential[axis]->is_zero(); }
    bool has_vector() const;
    /// True when no potential breaks translation invariance.
    bool is_free() const { return !has_scalar() && !has_vector(); }

    /// c n pi / omega: the largest per-axis kinetic eigenvalue.
    double kinetic_norm() const;
    double mass_norm() const { return phys.rest_energy(); }
    double scalar_norm() const;
    /// c |e| max_x |A(x)|.
    double vector_norm() const;
    double norm_sum() const { return kinetic_norm() + mass_norm() + scalar_norm() + vector_norm(); }
};

/// Dirac matrices in the standard representation: 1+1D alpha^1 = sigma^1,
/// beta = sigma^3; 3+1D alpha^i = sigma^1 (x) sigma^i, beta = sigma^3 (x) I.
/// Row-major s x s.
std::vector<cplx> dirac_alpha(int dim, int axis);
std::vector<cplx> dirac_beta(int dim);
/// (beta + alpha^axis)/sqrt 2.
std::vector<cplx> pi_matrix(int dim, int axis);
/// The basis change as a gate: H in 1+1D, a TwoQubit gate on
/// (beta qubit, spin qubit) in 3+1D.
Gate pi_gate(int axis, const QubitLayout &layout);

struct ProductFormula {
    /// 1, or an even order 2k.
    int order = 2;

    void validate() const;
    int k() const { return order / 2; }
};

/// Suzuki weight u_k = 1 / (4 - 4^{1/(2k-1)}).
double suzuki_weight(int k);
/// Durations of the second-order blocks composing one order-2k step of length t.
std::vector<double> second_order_blocks(const ProductFormula &formula, double t);

enum class Term { kinetic, mass, scalar, vector };
std::string to_string(Term term);

/// exp(-i duration H_term[axis]).
struct ExpOp {
    Term term;
    int axis;
    double duration;
};

/// The splitting of one step of length t, shared by the circuit builder and
/// the classical split-step reference. Absent terms (m = 0, zero potentials)
/// are skipped and adjacent exponentials of the same term are merged.
std::vector<ExpOp> step_sequence(const DiracTerms &terms, const ProductFormula &formula, double t);

struct CircuitOptions {
    std::optional<double> qft_cutoff;
    double walsh_threshold = 0.0;
};

// Term builders. Following the time-splitting convention, builder time t
// realizes the exponential for a duration t/2.

/// exp(-(t/2) c alpha^axis d/dx_axis) with the spectral derivative.
Circuit kinetic_axis_circuit(int axis, double t, const Grid &grid, const QubitLayout &layout, double c = 1.0,
                             std::optional<double> qft_cutoff = std::nullopt);
/// exp(-i (t/2) beta m c^2): one Rz(t m c^2) on the beta qubit.
Circuit mass_coin_circuit(double t, double m, const QubitLayout &layout, double c = 1.0);
/// exp(i (t/2) e phi(x)).
Circuit scalar_potential_circuit(double t, const GridFunction &phi, double e, const Grid &grid,
                                 const QubitLayout &layout, double threshold = 0.0);
/// exp(-i (t/2) c e alpha^axis A_axis(x)).
Circuit vector_axis_circuit(int axis, double t, const GridFunction &a_axis, double e, double c, const Grid &grid,
                            const QubitLayout &layout, double threshold = 0.0);
/// Product over axes 1, 2, 3 of vector_axis_circuit.
Circuit vector_potential_circuit(double t, const std::array<std::optional<GridFunction>, 3> &a, double e, double c,
                                 const Grid &grid, const QubitLayout &layout, double threshold = 0.0);

/// Circuit for a single exponential of the sequence.
Circuit exp_op_circuit(const ExpOp &op, const DiracTerms &terms, const QubitLayout &layout,
                       const CircuitOptions &options = {});
/// Block label used for an exponential, e.g. "kinetic-x", "mass", "vector-z".
std::string block_label(const ExpOp &op);

Circuit trotter_step_circuit(const DiracTerms &terms, const ProductFormula &formula, double t,
                             const QubitLayout &layout, const CircuitOptions &options = {});

struct Observation {
    std::size_t step = 0;
    double time = 0.0;
    double norm = 0.0;
    std::array<double, 3> position{};
    double transmission = 0.0; // 1+1D only
};

/// Resamples time-dependent potentials; called with the midpoint of each step.
using PotentialSchedule = std::function<void(double midpoint, DiracTerms &terms)>;
using StepObserver = std::function<void(std::size_t step, double time, const Statevector &state)>;

struct EvolveOptions {
    CircuitOptions circuit;
    double barrier_position = 0.0;
    PotentialSchedule schedule;
    StepObserver observer;
    bool record = true;
};

Observation observe(const SpinorField &field, std::size_t step, double time, double barrier_position = 0.0);

/// Applies r steps of length T/r to `state`; returns the observations at
/// steps 0..r when options.record is set.
std::vector<Observation> evolve(Statevector &state, DiracTerms terms, const ProductFormula &formula, double total_time,
                                std::size_t steps, const EvolveOptions &options = {});

/// Upper bound on the number of exponentials for an order-2k product formula:
/// ceil(14 5^{2k} 7^{1+1/2k} [T norm_sum]^{1+1/2k} / eps^{1/2k}).
std::uint64_t n_exp_bound(int k, double total_time, double eps, double norm_sum);
std::uint64_t n_exp_bound(int k, double total_time, double eps, const DiracTerms &terms);

} // namespace diracwalk
