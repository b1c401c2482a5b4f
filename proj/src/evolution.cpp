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

#include "diracwalk/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "diracwalk/error.hpp"
#include "diracwalk/walsh.hpp"

namespace diracwalk {

GridFunction GridFunction::separable(std::vector<std::vector<double>> per_axis) {
    GridFunction f;
    f.separable_ = true;
    f.per_axis_ = std::move(per_axis);
    return f;
}

GridFunction GridFunction::tabulated(std::vector<double> values) {
    GridFunction f;
    f.separable_ = false;
    f.values_ = std::move(values);
    return f;
}

void GridFunction::validate(const Grid &grid) const {
    if (separable_) {
        if (per_axis_.size() != static_cast<std::size_t>(grid.dim()))
            fail(ErrorKind::Shape, "separable function needs one profile per axis");
        for (const auto &p : per_axis_)
            if (!p.empty() && p.size() != grid.n())
                fail(ErrorKind::Shape, "axis profile must have n samples");
    } else if (values_.size() != grid.points()) {
        fail(ErrorKind::Shape, "tabulated function must have n^dim samples");
    }
}

double GridFunction::at(const Grid &grid, std::size_t flat) const {
    if (!separable_)
        return values_[flat];
    double s = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis)
        if (!per_axis_[axis].empty())
            s += per_axis_[axis][grid.coordinate(flat, axis)];
    return s;
}

std::vector<double> GridFunction::sample(const Grid &grid) const {
    std::vector<double> out(grid.points());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = at(grid, i);
    return out;
}

double GridFunction::max_abs(const Grid &grid) const {
    double m = 0.0;
    if (separable_) {
        // Separable extremes: the largest |sum| is max(|sum of maxima|, |sum of minima|).
        double hi = 0.0, lo = 0.0;
        for (int axis = 0; axis < grid.dim(); ++axis) {
            const auto &p = per_axis_[axis];
            if (p.empty())
                continue;
            hi += *std::max_element(p.begin(), p.end());
            lo += *std::min_element(p.begin(), p.end());
        }
        return std::max(std::abs(hi), std::abs(lo));
    }
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

bool GridFunction::is_zero() const {
    const auto zero = [](const std::vector<double> &v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    };
    if (!separable_)
        return zero(values_);
    return std::all_of(per_axis_.begin(), per_axis_.end(), zero);
}

GridFunction step_function(const Grid &grid, double v0, double edge, int axis) {
    if (axis < 0 || axis >= grid.dim())
        fail(ErrorKind::Dimension, "step axis out of range");
    std::vector<std::vector<double>> per_axis(grid.dim());
    per_axis[axis].resize(grid.n());
    for (std::size_t x = 0; x < grid.n(); ++x)
        per_axis[axis][x] = grid.position(x) >= edge ? v0 : 0.0;
    return GridFunction::separable(std::move(per_axis));
}

// ---------------------------------------------------------------------------

void DiracTerms::validate() const {
    phys.validate();
    if (phi)
        phi->validate(grid);
    for (int axis = 0; axis < 3; ++axis) {
        if (!vector_potential[axis])
            continue;
        if (axis >= grid.dim())
            fail(ErrorKind::Dimension, "vector potential component beyond grid dimension");
        vector_potential[axis]->validate(grid);
    }
}

bool DiracTerms::has_vector() const {
    for (int axis = 0; axis < grid.dim(); ++axis)
        if (has_vector(axis))
            return true;
    return false;
}

double DiracTerms::kinetic_norm() const {
    return phys.c * static_cast<double>(grid.n()) * std::numbers::pi / grid.omega();
}

double DiracTerms::scalar_norm() const { return has_scalar() ? std::abs(phys.e) * phi->max_abs(grid) : 0.0; }

double DiracTerms::vector_norm() const {
    if (!has_vector())
        return 0.0;
    double m2 = 0.0;
    for (std::size_t flat = 0; flat < grid.points(); ++flat) {
        double s = 0.0;
        for (int axis = 0; axis < grid.dim(); ++axis)
            if (has_vector(axis)) {
                const double a = vector_potential[axis]->at(grid, flat);
                s += a * a;
            }
        m2 = std::max(m2, s);
    }
    return phys.c * std::abs(phys.e) * std::sqrt(m2);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<cplx> pauli(int which) {
    using namespace std::complex_literals;
    switch (which) {
    case 0: return {1.0, 0.0, 0.0, 1.0};
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -1i, 1i, 0.0};
    default: return {1.0, 0.0, 0.0, -1.0};
    }
}

std::vector<cplx> kron2(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    std::vector<cplx> out(16);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out[(2 * i + k) * 4 + (2 * j + l)] = a[i * 2 + j] * b[k * 2 + l];
    return out;
}

const char *axis_name(int axis) { return axis == 0 ? "x" : axis == 1 ? "y" : "z"; }

} // namespace

std::vector<cplx> dirac_alpha(int dim, int axis) {
    if (dim == 1) {
        if (axis != 0)
            fail(ErrorKind::Dimension, "1+1D has only alpha^1");
        return pauli(1);
    }
    if (axis < 0 || axis > 2)
        fail(ErrorKind::Dimension, "alpha index out of range");
    return kron2(pauli(1), pauli(axis + 1));
}

std::vector<cplx> dirac_beta(int dim) { return dim == 1 ? pauli(3) : kron2(pauli(3), pauli(0)); }

std::vector<cplx> pi_matrix(int dim, int axis) {
    auto m = dirac_alpha(dim, axis);
    const auto b = dirac_beta(dim);
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = (m[i] + b[i]) / std::numbers::sqrt2;
    return m;
}

Gate pi_gate(int axis, const QubitLayout &layout) {
    if (layout.dim() == 1) {
        if (axis != 0)
            fail(ErrorKind::Dimension, "1+1D has only one axis");
        return Gate::h(layout.beta_qubit());
    }
    const auto m = pi_matrix(3, axis);
    Matrix4 mat;
    std::copy(m.begin(), m.end(), mat.begin());
    return Gate::two_qubit(layout.beta_qubit(), layout.aux_qubit(0), mat, std::string("pi_") + axis_name(axis));
}

// ---------------------------------------------------------------------------

void ProductFormula::validate() const {
    if (order != 1 && (order < 2 || order % 2 != 0))
        fail(ErrorKind::Config, "product formula order must be 1 or an even number, got " + std::to_string(order));
}

double suzuki_weight(int k) {
    if (k < 2)
        fail(ErrorKind::Domain, "Suzuki weight defined for k >= 2");
    return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
}

std::vector<double> second_order_blocks(const ProductFormula &formula, double t) {
    formula.validate();
    if (formula.order == 1)
        fail(ErrorKind::Domain, "first-order formula has no second-order blocks");
    if (formula.order == 2)
        return {t};
    const double u = suzuki_weight(formula.k());
    const ProductFormula lower{formula.order - 2};
    std::vector<double> out;
    for (double w : {u, u, 1.0 - 4.0 * u, u, u}) {
        auto sub = second_order_blocks(lower, w * t);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

std::string to_string(Term term) {
    switch (term) {
    case Term::kinetic: return "kinetic";
    case Term::mass: return "mass";
    case Term::scalar: return "scalar";
    case Term::vector: return "vector";
    }
    return "?";
}

std::vector<ExpOp> step_sequence(const DiracTerms &terms, const ProductFormula &formula, double t) {
    formula.validate();
    const int dim = terms.grid.dim();
    const auto forward = [&](double tau) {
        std::vector<ExpOp> ops;
        for (int axis = 0; axis < dim; ++axis)
            ops.push_back({Term::kinetic, axis, tau});
        if (terms.phys.m != 0.0)
            ops.push_back({Term::mass, 0, tau});
        if (terms.has_scalar())
            ops.push_back({Term::scalar, 0, tau});
        for (int axis = 0; axis < dim; ++axis)
            if (terms.has_vector(axis))
                ops.push_back({Term::vector, axis, tau});
        return ops;
    };

    std::vector<ExpOp> raw;
    if (formula.order == 1) {
        raw = forward(t);
    } else {
        for (double block : second_order_blocks(formula, t)) {
            auto half = forward(block / 2.0);
            raw.insert(raw.end(), half.begin(), half.end());
            raw.insert(raw.end(), half.rbegin(), half.rend());
        }
    }

    std::vector<ExpOp> merged;
    for (const ExpOp &op : raw) {
        if (!merged.empty() && merged.back().term == op.term && merged.back().axis == op.axis)
            merged.back().duration += op.duration;
        else
            merged.push_back(op);
    }
    return merged;
}

// ---------------------------------------------------------------------------

Circuit kinetic_axis_circuit(int axis, double t, const Grid &grid, const QubitLayout &layout, double c,
                             std::optional<double> qft_cutoff) {
    if (axis < 0 || axis >= layout.dim())
        fail(ErrorKind::Dimension, "kinetic axis " + std::to_string(axis) + " exceeds dimension");
    const int nq = layout.total_qubits();
    const auto reg = layout.axis_register(axis);
    const int q = static_cast<int>(reg.size());
    const int beta = layout.beta_qubit();
    const double tau = t / 2.0;
    const Circuit qft = qft_circuit(nq, reg, qft_cutoff);

    // After the inverse QFT and an X on the register MSB the register value y
    // is the momentum index p = y - n/2, so
    //   k = (2 pi / omega)(-1/2 - sum_j 2^{j-1} Z_j)
    // and exp(-i tau c beta k) factors into one ZZ rotation per qubit plus an
    // aux offset.
    Circuit circ(nq);
    circ.push(pi_gate(axis, layout));
    circ.append(qft.inverse());
    circ.push(Gate::x(reg[q - 1]));
    for (int j = 0; j < q; ++j) {
        const double theta = tau * c * std::numbers::pi * std::ldexp(1.0, j) / grid.omega();
        if (theta == 0.0)
            continue;
        circ.push(Gate::cnot(beta, reg[j]));
        circ.push(Gate::rz(reg[j], -2.0 * theta));
        circ.push(Gate::cnot(beta, reg[j]));
    }
    const double offset = tau * c * std::numbers::pi / grid.omega();
    if (offset != 0.0)
        circ.push(Gate::rz(beta, -2.0 * offset));
    circ.push(Gate::x(reg[q - 1]));
    circ.append(qft);
    circ.push(pi_gate(axis, layout));
    circ.relabel(std::string("kinetic-") + axis_name(axis));
    return circ;
}

Circuit mass_coin_circuit(double t, double m, const QubitLayout &layout, double c) {
    if (m < 0.0)
        fail(ErrorKind::Domain, "mass must be non-negative");
    Circuit circ(layout.total_qubits());
    if (m == 0.0)
        return circ;
    circ.begin_block("mass");
    circ.push(Gate::rz(layout.beta_qubit(), t * m * c * c));
    return circ;
}

namespace {

// Diagonal exp(i f(x)) for f = scale * g over the position registers.
void append_diagonal(Circuit &circ, const GridFunction &g, double scale, const Grid &grid, const QubitLayout &layout,
                     double threshold, std::optional<DiagonalCondition> condition) {
    const auto emit = [&](std::span<const double> samples, std::span<const int> targets) {
        std::vector<double> f(samples.begin(), samples.end());
        for (double &v : f)
            v *= scale;
        WalshSpectrum spec = walsh_transform(f);
        spec.threshold = threshold;
        circ.append(synthesize_diagonal(spec, layout.total_qubits(), targets, condition));
    };
    if (g.is_separable()) {
        for (int axis = 0; axis < grid.dim(); ++axis)
            if (!g.profile(axis).empty())
                emit(g.profile(axis), layout.axis_register(axis));
    } else {
        emit(g.values(), layout.position_register());
    }
}

} // namespace

Circuit scalar_potential_circuit(double t, const GridFunction &phi, double e, const Grid &grid,
                                 const QubitLayout &layout, double threshold) {
    phi.validate(grid);
    Circuit circ(layout.total_qubits());
    append_diagonal(circ, phi, 0.5 * t * e, grid, layout, threshold, std::nullopt);
    circ.relabel("scalar");
    return circ;
}

Circuit vector_axis_circuit(int axis, double t, const GridFunction &a_axis, double e, double c, const Grid &grid,
                            const QubitLayout &layout, double threshold) {
    if (axis < 0 || axis >= layout.dim())
        fail(ErrorKind::Dimension, "vector potential axis exceeds dimension");
    a_axis.validate(grid);
    Circuit circ(layout.total_qubits());
    Circuit diag(layout.total_qubits());
    append_diagonal(diag, a_axis, -0.5 * t * c * e, grid, layout, threshold,
                    DiagonalCondition{layout.beta_qubit(), +1});
    if (!diag.empty()) {
        circ.push(pi_gate(axis, layout));
        circ.append(diag);
        circ.push(pi_gate(axis, layout));
    }
    circ.relabel(std::string("vector-") + axis_name(axis));
    return circ;
}

Circuit vector_potential_circuit(double t, const std::array<std::optional<GridFunction>, 3> &a, double e, double c,
                                 const Grid &grid, const QubitLayout &layout, double threshold) {
    Circuit circ(layout.total_qubits());
    for (int axis = 0; axis < grid.dim(); ++axis)
        if (a[axis])
            circ.append(vector_axis_circuit(axis, t, *a[axis], e, c, grid, layout, threshold));
    return circ;
}

std::string block_label(const ExpOp &op) {
    if (op.term == Term::mass || op.term == Term::scalar)
        return to_string(op.term);
    return to_string(op.term) + "-" + axis_name(op.axis);
}

Circuit exp_op_circuit(const ExpOp &op, const DiracTerms &terms, const QubitLayout &layout,
                       const CircuitOptions &options) {
    const double t = 2.0 * op.duration;
    const PhysParams &p = terms.phys;
    Circuit circ(layout.total_qubits());
    switch (op.term) {
    case Term::kinetic: circ = kinetic_axis_circuit(op.axis, t, terms.grid, layout, p.c, options.qft_cutoff); break;
    case Term::mass: circ = mass_coin_circuit(t, p.m, layout, p.c); break;
    case Term::scalar:
        circ = scalar_potential_circuit(t, *terms.phi, p.e, terms.grid, layout, options.walsh_threshold);
        break;
    case Term::vector:
        circ = vector_axis_circuit(op.axis, t, *terms.vector_potential[op.axis], p.e, p.c, terms.grid, layout,
                                   options.walsh_threshold);
        break;
    }
    circ.relabel(block_label(op));
    return circ;
}

Circuit trotter_step_circuit(const DiracTerms &terms, const ProductFormula &formula, double t,
                             const QubitLayout &layout, const CircuitOptions &options) {
    terms.validate();
    if (terms.grid.dim() != layout.dim() || terms.grid.qubits_per_axis() != layout.qubits_per_axis())
        fail(ErrorKind::Shape, "terms grid does not match qubit layout");
    Circuit circ(layout.total_qubits());
    for (const ExpOp &op : step_sequence(terms, formula, t))
        circ.append(exp_op_circuit(op, terms, layout, options));
    return circ;
}

// ---------------------------------------------------------------------------

Observation observe(const SpinorField &field, std::size_t step, double time, double barrier_position) {
    Observation o;
    o.step = step;
    o.time = time;
    o.norm = field.norm();
    for (int axis = 0; axis < field.grid().dim(); ++axis)
        o.position[axis] = position_expectation(field, axis);
    if (field.grid().dim() == 1)
        o.transmission = transmission_probability(field, barrier_position);
    return o;
}

std::vector<Observation> evolve(Statevector &state, DiracTerms terms, const ProductFormula &formula, double total_time,
                                std::size_t steps, const EvolveOptions &options) {
    if (steps < 1)
        fail(ErrorKind::Config, "evolve needs at least one step");
    const QubitLayout layout(terms.grid.dim(), terms.grid.qubits_per_axis(), state.num_qubits());
    if (layout.total_qubits() != state.num_qubits())
        fail(ErrorKind::Shape, "statevector does not match the grid layout");
    const double dt = total_time / static_cast<double>(steps);

    std::vector<Observation> trajectory;
    const auto record = [&](std::size_t step) {
        const double time = dt * static_cast<double>(step);
        if (options.record)
            trajectory.push_back(observe(decode(state, layout, terms.grid), step, time, options.barrier_position));
        if (options.observer)
            options.observer(step, time, state);
    };

    std::optional<Circuit> step_circuit;
    record(0);
    for (std::size_t s = 0; s < steps; ++s) {
        if (options.schedule) {
            options.schedule(dt * (static_cast<double>(s) + 0.5), terms);
            step_circuit.reset();
        }
        if (!step_circuit)
            step_circuit = trotter_step_circuit(terms, formula, dt, layout, options.circuit);
        run(*step_circuit, state);
        record(s + 1);
    }
    return trajectory;
}

std::uint64_t n_exp_bound(int k, double total_time, double eps, double norm_sum) {
    if (k < 1)
        fail(ErrorKind::Domain, "product formula parameter k must be >= 1");
    if (!(eps > 0.0))
        fail(ErrorKind::Domain, "error tolerance must be positive");
    const double power = 1.0 + 1.0 / (2.0 * k);
    const double value = 14.0 * std::pow(5.0, 2.0 * k) * std::pow(7.0, power) * std::pow(total_time * norm_sum, power) /
                         std::pow(eps, 1.0 / (2.0 * k));
    if (!std::isfinite(value) || value >= 1.8e19)
        fail(ErrorKind::Domain, "exponential-count bound overflows 64 bits");
    return static_cast<std::uint64_t>(std::ceil(value));
}

std::uint64_t n_exp_bound(int k, double total_time, double eps, const DiracTerms &terms) {
    return n_exp_bound(k, total_time, eps, terms.norm_sum());
}

} // namespace diracwalk
