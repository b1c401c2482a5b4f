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

#include "diracwalk/gatesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "diracwalk/error.hpp"

namespace diracwalk {

QubitLayout::QubitLayout(int dim, int qubits_per_axis, int max_qubits) : dim_(dim), q_(qubits_per_axis) {
    if (dim != 1 && dim != 3)
        fail(ErrorKind::Config, "layout dimension must be 1 or 3");
    if (qubits_per_axis < 1)
        fail(ErrorKind::Config, "need at least one qubit per axis");
    if (total_qubits() > max_qubits) {
        std::ostringstream os;
        os << "layout needs " << total_qubits() << " qubits (statevector "
           << statevector_bytes(total_qubits()) / (1024.0 * 1024.0 * 1024.0) << " GiB), cap is " << max_qubits;
        fail(ErrorKind::Resource, os.str());
    }
}

QubitLayout QubitLayout::for_grid(const Grid &grid, int max_qubits) {
    return QubitLayout(grid.dim(), grid.qubits_per_axis(), max_qubits);
}

std::vector<int> QubitLayout::axis_register(int axis) const {
    std::vector<int> reg(q_);
    for (int b = 0; b < q_; ++b)
        reg[b] = position_qubit(axis, b);
    return reg;
}

std::vector<int> QubitLayout::position_register() const {
    std::vector<int> reg(dim_ * q_);
    for (int b = 0; b < dim_ * q_; ++b)
        reg[b] = b;
    return reg;
}

double statevector_bytes(int qubits) { return std::ldexp(static_cast<double>(sizeof(cplx)), qubits); }

std::string to_string(GateKind kind) {
    switch (kind) {
    case GateKind::X: return "x";
    case GateKind::H: return "h";
    case GateKind::Rz: return "rz";
    case GateKind::Phase: return "phase";
    case GateKind::CNOT: return "cnot";
    case GateKind::CPhase: return "cphase";
    case GateKind::Swap: return "swap";
    case GateKind::TwoQubit: return "u2q";
    case GateKind::GlobalPhase: return "gphase";
    }
    return "?";
}

// ---------------------------------------------------------------------------

Gate Gate::two_qubit(int high, int low, const Matrix4 &m, std::string name) {
    double err = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += std::conj(m[k * 4 + i]) * m[k * 4 + j];
            err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    if (err > 1e-14)
        fail(ErrorKind::Domain, "two-qubit gate '" + name + "' is not unitary (deviation " + std::to_string(err) + ")");
    Gate g{GateKind::TwoQubit, {high, low}, 0.0, nullptr, {}};
    g.matrix = std::make_shared<const Matrix4>(m);
    g.name = std::move(name);
    return g;
}

int Gate::arity() const {
    switch (kind) {
    case GateKind::GlobalPhase: return 0;
    case GateKind::CNOT:
    case GateKind::CPhase:
    case GateKind::Swap:
    case GateKind::TwoQubit: return 2;
    default: return 1;
    }
}

Gate Gate::inverse() const {
    Gate g = *this;
    switch (kind) {
    case GateKind::Rz:
    case GateKind::Phase:
    case GateKind::CPhase:
    case GateKind::GlobalPhase: g.angle = -angle; break;
    case GateKind::TwoQubit: {
        Matrix4 adj;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                adj[i * 4 + j] = std::conj((*matrix)[j * 4 + i]);
        g.matrix = std::make_shared<const Matrix4>(adj);
        g.name = name + "^dag";
        break;
    }
    default: break;
    }
    return g;
}

// ---------------------------------------------------------------------------

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 62)
        fail(ErrorKind::Config, "circuit qubit count out of range");
}

void Circuit::begin_block(std::string label) {
    if (!blocks_.empty() && blocks_.back().begin == blocks_.back().end)
        blocks_.pop_back();
    blocks_.push_back({std::move(label), gates_.size(), gates_.size()});
}

void Circuit::check(const Gate &gate) const {
    for (int i = 0; i < gate.arity(); ++i)
        if (gate.qubits[i] < 0 || gate.qubits[i] >= num_qubits_)
            fail(ErrorKind::Shape, "gate target " + std::to_string(gate.qubits[i]) + " outside circuit of " +
                                       std::to_string(num_qubits_) + " qubits");
    if (gate.arity() == 2 && gate.qubits[0] == gate.qubits[1])
        fail(ErrorKind::Shape, "two-qubit gate acts twice on qubit " + std::to_string(gate.qubits[0]));
}

void Circuit::push(Gate gate) {
    check(gate);
    if (blocks_.empty())
        blocks_.push_back({"unlabeled", gates_.size(), gates_.size()});
    gates_.push_back(std::move(gate));
    blocks_.back().end = gates_.size();
}

void Circuit::append(const Circuit &other) {
    if (other.num_qubits_ > num_qubits_)
        fail(ErrorKind::Shape, "appended circuit is wider than the target");
    for (const Block &b : other.blocks_) {
        if (b.begin == b.end)
            continue;
        begin_block(b.label);
        for (std::size_t i = b.begin; i < b.end; ++i)
            push(other.gates_[i]);
    }
}

void Circuit::append_as(const Circuit &other, std::string label) {
    if (other.empty())
        return;
    begin_block(std::move(label));
    for (const Gate &g : other.gates_)
        push(g);
}

void Circuit::relabel(std::string label) {
    blocks_.clear();
    if (!gates_.empty())
        blocks_.push_back({std::move(label), 0, gates_.size()});
}

Circuit Circuit::inverse() const {
    Circuit out(num_qubits_);
    for (auto b = blocks_.rbegin(); b != blocks_.rend(); ++b) {
        if (b->begin == b->end)
            continue;
        out.begin_block(b->label);
        for (std::size_t i = b->end; i-- > b->begin;)
            out.push(gates_[i].inverse());
    }
    return out;
}

// ---------------------------------------------------------------------------

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
    amps_[0] = 1.0;
}

Statevector::Statevector(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::size_t{1} << num_qubits))
        fail(ErrorKind::Shape, "amplitude count does not match 2^qubits");
}

Statevector Statevector::basis(int num_qubits, std::size_t index) {
    std::vector<cplx> amps(std::size_t{1} << num_qubits);
    if (index >= amps.size())
        fail(ErrorKind::Domain, "basis index out of range");
    amps[index] = 1.0;
    return Statevector(num_qubits, std::move(amps));
}

double Statevector::norm() const {
    double s = 0.0;
    for (const cplx &v : amps_)
        s += std::norm(v);
    return std::sqrt(s);
}

void Statevector::apply_1q(int q, const std::array<cplx, 4> &u) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a = amps_[i];
            const cplx b = amps_[i + stride];
            amps_[i] = u[0] * a + u[1] * b;
            amps_[i + stride] = u[2] * a + u[3] * b;
        }
        touched_ += stride;
    }
}

void Statevector::apply_diag_1q(int q, cplx d0, cplx d1) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            amps_[i] *= d0;
            amps_[i + stride] *= d1;
        }
        touched_ += stride;
    }
}

void Statevector::apply(const Gate &gate) {
    const std::size_t dim = amps_.size();
    const int q0 = gate.qubits[0];
    const int q1 = gate.qubits[1];
    for (int i = 0; i < gate.arity(); ++i)
        if (gate.qubits[i] < 0 || gate.qubits[i] >= num_qubits_)
            fail(ErrorKind::Shape, "gate target outside statevector");
    switch (gate.kind) {
    case GateKind::X: {
        const std::size_t stride = std::size_t{1} << q0;
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            std::swap_ranges(amps_.begin() + base, amps_.begin() + base + stride, amps_.begin() + base + stride);
            touched_ += stride;
        }
        break;
    }
    case GateKind::H: {
        const double s = std::numbers::sqrt2 / 2.0;
        apply_1q(q0, {s, s, s, -s});
        break;
    }
    case GateKind::Rz:
        apply_diag_1q(q0, std::polar(1.0, -gate.angle / 2.0), std::polar(1.0, gate.angle / 2.0));
        break;
    case GateKind::Phase: apply_diag_1q(q0, 1.0, std::polar(1.0, gate.angle)); break;
    case GateKind::CNOT: {
        const std::size_t c = std::size_t{1} << q0, t = std::size_t{1} << q1;
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & c) && !(i & t)) {
                std::swap(amps_[i], amps_[i | t]);
                ++touched_;
            }
        break;
    }
    case GateKind::CPhase: {
        const std::size_t mask = (std::size_t{1} << q0) | (std::size_t{1} << q1);
        const cplx ph = std::polar(1.0, gate.angle);
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & mask) == mask) {
                amps_[i] *= ph;
                ++touched_;
            }
        break;
    }
    case GateKind::Swap: {
        const std::size_t a = std::size_t{1} << q0, b = std::size_t{1} << q1;
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & a) && !(i & b)) {
                std::swap(amps_[i], amps_[(i ^ a) | b]);
                ++touched_;
            }
        break;
    }
    case GateKind::TwoQubit: {
        const std::size_t hi = std::size_t{1} << q0, lo = std::size_t{1} << q1;
        const Matrix4 &m = *gate.matrix;
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & (hi | lo))
                continue;
            const std::size_t idx[4] = {i, i | lo, i | hi, i | hi | lo};
            const cplx v[4] = {amps_[idx[0]], amps_[idx[1]], amps_[idx[2]], amps_[idx[3]]};
            for (int r = 0; r < 4; ++r)
                amps_[idx[r]] = m[r * 4] * v[0] + m[r * 4 + 1] * v[1] + m[r * 4 + 2] * v[2] + m[r * 4 + 3] * v[3];
            ++touched_;
        }
        break;
    }
    case GateKind::GlobalPhase: {
        const cplx ph = std::polar(1.0, gate.angle);
        for (cplx &v : amps_)
            v *= ph;
        break;
    }
    }
}

// ---------------------------------------------------------------------------

std::size_t basis_index(const QubitLayout &layout, int a, std::size_t flat) {
    return (static_cast<std::size_t>(a) << (layout.dim() * layout.qubits_per_axis())) | flat;
}

Statevector encode(const SpinorField &field, const QubitLayout &layout) {
    const Grid &grid = field.grid();
    if (grid.dim() != layout.dim() || grid.qubits_per_axis() != layout.qubits_per_axis())
        fail(ErrorKind::Shape, "field grid does not match qubit layout");
    // Storage order (a, flat) coincides with the basis index by construction.
    return Statevector(layout.total_qubits(), std::vector<cplx>(field.amplitudes().begin(), field.amplitudes().end()));
}

SpinorField decode(const Statevector &state, const QubitLayout &layout, const Grid &grid) {
    if (grid.dim() != layout.dim() || grid.qubits_per_axis() != layout.qubits_per_axis() ||
        state.num_qubits() != layout.total_qubits())
        fail(ErrorKind::Shape, "statevector does not match layout/grid");
    SpinorField field(grid);
    std::copy(state.amplitudes().begin(), state.amplitudes().end(), field.amplitudes().begin());
    return field;
}

void apply(Statevector &state, const Gate &gate) { state.apply(gate); }

void run(const Circuit &circuit, Statevector &state) {
    if (circuit.num_qubits() > state.num_qubits())
        fail(ErrorKind::Shape, "circuit is wider than the statevector");
    for (const Gate &g : circuit.gates())
        state.apply(g);
}

std::vector<cplx> circuit_unitary(const Circuit &circuit) {
    const int nq = circuit.num_qubits();
    if (nq > 14)
        fail(ErrorKind::Budget, "dense circuit unitary limited to 14 qubits");
    const std::size_t dim = std::size_t{1} << nq;
    std::vector<cplx> u(dim * dim);
    for (std::size_t j = 0; j < dim; ++j) {
        Statevector s = Statevector::basis(nq, j);
        run(circuit, s);
        for (std::size_t i = 0; i < dim; ++i)
            u[i * dim + j] = s[i];
    }
    return u;
}

Circuit qft_circuit(int num_qubits, std::span<const int> reg, std::optional<double> approx_threshold) {
    Circuit c(num_qubits);
    c.begin_block("qft");
    const int q = static_cast<int>(reg.size());
    for (int i = q - 1; i >= 0; --i) {
        c.push(Gate::h(reg[i]));
        for (int j = i - 1; j >= 0; --j) {
            const double angle = std::numbers::pi / std::ldexp(1.0, i - j);
            if (approx_threshold && std::abs(angle) < *approx_threshold)
                continue;
            c.push(Gate::cphase(reg[j], reg[i], angle));
        }
    }
    for (int i = 0; i < q / 2; ++i)
        c.push(Gate::swap(reg[i], reg[q - 1 - i]));
    return c;
}

// ---------------------------------------------------------------------------

std::size_t GateCounts::kind(GateKind k) const {
    auto it = by_kind.find(to_string(k));
    return it == by_kind.end() ? 0 : it->second;
}

std::size_t GateCounts::block_kind(const std::string &label, GateKind k) const {
    auto b = by_block.find(label);
    if (b == by_block.end())
        return 0;
    auto it = b->second.find(to_string(k));
    return it == b->second.end() ? 0 : it->second;
}

std::size_t GateCounts::block_total(const std::string &label) const {
    auto b = by_block.find(label);
    if (b == by_block.end())
        return 0;
    std::size_t s = 0;
    for (const auto &[k, v] : b->second)
        s += v;
    return s;
}

GateCounts gate_count(const Circuit &circuit) {
    GateCounts counts;
    std::vector<std::size_t> layer(circuit.num_qubits(), 0);
    for (const Block &b : circuit.blocks()) {
        for (std::size_t i = b.begin; i < b.end; ++i) {
            const Gate &g = circuit.gates()[i];
            const std::string k = to_string(g.kind);
            ++counts.total;
            ++counts.by_kind[k];
            ++counts.by_block[b.label][k];
            if (g.arity() == 2)
                ++counts.two_qubit;
            if (g.arity() == 0)
                continue;
            std::size_t l = 0;
            for (int j = 0; j < g.arity(); ++j)
                l = std::max(l, layer[g.qubits[j]]);
            for (int j = 0; j < g.arity(); ++j)
                layer[g.qubits[j]] = l + 1;
            counts.depth = std::max(counts.depth, l + 1);
        }
    }
    return counts;
}

std::string to_text(const Circuit &circuit) {
    std::ostringstream os;
    os.precision(17);
    os << "# qubits " << circuit.num_qubits() << '\n';
    for (const Block &b : circuit.blocks()) {
        os << "# block " << b.label << '\n';
        for (std::size_t i = b.begin; i < b.end; ++i) {
            const Gate &g = circuit.gates()[i];
            os << to_string(g.kind);
            switch (g.kind) {
            case GateKind::Rz:
            case GateKind::Phase:
            case GateKind::CPhase:
            case GateKind::GlobalPhase: os << '(' << g.angle << ')'; break;
            case GateKind::TwoQubit:
                os << '[' << g.name << "](";
                for (int e = 0; e < 16; ++e)
                    os << (e ? "," : "") << (*g.matrix)[e].real() << ',' << (*g.matrix)[e].imag();
                os << ')';
                break;
            default: break;
            }
            for (int j = 0; j < g.arity(); ++j)
                os << ' ' << g.qubits[j];
            os << '\n';
        }
    }
    return os.str();
}

std::string to_qasm3(const Circuit &circuit) {
    std::ostringstream os;
    os.precision(17);
    os << "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
    os << "qubit[" << circuit.num_qubits() << "] q;\n";
    for (const Block &b : circuit.blocks()) {
        os << "// " << b.label << '\n';
        for (std::size_t i = b.begin; i < b.end; ++i) {
            const Gate &g = circuit.gates()[i];
            const auto q = [&](int j) { return "q[" + std::to_string(g.qubits[j]) + "]"; };
            switch (g.kind) {
            case GateKind::X: os << "x " << q(0); break;
            case GateKind::H: os << "h " << q(0); break;
            case GateKind::Rz: os << "rz(" << g.angle << ") " << q(0); break;
            case GateKind::Phase: os << "p(" << g.angle << ") " << q(0); break;
            case GateKind::CNOT: os << "cx " << q(0) << ", " << q(1); break;
            case GateKind::CPhase: os << "cp(" << g.angle << ") " << q(0) << ", " << q(1); break;
            case GateKind::Swap: os << "swap " << q(0) << ", " << q(1); break;
            case GateKind::GlobalPhase: os << "gphase(" << g.angle << ")"; break;
            case GateKind::TwoQubit:
                fail(ErrorKind::Domain, "gate '" + g.name + "' is outside the OpenQASM primitive subset");
            }
            os << ";\n";
        }
    }
    return os.str();
}

} // namespace diracwalk
