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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diracwalk/lattice.hpp"

namespace diracwalk {

inline constexpr int kDefaultMaxQubits = 27;

/// Qubit ids are bit positions of the statevector index. With the field
/// stored as (a, x1[, x2, x3]) row-major, the registers from most to least
/// significant are aux, axis 1, axis 2, axis 3; each register is
/// little-endian (its lowest qubit id is the register's least significant bit).
class QubitLayout {
  public:
    QubitLayout(int dim, int qubits_per_axis, int max_qubits = kDefaultMaxQubits);
    static QubitLayout for_grid(const Grid &grid, int max_qubits = kDefaultMaxQubits);

    int dim() const { return dim_; }
    int qubits_per_axis() const { return q_; }
    int aux_qubits() const { return dim_ == 1 ? 1 : 2; }
    int total_qubits() const { return dim_ * q_ + aux_qubits(); }
    std::size_t dimension() const { return std::size_t{1} << total_qubits(); }

    /// Bit `bit` (0 = least significant) of the grid index along `axis`.
    int position_qubit(int axis, int bit) const { return (dim_ - 1 - axis) * q_ + bit; }
    std::vector<int> axis_register(int axis) const;
    /// All position qubits, ordered so register value == flat grid index.
    std::vector<int> position_register() const;
    /// Bit `bit` of the spinor index a (0 = spin, aux_qubits()-1 = beta block).
    int aux_qubit(int bit) const { return dim_ * q_ + bit; }
    int beta_qubit() const { return aux_qubit(aux_qubits() - 1); }

  private:
    int dim_;
    int q_;
};

/// Estimated statevector footprint in bytes for `qubits` qubits.
double statevector_bytes(int qubits);

enum class GateKind { X, H, Rz, Phase, CNOT, CPhase, Swap, TwoQubit, GlobalPhase };

std::string to_string(GateKind kind);

using Matrix4 = std::array<cplx, 16>; // row-major, index 2*b(q0) + b(q1)

/// One primitive operation. Conventions fixed here for the whole library:
///   Rz(t)     = diag(exp(-i t/2), exp(+i t/2))
///   Phase(t)  = diag(1, exp(i t))
///   CPhase(t) = diag(1, 1, 1, exp(i t))
///   CNOT      qubits[0] control, qubits[1] target
///   TwoQubit  4x4 matrix with qubits[0] as the high bit of the matrix index
///   GlobalPhase(t) multiplies the state by exp(i t)
struct Gate {
    GateKind kind = GateKind::X;
    std::array<int, 2> qubits{-1, -1};
    double angle = 0.0;
    std::shared_ptr<const Matrix4> matrix;
    std::string name;

    static Gate x(int q) { return {GateKind::X, {q, -1}, 0.0, nullptr, {}}; }
    static Gate h(int q) { return {GateKind::H, {q, -1}, 0.0, nullptr, {}}; }
    static Gate rz(int q, double theta) { return {GateKind::Rz, {q, -1}, theta, nullptr, {}}; }
    static Gate phase(int q, double theta) { return {GateKind::Phase, {q, -1}, theta, nullptr, {}}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0, nullptr, {}}; }
    static Gate cphase(int a, int b, double theta) { return {GateKind::CPhase, {a, b}, theta, nullptr, {}}; }
    static Gate swap(int a, int b) { return {GateKind::Swap, {a, b}, 0.0, nullptr, {}}; }
    static Gate global_phase(double theta) { return {GateKind::GlobalPhase, {-1, -1}, theta, nullptr, {}}; }
    /// Throws Domain if `m` is not unitary to 1e-14.
    static Gate two_qubit(int high, int low, const Matrix4 &m, std::string name);

    int arity() const;
    Gate inverse() const;
};

struct Block {
    std::string label;
    std::size_t begin;
    std::size_t end;
};

/// Ordered gate list over a fixed number of qubits. Gates are grouped into
/// contiguous labelled blocks that partition the list.
class Circuit {
  public:
    explicit Circuit(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    const std::vector<Gate> &gates() const { return gates_; }
    const std::vector<Block> &blocks() const { return blocks_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    /// Starts a new block; subsequent push() calls land in it.
    void begin_block(std::string label);
    void push(Gate gate);
    /// Appends all gates of `other`, keeping its block labels.
    void append(const Circuit &other);
    /// Appends `other` as a single block named `label`.
    void append_as(const Circuit &other, std::string label);
    /// Relabels every gate into one block.
    void relabel(std::string label);

    /// Reversed gate order with each gate inverted.
    Circuit inverse() const;

  private:
    void check(const Gate &gate) const;

    int num_qubits_;
    std::vector<Gate> gates_;
    std::vector<Block> blocks_;
};

class Statevector {
  public:
    explicit Statevector(int num_qubits);
    Statevector(int num_qubits, std::vector<cplx> amplitudes);
    static Statevector basis(int num_qubits, std::size_t index);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amps_.size(); }
    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }
    double norm() const;

    void apply(const Gate &gate);
    /// Number of amplitude pairs (or quadruples for two-qubit gates) updated
    /// since construction or the last reset.
    std::uint64_t touched() const { return touched_; }
    void reset_counter() { touched_ = 0; }

  private:
    void apply_1q(int q, const std::array<cplx, 4> &u);
    void apply_diag_1q(int q, cplx d0, cplx d1);

    int num_qubits_;
    std::vector<cplx> amps_;
    std::uint64_t touched_ = 0;
};

Statevector encode(const SpinorField &field, const QubitLayout &layout);
SpinorField decode(const Statevector &state, const QubitLayout &layout, const Grid &grid);
/// Statevector index of spinor component `a` at grid point `flat`.
std::size_t basis_index(const QubitLayout &layout, int a, std::size_t flat);

void apply(Statevector &state, const Gate &gate);
void run(const Circuit &circuit, Statevector &state);

/// Dense unitary (column j = circuit applied to |j>), for verification at
/// small sizes. Refuses more than 14 qubits.
std::vector<cplx> circuit_unitary(const Circuit &circuit);

/// Standard QFT on `reg` (little-endian): |x> -> n^{-1/2} sum_y exp(2 pi i xy/n)|y>.
/// Controlled phases with |angle| < approx_threshold are dropped.
Circuit qft_circuit(int num_qubits, std::span<const int> reg, std::optional<double> approx_threshold = std::nullopt);

struct GateCounts {
    std::size_t total = 0;
    std::size_t two_qubit = 0;
    std::size_t depth = 0;
    std::map<std::string, std::size_t> by_kind;
    std::map<std::string, std::map<std::string, std::size_t>> by_block;

    std::size_t kind(GateKind k) const;
    std::size_t block_kind(const std::string &label, GateKind k) const;
    std::size_t block_total(const std::string &label) const;
};

/// Exact tally; depth is greedy layering over qubits (global phases excluded).
GateCounts gate_count(const Circuit &circuit);

/// One gate per line: "<kind>[(<angle>)] <qubits...>", with "# block <label>"
/// separators. Angles use 17 significant digits.
std::string to_text(const Circuit &circuit);
/// OpenQASM 3 for the primitive subset; circuits containing TwoQubit gates
/// are rejected with Domain.
std::string to_qasm3(const Circuit &circuit);

} // namespace diracwalk
