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

#include <gtest/gtest.h>

#include <numbers>

#include "diracwalk/error.hpp"
#include "diracwalk/evolution.hpp"
#include "diracwalk/gatesim.hpp"
#include "support.hpp"

using namespace diracwalk;
using diracwalk::testing::max_diff;
using diracwalk::testing::random_field;
using diracwalk::testing::random_vector;

namespace {

std::vector<cplx> dft_matrix(std::size_t n) {
    std::vector<cplx> m(n * n);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x)
            m[y * n + x] = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                      2.0 * std::numbers::pi * static_cast<double>(x * y % n) / n);
    return m;
}

std::vector<int> iota(int q) {
    std::vector<int> r(q);
    for (int i = 0; i < q; ++i)
        r[i] = i;
    return r;
}

} // namespace

TEST(QubitLayout, BitOrder) {
    const QubitLayout l(3, 3);
    EXPECT_EQ(l.total_qubits(), 11);
    EXPECT_EQ(l.position_qubit(2, 0), 0);
    EXPECT_EQ(l.position_qubit(0, 2), 8);
    EXPECT_EQ(l.aux_qubit(0), 9);
    EXPECT_EQ(l.beta_qubit(), 10);
    // (a=3, j=5) on a 3+1D q=1 layout: a bits above the position bits.
    const QubitLayout small(3, 1);
    EXPECT_EQ(basis_index(small, 3, 5), (3u << 3) | 5u);
}

TEST(QubitLayout, ExhaustiveBasisMapping) {
    for (int dim : {1, 3}) {
        const int q = dim == 1 ? 4 : 1;
        const Grid g(dim, std::size_t{1} << q, 1.0);
        const QubitLayout l = QubitLayout::for_grid(g);
        ASSERT_LE(l.total_qubits(), 6);
        for (int a = 0; a < g.spinor_components(); ++a)
            for (std::size_t flat = 0; flat < g.points(); ++flat) {
                const std::size_t idx = basis_index(l, a, flat);
                // Each axis coordinate is readable from its register bits.
                for (int axis = 0; axis < dim; ++axis) {
                    std::size_t v = 0;
                    for (int b = 0; b < q; ++b)
                        v |= ((idx >> l.position_qubit(axis, b)) & 1u) << b;
                    EXPECT_EQ(v, g.coordinate(flat, axis));
                }
                std::size_t av = 0;
                for (int b = 0; b < l.aux_qubits(); ++b)
                    av |= ((idx >> l.aux_qubit(b)) & 1u) << b;
                EXPECT_EQ(av, static_cast<std::size_t>(a));
            }
    }
}

TEST(QubitLayout, ResourceCap) {
    EXPECT_THROW(QubitLayout(3, 9), Error);
    try {
        QubitLayout(3, 9, 27);
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Resource);
        EXPECT_NE(std::string(e.what()).find("GiB"), std::string::npos);
    }
    EXPECT_NO_THROW(QubitLayout(3, 9, 30));
}

TEST(Encode, DeltaAndRoundTrip) {
    const Grid g(1, 8, 1.0);
    const QubitLayout l = QubitLayout::for_grid(g);
    SpinorField d(g);
    d(0, 0) = 1.0;
    const Statevector s = encode(d, l);
    EXPECT_EQ(s[0], cplx(1.0));
    std::mt19937_64 rng(5);
    const SpinorField f = random_field(Grid(3, 4, 1.0), rng);
    const QubitLayout l3 = QubitLayout::for_grid(f.grid());
    EXPECT_LT(max_diff(decode(encode(f, l3), l3, f.grid()), f), 1e-15);
}

TEST(Apply, Conventions) {
    Statevector s(1);
    s.apply(Gate::x(0));
    EXPECT_EQ(s[1], cplx(1.0));
    Statevector r(1);
    r.apply(Gate::rz(0, 0.7));
    EXPECT_NEAR(std::abs(r[0] - std::polar(1.0, -0.35)), 0.0, 1e-15);
    Statevector p = Statevector::basis(1, 1);
    p.apply(Gate::phase(0, 0.3));
    EXPECT_NEAR(std::abs(p[1] - std::polar(1.0, 0.3)), 0.0, 1e-15);
    Statevector c = Statevector::basis(2, 0b01);
    c.apply(Gate::cnot(0, 1));
    EXPECT_EQ(c[0b11], cplx(1.0));
    Statevector g(1);
    g.apply(Gate::global_phase(1.1));
    EXPECT_NEAR(std::abs(g[0] - std::polar(1.0, 1.1)), 0.0, 1e-15);
}

TEST(Apply, ZzIdentity) {
    // CNOT (I x Rz(-2 theta)) CNOT == exp(i theta Z x Z).
    const double theta = 0.37;
    Circuit c(2);
    c.push(Gate::cnot(1, 0));
    c.push(Gate::rz(0, -2.0 * theta));
    c.push(Gate::cnot(1, 0));
    const auto u = circuit_unitary(c);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const double zz = (std::popcount(i) % 2 == 0) ? 1.0 : -1.0;
            const cplx expect = i == j ? std::polar(1.0, theta * zz) : 0.0;
            EXPECT_NEAR(std::abs(u[i * 4 + j] - expect), 0.0, 1e-14);
        }
}

TEST(Apply, TwoQubitMatrixOrientation) {
    // qubits[0] is the high bit of the matrix index.
    Matrix4 m{};
    m[0 * 4 + 0] = 1.0;
    m[1 * 4 + 2] = 1.0; // |10> -> |01>
    m[2 * 4 + 1] = 1.0;
    m[3 * 4 + 3] = 1.0;
    Statevector s = Statevector::basis(3, 0b100); // qubit 2 set
    s.apply(Gate::two_qubit(2, 0, m, "swap20"));
    EXPECT_EQ(s[0b001], cplx(1.0));
    Matrix4 bad{};
    bad[0] = 2.0;
    EXPECT_THROW(Gate::two_qubit(0, 1, bad, "bad"), Error);
}

TEST(Apply, TouchedCounter) {
    Statevector s(5);
    s.apply(Gate::h(2));
    EXPECT_EQ(s.touched(), 16u);
    s.reset_counter();
    s.apply(Gate::cnot(0, 3));
    EXPECT_EQ(s.touched(), 8u);
}

TEST(Circuit, BoundsAndBlocks) {
    Circuit c(2);
    EXPECT_THROW(c.push(Gate::x(2)), Error);
    EXPECT_THROW(c.push(Gate::cnot(1, 1)), Error);
    c.begin_block("a");
    c.push(Gate::x(0));
    c.begin_block("b");
    c.push(Gate::h(1));
    c.push(Gate::h(0));
    ASSERT_EQ(c.blocks().size(), 2u);
    EXPECT_EQ(c.blocks()[1].label, "b");
    EXPECT_EQ(c.blocks()[1].end - c.blocks()[1].begin, 2u);
    const auto counts = gate_count(c);
    EXPECT_EQ(counts.block_total("b"), 2u);
    EXPECT_EQ(counts.block_kind("a", GateKind::X), 1u);
    EXPECT_EQ(counts.depth, 2u);
}

TEST(Run, EmptyAndInverse) {
    std::mt19937_64 rng(9);
    const auto v = random_vector(1u << 6, rng);
    Statevector s(6, v);
    run(Circuit(6), s);
    EXPECT_EQ(max_diff(s.amplitudes(), v), 0.0);

    Circuit c(6);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    for (int i = 0; i < 60; ++i) {
        const int a = i % 6, b = (i * 5 + 1) % 6;
        switch (i % 6) {
        case 0: c.push(Gate::h(a)); break;
        case 1: c.push(Gate::rz(a, ang(rng))); break;
        case 2: c.push(Gate::cnot(a, b == a ? (a + 1) % 6 : b)); break;
        case 3: c.push(Gate::cphase(a, b == a ? (a + 1) % 6 : b, ang(rng))); break;
        case 4: c.push(Gate::phase(a, ang(rng))); break;
        default: c.push(Gate::swap(a, b == a ? (a + 1) % 6 : b));
        }
    }
    run(c, s);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    run(c.inverse(), s);
    EXPECT_LT(max_diff(s.amplitudes(), v), 1e-12);
}

TEST(Qft, SingleQubitIsHadamard) {
    const auto reg = iota(1);
    const Circuit c = qft_circuit(1, reg);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.gates()[0].kind, GateKind::H);
}

TEST(Qft, MatchesDenseDft) {
    for (int q = 2; q <= 10; ++q) {
        const auto reg = iota(q);
        const auto u = circuit_unitary(qft_circuit(q, reg));
        const auto f = dft_matrix(std::size_t{1} << q);
        EXPECT_LT(max_diff(u, f), q <= 3 ? 1e-13 : 1e-12) << "q=" << q;
    }
}

TEST(Qft, EmbeddedRegister) {
    // Register on qubits 3..5 of a 6-qubit state; other qubits untouched.
    const std::vector<int> reg{3, 4, 5};
    const auto u = circuit_unitary(qft_circuit(6, reg));
    const auto f = dft_matrix(8);
    for (std::size_t lo = 0; lo < 8; ++lo)
        for (std::size_t y = 0; y < 8; ++y)
            for (std::size_t x = 0; x < 8; ++x)
                EXPECT_NEAR(std::abs(u[((y << 3) | lo) * 64 + ((x << 3) | lo)] - f[y * 8 + x]), 0.0, 1e-13);
}

TEST(Qft, ApproximateErrorBound) {
    const int q = 10;
    const auto reg = iota(q);
    const double cutoff = std::numbers::pi / 128.0;
    const Circuit exact = qft_circuit(q, reg);
    const Circuit approx = qft_circuit(q, reg, cutoff);
    double dropped = 0.0;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < i; ++j) {
            const double a = std::numbers::pi / std::pow(2.0, i - j);
            if (a < cutoff)
                dropped += a;
        }
    EXPECT_LT(approx.size(), exact.size());
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        const auto v = random_vector(std::size_t{1} << q, rng);
        Statevector a(q, v), b(q, v);
        run(exact, a);
        run(approx, b);
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            d += std::norm(a[i] - b[i]);
        worst = std::max(worst, std::sqrt(d));
    }
    EXPECT_LE(worst, 2.0 * dropped);
}

TEST(GateCount, KineticClosedForm) {
    const int q = 8;
    const Grid g(1, std::size_t{1} << q, 1.0);
    const QubitLayout l = QubitLayout::for_grid(g);
    const auto counts = gate_count(kinetic_axis_circuit(0, 0.01, g, l));
    EXPECT_EQ(counts.kind(GateKind::H), 2u + 2u * q);             // 2 Pi + QFT Hadamards
    EXPECT_EQ(counts.kind(GateKind::CPhase), 2u * q * (q - 1) / 2); // two QFTs
    EXPECT_EQ(counts.kind(GateKind::Swap), 2u * (q / 2));
    EXPECT_EQ(counts.kind(GateKind::X), 2u);
    EXPECT_EQ(counts.kind(GateKind::CNOT), 2u * q);
    EXPECT_EQ(counts.kind(GateKind::Rz), q + 1u);
    EXPECT_EQ(counts.two_qubit, 2u * q * (q - 1) / 2 + 2u * (q / 2) + 2u * q);
}

TEST(Export, TextAndQasm) {
    Circuit c(2);
    c.begin_block("demo");
    c.push(Gate::h(0));
    c.push(Gate::rz(1, 0.25));
    c.push(Gate::cnot(0, 1));
    const std::string text = to_text(c);
    EXPECT_NE(text.find("# qubits 2"), std::string::npos);
    EXPECT_NE(text.find("# block demo"), std::string::npos);
    EXPECT_NE(text.find("rz(0.25) 1"), std::string::npos);
    const std::string qasm = to_qasm3(c);
    EXPECT_NE(qasm.find("OPENQASM 3"), std::string::npos);
    EXPECT_NE(qasm.find("cx q[0], q[1];"), std::string::npos);

    const Grid g(3, 2, 1.0);
    const QubitLayout l = QubitLayout::for_grid(g);
    Circuit pi(l.total_qubits());
    pi.push(pi_gate(0, l));
    EXPECT_THROW(to_qasm3(pi), Error);
}
