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

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "diracwalk/evolution.hpp"
#include "diracwalk/lattice.hpp"

namespace diracwalk {

/// Largest s * n^dim the dense eigendecomposition accepts.
inline constexpr std::size_t kDenseBudget = 4096;

/// Row-major Hamiltonian over (a, flat) for the periodic spectral
/// discretization: c alpha.p with p diagonal in the DFT basis (wavenumbers
/// from momentum_grid), beta m c^2, -e phi and c e alpha.A on the diagonal.
std::vector<cplx> dense_hamiltonian(const DiracTerms &terms);

/// Exact propagation exp(-i H T) for static H. Translation-invariant
/// problems are propagated mode by mode in momentum space with the closed
/// form exp(-i T H(k)) = cos(E T) - i sin(E T) H(k)/E; anything else goes
/// through a dense eigendecomposition, computed once per propagator.
class ExactPropagator {
  public:
    explicit ExactPropagator(DiracTerms terms);
    ~ExactPropagator();
    ExactPropagator(ExactPropagator &&) noexcept;
    ExactPropagator &operator=(ExactPropagator &&) noexcept;

    SpinorField evolve(const SpinorField &field, double total_time) const;
    bool dense() const;
    /// Eigenvalues of the dense Hamiltonian (empty on the mode-by-mode path).
    std::span<const double> eigenvalues() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SpinorField exact_evolve(const SpinorField &field, const DiracTerms &terms, double total_time);

/// One step of the same splitting used by trotter_step_circuit, with every
/// exponential evaluated exactly: kinetic factors per momentum mode after an
/// FFT along the axis, potentials pointwise.
SpinorField split_step(const SpinorField &field, const DiracTerms &terms, const ProductFormula &formula, double t);
void apply_exp_op(SpinorField &field, const ExpOp &op, const DiracTerms &terms);

/// <psi|H|psi> for the free Hamiltonian c alpha.p + beta m c^2.
double free_energy_expectation(const SpinorField &field, const PhysParams &phys);
/// Weight of the negative-energy branch of the free Hamiltonian.
double negative_energy_weight(const SpinorField &field, const PhysParams &phys);

struct ZbSpectrum {
    bool detected = false;
    double angular_frequency = 0.0;
    double amplitude = 0.0;
};

/// Dominant oscillation of a detrended <x>(t) series via a Hann-windowed
/// discrete Fourier scan up to the Nyquist frequency. Peaks below
/// `min_amplitude` count as no oscillation. Throws InsufficientData for
/// fewer than 8 samples or when the peak period exceeds the series length.
ZbSpectrum zitterbewegung_frequency(std::span<const double> times, std::span<const double> positions,
                                    double min_amplitude = 1e-9);

} // namespace diracwalk
