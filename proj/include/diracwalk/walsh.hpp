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

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diracwalk/gatesim.hpp"

namespace diracwalk {

/// Walsh coefficients a_w of a real function on 2^q points,
/// f(x) = sum_w a_w (-1)^{popcount(w & x)}.
struct WalshSpectrum {
    int q = 0;
    std::vector<double> coefficients;
    /// Coefficients with |a_w| < threshold are treated as zero.
    double threshold = 0.0;

    std::size_t size() const { return coefficients.size(); }
    bool kept(std::size_t w) const {
        const double a = coefficients[w];
        return a != 0.0 && !(std::abs(a) < threshold);
    }
    std::size_t kept_count() const;
};

/// Fast in-place transform, O(q 2^q). Throws Domain for non power-of-two input.
WalshSpectrum walsh_transform(std::span<const double> f);
/// Reconstruction from the kept coefficients.
std::vector<double> inverse_walsh(const WalshSpectrum &spectrum);

struct TruncationError {
    /// max_x |f(x) - f_kept(x)|: the largest phase error of the truncated
    /// diagonal unitary.
    double max_phase_error = 0.0;
    /// sum of dropped |a_w|; an upper bound for max_phase_error.
    double l1_bound = 0.0;
    std::size_t dropped = 0;
};

TruncationError truncation_error(const WalshSpectrum &spectrum, double threshold);
/// Smallest threshold keeping the `count` largest-magnitude coefficients.
double threshold_keeping(const WalshSpectrum &spectrum, std::size_t count);

/// Tensor every Walsh operator with sign * Z_aux, giving
/// block-diag(e^{i sign f}, e^{-i sign f}) over (aux, targets).
struct DiagonalCondition {
    int aux_qubit;
    int sign = +1;
};

/// Circuit for prod_w exp(i a_w Z_w) with Z_w = tensor_{j in w} Z_{targets[j]}.
/// Each target qubit (lowest set bit of w) collects its higher-bit parities
/// through CNOTs in Gray-code order; exp(i a Z) is Rz(-2a); a_0 becomes a
/// GlobalPhase (or an aux Rz when conditioned). Elided terms emit nothing.
Circuit synthesize_diagonal(const WalshSpectrum &spectrum, int num_qubits, std::span<const int> targets,
                            std::optional<DiagonalCondition> condition = std::nullopt);

/// "# walsh spectrum q=<q> threshold=<t>", "w a_w", then one row per kept
/// coefficient (w as an integer bitmask).
std::string spectrum_dump(const WalshSpectrum &spectrum);

} // namespace diracwalk
