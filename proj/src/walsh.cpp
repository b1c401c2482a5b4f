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

#include "diracwalk/walsh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "diracwalk/error.hpp"

namespace diracwalk {

std::size_t WalshSpectrum::kept_count() const {
    std::size_t k = 0;
    for (std::size_t w = 0; w < coefficients.size(); ++w)
        k += kept(w) ? 1 : 0;
    return k;
}

namespace {
void fwht(std::vector<double> &v) {
    for (std::size_t half = 1; half < v.size(); half <<= 1)
        for (std::size_t base = 0; base < v.size(); base += 2 * half)
            for (std::size_t i = base; i < base + half; ++i) {
                const double a = v[i], b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
}
} // namespace

WalshSpectrum walsh_transform(std::span<const double> f) {
    if (f.empty() || !std::has_single_bit(f.size()))
        fail(ErrorKind::Shape, "walsh_transform needs a power-of-two length, got " + std::to_string(f.size()));
    WalshSpectrum s;
    s.q = std::countr_zero(f.size());
    s.coefficients.assign(f.begin(), f.end());
    fwht(s.coefficients);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (double &a : s.coefficients)
        a *= scale;
    return s;
}

std::vector<double> inverse_walsh(const WalshSpectrum &spectrum) {
    std::vector<double> f(spectrum.size());
    for (std::size_t w = 0; w < f.size(); ++w)
        f[w] = spectrum.kept(w) ? spectrum.coefficients[w] : 0.0;
    fwht(f);
    return f;
}

TruncationError truncation_error(const WalshSpectrum &spectrum, double threshold) {
    TruncationError err;
    WalshSpectrum dropped = spectrum;
    dropped.threshold = 0.0;
    WalshSpectrum with_threshold = spectrum;
    with_threshold.threshold = threshold;
    for (std::size_t w = 0; w < spectrum.size(); ++w) {
        if (with_threshold.kept(w) || spectrum.coefficients[w] == 0.0) {
            dropped.coefficients[w] = 0.0;
        } else {
            err.l1_bound += std::abs(spectrum.coefficients[w]);
            ++err.dropped;
        }
    }
    if (err.dropped == 0)
        return err;
    for (double v : inverse_walsh(dropped))
        err.max_phase_error = std::max(err.max_phase_error, std::abs(v));
    return err;
}

double threshold_keeping(const WalshSpectrum &spectrum, std::size_t count) {
    std::vector<double> mags;
    for (double a : spectrum.coefficients)
        if (a != 0.0)
            mags.push_back(std::abs(a));
    if (count >= mags.size())
        return 0.0;
    std::sort(mags.begin(), mags.end(), std::greater<>());
    if (count == 0)
        return std::nextafter(mags.front(), mags.front() * 2.0 + 1.0);
    return mags[count - 1];
}

Circuit synthesize_diagonal(const WalshSpectrum &spectrum, int num_qubits, std::span<const int> targets,
                            std::optional<DiagonalCondition> condition) {
    const int q = spectrum.q;
    if (static_cast<int>(targets.size()) != q)
        fail(ErrorKind::Shape, "synthesize_diagonal: need one target qubit per spectrum bit");
    if (condition && condition->sign != 1 && condition->sign != -1)
        fail(ErrorKind::Domain, "condition sign must be +1 or -1");

    // Extended register: targets, then the aux qubit as the highest bit.
    std::vector<int> qubits(targets.begin(), targets.end());
    const int bits = condition ? q + 1 : q;
    std::vector<double> coeff(std::size_t{1} << bits, 0.0);
    bool any_nonzero = false;
    bool any_kept = false;
    for (std::size_t w = 0; w < spectrum.size(); ++w) {
        any_nonzero |= spectrum.coefficients[w] != 0.0;
        if (!spectrum.kept(w))
            continue;
        any_kept = true;
        if (condition)
            coeff[w | (std::size_t{1} << q)] = condition->sign * spectrum.coefficients[w];
        else
            coeff[w] = spectrum.coefficients[w];
    }
    if (condition)
        qubits.push_back(condition->aux_qubit);
    if (any_nonzero && !any_kept)
        warn("walsh threshold " + std::to_string(spectrum.threshold) + " drops every coefficient; empty circuit");

    Circuit c(num_qubits);
    c.begin_block("diagonal");
    if (coeff[0] != 0.0)
        c.push(Gate::global_phase(coeff[0]));
    for (int t = 0; t < bits; ++t) {
        const int higher = bits - 1 - t;
        std::size_t parity = 0; // higher-bit subset currently folded into qubits[t]
        const auto toggle = [&](std::size_t diff) {
            for (int b = 0; b < higher; ++b)
                if (diff >> b & 1)
                    c.push(Gate::cnot(qubits[t + 1 + b], qubits[t]));
        };
        for (std::size_t i = 0; i < (std::size_t{1} << higher); ++i) {
            const std::size_t subset = i ^ (i >> 1);
            const std::size_t w = (std::size_t{1} << t) | (subset << (t + 1));
            if (coeff[w] == 0.0)
                continue;
            toggle(parity ^ subset);
            parity = subset;
            c.push(Gate::rz(qubits[t], -2.0 * coeff[w]));
        }
        toggle(parity);
    }
    return c;
}

std::string spectrum_dump(const WalshSpectrum &spectrum) {
    std::ostringstream os;
    os.precision(17);
    os << "# walsh spectrum q=" << spectrum.q << " threshold=" << spectrum.threshold << '\n';
    os << "w a_w\n";
    for (std::size_t w = 0; w < spectrum.size(); ++w)
        if (spectrum.kept(w))
            os << w << ' ' << spectrum.coefficients[w] << '\n';
    return os.str();
}

} // namespace diracwalk
