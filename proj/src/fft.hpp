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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <fftw3.h>

#include "diracwalk/lattice.hpp"

namespace diracwalk::detail {

/// Unnormalized in-place 1D DFT of length n. forward uses exp(-2 pi i xy/n),
/// backward exp(+2 pi i xy/n).
class LineFft {
  public:
    explicit LineFft(std::size_t n);
    ~LineFft();
    LineFft(const LineFft &) = delete;
    LineFft &operator=(const LineFft &) = delete;

    std::size_t size() const { return n_; }
    void forward(std::span<cplx> line) { execute(forward_, line); }
    void backward(std::span<cplx> line) { execute(backward_, line); }

  private:
    void execute(fftw_plan plan, std::span<cplx> line);

    std::size_t n_;
    fftw_complex *buffer_;
    fftw_plan forward_;
    fftw_plan backward_;
};

/// Calls fn(line) for every line of `block` (n^dim values, row-major) along
/// `axis`; the line is gathered into contiguous storage and scattered back.
template <class Fn> void for_each_line(std::span<cplx> block, const Grid &grid, int axis, Fn &&fn) {
    const std::size_t n = grid.n();
    const std::size_t stride = grid.stride(axis);
    const std::size_t outer = grid.points() / (stride * n);
    std::vector<cplx> line(n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t s = 0; s < stride; ++s) {
            const std::size_t base = o * stride * n + s;
            for (std::size_t x = 0; x < n; ++x)
                line[x] = block[base + x * stride];
            fn(std::span<cplx>(line));
            for (std::size_t x = 0; x < n; ++x)
                block[base + x * stride] = line[x];
        }
    }
}

} // namespace diracwalk::detail
