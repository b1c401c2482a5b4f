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

#include "fft.hpp"

#include <algorithm>
#include <mutex>

namespace diracwalk::detail {
namespace {
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

LineFft::LineFft(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    buffer_ = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    forward_ = fftw_plan_dft_1d(len, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(len, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
}

LineFft::~LineFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
}

void LineFft::execute(fftw_plan plan, std::span<cplx> line) {
    auto *buf = reinterpret_cast<cplx *>(buffer_);
    std::copy(line.begin(), line.end(), buf);
    fftw_execute(plan);
    std::copy(buf, buf + n_, line.begin());
}

} // namespace diracwalk::detail
