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

#include <functional>
#include <stdexcept>
#include <string>

namespace diracwalk {

enum class ErrorKind {
    Domain,           // argument outside the mathematical domain of an operation
    Config,           // invalid or inconsistent configuration
    Resource,         // refused because of a memory / qubit cap
    Shape,            // incompatible array or layout shapes
    Dimension,        // operation not defined for this spatial dimension
    Degenerate,       // projector or normalization undefined
    InsufficientData, // estimator cannot resolve the requested quantity
    Budget,           // dense oracle size over budget
    Io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

/// Non-fatal diagnostics (under-resolved packets, fully truncated spectra).
/// The default handler prints to stderr; replace it to capture warnings.
using WarningHandler = std::function<void(const std::string &)>;
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string &message);

} // namespace diracwalk
