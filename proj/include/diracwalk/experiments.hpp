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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "diracwalk/evolution.hpp"
#include "diracwalk/lattice.hpp"

namespace diracwalk {

inline const char *const kExperiments[] = {"zb1d", "zb3d", "klein", "convergence", "gatecount"};

/// Defaults for `experiment`, as a JSON document with every schema key.
nlohmann::json default_config(const std::string &experiment);

/// Merges `overrides` into the defaults of its "experiment" (zb1d when
/// absent). Unknown keys, wrong types and out-of-range values raise Config.
nlohmann::json resolve_config(const nlohmann::json &overrides);

/// Sets a dotted key ("grid.n", "zb1d.masses") from its textual value. The
/// value is parsed as JSON first and taken as a string otherwise.
void set_config_value(nlohmann::json &config, const std::string &key, const std::string &value);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::json &resolved);

enum class PotentialKind { none, step, tabulated };

struct PotentialConfig {
    PotentialKind kind = PotentialKind::none;
    double v0 = 0.0; // potential energy above the edge
    double z0 = 0.0;
    int axis = 0;
    std::string file;
};

/// Typed view of a resolved configuration.
struct SimConfig {
    std::string experiment;
    int dim = 1;
    std::size_t n = 0;
    double omega = 0.0;
    double n_star = 0.5;
    PhysParams phys;
    int order = 2;
    std::size_t steps = 0;
    double time = 0.0;
    PotentialConfig potential;
    CircuitOptions circuit;
    std::string output;
    std::uint64_t seed = 0;
    int max_qubits = 0;
    nlohmann::json resolved;
    std::string hash;

    static SimConfig from_json(const nlohmann::json &overrides);
    Grid grid() const { return Grid(dim, n, omega, n_star); }
    ProductFormula formula() const { return ProductFormula{order}; }
    /// The experiment-specific section.
    const nlohmann::json &section() const { return resolved.at(experiment); }
};

/// Potential energy V(r) on the grid (phi = -V/e).
std::vector<double> load_tabulated_potential(const std::string &path, const Grid &grid);
/// Installs the configured potential into `terms` as phi = -V/e.
void install_potential(DiracTerms &terms, const PotentialConfig &potential);

/// Number of sign changes in the increments of a series (zero increments skipped).
std::size_t increment_sign_changes(std::span<const double> series);

/// Least-squares slope of log(err) against log(r).
double loglog_slope(std::span<const double> r, std::span<const double> err);

/// Runs the configured experiment, writing outputs plus resolved_config.json
/// and summary.json into config.output. Returns the summary.
nlohmann::json run_experiment(const SimConfig &config);

nlohmann::json run_zb1d(const SimConfig &config);
nlohmann::json run_zb3d(const SimConfig &config);
nlohmann::json run_klein(const SimConfig &config);
nlohmann::json run_convergence(const SimConfig &config);
nlohmann::json run_gatecount(const SimConfig &config);

} // namespace diracwalk
