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

#include "diracwalk/diracwalk.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "diracwalk/error.hpp"
#include "diracwalk/evolution.hpp"
#include "diracwalk/experiments.hpp"
#include "diracwalk/gatesim.hpp"
#include "diracwalk/lattice.hpp"
#include "diracwalk/walsh.hpp"

using namespace diracwalk;
using nlohmann::json;

struct dw_config {
    json overrides = json::object();
};

struct dw_field {
    Snapshot snapshot;
};

struct dw_circuit {
    Circuit circuit;
    QubitLayout layout;
    Grid grid;
};

namespace {

thread_local std::string last_error;

dw_status status_of(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Domain:
        return DW_ERR_DOMAIN;
    case ErrorKind::Config:
        return DW_ERR_CONFIG;
    case ErrorKind::Resource:
        return DW_ERR_RESOURCE;
    case ErrorKind::Shape:
        return DW_ERR_SHAPE;
    case ErrorKind::Dimension:
        return DW_ERR_DIMENSION;
    case ErrorKind::Degenerate:
        return DW_ERR_DEGENERATE;
    case ErrorKind::InsufficientData:
        return DW_ERR_INSUFFICIENT_DATA;
    case ErrorKind::Budget:
        return DW_ERR_BUDGET;
    case ErrorKind::Io:
        return DW_ERR_IO;
    }
    return DW_ERR_INTERNAL;
}

template <class Fn> dw_status guarded(Fn &&fn) {
    try {
        fn();
        last_error.clear();
        return DW_OK;
    } catch (const Error &e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const json::exception &e) {
        last_error = std::string("json: ") + e.what();
        return DW_ERR_CONFIG;
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return DW_ERR_RESOURCE;
    } catch (const std::exception &e) {
        last_error = e.what();
        return DW_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return DW_ERR_INTERNAL;
    }
}

char *copy_string(const std::string &s) {
    char *out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

dw_status argument_error(const char *msg) {
    last_error = msg;
    return DW_ERR_ARGUMENT;
}

} // namespace

extern "C" {

const char *dw_last_error(void) { return last_error.c_str(); }

const char *dw_status_name(dw_status status) {
    switch (status) {
    case DW_OK:
        return "ok";
    case DW_ERR_INTERNAL:
        return "internal";
    case DW_ERR_CONFIG:
        return "config";
    case DW_ERR_RESOURCE:
        return "resource";
    case DW_ERR_DOMAIN:
        return "domain";
    case DW_ERR_SHAPE:
        return "shape";
    case DW_ERR_DIMENSION:
        return "dimension";
    case DW_ERR_DEGENERATE:
        return "degenerate";
    case DW_ERR_INSUFFICIENT_DATA:
        return "insufficient-data";
    case DW_ERR_BUDGET:
        return "budget";
    case DW_ERR_IO:
        return "io";
    case DW_ERR_ARGUMENT:
        return "argument";
    }
    return "unknown";
}

const char *dw_version(void) { return "0.1.0"; }

void dw_string_free(char *s) { delete[] s; }

dw_status dw_config_new(const char *experiment, dw_config **out) {
    if (!experiment || !out)
        return argument_error("dw_config_new: null argument");
    return guarded([&] {
        auto cfg = std::make_unique<dw_config>();
        cfg->overrides["experiment"] = experiment;
        (void)default_config(experiment);
        *out = cfg.release();
    });
}

dw_status dw_config_parse(const char *json_text, dw_config **out) {
    if (!json_text || !out)
        return argument_error("dw_config_parse: null argument");
    return guarded([&] {
        json parsed = json::parse(json_text);
        if (!parsed.is_object())
            fail(ErrorKind::Config, "config must be a JSON object");
        (void)resolve_config(parsed);
        auto cfg = std::make_unique<dw_config>();
        cfg->overrides = std::move(parsed);
        *out = cfg.release();
    });
}

dw_status dw_config_load(const char *path, dw_config **out) {
    if (!path || !out)
        return argument_error("dw_config_load: null argument");
    std::ifstream is(path);
    if (!is) {
        last_error = std::string("cannot open config file ") + path;
        return DW_ERR_IO;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return dw_config_parse(ss.str().c_str(), out);
}

dw_status dw_config_set(dw_config *config, const char *key, const char *value) {
    if (!config || !key || !value)
        return argument_error("dw_config_set: null argument");
    return guarded([&] {
        json next = config->overrides;
        set_config_value(next, key, value);
        (void)resolve_config(next);
        config->overrides = std::move(next);
    });
}

dw_status dw_config_resolved(const dw_config *config, char **json_out) {
    if (!config || !json_out)
        return argument_error("dw_config_resolved: null argument");
    return guarded([&] {
        const SimConfig sim = SimConfig::from_json(config->overrides);
        json resolved = sim.resolved;
        resolved["config_hash"] = sim.hash;
        *json_out = copy_string(resolved.dump(2));
    });
}

void dw_config_free(dw_config *config) { delete config; }

dw_status dw_run(const dw_config *config, char **summary_json) {
    if (!config)
        return argument_error("dw_run: null config");
    return guarded([&] {
        const json summary = run_experiment(SimConfig::from_json(config->overrides));
        if (summary_json)
            *summary_json = copy_string(summary.dump(2));
    });
}

dw_status dw_field_gaussian(int dim, size_t n, double omega, double sigma, const double p0[3],
                            const double center[3], const double *spinor_re, const double *spinor_im,
                            dw_field **out) {
    if (!spinor_re || !out)
        return argument_error("dw_field_gaussian: null argument");
    return guarded([&] {
        const Grid grid(dim, n, omega);
        GaussianPacket shape;
        shape.sigma = sigma;
        for (int i = 0; i < 3; ++i) {
            shape.p0[i] = p0 ? p0[i] : 0.0;
            shape.center[i] = center ? center[i] : 0.0;
        }
        std::vector<cplx> w(grid.spinor_components());
        for (std::size_t a = 0; a < w.size(); ++a)
            w[a] = {spinor_re[a], spinor_im ? spinor_im[a] : 0.0};
        *out = new dw_field{Snapshot{gaussian_spinor_packet(grid, shape, w), UnitSystem::natural}};
    });
}

dw_status dw_field_load(const char *path, dw_field **out) {
    if (!path || !out)
        return argument_error("dw_field_load: null argument");
    return guarded([&] { *out = new dw_field{load_snapshot(path)}; });
}

dw_status dw_field_save(const dw_field *field, const char *path) {
    if (!field || !path)
        return argument_error("dw_field_save: null argument");
    return guarded([&] { save_snapshot(path, field->snapshot.field, field->snapshot.units); });
}

dw_status dw_field_norm(const dw_field *field, double *out) {
    if (!field || !out)
        return argument_error("dw_field_norm: null argument");
    return guarded([&] { *out = field->snapshot.field.norm(); });
}

dw_status dw_field_position(const dw_field *field, int axis, double *out) {
    if (!field || !out)
        return argument_error("dw_field_position: null argument");
    return guarded([&] {
        if (axis < 0 || axis >= field->snapshot.field.grid().dim())
            fail(ErrorKind::Dimension, "axis out of range");
        *out = position_expectation(field->snapshot.field, axis);
    });
}

dw_status dw_field_transmission(const dw_field *field, double barrier, double *out) {
    if (!field || !out)
        return argument_error("dw_field_transmission: null argument");
    return guarded([&] { *out = transmission_probability(field->snapshot.field, barrier); });
}

void dw_field_free(dw_field *field) { delete field; }

dw_status dw_circuit_trotter_step(const dw_config *config, dw_circuit **out) {
    if (!config || !out)
        return argument_error("dw_circuit_trotter_step: null argument");
    return guarded([&] {
        const SimConfig sim = SimConfig::from_json(config->overrides);
        const Grid grid = sim.grid();
        const QubitLayout layout = QubitLayout::for_grid(grid, sim.max_qubits);
        DiracTerms terms(grid, sim.phys);
        install_potential(terms, sim.potential);
        Circuit c = trotter_step_circuit(terms, sim.formula(), sim.time / static_cast<double>(sim.steps), layout,
                                         sim.circuit);
        *out = new dw_circuit{std::move(c), layout, grid};
    });
}

dw_status dw_circuit_num_qubits(const dw_circuit *circuit, int *out) {
    if (!circuit || !out)
        return argument_error("dw_circuit_num_qubits: null argument");
    *out = circuit->circuit.num_qubits();
    last_error.clear();
    return DW_OK;
}

dw_status dw_circuit_export(const dw_circuit *circuit, const char *format, char **out) {
    if (!circuit || !format || !out)
        return argument_error("dw_circuit_export: null argument");
    const std::string f = format;
    if (f != "text" && f != "qasm3")
        return argument_error(("unknown circuit format '" + f + "' (text, qasm3)").c_str());
    return guarded([&] { *out = copy_string(f == "text" ? to_text(circuit->circuit) : to_qasm3(circuit->circuit)); });
}

dw_status dw_circuit_counts(const dw_circuit *circuit, char **json_out) {
    if (!circuit || !json_out)
        return argument_error("dw_circuit_counts: null argument");
    return guarded([&] {
        const GateCounts c = gate_count(circuit->circuit);
        json j = {{"qubits", circuit->circuit.num_qubits()},
                  {"total", c.total},
                  {"two_qubit", c.two_qubit},
                  {"depth", c.depth},
                  {"by_kind", c.by_kind},
                  {"by_block", c.by_block}};
        *json_out = copy_string(j.dump(2));
    });
}

dw_status dw_circuit_apply(const dw_circuit *circuit, dw_field *field) {
    if (!circuit || !field)
        return argument_error("dw_circuit_apply: null argument");
    return guarded([&] {
        if (!(field->snapshot.field.grid() == circuit->grid))
            fail(ErrorKind::Shape, "field grid does not match the circuit");
        Statevector state = encode(field->snapshot.field, circuit->layout);
        run(circuit->circuit, state);
        field->snapshot.field = decode(state, circuit->layout, circuit->grid);
    });
}

void dw_circuit_free(dw_circuit *circuit) { delete circuit; }

dw_status dw_walsh_dump(const double *values, size_t count, double threshold, char **out) {
    if (!values || !out)
        return argument_error("dw_walsh_dump: null argument");
    return guarded([&] {
        if (!(threshold >= 0.0))
            fail(ErrorKind::Domain, "threshold must be non-negative");
        WalshSpectrum spec = walsh_transform(std::span<const double>(values, count));
        spec.threshold = threshold;
        *out = copy_string(spectrum_dump(spec));
    });
}

} // extern "C"
