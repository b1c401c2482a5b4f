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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diracwalk/diracwalk.h"

namespace {

int exit_code(dw_status s) {
    switch (s) {
    case DW_OK:
        return 0;
    case DW_ERR_CONFIG:
    case DW_ERR_DOMAIN:
    case DW_ERR_SHAPE:
    case DW_ERR_DIMENSION:
    case DW_ERR_DEGENERATE:
    case DW_ERR_ARGUMENT:
        return 2;
    case DW_ERR_RESOURCE:
    case DW_ERR_BUDGET:
        return 3;
    default:
        return 1;
    }
}

int report(dw_status s, const char *what) {
    if (s != DW_OK)
        std::cerr << "diracwalk: " << what << ": " << dw_status_name(s) << " error: " << dw_last_error() << "\n";
    return exit_code(s);
}

struct Owned {
    char *s = nullptr;
    ~Owned() { dw_string_free(s); }
};

struct ConfigHandle {
    dw_config *p = nullptr;
    ~ConfigHandle() { dw_config_free(p); }
};

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::string output;
    long long steps = 0;
    int order = 0;
    double time = 0.0;
    long long n = 0;
    double omega = 0.0;
    double mass = -1.0;
    long long seed = -1;
    bool quiet = false;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
    cmd->add_option("-c,--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", o.sets, "override a config key, key=value (repeatable)");
    cmd->add_option("-o,--output", o.output, "output directory");
    cmd->add_option("--steps", o.steps, "number of product-formula steps");
    cmd->add_option("--order", o.order, "product-formula order (1 or even)");
    cmd->add_option("--time", o.time, "total evolution time");
    cmd->add_option("--n", o.n, "grid points per axis");
    cmd->add_option("--omega", o.omega, "domain length per axis");
    cmd->add_option("--mass", o.mass, "particle mass");
    cmd->add_option("--seed", o.seed, "seed for randomized checks");
    cmd->add_flag("-q,--quiet", o.quiet, "do not print the summary");
}

// Builds the config: file first, then --set pairs, then dedicated flags.
int build_config(const std::string &experiment, const CommonOptions &o, ConfigHandle &cfg) {
    dw_status s;
    if (!o.config_path.empty()) {
        s = dw_config_load(o.config_path.c_str(), &cfg.p);
        if (s != DW_OK)
            return report(s, "loading config");
        if (!experiment.empty()) {
            s = dw_config_set(cfg.p, "experiment", ("\"" + experiment + "\"").c_str());
            if (s != DW_OK)
                return report(s, "config");
        }
    } else {
        s = dw_config_new(experiment.empty() ? "zb1d" : experiment.c_str(), &cfg.p);
        if (s != DW_OK)
            return report(s, "config");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto &kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "diracwalk: --set expects key=value, got '" << kv << "'\n";
            return 2;
        }
        pairs.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    const auto num = [](auto v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    if (!o.output.empty())
        pairs.emplace_back("output", "\"" + o.output + "\"");
    if (o.steps != 0)
        pairs.emplace_back("formula.steps", num(o.steps));
    if (o.order != 0)
        pairs.emplace_back("formula.order", num(o.order));
    if (o.time != 0.0)
        pairs.emplace_back("formula.time", num(o.time));
    if (o.n != 0)
        pairs.emplace_back("grid.n", num(o.n));
    if (o.omega != 0.0)
        pairs.emplace_back("grid.omega", num(o.omega));
    if (o.mass >= 0.0)
        pairs.emplace_back("phys.m", num(o.mass));
    if (o.seed >= 0)
        pairs.emplace_back("seed", num(o.seed));
    for (const auto &[k, v] : pairs) {
        s = dw_config_set(cfg.p, k.c_str(), v.c_str());
        if (s != DW_OK)
            return report(s, ("setting " + k).c_str());
    }
    return 0;
}

int run_experiment(const std::string &experiment, const CommonOptions &o) {
    ConfigHandle cfg;
    if (int rc = build_config(experiment, o, cfg))
        return rc;
    Owned summary;
    const dw_status s = dw_run(cfg.p, &summary.s);
    if (s != DW_OK)
        return report(s, experiment.c_str());
    if (!o.quiet)
        std::cout << summary.s << "\n";
    return 0;
}

int run_circuit(const CommonOptions &o, const std::string &experiment, const std::string &format,
                const std::string &out_path, bool counts) {
    ConfigHandle cfg;
    if (int rc = build_config(experiment, o, cfg))
        return rc;
    dw_circuit *circuit = nullptr;
    dw_status s = dw_circuit_trotter_step(cfg.p, &circuit);
    if (s != DW_OK)
        return report(s, "building circuit");
    Owned text;
    s = counts ? dw_circuit_counts(circuit, &text.s) : dw_circuit_export(circuit, format.c_str(), &text.s);
    dw_circuit_free(circuit);
    if (s != DW_OK)
        return report(s, "exporting circuit");
    if (out_path.empty() || out_path == "-") {
        std::cout << text.s;
        if (counts)
            std::cout << "\n";
        return 0;
    }
    std::ofstream os(out_path);
    os << text.s;
    if (!os) {
        std::cerr << "diracwalk: cannot write " << out_path << "\n";
        return 1;
    }
    return 0;
}

int run_spectrum(const std::string &path, double threshold) {
    std::ifstream is(path);
    if (!is) {
        std::cerr << "diracwalk: cannot open " << path << "\n";
        return 2;
    }
    std::vector<double> values;
    std::string line;
    while (std::getline(is, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        double v;
        while (ls >> v)
            values.push_back(v);
        if (!ls.eof()) {
            std::cerr << "diracwalk: " << path << ": non-numeric entry\n";
            return 2;
        }
    }
    Owned dump;
    const dw_status s = dw_walsh_dump(values.data(), values.size(), threshold, &dump.s);
    if (s != DW_OK)
        return report(s, "spectrum");
    std::cout << dump.s;
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"diracwalk: Dirac equation simulation on a gate-level statevector simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", dw_version());

    const char *experiments[][2] = {
        {"zb1d", "1+1D Zitterbewegung mass sweep"},
        {"zb3d", "3+1D Zitterbewegung density projections"},
        {"klein", "Klein paradox step-barrier transmissions"},
        {"convergence", "product-formula error scaling against the exact propagator"},
        {"gatecount", "per-block gate counts and exponential-count bound"},
    };
    CommonOptions common;
    for (const auto &e : experiments)
        add_common(app.add_subcommand(e[0], e[1]), common);

    CLI::App *circuit = app.add_subcommand("circuit", "export one product-formula step as a circuit");
    add_common(circuit, common);
    std::string circuit_experiment, format = "text", circuit_out;
    bool counts = false;
    circuit->add_option("-e,--experiment", circuit_experiment, "experiment whose defaults to start from");
    circuit->add_option("-f,--format", format, "text or qasm3")->check(CLI::IsMember({"text", "qasm3"}));
    circuit->add_option("--to", circuit_out, "write to this file instead of stdout");
    circuit->add_flag("--counts", counts, "print gate counts as JSON instead");

    CLI::App *spectrum = app.add_subcommand("spectrum", "Walsh spectrum of tabulated samples");
    std::string values_path;
    double threshold = 0.0;
    spectrum->add_option("values", values_path, "whitespace-separated samples (power-of-two count)")->required();
    spectrum->add_option("-t,--threshold", threshold, "drop coefficients below this magnitude");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (const auto &e : experiments)
        if (app.got_subcommand(e[0]))
            return run_experiment(e[0], common);
    if (app.got_subcommand(circuit))
        return run_circuit(common, circuit_experiment, format, circuit_out, counts);
    if (app.got_subcommand(spectrum))
        return run_spectrum(values_path, threshold);
    return 2;
}
