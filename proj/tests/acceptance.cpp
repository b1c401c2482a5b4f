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

// Acceptance driver: one PASS/FAIL line per primary criterion. Exit status is
// nonzero when any line fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diracwalk/error.hpp"
#include "diracwalk/evolution.hpp"
#include "diracwalk/experiments.hpp"
#include "diracwalk/gatesim.hpp"
#include "diracwalk/oracle.hpp"
#include "diracwalk/walsh.hpp"
#include "support.hpp"

using namespace diracwalk;
using namespace diracwalk::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string slurp(const fs::path &p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

json run_default(const std::string &experiment, const fs::path &out, json overrides = json::object()) {
    overrides["experiment"] = experiment;
    overrides["output"] = out.string();
    return run_experiment(SimConfig::from_json(overrides));
}

std::vector<double> random_samples(std::size_t n, std::mt19937_64 &rng, double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    std::vector<double> v(n);
    for (double &x : v)
        x = d(rng);
    return v;
}

// --- criteria ---------------------------------------------------------------

Outcome step_equivalence() {
    std::mt19937_64 rng(20260101);
    double worst = 0.0;
    for (int dim : {1, 3}) {
        const Grid g(dim, dim == 1 ? 32 : 8, 6.0);
        const QubitLayout l = QubitLayout::for_grid(g);
        DiracTerms t(g, PhysParams{1.0, 1.0, 1.0, UnitSystem::natural});
        t.phi = step_function(g, 1.5, 0.0, 0);
        t.vector_potential[0] = GridFunction::tabulated(random_samples(g.points(), rng, 0.5));
        const Circuit c = trotter_step_circuit(t, ProductFormula{2}, 0.05, l);
        for (int i = 0; i < 16; ++i) {
            const SpinorField f = random_field(g, rng);
            Statevector s = encode(f, l);
            run(c, s);
            worst = std::max(worst, max_diff(decode(s, l, g), split_step(f, t, ProductFormula{2}, 0.05)));
        }
    }
    return {worst <= 1e-10, "max amplitude error " + fmt("%.3g", worst) + " (1D q=5, 3D q=3, 16 states each)"};
}

Outcome term_exactness() {
    std::mt19937_64 rng(20260102);
    const double tau = 0.05;
    double worst1 = 0.0;
    {
        const Grid g(1, 64, 3.0);
        const QubitLayout l = QubitLayout::for_grid(g);
        const std::size_t n = l.dimension();
        const PhysParams phys{1.3, 0.9, 1.1, UnitSystem::natural};
        const PhysParams massless{0.0, phys.e, phys.c, phys.units};
        const auto h0 = dense_hamiltonian(DiracTerms(g, massless));
        const auto check = [&](const Circuit &c, const std::vector<cplx> &m) {
            worst1 = std::max(worst1, max_diff(circuit_unitary(c), expm(m, tau, n)));
        };
        check(kinetic_axis_circuit(0, 2 * tau, g, l, phys.c), h0);
        check(mass_coin_circuit(2 * tau, phys.m, l, phys.c), subtract(dense_hamiltonian(DiracTerms(g, phys)), h0));
        DiracTerms scalar(g, massless);
        scalar.phi = GridFunction::tabulated(random_samples(64, rng, 2.0));
        check(scalar_potential_circuit(2 * tau, *scalar.phi, phys.e, g, l),
              subtract(dense_hamiltonian(scalar), h0));
        DiracTerms vec(g, massless);
        vec.vector_potential[0] = GridFunction::tabulated(random_samples(64, rng, 2.0));
        check(vector_axis_circuit(0, 2 * tau, *vec.vector_potential[0], phys.e, phys.c, g, l),
              subtract(dense_hamiltonian(vec), h0));
    }
    double worst3 = 0.0;
    {
        const Grid g(3, 8, 4.0);
        const QubitLayout l = QubitLayout::for_grid(g);
        const PhysParams phys = PhysParams::natural(0.0);
        const auto h0 = dense_hamiltonian(DiracTerms(g, phys));
        for (int axis = 0; axis < 3; ++axis) {
            const auto kin = axis_kinetic_matrix(g, axis, phys.c);
            DiracTerms vec(g, phys);
            vec.vector_potential[axis] = GridFunction::tabulated(random_samples(g.points(), rng, 1.0));
            const auto vm = subtract(dense_hamiltonian(vec), h0);
            const Circuit kc = kinetic_axis_circuit(axis, 2 * tau, g, l, phys.c);
            const Circuit vc = vector_axis_circuit(axis, 2 * tau, *vec.vector_potential[axis], phys.e, phys.c, g, l);
            for (int i = 0; i < 2; ++i) {
                const auto x = random_vector(l.dimension(), rng);
                for (const auto &[c, m] : {std::pair{&kc, &kin}, std::pair{&vc, &vm}}) {
                    Statevector s(l.total_qubits(), x);
                    run(*c, s);
                    worst3 = std::max(worst3, max_diff(s.amplitudes(), expm_apply(*m, tau, x)));
                }
            }
        }
    }
    const double worst = std::max(worst1, worst3);
    return {worst <= 1e-11, "1D n=64 four terms " + fmt("%.3g", worst1) + ", 3D n=8 kinetic+vector per axis " +
                                fmt("%.3g", worst3)};
}

Outcome trotter_order(const fs::path &out) {
    const json s = run_default("convergence", out / "convergence", {{"convergence", {{"orders", {1, 2}}}}});
    bool pass = true;
    std::string detail;
    for (const auto &fit : s["fits"]) {
        const int order = fit["order"].get<int>();
        if (fit["slope"].is_null()) {
            pass = false;
            detail += "order " + std::to_string(order) + " slope unavailable; ";
            continue;
        }
        const double slope = fit["slope"].get<double>();
        pass = pass && std::abs(slope + order) <= 0.2;
        detail += "order " + std::to_string(order) + " slope " + fmt("%.4f", slope) + "; ";
    }
    detail += "r in {8..128}, n=64, step potential";
    return {pass, detail};
}

Outcome walsh_synthesis() {
    std::mt19937_64 rng(20260103);
    double worst = 0.0;
    for (int q = 1; q <= 6; ++q) {
        std::vector<int> reg(q);
        for (int i = 0; i < q; ++i)
            reg[i] = i;
        const std::size_t n = std::size_t{1} << q;
        for (int trial = 0; trial < 50; ++trial) {
            const auto f = random_samples(n, rng, 3.0);
            const auto u = circuit_unitary(synthesize_diagonal(walsh_transform(f), q, reg));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    worst = std::max(worst, std::abs(u[i * n + j] - (i == j ? std::polar(1.0, f[i]) : cplx(0.0))));
        }
    }
    bool single = true;
    for (int q = 2; q <= 12; ++q) {
        const Grid g(1, std::size_t{1} << q, 1.4);
        const QubitLayout l = QubitLayout::for_grid(g);
        const auto counts = gate_count(scalar_potential_circuit(0.01, step_function(g, 3.0, 0.0), 1.0, g, l));
        single = single && counts.kind(GateKind::Rz) == 1 && counts.total - counts.kind(GateKind::GlobalPhase) == 1;
    }
    return {worst <= 1e-12 && single, "diagonal error " + fmt("%.3g", worst) + " (q<=6, 50 functions each); step at origin " +
                                          (single ? "is one Rz for q=2..12" : "is NOT one Rz")};
}

Outcome zitterbewegung_1d(const fs::path &out) {
    const json s = run_default("zb1d", out / "zb1d");
    const json *m0 = nullptr, *m33 = nullptr;
    for (const auto &m : s["masses"]) {
        if (m["m"].get<double>() == 0.0)
            m0 = &m;
        if (m["m"].get<double>() == 33.0)
            m33 = &m;
    }
    if (!m0 || !m33)
        return {false, "mass sweep lacks m=0 or m=33"};
    const double d = (*m0)["displacement_circuit"].get<double>();
    const double de = (*m0)["displacement_exact"].get<double>();
    const double rel = std::abs(d - de) / std::abs(de);
    const bool mono = (*m0)["monotone"].get<bool>();
    const auto changes = (*m33)["sign_changes"].get<std::size_t>();
    const auto changes_exact = (*m33)["sign_changes_exact"].get<std::size_t>();
    const json &zb = (*m33)["zitterbewegung"];
    const bool freq_ok = zb.value("detected", false) && zb.contains("relative_error_2mc2") &&
                         zb["relative_error_2mc2"].get<double>() <= 0.10;
    std::string detail = "m=0 monotone=" + std::string(mono ? "yes" : "no") + " displacement dev " +
                         fmt("%.2g%%", 100 * rel) + "; m=33 sign changes " + std::to_string(changes) + " (oracle " +
                         std::to_string(changes_exact) + ", need >=2; " + std::to_string(s["inset"]["sign_changes"].get<std::size_t>()) +
                         " over the T=" + fmt("%g", s["inset"]["time"].get<double>()) + " inset run); ZB frequency error " +
                         (zb.contains("relative_error_2mc2") ? fmt("%.3g%%", 100 * zb["relative_error_2mc2"].get<double>())
                                                             : std::string("n/a"));
    return {mono && rel <= 0.05 && changes >= 2 && freq_ok, detail};
}

Outcome klein_paradox(const fs::path &out) {
    const json s = run_default("klein", out / "klein_a");
    std::vector<double> t;
    for (const auto &r : s["runs"])
        t.push_back(r["transmission"].get<double>());
    if (t.size() != 4)
        return {false, "expected four barrier heights"};
    const bool pass = t[0] >= 0.98 && t[1] <= 0.02 && t[1] < t[2] && t[2] < t[3];
    return {pass, "T(0)=" + fmt("%.5f", t[0]) + " T(1)=" + fmt("%.3g", t[1]) + " T(2)=" + fmt("%.4f", t[2]) +
                      " T(4)=" + fmt("%.4f", t[3]) + " (barriers in units of Omega m c^2, n=1024)"};
}

Outcome zitterbewegung_3d(const fs::path &out) {
    const json s = run_default("zb3d", out / "zb3d");
    const double fid = s["verification"]["fidelity"].get<double>();
    const bool spread = s["variance_increased"].get<bool>();
    return {fid >= 1.0 - 1e-6 && spread, "n=8 fidelity 1-" + fmt("%.3g", 1.0 - fid) + " at r=256 order 2; variance " +
                                             (spread ? "increases" : "does NOT increase") + " on every plane (n=32 run)"};
}

Outcome resource_accounting(const fs::path &out) {
    const json s = run_default("gatecount", out / "gatecount");
    const double c1 = s["kinetic_c1_q2"].get<double>();
    const bool mass = s["mass_single_rotation"].get<bool>();
    const auto spot = s["n_exp_bound"]["spot_k1_unit"].get<std::uint64_t>();
    const auto expect = static_cast<std::uint64_t>(std::ceil(14.0 * 25.0 * std::pow(7.0, 1.5)));
    const bool pass = mass && c1 <= 2.0 && spot == expect && spot == 6483;
    return {pass, "mass block one rotation=" + std::string(mass ? "yes" : "no") +
                      "; kinetic two-qubit <= " + fmt("%.3g", c1) + " q^2 for q=4..12 (bound c=2); spot bound " +
                      std::to_string(spot) + " vs ceil(350*7^1.5)=" + std::to_string(expect)};
}

Outcome determinism(const fs::path &out) {
    run_default("klein", out / "klein_b");
    std::size_t compared = 0;
    std::string mismatch;
    for (const auto &entry : fs::directory_iterator(out / "klein_a")) {
        if (entry.path().extension() != ".csv")
            continue;
        ++compared;
        const fs::path other = out / "klein_b" / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other))
            mismatch += entry.path().filename().string() + " ";
    }
    return {compared > 0 && mismatch.empty(),
            std::to_string(compared) + " CSV files compared byte-wise" + (mismatch.empty() ? "" : "; differ: " + mismatch)};
}

} // namespace

int main(int argc, char **argv) {
    fs::path out = "acceptance_runs";
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if ((a == "--output" || a == "-o") && i + 1 < argc)
            out = argv[++i];
        else {
            std::cerr << "usage: acceptance [--output DIR]\n";
            return 2;
        }
    }
    fs::create_directories(out);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"step-equivalence", step_equivalence},
        {"term-exactness", term_exactness},
        {"trotter-order", [&] { return trotter_order(out); }},
        {"walsh-synthesis", walsh_synthesis},
        {"zitterbewegung-1d", [&] { return zitterbewegung_1d(out); }},
        {"klein-paradox", [&] { return klein_paradox(out); }},
        {"zitterbewegung-3d", [&] { return zitterbewegung_3d(out); }},
        {"resource-accounting", [&] { return resource_accounting(out); }},
        {"determinism", [&] { return determinism(out); }},
    };
    int failures = 0;
    for (const auto &[name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = fn();
        } catch (const std::exception &e) {
            r = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (r.pass ? "PASS " : "FAIL ") << name << ": " << r.detail << " [" << fmt("%.1f", secs) << " s]"
                  << std::endl;
        failures += r.pass ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
