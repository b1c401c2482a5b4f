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

#include "diracwalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <numbers>
#include <set>
#include <sstream>
#include <type_traits>

#include "diracwalk/error.hpp"
#include "diracwalk/gatesim.hpp"
#include "diracwalk/oracle.hpp"
#include "diracwalk/walsh.hpp"

namespace diracwalk {

using nlohmann::json;

namespace {

json common_defaults(const std::string &experiment) {
    return {
        {"experiment", experiment},
        {"grid", {{"dim", 1}, {"n", 1024}, {"omega", 1.0}, {"n_star", 0.5}}},
        {"phys", {{"m", 1.0}, {"e", 1.0}, {"c", 1.0}, {"units", "natural"}}},
        {"formula", {{"order", 2}, {"steps", 100}, {"time", 0.05}}},
        {"potential", {{"kind", "none"}, {"v0", 0.0}, {"z0", 0.0}, {"axis", 0}, {"file", ""}}},
        {"circuit", {{"qft_cutoff", 0.0}, {"walsh_threshold", 0.0}, {"max_qubits", kDefaultMaxQubits}}},
        {"output", "runs/" + experiment},
        {"seed", 20260101},
    };
}

// Recursive key and type check of `value` against the default document.
void check_schema(const json &value, const json &schema, const std::string &path) {
    if (schema.is_object()) {
        if (!value.is_object())
            fail(ErrorKind::Config, "config key '" + path + "' must be an object");
        for (const auto &[key, item] : value.items()) {
            const std::string sub = path.empty() ? key : path + "." + key;
            if (!schema.contains(key))
                fail(ErrorKind::Config, "unknown config key '" + sub + "'");
            check_schema(item, schema.at(key), sub);
        }
        return;
    }
    const auto bad = [&](const char *what) { fail(ErrorKind::Config, "config key '" + path + "' must be " + what); };
    if (schema.is_null()) {
        if (!value.is_null() && !value.is_number())
            bad("a number or null");
    } else if (schema.is_boolean()) {
        if (!value.is_boolean())
            bad("a boolean");
    } else if (schema.is_number_integer()) {
        if (!value.is_number_integer())
            bad("an integer");
    } else if (schema.is_number()) {
        if (!value.is_number())
            bad("a number");
    } else if (schema.is_string()) {
        if (!value.is_string())
            bad("a string");
    } else if (schema.is_array()) {
        if (!value.is_array())
            bad("an array");
        const bool strings = !schema.empty() && schema.front().is_string();
        for (const auto &item : value)
            if (strings ? !item.is_string() : !item.is_number())
                bad(strings ? "an array of strings" : "an array of numbers");
    }
}

std::string format_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

std::string short_number(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << v;
    return os.str();
}

class Csv {
  public:
    Csv(const std::string &hash, const std::string &header) {
        os_.imbue(std::locale::classic());
        os_ << "# config_hash " << hash << '\n' << header << '\n';
    }
    template <class... Ts> void row(const Ts &...values) {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(values), first = false), ...);
        os_ << '\n';
    }
    std::string str() const { return os_.str(); }

  private:
    static std::string cell(double v) { return format_double(v); }
    static std::string cell(const std::string &s) { return s; }
    static std::string cell(const char *s) { return s; }
    template <class T>
        requires std::is_integral_v<T>
    static std::string cell(T v) {
        return std::to_string(v);
    }
    std::ostringstream os_;
};

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        fail(ErrorKind::Io, "cannot write " + path.string());
    os << content;
    if (!os)
        fail(ErrorKind::Io, "write failed for " + path.string());
}

std::filesystem::path prepare_output(const SimConfig &config) {
    std::filesystem::path dir(config.output);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        fail(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

std::vector<double> numbers(const json &array) {
    std::vector<double> out;
    for (const auto &v : array)
        out.push_back(v.get<double>());
    return out;
}

std::vector<cplx> spinor_weights(const json &section, int components) {
    const auto re = numbers(section.at("spinor"));
    const auto im = numbers(section.at("spinor_imag"));
    if (static_cast<int>(re.size()) != components)
        fail(ErrorKind::Config, "spinor must have " + std::to_string(components) + " entries");
    if (!im.empty() && im.size() != re.size())
        fail(ErrorKind::Config, "spinor_imag must be empty or match spinor");
    std::vector<cplx> w(re.size());
    for (std::size_t i = 0; i < re.size(); ++i)
        w[i] = {re[i], im.empty() ? 0.0 : im[i]};
    return w;
}

std::array<double, 3> triple(const json &value, int dim, const char *name) {
    std::array<double, 3> out{};
    if (value.is_number()) {
        out[0] = value.get<double>();
        return out;
    }
    const auto v = numbers(value);
    if (static_cast<int>(v.size()) != dim)
        fail(ErrorKind::Config, std::string(name) + " must have " + std::to_string(dim) + " entries");
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

GaussianPacket packet_shape(const json &section, int dim) {
    GaussianPacket shape;
    shape.sigma = section.at("sigma").get<double>();
    if (!(shape.sigma > 0.0))
        fail(ErrorKind::Config, "sigma must be positive");
    shape.p0 = triple(section.at("p0"), dim, "p0");
    shape.center = triple(section.at("center"), dim, "center");
    return shape;
}

DiracTerms make_terms(const SimConfig &config, const Grid &grid, double mass) {
    PhysParams phys = config.phys;
    phys.m = mass;
    DiracTerms terms(grid, phys);
    install_potential(terms, config.potential);
    return terms;
}

EvolveOptions evolve_options(const SimConfig &config, bool record) {
    EvolveOptions options;
    options.circuit = config.circuit;
    options.record = record;
    return options;
}

std::vector<double> positions(const std::vector<Observation> &trajectory, int axis = 0) {
    std::vector<double> out;
    out.reserve(trajectory.size());
    for (const auto &o : trajectory)
        out.push_back(o.position[axis]);
    return out;
}

double max_deviation(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool is_monotone(std::span<const double> series) {
    int sign = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double d = series[i] - series[i - 1];
        if (std::abs(d) <= 1e-14)
            continue;
        const int s = d > 0.0 ? 1 : -1;
        if (sign != 0 && s != sign)
            return false;
        sign = s;
    }
    return true;
}

double l2_distance(const SpinorField &a, const SpinorField &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::norm(a.amplitudes()[i] - b.amplitudes()[i]);
    return std::sqrt(s);
}

cplx overlap(const SpinorField &a, const SpinorField &b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    return s;
}

void require_dim(const SimConfig &config, int dim) {
    if (config.dim != dim)
        fail(ErrorKind::Dimension, config.experiment + " requires grid.dim = " + std::to_string(dim));
}

json counts_json(const GateCounts &c) {
    return {{"total", c.total},
            {"two_qubit", c.two_qubit},
            {"depth", c.depth},
            {"rz", c.kind(GateKind::Rz)},
            {"global_phase", c.kind(GateKind::GlobalPhase)}};
}

} // namespace

// ---------------------------------------------------------------------------

json default_config(const std::string &experiment) {
    json cfg = common_defaults(experiment);
    if (experiment == "zb1d") {
        cfg[experiment] = {{"masses", {0.0, 11.0, 22.0, 33.0}},
                           {"sigma", 0.05},
                           {"p0", 0.25},
                           {"center", 0.0},
                           {"spinor", {1.0, -1.0}},
                           {"spinor_imag", json::array()},
                           {"inset_mass", 33.0},
                           {"inset_time", 0.3},
                           {"inset_steps", 600}};
    } else if (experiment == "zb3d") {
        cfg["grid"] = {{"dim", 3}, {"n", 32}, {"omega", 30.0}, {"n_star", 0.5}};
        cfg["formula"] = {{"order", 2}, {"steps", 32}, {"time", 1.0}};
        const double h = std::numbers::sqrt2 / 2.0;
        cfg[experiment] = {{"sigma", 2.0},
                           {"p0", {0.0, 0.0, 0.0}},
                           {"center", {0.0, 0.0, 0.0}},
                           {"spinor", {h, 0.0, 0.0, h}},
                           {"spinor_imag", json::array()},
                           {"planes", {"xy", "yz"}},
                           {"verify_n", 8},
                           {"verify_omega", 12.0},
                           {"verify_sigma", 3.0},
                           {"verify_steps", 256},
                           {"verify_order", 2}};
    } else if (experiment == "klein") {
        cfg["grid"] = {{"dim", 1}, {"n", 1024}, {"omega", 1.4}, {"n_star", 0.5}};
        cfg["phys"] = {{"m", 1.0}, {"e", 1.0}, {"c", kAtomicSpeedOfLight}, {"units", "atomic"}};
        cfg["formula"] = {{"order", 2}, {"steps", 512}, {"time", 6.82e-3}};
        cfg[experiment] = {{"p0", 106.4},
                           {"dz", 0.03},
                           {"z0", nullptr},
                           {"edge", 0.0},
                           {"barriers", {0.0, 1.0, 2.0, 4.0}},
                           {"reference", {1.0, 0.0}},
                           {"snapshot_steps", {0, 128, 256, 384, 512}},
                           {"exact_oracle", true}};
    } else if (experiment == "convergence") {
        cfg["grid"] = {{"dim", 1}, {"n", 64}, {"omega", 20.0}, {"n_star", 0.5}};
        cfg["formula"] = {{"order", 2}, {"steps", 8}, {"time", 1.0}};
        cfg["potential"] = {{"kind", "step"}, {"v0", 1.0}, {"z0", 0.0}, {"axis", 0}, {"file", ""}};
        cfg[experiment] = {{"steps", {8, 16, 32, 64, 128}},
                           {"orders", {1, 2, 4}},
                           {"sigma", 1.5},
                           {"p0", 1.0},
                           {"center", -2.0},
                           {"spinor", {1.0, 0.0}},
                           {"spinor_imag", json::array()},
                           {"floor", 1e-12}};
    } else if (experiment == "gatecount") {
        cfg["formula"] = {{"order", 2}, {"steps", 100}, {"time", 1.0}};
        cfg["potential"] = {{"kind", "step"}, {"v0", 1.0}, {"z0", 0.0}, {"axis", 0}, {"file", ""}};
        cfg[experiment] = {{"q_min", 4}, {"q_max", 12}, {"approx_cutoff", 0.05}, {"eps", 1e-3}};
    } else {
        fail(ErrorKind::Config, "unknown experiment '" + experiment + "'");
    }
    return cfg;
}

json resolve_config(const json &overrides) {
    if (!overrides.is_object())
        fail(ErrorKind::Config, "config must be a JSON object");
    std::string experiment = "zb1d";
    if (overrides.contains("experiment")) {
        if (!overrides.at("experiment").is_string())
            fail(ErrorKind::Config, "config key 'experiment' must be a string");
        experiment = overrides.at("experiment").get<std::string>();
    }
    json cfg = default_config(experiment);
    // Resolved configs carry their own hash; it is not an input.
    json merged = overrides;
    merged.erase("config_hash");
    check_schema(merged, cfg, "");
    // An explicit unit system without an explicit c picks that system's c.
    if (merged.contains("phys") && merged["phys"].contains("units") && !merged["phys"].contains("c"))
        merged["phys"]["c"] = unit_system_from_string(merged["phys"]["units"].get<std::string>()) == UnitSystem::atomic
                                  ? kAtomicSpeedOfLight
                                  : 1.0;
    cfg.merge_patch(merged);
    return cfg;
}

void set_config_value(json &config, const std::string &key, const std::string &value) {
    if (key.empty())
        fail(ErrorKind::Config, "empty config key");
    json *node = &config;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            fail(ErrorKind::Config, "malformed config key '" + key + "'");
        if (!node->is_object())
            *node = json::object();
        node = &(*node)[part];
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    json parsed = json::parse(value, nullptr, false);
    *node = parsed.is_discarded() ? json(value) : parsed;
}

std::string config_hash(const json &resolved) {
    // The output directory names where a run lands, not what it computes.
    json keyed = resolved;
    if (keyed.is_object())
        keyed.erase("output");
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : keyed.dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

SimConfig SimConfig::from_json(const json &overrides) {
    SimConfig c;
    c.resolved = resolve_config(overrides);
    const json &r = c.resolved;
    c.experiment = r.at("experiment").get<std::string>();
    c.dim = r.at("grid").at("dim").get<int>();
    const auto n = r.at("grid").at("n").get<long long>();
    if (n <= 0)
        fail(ErrorKind::Config, "grid.n must be positive");
    c.n = static_cast<std::size_t>(n);
    c.omega = r.at("grid").at("omega").get<double>();
    c.n_star = r.at("grid").at("n_star").get<double>();
    const json &p = r.at("phys");
    c.phys = PhysParams{p.at("m").get<double>(), p.at("e").get<double>(), p.at("c").get<double>(),
                        unit_system_from_string(p.at("units").get<std::string>())};
    c.order = r.at("formula").at("order").get<int>();
    const auto steps = r.at("formula").at("steps").get<long long>();
    if (steps < 1)
        fail(ErrorKind::Config, "formula.steps must be at least 1");
    c.steps = static_cast<std::size_t>(steps);
    c.time = r.at("formula").at("time").get<double>();
    if (!(c.time > 0.0) || !std::isfinite(c.time))
        fail(ErrorKind::Config, "formula.time must be positive");

    const json &pot = r.at("potential");
    const std::string kind = pot.at("kind").get<std::string>();
    if (kind == "none")
        c.potential.kind = PotentialKind::none;
    else if (kind == "step")
        c.potential.kind = PotentialKind::step;
    else if (kind == "tabulated")
        c.potential.kind = PotentialKind::tabulated;
    else
        fail(ErrorKind::Config, "potential.kind must be none, step or tabulated");
    c.potential.v0 = pot.at("v0").get<double>();
    c.potential.z0 = pot.at("z0").get<double>();
    c.potential.axis = pot.at("axis").get<int>();
    c.potential.file = pot.at("file").get<std::string>();
    if (c.potential.axis < 0 || c.potential.axis >= c.dim)
        fail(ErrorKind::Config, "potential.axis out of range");
    if (c.potential.kind == PotentialKind::tabulated && c.potential.file.empty())
        fail(ErrorKind::Config, "potential.file is required for a tabulated potential");

    const json &circ = r.at("circuit");
    const double cutoff = circ.at("qft_cutoff").get<double>();
    if (cutoff < 0.0)
        fail(ErrorKind::Config, "circuit.qft_cutoff must be non-negative");
    if (cutoff > 0.0)
        c.circuit.qft_cutoff = cutoff;
    c.circuit.walsh_threshold = circ.at("walsh_threshold").get<double>();
    if (c.circuit.walsh_threshold < 0.0)
        fail(ErrorKind::Config, "circuit.walsh_threshold must be non-negative");
    c.max_qubits = circ.at("max_qubits").get<int>();
    if (c.max_qubits < 1 || c.max_qubits > 40)
        fail(ErrorKind::Config, "circuit.max_qubits must lie in [1, 40]");
    c.output = r.at("output").get<std::string>();
    if (c.output.empty())
        fail(ErrorKind::Config, "output directory must not be empty");
    const auto seed = r.at("seed").get<long long>();
    if (seed < 0)
        fail(ErrorKind::Config, "seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);

    // Domain checks of the building blocks, reported as configuration errors.
    try {
        c.phys.validate();
        ProductFormula{c.order}.validate();
        (void)c.grid();
    } catch (const Error &e) {
        fail(ErrorKind::Config, e.what());
    }
    c.hash = config_hash(c.resolved);
    return c;
}

std::vector<double> load_tabulated_potential(const std::string &path, const Grid &grid) {
    std::ifstream is(path);
    if (!is)
        fail(ErrorKind::Io, "cannot open potential file " + path);
    is.imbue(std::locale::classic());
    std::vector<double> values;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        ls.imbue(std::locale::classic());
        double v;
        while (ls >> v)
            values.push_back(v);
        if (!ls.eof())
            fail(ErrorKind::Io, "potential file " + path + ": non-numeric entry");
    }
    if (values.size() != grid.points())
        fail(ErrorKind::Config, "potential file " + path + " has " + std::to_string(values.size()) +
                                    " values, grid needs " + std::to_string(grid.points()));
    return values;
}

void install_potential(DiracTerms &terms, const PotentialConfig &potential) {
    const double e = terms.phys.e;
    switch (potential.kind) {
    case PotentialKind::none:
        terms.phi.reset();
        return;
    case PotentialKind::step:
        if (e == 0.0)
            fail(ErrorKind::Config, "a potential needs a nonzero charge");
        terms.phi = step_function(terms.grid, -potential.v0 / e, potential.z0, potential.axis);
        return;
    case PotentialKind::tabulated: {
        if (e == 0.0)
            fail(ErrorKind::Config, "a potential needs a nonzero charge");
        auto v = load_tabulated_potential(potential.file, terms.grid);
        for (double &x : v)
            x = -x / e;
        terms.phi = GridFunction::tabulated(std::move(v));
        return;
    }
    }
}

std::size_t increment_sign_changes(std::span<const double> series) {
    std::size_t changes = 0;
    int sign = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double d = series[i] - series[i - 1];
        if (d == 0.0)
            continue;
        const int s = d > 0.0 ? 1 : -1;
        if (sign != 0 && s != sign)
            ++changes;
        sign = s;
    }
    return changes;
}

double loglog_slope(std::span<const double> r, std::span<const double> err) {
    if (r.size() != err.size() || r.size() < 2)
        fail(ErrorKind::InsufficientData, "a slope fit needs at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double x = std::log(r[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(r.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------

json run_zb1d(const SimConfig &config) {
    require_dim(config, 1);
    const json &sec = config.section();
    const auto dir = prepare_output(config);
    const Grid grid = config.grid();
    const ProductFormula formula = config.formula();
    const QubitLayout layout = QubitLayout::for_grid(grid, config.max_qubits);
    const GaussianPacket shape = packet_shape(sec, 1);
    const auto weights = spinor_weights(sec, grid.spinor_components());
    const SpinorField initial = gaussian_spinor_packet(grid, shape, weights);
    const double dt = config.time / static_cast<double>(config.steps);
    const double inset_time = sec.at("inset_time").get<double>();
    const auto inset_steps = sec.at("inset_steps").get<std::size_t>();
    if (!(inset_time > 0.0) || inset_steps < 8)
        fail(ErrorKind::Config, "zb1d.inset_time must be positive and inset_steps at least 8");

    // Exact trajectory sampled on a uniform time grid.
    const auto exact_trajectory = [&](const ExactPropagator &prop, double total, std::size_t samples) {
        std::vector<double> xs(samples + 1);
        for (std::size_t i = 0; i <= samples; ++i)
            xs[i] = position_expectation(prop.evolve(initial, total * static_cast<double>(i) / samples), 0);
        return xs;
    };

    json masses = json::array();
    for (double m : numbers(sec.at("masses"))) {
        const DiracTerms terms = make_terms(config, grid, m);
        Statevector state = encode(initial, layout);
        const auto trajectory = evolve(state, terms, formula, config.time, config.steps, evolve_options(config, true));
        const auto x_circuit = positions(trajectory);

        std::vector<double> x_split{position_expectation(initial, 0)};
        SpinorField field = initial;
        for (std::size_t s = 0; s < config.steps; ++s) {
            field = split_step(field, terms, formula, dt);
            x_split.push_back(position_expectation(field, 0));
        }
        const ExactPropagator prop(terms);
        const auto x_exact = exact_trajectory(prop, config.time, config.steps);

        Csv csv(config.hash, "step,time,x_circuit,x_split,x_exact,norm");
        for (std::size_t i = 0; i < trajectory.size(); ++i)
            csv.row(trajectory[i].step, trajectory[i].time, x_circuit[i], x_split[i], x_exact[i], trajectory[i].norm);
        write_file(dir / ("zb1d_m" + short_number(m) + ".csv"), csv.str());

        // Oscillation frequency of the exact trajectory over the longer window.
        const auto x_long = exact_trajectory(prop, inset_time, inset_steps);
        std::vector<double> t_long(inset_steps + 1);
        for (std::size_t i = 0; i <= inset_steps; ++i)
            t_long[i] = inset_time * static_cast<double>(i) / inset_steps;
        json zb = {{"expected_2mc2", 2.0 * terms.phys.rest_energy()},
                   {"expected_2e0", 2.0 * std::hypot(terms.phys.rest_energy(), terms.phys.c * shape.p0[0])}};
        try {
            const ZbSpectrum spec = zitterbewegung_frequency(t_long, x_long);
            zb["detected"] = spec.detected;
            zb["angular_frequency"] = spec.angular_frequency;
            zb["amplitude"] = spec.amplitude;
            if (spec.detected && m != 0.0)
                zb["relative_error_2mc2"] = std::abs(spec.angular_frequency / (2.0 * terms.phys.rest_energy()) - 1.0);
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::InsufficientData)
                throw;
            zb["detected"] = false;
            zb["note"] = e.what();
        }

        const double disp_exact = x_exact.back() - x_exact.front();
        masses.push_back({{"m", m},
                          {"displacement_circuit", x_circuit.back() - x_circuit.front()},
                          {"displacement_split", x_split.back() - x_split.front()},
                          {"displacement_exact", disp_exact},
                          {"monotone", is_monotone(x_circuit)},
                          {"sign_changes", increment_sign_changes(x_circuit)},
                          {"sign_changes_exact", increment_sign_changes(x_exact)},
                          {"max_dev_split", max_deviation(x_circuit, x_split)},
                          {"max_dev_exact", max_deviation(x_circuit, x_exact)},
                          {"final_norm", trajectory.back().norm},
                          {"zitterbewegung", zb}});
    }

    // Long circuit run for one mass, resolving several oscillation periods.
    const double inset_mass = sec.at("inset_mass").get<double>();
    const DiracTerms inset_terms = make_terms(config, grid, inset_mass);
    Statevector state = encode(initial, layout);
    const auto inset = evolve(state, inset_terms, formula, inset_time, inset_steps, evolve_options(config, true));
    const auto x_inset = positions(inset);
    const ExactPropagator inset_prop(inset_terms);
    const auto x_inset_exact = exact_trajectory(inset_prop, inset_time, inset_steps);
    Csv csv(config.hash, "step,time,x_circuit,x_exact");
    for (std::size_t i = 0; i < inset.size(); ++i)
        csv.row(inset[i].step, inset[i].time, x_inset[i], x_inset_exact[i]);
    write_file(dir / ("zb1d_inset_m" + short_number(inset_mass) + ".csv"), csv.str());

    return {{"experiment", "zb1d"},
            {"implied_n_star", dt * static_cast<double>(grid.n()) / grid.omega()},
            {"masses", masses},
            {"inset",
             {{"m", inset_mass},
              {"time", inset_time},
              {"steps", inset_steps},
              {"sign_changes", increment_sign_changes(x_inset)},
              {"max_dev_exact", max_deviation(x_inset, x_inset_exact)}}}};
}

json run_zb3d(const SimConfig &config) {
    require_dim(config, 3);
    const json &sec = config.section();
    const Grid grid = config.grid();
    const QubitLayout layout = QubitLayout::for_grid(grid, config.max_qubits);
    const auto dir = prepare_output(config);
    const GaussianPacket shape = packet_shape(sec, 3);
    const auto weights = spinor_weights(sec, grid.spinor_components());
    const SpinorField initial = gaussian_spinor_packet(grid, shape, weights);
    const DiracTerms terms = make_terms(config, grid, config.phys.m);

    Statevector state = encode(initial, layout);
    evolve(state, terms, config.formula(), config.time, config.steps, evolve_options(config, false));
    const SpinorField final_field = decode(state, layout, grid);

    json planes = json::array();
    bool spreads = true;
    for (const auto &name : sec.at("planes")) {
        const std::string label = name.get<std::string>();
        Plane plane;
        if (label == "xy")
            plane = Plane::xy;
        else if (label == "yz")
            plane = Plane::yz;
        else if (label == "xz")
            plane = Plane::xz;
        else
            fail(ErrorKind::Config, "unknown projection plane '" + label + "'");
        const auto before = density_projection(initial, plane);
        const auto after = density_projection(final_field, plane);
        for (const auto &[tag, proj] : {std::pair{"t0", &before}, std::pair{"tT", &after}}) {
            Csv csv(config.hash, "i,j,u,v,density");
            for (std::size_t i = 0; i < grid.n(); ++i)
                for (std::size_t j = 0; j < grid.n(); ++j)
                    csv.row(i, j, grid.position(i), grid.position(j), proj->at(i, j));
            write_file(dir / ("zb3d_" + label + "_" + tag + ".csv"), csv.str());
        }
        json entry = {{"plane", label}};
        for (int which = 0; which < 2; ++which) {
            const double v0 = projection_variance(before, grid, which);
            const double v1 = projection_variance(after, grid, which);
            entry["variance_t0"].push_back(v0);
            entry["variance_tT"].push_back(v1);
            spreads = spreads && v1 > v0;
        }
        planes.push_back(entry);
    }

    // Desk-scale agreement check against the exact propagator. The small grid
    // cannot satisfy both packet-resolution warnings, so they are muted here.
    const Grid vgrid(3, sec.at("verify_n").get<std::size_t>(), sec.at("verify_omega").get<double>(), config.n_star);
    const QubitLayout vlayout = QubitLayout::for_grid(vgrid, config.max_qubits);
    GaussianPacket vshape = shape;
    vshape.sigma = sec.at("verify_sigma").get<double>();
    const auto previous = set_warning_handler([](const std::string &) {});
    SpinorField vinitial(vgrid);
    try {
        vinitial = gaussian_spinor_packet(vgrid, vshape, weights);
    } catch (...) {
        set_warning_handler(previous);
        throw;
    }
    set_warning_handler(previous);
    const DiracTerms vterms = make_terms(config, vgrid, config.phys.m);
    const auto vsteps = sec.at("verify_steps").get<std::size_t>();
    const ProductFormula vformula{sec.at("verify_order").get<int>()};
    Statevector vstate = encode(vinitial, vlayout);
    evolve(vstate, vterms, vformula, config.time, vsteps, evolve_options(config, false));
    const SpinorField vcircuit = decode(vstate, vlayout, vgrid);
    const SpinorField vexact = exact_evolve(vinitial, vterms, config.time);
    const double fidelity = std::norm(overlap(vexact, vcircuit));
    double max_err = 0.0;
    for (std::size_t i = 0; i < vexact.size(); ++i)
        max_err = std::max(max_err, std::abs(vexact.amplitudes()[i] - vcircuit.amplitudes()[i]));
    const json verification = {{"n", vgrid.n()},         {"omega", vgrid.omega()}, {"steps", vsteps},
                               {"order", vformula.order}, {"fidelity", fidelity},  {"max_amplitude_error", max_err},
                               {"config_hash", config.hash}};
    write_file(dir / "zb3d_verification.json", verification.dump(2) + "\n");

    return {{"experiment", "zb3d"},
            {"qubits", layout.total_qubits()},
            {"final_norm", final_field.norm()},
            {"planes", planes},
            {"variance_increased", spreads},
            {"verification", verification}};
}

json run_klein(const SimConfig &config) {
    require_dim(config, 1);
    if (config.potential.kind != PotentialKind::none)
        fail(ErrorKind::Config, "klein builds its own step potentials; leave potential.kind = none");
    const json &sec = config.section();
    const auto dir = prepare_output(config);
    const Grid grid = config.grid();
    const QubitLayout layout = QubitLayout::for_grid(grid, config.max_qubits);
    const PhysParams phys = config.phys;
    if (phys.e == 0.0)
        fail(ErrorKind::Config, "klein needs a nonzero charge");
    const double p0 = sec.at("p0").get<double>();
    const double dz = sec.at("dz").get<double>();
    const double z0 = sec.at("z0").is_null() ? -grid.omega() / 4.0 : sec.at("z0").get<double>();
    const double edge = sec.at("edge").get<double>();
    const auto ref = numbers(sec.at("reference"));
    if (ref.size() != 2)
        fail(ErrorKind::Config, "klein.reference must have 2 entries");
    std::set<std::size_t> snapshots;
    for (double s : numbers(sec.at("snapshot_steps"))) {
        if (s < 0.0 || s > static_cast<double>(config.steps) || s != std::floor(s))
            fail(ErrorKind::Config, "klein.snapshot_steps entries must be integers in [0, steps]");
        snapshots.insert(static_cast<std::size_t>(s));
    }
    const bool with_exact = sec.at("exact_oracle").get<bool>();
    const SpinorField initial = positive_energy_packet(grid, p0, z0, dz, phys, {cplx{ref[0]}, cplx{ref[1]}});
    const double unit = grid.omega() * phys.rest_energy();

    Csv table(config.hash, "run,v0_factor,v0,transmission,transmission_exact");
    json runs = json::array();
    const auto factors = numbers(sec.at("barriers"));
    for (std::size_t run_index = 0; run_index < factors.size(); ++run_index) {
        const double v0 = factors[run_index] * unit;
        DiracTerms terms(grid, phys);
        if (v0 != 0.0)
            terms.phi = step_function(grid, -v0 / phys.e, edge, 0);

        Csv density(config.hash, "step,z,density");
        EvolveOptions options = evolve_options(config, true);
        options.barrier_position = edge;
        options.observer = [&](std::size_t step, double, const Statevector &state) {
            if (!snapshots.count(step))
                return;
            const auto rho = decode(state, layout, grid).density();
            for (std::size_t i = 0; i < grid.n(); ++i)
                density.row(step, grid.position(i), rho[i]);
        };
        Statevector state = encode(initial, layout);
        const auto trajectory = evolve(state, terms, config.formula(), config.time, config.steps, options);
        const SpinorField final_field = decode(state, layout, grid);

        const std::string stem = "klein_run" + std::to_string(run_index);
        Csv csv(config.hash, "step,time,norm,x,transmission");
        for (const auto &o : trajectory)
            csv.row(o.step, o.time, o.norm, o.position[0], o.transmission);
        write_file(dir / (stem + ".csv"), csv.str());
        write_file(dir / (stem + "_density.csv"), density.str());
        std::ostringstream snap;
        snap.imbue(std::locale::classic());
        snap << "# config_hash " << config.hash << '\n';
        write_snapshot(snap, final_field, phys.units);
        write_file(dir / (stem + "_final.snap"), snap.str());

        const double transmission = trajectory.back().transmission;
        json entry = {{"run", run_index},
                      {"v0_factor", factors[run_index]},
                      {"v0", v0},
                      {"transmission", transmission},
                      {"final_norm", trajectory.back().norm},
                      {"final_position", trajectory.back().position[0]}};
        double exact_t = std::nan("");
        if (with_exact) {
            exact_t = transmission_probability(exact_evolve(initial, terms, config.time), edge);
            entry["transmission_exact"] = exact_t;
        }
        table.row(run_index, factors[run_index], v0, transmission, exact_t);
        runs.push_back(entry);
    }
    write_file(dir / "klein_transmission.csv", table.str());
    return {{"experiment", "klein"},
            {"packet", {{"p0", p0}, {"dz", dz}, {"z0", z0}, {"energy", free_energy_expectation(initial, phys)}}},
            {"barrier_unit", unit},
            {"edge", edge},
            {"runs", runs}};
}

json run_convergence(const SimConfig &config) {
    const json &sec = config.section();
    const auto dir = prepare_output(config);
    const Grid grid = config.grid();
    const QubitLayout layout = QubitLayout::for_grid(grid, config.max_qubits);
    const GaussianPacket shape = packet_shape(sec, grid.dim());
    const SpinorField initial = gaussian_spinor_packet(grid, shape, spinor_weights(sec, grid.spinor_components()));
    const DiracTerms terms = make_terms(config, grid, config.phys.m);
    const SpinorField exact = exact_evolve(initial, terms, config.time);
    const double floor = sec.at("floor").get<double>();

    Csv csv(config.hash, "order,steps,error");
    json fits = json::array();
    for (double od : numbers(sec.at("orders"))) {
        const ProductFormula formula{static_cast<int>(od)};
        formula.validate();
        std::vector<double> rs, errs, fit_r, fit_e;
        for (double rd : numbers(sec.at("steps"))) {
            if (rd < 1.0 || rd != std::floor(rd))
                fail(ErrorKind::Config, "convergence.steps entries must be positive integers");
            Statevector state = encode(initial, layout);
            evolve(state, terms, formula, config.time, static_cast<std::size_t>(rd), evolve_options(config, false));
            const double err = l2_distance(decode(state, layout, grid), exact);
            csv.row(formula.order, static_cast<std::size_t>(rd), err);
            rs.push_back(rd);
            errs.push_back(err);
            // Points at the rounding floor carry no convergence information.
            if (err > floor) {
                fit_r.push_back(rd);
                fit_e.push_back(err);
            }
        }
        json fit = {{"order", formula.order}, {"steps", rs}, {"errors", errs}, {"fit_steps", fit_r}};
        if (fit_r.size() >= 2)
            fit["slope"] = loglog_slope(fit_r, fit_e);
        else
            fit["slope"] = nullptr;
        fits.push_back(fit);
    }
    write_file(dir / "convergence.csv", csv.str());
    return {{"experiment", "convergence"}, {"floor", floor}, {"fits", fits}};
}

json run_gatecount(const SimConfig &config) {
    const json &sec = config.section();
    const auto dir = prepare_output(config);
    const int q_min = sec.at("q_min").get<int>();
    const int q_max = sec.at("q_max").get<int>();
    if (q_min < 1 || q_max < q_min || q_max > 30)
        fail(ErrorKind::Config, "gatecount needs 1 <= q_min <= q_max <= 30");
    const double cutoff = sec.at("approx_cutoff").get<double>();
    const double eps = sec.at("eps").get<double>();
    if (!(cutoff > 0.0) || !(eps > 0.0))
        fail(ErrorKind::Config, "gatecount.approx_cutoff and gatecount.eps must be positive");
    const double t = config.time / static_cast<double>(config.steps);
    const PhysParams &phys = config.phys;

    Csv csv(config.hash, "dim,q,block,total,two_qubit,depth,rz");
    json rows = json::array();
    double c1 = 0.0, c2 = 0.0;
    bool mass_single = true, step_single = true;
    for (int dim : {1, 3}) {
        for (int q = q_min; q <= q_max; ++q) {
            if (dim == 3 && 3 * q + 2 > 30)
                break;
            const Grid grid(dim, std::size_t{1} << q, config.omega, config.n_star);
            // Counting only: circuits are built against a layout, never simulated.
            const QubitLayout layout(dim, q, 64);
            const auto put = [&](const std::string &block, const Circuit &c) {
                const GateCounts counts = gate_count(c);
                csv.row(dim, q, block, counts.total, counts.two_qubit, counts.depth, counts.kind(GateKind::Rz));
                json row = counts_json(counts);
                row["dim"] = dim;
                row["q"] = q;
                row["block"] = block;
                rows.push_back(row);
                return counts;
            };
            const auto kin = put("kinetic", kinetic_axis_circuit(0, t, grid, layout, phys.c));
            const auto kin_approx = put("kinetic-approx", kinetic_axis_circuit(0, t, grid, layout, phys.c, cutoff));
            const auto mass = put("mass", mass_coin_circuit(t, phys.m, layout, phys.c));
            PotentialConfig step = config.potential;
            step.kind = PotentialKind::step;
            step.axis = 0;
            const auto phi = step_function(grid, -step.v0 / phys.e, step.z0, 0);
            const auto pot = put("step-potential", scalar_potential_circuit(t, phi, phys.e, grid, layout));
            if (dim == 1) {
                const double qd = q;
                c1 = std::max(c1, kin.two_qubit / (qd * qd));
                if (q >= 2)
                    c2 = std::max(c2, kin_approx.two_qubit / (qd * std::log2(qd)));
            }
            mass_single = mass_single && mass.total == 1 && mass.kind(GateKind::Rz) == 1;
            step_single = step_single && pot.kind(GateKind::Rz) == 1 && pot.total - pot.kind(GateKind::GlobalPhase) == 1;
        }
    }
    write_file(dir / "gatecount.csv", csv.str());

    // Exponential-count bound for the configured run.
    DiracTerms terms = make_terms(config, config.grid(), phys.m);
    json bound = {{"norm_sum", terms.norm_sum()},
                  {"time", config.time},
                  {"eps", eps},
                  {"k1", n_exp_bound(1, config.time, eps, terms)},
                  {"k2", n_exp_bound(2, config.time, eps, terms)},
                  {"spot_k1_unit", n_exp_bound(1, 1.0, 1.0, 1.0)}};
    return {{"experiment", "gatecount"},
            {"rows", rows},
            {"kinetic_c1_q2", c1},
            {"kinetic_approx_c2_qlogq", c2},
            {"approx_cutoff", cutoff},
            {"mass_single_rotation", mass_single},
            {"step_single_rz", step_single},
            {"n_exp_bound", bound}};
}

json run_experiment(const SimConfig &config) {
    json summary;
    if (config.experiment == "zb1d")
        summary = run_zb1d(config);
    else if (config.experiment == "zb3d")
        summary = run_zb3d(config);
    else if (config.experiment == "klein")
        summary = run_klein(config);
    else if (config.experiment == "convergence")
        summary = run_convergence(config);
    else if (config.experiment == "gatecount")
        summary = run_gatecount(config);
    else
        fail(ErrorKind::Config, "unknown experiment '" + config.experiment + "'");
    summary["config_hash"] = config.hash;
    const auto dir = prepare_output(config);
    json resolved = config.resolved;
    resolved["config_hash"] = config.hash;
    write_file(dir / "resolved_config.json", resolved.dump(2) + "\n");
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    return summary;
}

} // namespace diracwalk
