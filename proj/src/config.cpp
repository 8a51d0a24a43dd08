#include "cqed/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace cqed {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads the members of one JSON object, rejecting keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError("'" + (path_.empty() ? "<root>" : path_) + "' must be a JSON object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    const json& at(const std::string& key) {
        if (!has(key)) throw ConfigError("missing key '" + join(path_, key) + "'");
        return j_.at(key);
    }

    std::string child_path(const std::string& key) const { return join(path_, key); }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError("key '" + join(path_, key) + "' must be a number");
        return v.get<double>();
    }

    void number(const std::string& key, double& out) {
        if (has(key)) out = number(key);
    }

    void integer(const std::string& key, int& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError("key '" + join(path_, key) + "' must be an integer");
        out = v.get<int>();
    }

    void unsigned64(const std::string& key, std::uint64_t& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError("key '" + join(path_, key) + "' must be a non-negative integer");
        }
        out = v.get<std::uint64_t>();
    }

    std::string string(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError("key '" + join(path_, key) + "' must be a string");
        return v.get<std::string>();
    }

    void string(const std::string& key, std::string& out) {
        if (has(key)) out = string(key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError("unknown key '" + join(path_, it.key()) + "'");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// Wraps library parsing errors so the message names the key being read.
template <class F>
auto with_key(const std::string& key, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError("key '" + path + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) throw ConfigError("key '" + path + "' must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

json params_to_json(const SystemParams& p) {
    return {{"g", p.g},         {"delta", p.delta}, {"kappa", p.kappa}, {"gamma_atom", p.gamma_atom},
            {"m", p.m},         {"xi", p.xi},       {"n_max", p.n_max}};
}

void read_params(ObjectReader& r, SystemParams& p) {
    r.number("g", p.g);
    r.number("delta", p.delta);
    r.number("kappa", p.kappa);
    r.number("gamma_atom", p.gamma_atom);
    r.integer("m", p.m);
    r.number("xi", p.xi);
    r.integer("n_max", p.n_max);
}

json pulse_to_json(const PulseEnvelope& p) {
    if (p.shape == PulseShape::constant) return {{"shape", "constant"}, {"peak", p.peak}};
    return {{"shape", "gaussian"}, {"peak", p.peak}, {"center", p.center}, {"width", p.width}};
}

PulseEnvelope pulse_from_json(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    PulseEnvelope p;
    const std::string shape = r.has("shape") ? r.string("shape") : "gaussian";
    if (shape == "constant") {
        p.shape = PulseShape::constant;
        p.peak = r.number("peak");
    } else if (shape == "gaussian") {
        p.shape = PulseShape::gaussian;
        p.peak = r.number("peak");
        p.center = r.number("center");
        p.width = r.number("width");
    } else {
        throw ConfigError("key '" + join(path, "shape") + "' must be 'gaussian' or 'constant'");
    }
    r.finish();
    return p;
}

std::string_view method_name(IntegratorMethod m) {
    return m == IntegratorMethod::rk4_fixed ? "rk4_fixed" : "rk45_adaptive";
}

json integrator_to_json(const IntegratorConfig& c) {
    return {{"method", method_name(c.method)}, {"dt", c.dt},           {"tol_abs", c.tol_abs},
            {"tol_rel", c.tol_rel},            {"t_start", c.t_start}, {"t_end", c.t_end},
            {"record_stride", c.record_stride}};
}

void read_integrator(const json& j, const std::string& path, IntegratorConfig& c) {
    ObjectReader r(j, path);
    if (r.has("method")) {
        const std::string m = r.string("method");
        if (m == "rk4_fixed") c.method = IntegratorMethod::rk4_fixed;
        else if (m == "rk45_adaptive") c.method = IntegratorMethod::rk45_adaptive;
        else throw ConfigError("key '" + join(path, "method") + "' must be 'rk4_fixed' or 'rk45_adaptive'");
    }
    r.number("dt", c.dt);
    r.number("tol_abs", c.tol_abs);
    r.number("tol_rel", c.tol_rel);
    r.number("t_start", c.t_start);
    r.number("t_end", c.t_end);
    r.number("record_stride", c.record_stride);
    r.finish();
}

json target_to_json(const TargetState& t) {
    if (t.label != TargetLabel::custom) return t.name();
    json amps = json::array();
    for (Index i = 0; i < t.ket.size(); ++i) amps.push_back({t.ket(i).real(), t.ket(i).imag()});
    return {{"custom", amps}};
}

TargetState target_from_json(const json& j, const std::string& path) {
    if (j.is_string()) return with_key(path, [&] { return parse_target(j.get<std::string>()); });
    ObjectReader r(j, path);
    const json& amps = r.at("custom");
    r.finish();
    if (!amps.is_array() || amps.size() != static_cast<std::size_t>(kTwoAtomDim)) {
        throw ConfigError("key '" + join(path, "custom") + "' must list 9 [re, im] amplitudes");
    }
    Ket ket(kTwoAtomDim);
    for (Index i = 0; i < kTwoAtomDim; ++i) {
        const json& a = amps[static_cast<std::size_t>(i)];
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
            throw ConfigError("key '" + join(path, "custom") + "' must list 9 [re, im] amplitudes");
        }
        ket(i) = cplx(a[0].get<double>(), a[1].get<double>());
    }
    return with_key(path, [&] { return custom_target(std::move(ket)); });
}

void to_g_units(Scenario& s, double scale) {
    auto rate = [scale](double& v) { v /= scale; };
    auto time = [scale](double& v) { v *= scale; };
    rate(s.params.g);
    rate(s.params.delta);
    rate(s.params.kappa);
    rate(s.params.gamma_atom);
    for (PulseEnvelope* p : {&s.pulses.atom1, &s.pulses.atom2}) {
        rate(p->peak);
        if (p->shape == PulseShape::gaussian) {
            time(p->center);
            time(p->width);
        }
    }
    time(s.integrator.dt);
    time(s.integrator.t_start);
    time(s.integrator.t_end);
    time(s.integrator.record_stride);
}

RunConfig parse_document(const json& doc) {
    ObjectReader root(doc, "");
    if (root.has("schema_version")) {
        const json& v = root.at("schema_version");
        if (!v.is_number_integer() || v.get<int>() != kConfigSchemaVersion) {
            throw ConfigError("key 'schema_version' must be " + std::to_string(kConfigSchemaVersion));
        }
    }
    if (!root.has("scenario")) throw ConfigError("missing scenario (key 'scenario')");

    RunConfig c;
    const json& sc = root.at("scenario");
    if (sc.is_string()) {
        c.scenario = with_key("scenario", [&] { return preset(sc.get<std::string>()); });
    } else {
        c.scenario = scenario_from_json(sc);
    }

    if (root.has("overrides")) {
        ObjectReader r(root.at("overrides"), "overrides");
        read_params(r, c.scenario.params);
        r.string("initial_state", c.scenario.initial_state);
        if (r.has("target")) c.scenario.target = target_from_json(r.at("target"), "overrides.target");
        r.finish();
    }
    if (root.has("integrator")) read_integrator(root.at("integrator"), "integrator", c.scenario.integrator);
    if (root.has("observables")) c.scenario.observables = string_list(root.at("observables"), "observables");
    root.integer("workers", c.workers);
    if (c.workers < 1) throw ConfigError("key 'workers' must be >= 1");
    root.unsigned64("seed", c.seed);

    if (root.has("sweep")) {
        c.sweep = sweep_from_json(root.at("sweep"), c.seed);
    } else if (c.scenario.sweep) {
        c.sweep = c.scenario.sweep;
        c.sweep->seed = c.seed;
    }
    root.finish();

    with_key("scenario", [&] {
        validate(c.scenario);
        return 0;
    });
    if (c.sweep) with_key("sweep", [&] {
        validate(*c.sweep);
        return 0;
    });
    return c;
}

}  // namespace

json scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["params"] = params_to_json(s.params);
    j["pulses"] = json::array({pulse_to_json(s.pulses.atom1), pulse_to_json(s.pulses.atom2)});
    j["initial_state"] = s.initial_state;
    j["model"] = {{"variant", to_string(s.model.variant)}, {"frame", to_string(s.model.frame)}};
    j["integrator"] = integrator_to_json(s.integrator);
    j["observables"] = s.observables;
    j["target"] = target_to_json(s.target);
    if (s.physical_units) j["physical_units"] = {{"g_rad_per_s", s.physical_units->g_rad_per_s}, {"input_units", "g"}};
    if (s.sweep) j["sweep"] = sweep_to_json(*s.sweep);
    return j;
}

Scenario scenario_from_json(const json& doc) {
    ObjectReader r(doc, "scenario");
    Scenario s;
    if (r.has("base")) {
        const std::string base = r.string("base");
        s = with_key("scenario.base", [&] { return preset(base); });
    }
    r.string("name", s.name);
    if (s.name.empty()) s.name = "custom";
    if (r.has("params")) {
        ObjectReader p(r.at("params"), "scenario.params");
        read_params(p, s.params);
        p.finish();
    }
    if (r.has("pulses")) {
        const json& pulses = r.at("pulses");
        if (!pulses.is_array() || pulses.size() != 2) throw ConfigError("key 'scenario.pulses' must hold two pulses");
        s.pulses.atom1 = pulse_from_json(pulses[0], "scenario.pulses[0]");
        s.pulses.atom2 = pulse_from_json(pulses[1], "scenario.pulses[1]");
    }
    r.string("initial_state", s.initial_state);
    if (r.has("model")) {
        ObjectReader m(r.at("model"), "scenario.model");
        if (m.has("variant")) {
            const std::string v = m.string("variant");
            s.model.variant = with_key("scenario.model.variant", [&] { return parse_model_variant(v); });
        }
        if (m.has("frame")) {
            const std::string f = m.string("frame");
            s.model.frame = with_key("scenario.model.frame", [&] { return parse_frame(f); });
        }
        m.finish();
    }
    if (r.has("integrator")) read_integrator(r.at("integrator"), "scenario.integrator", s.integrator);
    if (r.has("observables")) s.observables = string_list(r.at("observables"), "scenario.observables");
    if (s.observables.empty()) s.observables = default_observables();
    if (r.has("target")) s.target = target_from_json(r.at("target"), "scenario.target");
    if (r.has("sweep")) s.sweep = sweep_from_json(r.at("sweep"), kDefaultSeed);
    if (r.has("physical_units")) {
        ObjectReader u(r.at("physical_units"), "scenario.physical_units");
        PhysicalUnits pu{u.number("g_rad_per_s")};
        if (!(pu.g_rad_per_s > 0.0)) throw ConfigError("key 'scenario.physical_units.g_rad_per_s' must be positive");
        const std::string input = u.has("input_units") ? u.string("input_units") : "physical";
        u.finish();
        if (input == "physical") {
            // A base preset is already in units of g; scaling it again would be wrong.
            if (r.has("base")) throw ConfigError("key 'scenario.physical_units.input_units': 'physical' cannot be combined with 'base'");
            to_g_units(s, pu.g_rad_per_s);
        }
        else if (input != "g") throw ConfigError("key 'scenario.physical_units.input_units' must be 'physical' or 'g'");
        s.physical_units = pu;
    }
    r.finish();
    return s;
}

json sweep_to_json(const SweepSpec& s) {
    return {{"axis", to_string(s.axis)},     {"grid", s.grid},   {"mode", to_string(s.mode)},
            {"samples", s.samples},          {"split_ratio", s.split_ratio}, {"seed", s.seed}};
}

SweepSpec sweep_from_json(const json& doc, std::uint64_t default_seed) {
    ObjectReader r(doc, "sweep");
    SweepSpec s;
    s.seed = default_seed;
    const std::string axis = r.string("axis");
    s.axis = with_key("sweep.axis", [&] { return parse_sweep_axis(axis); });
    const json& grid = r.at("grid");
    if (!grid.is_array()) throw ConfigError("key 'sweep.grid' must be an array of numbers");
    for (const auto& v : grid) {
        if (!v.is_number()) throw ConfigError("key 'sweep.grid' must be an array of numbers");
        s.grid.push_back(v.get<double>());
    }
    if (s.grid.empty()) throw ConfigError("key 'sweep.grid' is empty");
    if (r.has("mode")) {
        const std::string mode = r.string("mode");
        s.mode = with_key("sweep.mode", [&] { return parse_fluctuation_mode(mode); });
    }
    r.integer("samples", s.samples);
    r.number("split_ratio", s.split_ratio);
    r.unsigned64("seed", s.seed);
    r.finish();
    with_key("sweep", [&] {
        validate(s);
        return 0;
    });
    return s;
}

RunConfig parse_run_config(const json& doc) {
    // A meta.json from a previous run carries its resolved config under "config".
    if (doc.is_object() && doc.contains("tool") && doc.contains("config")) return parse_document(doc.at("config"));
    return parse_document(doc);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError("missing scenario (empty config)");
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["scenario"] = scenario_to_json(c.scenario);
    if (c.sweep) j["sweep"] = sweep_to_json(*c.sweep);
    j["workers"] = c.workers;
    j["seed"] = c.seed;
    return j;
}

}  // namespace cqed
