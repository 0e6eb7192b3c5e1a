#include "isingbraid/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "isingbraid/parallel.hpp"
#include "isingbraid/seeding.hpp"

namespace isingbraid::cli {

using nlohmann::json;

std::vector<ScenarioRun> standard_runs() {
    return {{Scenario::TranslateNoCoupler, LogicalLabel::AllUp},
            {Scenario::TranslateNoCoupler, LogicalLabel::L0},
            {Scenario::TranslateWithCoupler, LogicalLabel::AllUp},
            {Scenario::TranslateWithCoupler, LogicalLabel::L0},
            {Scenario::Braid, LogicalLabel::AllUp}};
}

std::uint64_t scenario_id(const ScenarioRun &run) {
    return 4 * static_cast<std::uint64_t>(run.scenario) + static_cast<std::uint64_t>(run.init);
}

double parse_angle(const std::string &text) {
    static const std::regex pi_form(
        R"(^\s*([+-]?\d*\.?\d*(?:[eE][+-]?\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+(?:[eE][+-]?\d+)?))?\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, pi_form)) {
        double coef = 1.0;
        const std::string c = m[1].str();
        if (c == "-") {
            coef = -1.0;
        } else if (!c.empty() && c != "+") {
            coef = std::stod(c);
        }
        double denom = m[2].matched ? std::stod(m[2].str()) : 1.0;
        if (denom == 0.0) {
            throw ConfigError("angle '" + text + "' divides by zero");
        }
        return coef * std::numbers::pi / denom;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || text.find_first_not_of(" \t", used) != std::string::npos) {
        throw ConfigError("cannot parse angle '" + text + "'");
    }
    return v;
}

namespace {

const std::set<std::string> kRequired = {"N_s", "J",  "J_C", "h_ferro", "h_para",
                                         "dt",  "dh", "T",   "Gamma",   "theta"};
const std::set<std::string> kOptional = {
    "shots",          "seed",           "update_mode",  "coupler_prep", "readout",
    "scenario",       "init",           "eps_bitflip",  "eps_phase",    "eps_meas",
    "eps_bitflip_1q", "eps_bitflip_2q", "eps_phase_1q", "eps_phase_2q", "trajectories",
    "sweep_axis",     "sweep_values"};

double number(const json &j, const std::string &key) {
    const auto &v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError("key '" + key + "' must be a number");
    }
    return v.get<double>();
}

double angle(const json &v, const std::string &key) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        return parse_angle(v.get<std::string>());
    }
    throw ConfigError("key '" + key + "' must be a number or an angle string");
}

std::uint64_t count(const json &j, const std::string &key) {
    const auto &v = j.at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError("key '" + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json &j, const std::string &key) {
    const auto &v = j.at(key);
    if (!v.is_string()) {
        throw ConfigError("key '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

template <typename T>
T enum_value(const json &j, const std::string &key, std::optional<T> (*parse)(std::string_view)) {
    const auto s = text(j, key);
    const auto v = parse(s);
    if (!v) {
        throw ConfigError("key '" + key + "' has unknown value '" + s + "'");
    }
    return *v;
}

std::optional<double> optional_number(const json &j, const std::string &key) {
    if (!j.contains(key)) {
        return std::nullopt;
    }
    return number(j, key);
}

} // namespace

RunConfig parse_config(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto &[key, _] : j.items()) {
        if (!kRequired.contains(key) && !kOptional.contains(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    for (const auto &key : kRequired) {
        if (!j.contains(key)) {
            throw ConfigError("missing required config key '" + key + "'");
        }
    }

    RunConfig cfg;
    auto &p = cfg.params;
    p.N_s = count(j, "N_s");
    p.J = number(j, "J");
    p.J_C = number(j, "J_C");
    p.h_ferro = number(j, "h_ferro");
    p.h_para = number(j, "h_para");
    p.dt = number(j, "dt");
    p.dh = number(j, "dh");
    p.T = number(j, "T");
    p.Gamma = angle(j.at("Gamma"), "Gamma");
    p.theta = angle(j.at("theta"), "theta");
    if (j.contains("shots")) {
        p.shots = count(j, "shots");
    }
    if (j.contains("seed")) {
        p.seed = count(j, "seed");
    }
    if (j.contains("update_mode")) {
        p.update_mode = enum_value(j, "update_mode", parse_update_mode);
    }
    if (j.contains("coupler_prep")) {
        p.coupler_prep = enum_value(j, "coupler_prep", parse_coupler_prep);
    }
    if (j.contains("readout")) {
        p.readout = enum_value(j, "readout", parse_readout_scope);
    }

    const std::string scenario = j.contains("scenario") ? text(j, "scenario") : "braid";
    if (scenario == "all") {
        if (j.contains("init")) {
            throw ConfigError("key 'init' conflicts with scenario 'all'");
        }
        cfg.runs = standard_runs();
    } else {
        const auto s = parse_scenario(scenario);
        if (!s) {
            throw ConfigError("key 'scenario' has unknown value '" + scenario + "'");
        }
        const auto init = j.contains("init") ? enum_value(j, "init", parse_logical_label)
                                             : LogicalLabel::AllUp;
        cfg.runs = {{*s, init}};
    }

    auto &n = cfg.noise;
    n.eps_bitflip = optional_number(j, "eps_bitflip").value_or(0.0);
    n.eps_phase = optional_number(j, "eps_phase").value_or(0.0);
    n.eps_meas = optional_number(j, "eps_meas").value_or(0.0);
    n.bitflip_1q = optional_number(j, "eps_bitflip_1q");
    n.bitflip_2q = optional_number(j, "eps_bitflip_2q");
    n.phase_1q = optional_number(j, "eps_phase_1q");
    n.phase_2q = optional_number(j, "eps_phase_2q");
    if (j.contains("trajectories")) {
        n.trajectories = count(j, "trajectories");
    }
    n.validate();

    if (j.contains("sweep_axis") != j.contains("sweep_values")) {
        throw ConfigError("sweep_axis and sweep_values must be given together");
    }
    if (j.contains("sweep_axis")) {
        SweepAxis axis{text(j, "sweep_axis"), {}};
        if (std::find(kSweepAxes.begin(), kSweepAxes.end(), axis.name) == kSweepAxes.end()) {
            throw ConfigError("unknown sweep axis '" + axis.name + "'");
        }
        const auto &vals = j.at("sweep_values");
        if (!vals.is_array() || vals.empty()) {
            throw ConfigError("key 'sweep_values' must be a non-empty array");
        }
        for (const auto &v : vals) {
            axis.values.push_back(angle(v, "sweep_values"));
        }
        cfg.sweep = std::move(axis);
    }
    p.validate();
    return cfg;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error &e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

void apply_axis(RunConfig &cfg, const std::string &axis, double value) {
    auto &p = cfg.params;
    if (axis == "dt") {
        p.dt = value;
    } else if (axis == "h_para") {
        p.h_para = value;
    } else if (axis == "dh") {
        p.dh = value;
    } else if (axis == "J_C") {
        p.J_C = value;
    } else if (axis == "Gamma") {
        p.Gamma = value;
    } else if (axis == "N_s") {
        if (value < 0.0 || value != std::floor(value)) {
            throw ConfigError("N_s sweep values must be non-negative integers");
        }
        p.N_s = static_cast<std::size_t>(value);
    } else if (axis == "eps_bitflip") {
        cfg.noise.eps_bitflip = value;
    } else if (axis == "eps_phase") {
        cfg.noise.eps_phase = value;
    } else if (axis == "eps_meas") {
        cfg.noise.eps_meas = value;
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "'");
    }
    p.validate();
    cfg.noise.validate();
}

json params_to_json(const ProtocolParams &p) {
    return {{"N_s", p.N_s},
            {"J", p.J},
            {"J_C", p.J_C},
            {"h_ferro", p.h_ferro},
            {"h_para", p.h_para},
            {"dt", p.dt},
            {"dh", p.dh},
            {"T", p.T},
            {"Gamma", p.Gamma},
            {"theta", p.theta},
            {"shots", p.shots},
            {"seed", p.seed},
            {"update_mode", to_string(p.update_mode)},
            {"coupler_prep", to_string(p.coupler_prep)},
            {"readout", to_string(p.readout)}};
}

json noise_to_json(const NoiseModel &m) {
    json j = {{"eps_bitflip", m.eps_bitflip},
              {"eps_phase", m.eps_phase},
              {"eps_meas", m.eps_meas},
              {"trajectories", m.trajectories},
              {"eps_bitflip_1q", m.bitflip(1)},
              {"eps_bitflip_2q", m.bitflip(2)},
              {"eps_phase_1q", m.phase(1)},
              {"eps_phase_2q", m.phase(2)},
              {"noisy_gates", "initialization and evolution"}};
    return j;
}

namespace {

json counts_to_json(const GateCounts &c) {
    return {{"one_qubit", c.one_qubit}, {"two_qubit", c.two_qubit}, {"total", c.total()}};
}

} // namespace

json report_to_json(const FidelityReport &r) {
    return {{"scenario", to_string(r.scenario)},
            {"init", to_string(r.init)},
            {"exact_fidelity", r.exact_fidelity},
            {"sampled_fidelity", r.sampled_fidelity},
            {"sampled_stderr", r.sampled_stderr},
            {"depth_total", r.depth_total},
            {"depth_evolution_only", r.depth_evolution},
            {"gate_counts", counts_to_json(r.gate_counts)},
            {"evolution_gate_counts", counts_to_json(r.evolution_gate_counts)},
            {"trotter_steps", r.trotter_steps},
            {"bound_values",
             {{"per_step", r.bounds.per_step},
              {"total", r.bounds.total},
              {"adiabatic_margin", r.bounds.adiabatic_margin},
              {"depth_formula", r.bounds.depth_formula},
              {"depth_formula_rounded", r.bounds.depth_formula_rounded}}},
            {"coupler_prepared", r.coupler_prepared},
            {"params", params_to_json(r.params)},
            {"warnings", r.warnings}};
}

json bounds_to_json(const BoundReport &b, const ProtocolParams &p) {
    const auto &a = b.commutators.analytic;
    json j = {{"per_step", b.per_step},
              {"total", b.total},
              {"adiabatic_margin", b.adiabatic_margin},
              {"depth_formula", b.depth.formula},
              {"depth_formula_rounded", b.depth.rounded},
              {"commutator_norm_bounds",
               {{"JZ_even", a.even_zeeman}, {"JZ_odd", a.odd_zeeman}, {"Z_CI", a.zeeman_coupler}}},
              {"params", params_to_json(p)}};
    if (b.commutators.exact) {
        const auto &e = *b.commutators.exact;
        j["exact_commutator_norms"] = {
            {"JZ_even", e.even_zeeman}, {"JZ_odd", e.odd_zeeman}, {"Z_CI", e.zeeman_coupler}};
        j["max_vanishing_commutator_norm"] = *b.commutators.max_vanishing;
    } else {
        j["note"] = "exact commutator norms omitted for N_s > " +
                    std::to_string(kMaxExactCommutatorSites);
    }
    return j;
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string sweep_csv(const RunConfig &cfg, bool depth_only, std::size_t jobs) {
    if (!cfg.sweep) {
        throw ConfigError("sweep needs sweep_axis and sweep_values in the config");
    }
    const auto &axis = *cfg.sweep;
    const std::size_t n_runs = cfg.runs.size();
    const std::size_t n_tasks = axis.values.size() * n_runs;

    // Validate every point before any simulation starts.
    std::vector<RunConfig> points;
    for (double v : axis.values) {
        RunConfig point = cfg;
        apply_axis(point, axis.name, v);
        points.push_back(std::move(point));
    }
    const bool noise_axis = axis.name.rfind("eps_", 0) == 0;

    std::vector<std::string> rows(n_tasks);
    const std::size_t inner_jobs = n_tasks > 1 ? 1 : jobs;
    parallel_for(n_tasks, jobs, [&](std::size_t task) {
        const std::size_t vi = task / n_runs;
        const auto &run = cfg.runs[task % n_runs];
        RunConfig point = points[vi];
        const std::uint64_t seed = derive_seed(
            derive_seed(cfg.params.seed, std::bit_cast<std::uint64_t>(axis.values[vi])),
            scenario_id(run));
        point.params.seed = seed;

        auto rep = describe_scenario(point.params, run.scenario, run.init);
        std::string fid, samp, serr;
        if (!depth_only) {
            if (noise_axis || point.noisy()) {
                const auto nf = noisy_fidelity(point.params, run.scenario, run.init, point.noise,
                                               inner_jobs);
                fid = csv_number(nf.mean);
                samp = csv_number(nf.sampled);
                serr = csv_number(nf.sampled_stderr);
            } else {
                rep = run_scenario(point.params, run.scenario, run.init);
                fid = csv_number(rep.exact_fidelity);
                samp = csv_number(rep.sampled_fidelity);
                serr = csv_number(rep.sampled_stderr);
            }
        }
        std::ostringstream row;
        row << csv_number(axis.values[vi]) << ',' << to_string(run.scenario) << ','
            << to_string(run.init) << ',' << fid << ',' << samp << ',' << serr << ','
            << rep.depth_total << ',' << rep.depth_evolution << ',' << rep.trotter_steps << ','
            << csv_number(rep.bounds.per_step) << ',' << csv_number(rep.bounds.total) << ','
            << csv_number(rep.bounds.adiabatic_margin) << ',' << seed;
        rows[task] = row.str();
    });

    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto &r : rows) {
        out += r + "\n";
    }
    return out;
}

namespace {

json run_reports(const RunConfig &cfg, bool depth_only, std::size_t jobs) {
    json reports = json::array();
    for (const auto &run : cfg.runs) {
        const auto rep = depth_only ? describe_scenario(cfg.params, run.scenario, run.init)
                                    : run_scenario(cfg.params, run.scenario, run.init);
        json j = report_to_json(rep);
        if (depth_only) {
            j.erase("exact_fidelity");
            j.erase("sampled_fidelity");
            j.erase("sampled_stderr");
        }
        if (cfg.noisy() && !depth_only) {
            const auto nf = noisy_fidelity(cfg.params, run.scenario, run.init, cfg.noise, jobs);
            j["noise"] = noise_to_json(cfg.noise);
            j["noise"]["mean_fidelity"] = nf.mean;
            j["noise"]["mean_stderr"] = nf.stderr_;
            j["noise"]["sampled_fidelity"] = nf.sampled;
            j["noise"]["sampled_stderr"] = nf.sampled_stderr;
            j["noise"]["shots"] = nf.shots;
        }
        reports.push_back(std::move(j));
    }
    return reports.size() == 1 ? reports[0] : reports;
}

std::string export_qasm(const RunConfig &cfg) {
    if (cfg.runs.size() != 1) {
        throw ConfigError("export needs a single scenario");
    }
    const auto plan = plan_scenario(cfg.params, cfg.runs[0].scenario, cfg.runs[0].init);
    Circuit full = compose(plan.init, plan.evolution);
    full.append(plan.readout);
    return full.to_qasm();
}

} // namespace

int run(int argc, char **argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Two-chain Ising exchange protocol simulator"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 0;
    bool depth_only = false;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_path, "Output file (default: stdout)");
        sub->add_option("--seed", seed, "Master seed, overrides the config");
        sub->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    };
    auto *run_cmd = app.add_subcommand("run", "Simulate one scenario and emit a JSON report");
    auto *sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter and emit CSV");
    auto *bounds_cmd = app.add_subcommand("bounds", "Emit error bounds and depth accounting");
    auto *export_cmd = app.add_subcommand("export", "Write the full circuit as OpenQASM 2.0");
    for (auto *sub : {run_cmd, sweep_cmd, bounds_cmd, export_cmd}) {
        add_common(sub);
    }
    run_cmd->add_flag("--depth-only", depth_only, "Skip simulation");
    sweep_cmd->add_flag("--depth-only", depth_only, "Skip simulation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }

    std::string payload;
    try {
        RunConfig cfg = load_config(config_path);
        if (seed) {
            cfg.params.seed = *seed;
        }
        if (run_cmd->parsed()) {
            payload = run_reports(cfg, depth_only, jobs).dump(2) + "\n";
        } else if (sweep_cmd->parsed()) {
            payload = sweep_csv(cfg, depth_only, jobs);
        } else if (bounds_cmd->parsed()) {
            payload = bounds_to_json(bound_report(cfg.params), cfg.params).dump(2) + "\n";
        } else {
            payload = export_qasm(cfg);
        }
    } catch (const ConfigError &e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }

    if (out_path.empty()) {
        out << payload;
        return out ? kOk : kRuntimeError;
    }
    std::ofstream f(out_path, std::ios::binary);
    f << payload;
    f.close();
    if (!f) {
        err << "error: cannot write '" << out_path << "'\n";
        return kRuntimeError;
    }
    return kOk;
}

} // namespace isingbraid::cli
