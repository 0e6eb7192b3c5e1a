#pragma once

/**
 * @file cli.hpp
 * Configuration parsing and report emission behind the `isingbraid` tool.
 *
 * A config is a flat JSON object. Required keys: N_s, J, J_C, h_ferro, h_para,
 * dt, dh, T, Gamma, theta. Optional keys (defaults in parentheses): shots
 * (10000), seed (20240601), update_mode ("linear"), coupler_prep
 * ("RX_half_pi"), readout ("domain"), scenario ("braid", or "all" for the five
 * standard situations), init ("ALL_UP"), eps_bitflip, eps_phase, eps_meas (0),
 * eps_bitflip_1q, eps_bitflip_2q, eps_phase_1q, eps_phase_2q (unset),
 * trajectories (200), sweep_axis, sweep_values. Angles accept numbers or
 * strings such as "pi/3" and "2*pi/3". Unknown keys are rejected.
 */

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "isingbraid/analysis.hpp"
#include "isingbraid/noise.hpp"
#include "isingbraid/protocol.hpp"

namespace isingbraid::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kInvalidInput = 2 };

struct ScenarioRun {
    Scenario scenario;
    LogicalLabel init;
};

/// translate_no_coupler and translate_with_coupler from ALL_UP and L0, then braid from ALL_UP.
std::vector<ScenarioRun> standard_runs();

/// Stable identifier used in seed derivation.
std::uint64_t scenario_id(const ScenarioRun &run);

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

inline const std::vector<std::string> kSweepAxes = {
    "dt", "h_para", "dh", "J_C", "Gamma", "N_s", "eps_bitflip", "eps_phase", "eps_meas"};

struct RunConfig {
    ProtocolParams params;
    std::vector<ScenarioRun> runs;
    NoiseModel noise;
    std::optional<SweepAxis> sweep;

    [[nodiscard]] bool noisy() const { return !noise.gate_noise_free() || noise.eps_meas > 0.0; }
};

/// Parses "pi", "pi/3", "2*pi/3", "-pi/2" or a plain number.
double parse_angle(const std::string &text);

/// Throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json &j);
RunConfig load_config(const std::string &path);

/// Applies one sweep value; N_s values must be integral.
void apply_axis(RunConfig &cfg, const std::string &axis, double value);

nlohmann::json params_to_json(const ProtocolParams &p);
nlohmann::json noise_to_json(const NoiseModel &m);
nlohmann::json report_to_json(const FidelityReport &r);
nlohmann::json bounds_to_json(const BoundReport &b, const ProtocolParams &p);

/// Floating-point cell at 12 significant digits.
std::string csv_number(double v);

inline constexpr const char *kCsvHeader =
    "axis_value,scenario,init,exact_fidelity,sampled_fidelity,sampled_stderr,depth_total,"
    "depth_evolution,trotter_steps,per_step_bound,total_bound,adiabatic_margin,seed";

/// One row per (value, run) pair in input order. Each row's seed is derived
/// from the master seed, the bit pattern of the axis value and the scenario
/// id. With noise on (or a noise axis), exact_fidelity holds the trajectory
/// mean and the sampled columns include measurement error. depth_only leaves
/// the fidelity cells empty.
std::string sweep_csv(const RunConfig &cfg, bool depth_only, std::size_t jobs);

/// Full command-line entry point. Returns the process exit code.
int run(int argc, char **argv, std::ostream &out, std::ostream &err);

} // namespace isingbraid::cli
