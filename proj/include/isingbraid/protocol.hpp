#pragma once

/**
 * @file protocol.hpp
 * The exchange protocol on two coupled Ising chains: initialization of the
 * ferromagnetic domain and the coupler, adiabatic transport of the domain to
 * the right chain, a stepped coupler rotation about y, transport back, and
 * logical readout.
 *
 * The logical qubit lives on the ferromagnetic domain (the left chain at the
 * start and end of every run):
 *   L0 = (|up..up> + |down..down>)/sqrt(2),  L1 = (|up..up> - |down..down>)/sqrt(2).
 * A full exchange with total coupler rotation theta acts as RZ(-theta) in the
 * (L0, L1) basis.
 */

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "isingbraid/circuit.hpp"
#include "isingbraid/statevector.hpp"
#include "isingbraid/trotter.hpp"

namespace isingbraid {

enum class UpdateMode { Stepped, Linear };
enum class CouplerPrep { RxHalfPi, Hadamard, RyHalfPi };
/// Which qubits the fidelity target covers. `Domain` compares the logical
/// domain only; `Chain` also requires |+> on every paramagnetic site.
enum class ReadoutScope { Domain, Chain };
enum class LogicalLabel { L0, L1, AllUp, AllDown };
enum class Scenario { TranslateNoCoupler, TranslateWithCoupler, Braid };

std::string_view to_string(UpdateMode m);
std::string_view to_string(CouplerPrep p);
std::string_view to_string(ReadoutScope r);
std::string_view to_string(LogicalLabel l);
std::string_view to_string(Scenario s);

/// Parsers accept the names produced by to_string (case-sensitive).
std::optional<UpdateMode> parse_update_mode(std::string_view s);
std::optional<CouplerPrep> parse_coupler_prep(std::string_view s);
std::optional<ReadoutScope> parse_readout_scope(std::string_view s);
std::optional<LogicalLabel> parse_logical_label(std::string_view s);
std::optional<Scenario> parse_scenario(std::string_view s);

struct ProtocolParams {
    std::size_t N_s{6};
    double J{1.0};
    double J_C{0.3};
    double h_ferro{0.01};
    double h_para{5.0};
    double dt{0.2};
    double dh{0.05};
    double T{2.0};
    double Gamma{std::numbers::pi / 3.0};
    double theta{std::numbers::pi};
    std::size_t shots{10000};
    std::uint64_t seed{20240601};
    UpdateMode update_mode{UpdateMode::Linear};
    CouplerPrep coupler_prep{CouplerPrep::RxHalfPi};
    ReadoutScope readout{ReadoutScope::Domain};

    [[nodiscard]] std::size_t chain_len() const { return N_s / 2; }

    /// Throws ConfigError on hard violations. Returns human-readable warnings
    /// for soft ones (weak phase separation, adiabatic margin below 10).
    std::vector<std::string> validate() const;

    /// Configuration at the initial (and final) field layout.
    [[nodiscard]] ChainConfig chain_config() const;

    /// Table I row reaching >99% with the shallowest circuit.
    static ProtocolParams table_high_fidelity();
    /// Table I row reaching >90% with the shallowest circuit.
    static ProtocolParams table_shallow();
};

/// ceil(x) that treats values within 1e-9 (relative) of an integer as that integer.
std::size_t ceil_count(double x);

/// Trotter steps per hold: ceil(T/dt) with tolerance.
std::size_t steps_per_hold(const ProtocolParams &p, double hold);
/// ceil((h_para - h_ferro)/dh) with tolerance.
std::size_t updates_per_shift(const ProtocolParams &p);
/// ceil(theta/Gamma) with tolerance.
std::size_t rotation_events(const ProtocolParams &p);

struct FieldUpdate {
    std::vector<double> fields;
    double hold{0.0};
};
struct CouplerRotation {
    double angle{0.0};
};
using ScheduleEvent = std::variant<FieldUpdate, CouplerRotation>;

struct FieldSchedule {
    std::vector<double> initial_fields;
    std::vector<ScheduleEvent> events;
};

/// Rightward transport, optional coupler rotation, leftward transport.
FieldSchedule build_field_schedule(const ProtocolParams &params, bool include_rotation);

/// One Trotter interval (or `repeat` identical consecutive intervals).
struct TrotterInterval {
    std::vector<double> fields;
    std::size_t repeat{1};
};
using EvolutionOp = std::variant<TrotterInterval, CouplerRotation>;

/// Time discretization shared by the circuit compiler and the exact-evolution
/// oracle: every hold becomes ceil(T/dt) intervals at piecewise-constant fields.
/// Stepped mode: fields jump at each update. Linear mode: fields are sampled at
/// interval midpoints along a straight line from the previous to the new layout.
std::vector<EvolutionOp> discretize(const ProtocolParams &params, const FieldSchedule &schedule);

std::size_t count_trotter_steps(const std::vector<EvolutionOp> &ops);

/// Domain-qubit state preparation for a label (no paramagnetic or coupler gates).
Circuit domain_prep_circuit(const ProtocolParams &params, LogicalLabel label);

/// Full initialization: domain label, H on paramagnetic sites, and optionally
/// the configured coupler preparation.
Circuit initialization_circuit(const ProtocolParams &params, LogicalLabel label,
                               bool prepare_coupler = true);

/// Evolution circuit (no initialization or readout).
Circuit build_protocol_circuit(const ProtocolParams &params, const FieldSchedule &schedule);

/// Logical amplitudes (c0, c1) in the (L0, L1) basis.
struct LogicalState {
    std::complex<double> c0;
    std::complex<double> c1;
};
LogicalState logical_amplitudes(LogicalLabel label);
/// The ideal exchange: RZ(-theta) in the (L0, L1) basis.
LogicalState exchange(LogicalState in, double theta);

/// Circuit preparing `target` on the domain (plus |+> on paramagnetic sites
/// when the readout scope is Chain) from |0...0>. Its inverse maps the ideal
/// final state onto all-zeros on the readout qubits.
Circuit target_prep_circuit(const ProtocolParams &params, LogicalState target);

/// Qubits that the readout inspects for the scope in params.
std::vector<std::size_t> readout_qubits(const ProtocolParams &params);

struct ScenarioPlan {
    ProtocolParams effective;
    FieldSchedule schedule;
    Circuit init;
    Circuit evolution;
    Circuit readout;  // inverse target preparation
    LogicalState target;
    bool coupler_prepared{true};
};

/// Builds every circuit of a scenario without simulating.
ScenarioPlan plan_scenario(const ProtocolParams &params, Scenario scenario, LogicalLabel init);

struct BoundValues {
    double per_step{0.0};
    double total{0.0};
    double adiabatic_margin{0.0};
    double depth_formula{0.0};
    double depth_formula_rounded{0.0};
};

struct FidelityReport {
    Scenario scenario{Scenario::Braid};
    LogicalLabel init{LogicalLabel::AllUp};
    double exact_fidelity{0.0};
    double sampled_fidelity{0.0};
    double sampled_stderr{0.0};
    std::size_t depth_total{0};
    std::size_t depth_evolution{0};
    GateCounts gate_counts;
    GateCounts evolution_gate_counts;
    std::size_t trotter_steps{0};
    BoundValues bounds;
    ProtocolParams params;  // resolved parameters actually simulated
    bool coupler_prepared{true};
    std::vector<std::string> warnings;
};

/// Depth and bound accounting only.
FidelityReport describe_scenario(const ProtocolParams &params, Scenario scenario,
                                 LogicalLabel init);

/// Simulates init + evolution and scores it against the ideal target.
FidelityReport run_scenario(const ProtocolParams &params, Scenario scenario, LogicalLabel init);

/// Exact overlap with the target on the readout qubits (others traced out).
double exact_fidelity(const ScenarioPlan &plan, const QuantumState &final_state);

/// Shot record of the readout qubits after the inverse target preparation.
/// Fidelity is the frequency of the all-zeros string.
SampleCounts readout_counts(const ScenarioPlan &plan, const QuantumState &final_state,
                            std::size_t shots, std::uint64_t seed);

struct SampledFidelity {
    double value{0.0};
    double stderr_{0.0};
};
SampledFidelity all_zero_frequency(const SampleCounts &counts);

} // namespace isingbraid
