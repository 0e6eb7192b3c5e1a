#include "isingbraid/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "isingbraid/analysis.hpp"

namespace isingbraid {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> parse_from(std::string_view s, const std::array<Enum, N> &values) {
    for (auto v : values) {
        if (to_string(v) == s) {
            return v;
        }
    }
    return std::nullopt;
}

constexpr double kCountTolerance = 1e-9;

} // namespace

std::string_view to_string(UpdateMode m) {
    return m == UpdateMode::Stepped ? "stepped" : "linear";
}

std::string_view to_string(CouplerPrep p) {
    switch (p) {
    case CouplerPrep::RxHalfPi:
        return "RX_half_pi";
    case CouplerPrep::Hadamard:
        return "H";
    case CouplerPrep::RyHalfPi:
        return "RY_half_pi";
    }
    return "?";
}

std::string_view to_string(ReadoutScope r) { return r == ReadoutScope::Domain ? "domain" : "chain"; }

std::string_view to_string(LogicalLabel l) {
    switch (l) {
    case LogicalLabel::L0:
        return "L0";
    case LogicalLabel::L1:
        return "L1";
    case LogicalLabel::AllUp:
        return "ALL_UP";
    case LogicalLabel::AllDown:
        return "ALL_DOWN";
    }
    return "?";
}

std::string_view to_string(Scenario s) {
    switch (s) {
    case Scenario::TranslateNoCoupler:
        return "translate_no_coupler";
    case Scenario::TranslateWithCoupler:
        return "translate_with_coupler";
    case Scenario::Braid:
        return "braid";
    }
    return "?";
}

std::optional<UpdateMode> parse_update_mode(std::string_view s) {
    return parse_from(s, std::array{UpdateMode::Stepped, UpdateMode::Linear});
}
std::optional<CouplerPrep> parse_coupler_prep(std::string_view s) {
    return parse_from(s, std::array{CouplerPrep::RxHalfPi, CouplerPrep::Hadamard,
                                    CouplerPrep::RyHalfPi});
}
std::optional<ReadoutScope> parse_readout_scope(std::string_view s) {
    return parse_from(s, std::array{ReadoutScope::Domain, ReadoutScope::Chain});
}
std::optional<LogicalLabel> parse_logical_label(std::string_view s) {
    return parse_from(s, std::array{LogicalLabel::L0, LogicalLabel::L1, LogicalLabel::AllUp,
                                    LogicalLabel::AllDown});
}
std::optional<Scenario> parse_scenario(std::string_view s) {
    return parse_from(s, std::array{Scenario::TranslateNoCoupler, Scenario::TranslateWithCoupler,
                                    Scenario::Braid});
}

std::vector<std::string> ProtocolParams::validate() const {
    auto fail = [](const std::string &msg) { throw ConfigError(msg); };
    for (double v : {J, J_C, h_ferro, h_para, dt, dh, T, Gamma, theta}) {
        if (!std::isfinite(v)) {
            fail("parameters must be finite");
        }
    }
    if (N_s < 6 || N_s % 2 != 0) {
        fail("N_s must be even and at least 6, got " + std::to_string(N_s));
    }
    if (N_s + 1 > kMaxQubits) {
        fail("N_s = " + std::to_string(N_s) + " exceeds the " + std::to_string(kMaxQubits) +
             "-qubit register cap");
    }
    if (!(J > 0.0)) {
        fail("J must be positive");
    }
    if (!(J_C >= 0.0)) {
        fail("J_C must be non-negative");
    }
    if (!(h_ferro > 0.0) || !(h_para > h_ferro)) {
        fail("need 0 < h_ferro < h_para");
    }
    if (!(dt > 0.0)) {
        fail("dt must be positive");
    }
    if (!(dh > 0.0) || dh > h_para) {
        fail("need 0 < dh <= h_para");
    }
    if (T < dt * (1.0 - kCountTolerance)) {
        fail("T must be at least dt (sub-step holds are unsupported)");
    }
    if (!(Gamma > 0.0) || Gamma > std::numbers::pi * (1.0 + kCountTolerance)) {
        fail("need 0 < Gamma <= pi");
    }
    if (theta < 0.0) {
        fail("theta must be non-negative");
    }
    if (shots < 1) {
        fail("shots must be at least 1");
    }

    std::vector<std::string> warnings;
    if (!(h_ferro < J && J < h_para)) {
        warnings.emplace_back("phase separation h_ferro < J < h_para does not hold");
    }
    const double margin = adiabatic_margin(*this);
    if (margin < 10.0) {
        warnings.emplace_back("adiabatic margin " + std::to_string(margin) + " is below 10");
    }
    return warnings;
}

ChainConfig ProtocolParams::chain_config() const {
    return ChainConfig::with_domain(chain_len(), J, J_C, h_ferro, h_para);
}

ProtocolParams ProtocolParams::table_high_fidelity() { return ProtocolParams{}; }

ProtocolParams ProtocolParams::table_shallow() {
    ProtocolParams p;
    p.dt = 0.7;
    p.h_para = 1.5;
    p.dh = 0.1;
    p.Gamma = std::numbers::pi / 2.0;
    return p;
}

std::size_t ceil_count(double x) {
    if (!(x > 0.0)) {
        return 0;
    }
    const double r = std::round(x);
    if (std::abs(x - r) <= kCountTolerance * std::max(1.0, std::abs(x))) {
        return static_cast<std::size_t>(r);
    }
    return static_cast<std::size_t>(std::ceil(x));
}

std::size_t steps_per_hold(const ProtocolParams &p, double hold) {
    const std::size_t n = ceil_count(hold / p.dt);
    if (n < 1 || hold < p.dt * (1.0 - kCountTolerance)) {
        throw ConfigError("hold of " + std::to_string(hold) + " is shorter than one Trotter step");
    }
    return n;
}

std::size_t updates_per_shift(const ProtocolParams &p) {
    return std::max<std::size_t>(1, ceil_count((p.h_para - p.h_ferro) / p.dh));
}

std::size_t rotation_events(const ProtocolParams &p) { return ceil_count(p.theta / p.Gamma); }

FieldSchedule build_field_schedule(const ProtocolParams &params, bool include_rotation) {
    const std::size_t L = params.chain_len();
    const std::size_t n_up = updates_per_shift(params);
    FieldSchedule sched;
    sched.initial_fields = params.chain_config().fields;
    auto fields = sched.initial_fields;

    auto shift = [&](std::size_t entering, std::size_t leaving) {
        for (std::size_t k = 1; k <= n_up; ++k) {
            const double step = static_cast<double>(k) * params.dh;
            fields[entering] = std::max(params.h_para - step, params.h_ferro);
            fields[leaving] = std::min(params.h_ferro + step, params.h_para);
            sched.events.emplace_back(FieldUpdate{fields, params.T});
        }
    };

    for (std::size_t s = 0; s < L; ++s) {
        shift(L + s, s);
    }
    if (include_rotation) {
        const std::size_t n_rot = rotation_events(params);
        for (std::size_t r = 0; r < n_rot; ++r) {
            const double angle = r + 1 == n_rot
                                     ? params.theta - static_cast<double>(n_rot - 1) * params.Gamma
                                     : params.Gamma;
            sched.events.emplace_back(CouplerRotation{angle});
            sched.events.emplace_back(FieldUpdate{fields, params.T});
        }
    }
    for (std::size_t s = L; s-- > 0;) {
        shift(s, L + s);
    }
    return sched;
}

std::vector<EvolutionOp> discretize(const ProtocolParams &params, const FieldSchedule &schedule) {
    std::vector<EvolutionOp> ops;
    auto prev = schedule.initial_fields;
    for (const auto &ev : schedule.events) {
        if (const auto *rot = std::get_if<CouplerRotation>(&ev)) {
            ops.emplace_back(*rot);
            continue;
        }
        const auto &upd = std::get<FieldUpdate>(ev);
        if (upd.fields.size() != prev.size()) {
            throw ConfigError("field update has the wrong number of sites");
        }
        const std::size_t steps = steps_per_hold(params, upd.hold);
        if (params.update_mode == UpdateMode::Stepped || upd.fields == prev) {
            ops.emplace_back(TrotterInterval{upd.fields, steps});
        } else {
            for (std::size_t k = 0; k < steps; ++k) {
                const double w = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
                std::vector<double> f(prev.size());
                for (std::size_t i = 0; i < f.size(); ++i) {
                    f[i] = prev[i] + (upd.fields[i] - prev[i]) * w;
                }
                ops.emplace_back(TrotterInterval{std::move(f), 1});
            }
        }
        prev = upd.fields;
    }
    return ops;
}

std::size_t count_trotter_steps(const std::vector<EvolutionOp> &ops) {
    std::size_t n = 0;
    for (const auto &op : ops) {
        if (const auto *iv = std::get_if<TrotterInterval>(&op)) {
            n += iv->repeat;
        }
    }
    return n;
}

Circuit domain_prep_circuit(const ProtocolParams &params, LogicalLabel label) {
    const auto cfg = params.chain_config();
    const std::size_t L = params.chain_len();
    Circuit c(cfg.num_qubits());
    switch (label) {
    case LogicalLabel::AllUp:
        break;
    case LogicalLabel::AllDown:
        for (std::size_t s = 0; s < L; ++s) {
            c.append(Gate::x(cfg.site_qubit(s)));
        }
        break;
    case LogicalLabel::L0:
    case LogicalLabel::L1:
        c.append(Gate::h(cfg.site_qubit(0)));
        for (std::size_t s = 1; s < L; ++s) {
            c.append(Gate::cnot(cfg.site_qubit(0), cfg.site_qubit(s)));
        }
        if (label == LogicalLabel::L1) {
            c.append(Gate::z(cfg.site_qubit(0)));
        }
        break;
    }
    return c;
}

namespace {

void append_coupler_prep(Circuit &c, CouplerPrep prep, std::size_t q) {
    switch (prep) {
    case CouplerPrep::RxHalfPi:
        c.append(Gate::rx(q, std::numbers::pi / 2.0));
        break;
    case CouplerPrep::Hadamard:
        c.append(Gate::h(q));
        break;
    case CouplerPrep::RyHalfPi:
        c.append(Gate::ry(q, std::numbers::pi / 2.0));
        break;
    }
}

void append_paramagnetic_prep(Circuit &c, const ChainConfig &cfg) {
    for (std::size_t s = cfg.chain_len; s < cfg.num_sites(); ++s) {
        c.append(Gate::h(cfg.site_qubit(s)));
    }
}

} // namespace

Circuit initialization_circuit(const ProtocolParams &params, LogicalLabel label,
                               bool prepare_coupler) {
    const auto cfg = params.chain_config();
    Circuit c = domain_prep_circuit(params, label);
    append_paramagnetic_prep(c, cfg);
    if (prepare_coupler) {
        append_coupler_prep(c, params.coupler_prep, cfg.coupler_qubit());
    }
    return c;
}

Circuit build_protocol_circuit(const ProtocolParams &params, const FieldSchedule &schedule) {
    const auto cfg = params.chain_config();
    const auto ops = discretize(params, schedule);
    Circuit out(cfg.num_qubits());
    // Per step: 4 gates per bond, one RX per site, 5 coupler gates.
    const std::size_t per_step = 3 * (cfg.num_sites() - 2) + cfg.num_sites() + 5;
    out.reserve(count_trotter_steps(ops) * per_step + ops.size());
    for (const auto &op : ops) {
        if (const auto *iv = std::get_if<TrotterInterval>(&op)) {
            for (std::size_t r = 0; r < iv->repeat; ++r) {
                append_trotter_step(out, cfg, iv->fields, params.dt);
            }
        } else {
            out.append(Gate::ry(cfg.coupler_qubit(), std::get<CouplerRotation>(op).angle));
        }
    }
    return out;
}

LogicalState logical_amplitudes(LogicalLabel label) {
    const double r = std::numbers::sqrt2 / 2.0;
    switch (label) {
    case LogicalLabel::L0:
        return {1.0, 0.0};
    case LogicalLabel::L1:
        return {0.0, 1.0};
    case LogicalLabel::AllUp:
        return {r, r};
    case LogicalLabel::AllDown:
        return {r, -r};
    }
    return {1.0, 0.0};
}

LogicalState exchange(LogicalState in, double theta) {
    return {in.c0 * std::polar(1.0, theta / 2.0), in.c1 * std::polar(1.0, -theta / 2.0)};
}

Circuit target_prep_circuit(const ProtocolParams &params, LogicalState target) {
    const auto cfg = params.chain_config();
    const std::size_t L = params.chain_len();
    const double r = std::numbers::sqrt2 / 2.0;
    // Amplitudes on |up...up> and |down...down>.
    const std::complex<double> up = r * (target.c0 + target.c1);
    const std::complex<double> down = r * (target.c0 - target.c1);
    const double tilt = 2.0 * std::atan2(std::abs(down), std::abs(up));
    const double phase =
        (std::abs(up) > 0.0 && std::abs(down) > 0.0) ? std::arg(down) - std::arg(up) : 0.0;

    Circuit c(cfg.num_qubits());
    const std::size_t lead = cfg.site_qubit(0);
    if (tilt != 0.0) {
        c.append(Gate::ry(lead, tilt));
    }
    if (phase != 0.0) {
        c.append(Gate::rz(lead, phase));
    }
    for (std::size_t s = 1; s < L; ++s) {
        c.append(Gate::cnot(lead, cfg.site_qubit(s)));
    }
    if (params.readout == ReadoutScope::Chain) {
        append_paramagnetic_prep(c, cfg);
    }
    return c;
}

std::vector<std::size_t> readout_qubits(const ProtocolParams &params) {
    const auto cfg = params.chain_config();
    const std::size_t n =
        params.readout == ReadoutScope::Domain ? params.chain_len() : cfg.num_sites();
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < n; ++s) {
        out.push_back(cfg.site_qubit(s));
    }
    return out;
}

ScenarioPlan plan_scenario(const ProtocolParams &params, Scenario scenario, LogicalLabel init) {
    ScenarioPlan plan;
    plan.effective = params;
    plan.coupler_prepared = scenario != Scenario::TranslateNoCoupler;
    if (!plan.coupler_prepared) {
        plan.effective.J_C = 0.0;
    }
    const bool braid = scenario == Scenario::Braid;
    plan.schedule = build_field_schedule(plan.effective, braid);
    plan.init = initialization_circuit(plan.effective, init, plan.coupler_prepared);
    plan.evolution = build_protocol_circuit(plan.effective, plan.schedule);
    plan.target = braid ? exchange(logical_amplitudes(init), params.theta)
                        : logical_amplitudes(init);
    plan.readout = target_prep_circuit(plan.effective, plan.target).inverse();
    return plan;
}

double exact_fidelity(const ScenarioPlan &plan, const QuantumState &final_state) {
    QuantumState s = final_state;
    s.run(plan.readout);
    const auto qubits = readout_qubits(plan.effective);
    return std::clamp(s.probability_all_zero(qubits), 0.0, 1.0);
}

SampleCounts readout_counts(const ScenarioPlan &plan, const QuantumState &final_state,
                            std::size_t shots, std::uint64_t seed) {
    QuantumState s = final_state;
    s.run(plan.readout);
    const auto qubits = readout_qubits(plan.effective);
    return sample_qubits(s, qubits, shots, seed);
}

SampledFidelity all_zero_frequency(const SampleCounts &counts) {
    if (counts.shots == 0 || counts.counts.empty()) {
        return {};
    }
    const auto width = counts.counts.begin()->first.size();
    const double p =
        static_cast<double>(counts.count(std::string(width, '0'))) / static_cast<double>(counts.shots);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(counts.shots))};
}

namespace {

FidelityReport describe_plan(const ScenarioPlan &plan, const ProtocolParams &params,
                             Scenario scenario, LogicalLabel init) {
    FidelityReport rep;
    rep.scenario = scenario;
    rep.init = init;
    rep.params = plan.effective;
    rep.coupler_prepared = plan.coupler_prepared;
    rep.warnings = params.validate();

    Circuit full = compose(plan.init, plan.evolution);
    full.append(plan.readout);
    rep.depth_total = full.depth();
    rep.depth_evolution = plan.evolution.depth();
    rep.gate_counts = full.gate_counts();
    rep.evolution_gate_counts = plan.evolution.gate_counts();
    rep.trotter_steps = count_trotter_steps(discretize(plan.effective, plan.schedule));

    rep.bounds.per_step = per_step_error_bound(plan.effective);
    rep.bounds.total = total_error_bound(plan.effective);
    rep.bounds.adiabatic_margin = adiabatic_margin(plan.effective);
    const auto depth = depth_upper_bound(plan.effective);
    rep.bounds.depth_formula = depth.formula;
    rep.bounds.depth_formula_rounded = depth.rounded;
    return rep;
}

} // namespace

FidelityReport describe_scenario(const ProtocolParams &params, Scenario scenario,
                                 LogicalLabel init) {
    params.validate();
    const auto plan = plan_scenario(params, scenario, init);
    return describe_plan(plan, params, scenario, init);
}

FidelityReport run_scenario(const ProtocolParams &params, Scenario scenario, LogicalLabel init) {
    params.validate();
    const auto plan = plan_scenario(params, scenario, init);
    auto rep = describe_plan(plan, params, scenario, init);

    QuantumState state(plan.init.num_qubits());
    state.run(plan.init);
    state.run(plan.evolution);
    rep.exact_fidelity = exact_fidelity(plan, state);
    const auto sampled = all_zero_frequency(readout_counts(plan, state, params.shots, params.seed));
    rep.sampled_fidelity = sampled.value;
    rep.sampled_stderr = sampled.stderr_;
    return rep;
}

} // namespace isingbraid
