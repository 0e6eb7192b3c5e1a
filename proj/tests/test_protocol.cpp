#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "isingbraid/protocol.hpp"

using namespace isingbraid;

namespace {

const std::vector<std::size_t> kDomain{0, 1, 2};

std::vector<std::vector<double>> field_configs(const FieldSchedule &s) {
    std::vector<std::vector<double>> out{s.initial_fields};
    for (const auto &e : s.events) {
        if (const auto *u = std::get_if<FieldUpdate>(&e)) {
            out.push_back(u->fields);
        }
    }
    return out;
}

// Amplitude of a computational basis state of the 7-qubit register after `c`.
Amplitude amp(const Circuit &c, std::uint64_t index) {
    QuantumState s(c.num_qubits());
    s.run(c);
    return s[index];
}

} // namespace

TEST_CASE("domain preparation") {
    const ProtocolParams p;
    const double r = std::numbers::sqrt2 / 2;
    CHECK(domain_prep_circuit(p, LogicalLabel::AllUp).empty());
    CHECK(std::abs(amp(domain_prep_circuit(p, LogicalLabel::AllDown), 0b111) - 1.0) < 1e-14);
    const auto l0 = domain_prep_circuit(p, LogicalLabel::L0);
    CHECK(std::abs(amp(l0, 0) - r) < 1e-14);
    CHECK(std::abs(amp(l0, 0b111) - r) < 1e-14);
    const auto l1 = domain_prep_circuit(p, LogicalLabel::L1);
    CHECK(std::abs(amp(l1, 0) - r) < 1e-14);
    CHECK(std::abs(amp(l1, 0b111) + r) < 1e-14);
}

TEST_CASE("initialization adds paramagnetic and coupler preparation") {
    ProtocolParams p;
    const auto c = initialization_circuit(p, LogicalLabel::AllUp);
    REQUIRE(c.size() == 4);
    CHECK(c.gates()[0] == Gate::h(4));
    CHECK(c.gates()[3] == Gate::rx(3, std::numbers::pi / 2));
    CHECK(initialization_circuit(p, LogicalLabel::AllUp, false).size() == 3);
    p.coupler_prep = CouplerPrep::Hadamard;
    CHECK(initialization_circuit(p, LogicalLabel::AllUp).gates()[3] == Gate::h(3));
    p.coupler_prep = CouplerPrep::RyHalfPi;
    CHECK(initialization_circuit(p, LogicalLabel::AllUp).gates()[3] ==
          Gate::ry(3, std::numbers::pi / 2));
}

TEST_CASE("schedule counts for the high-fidelity row") {
    const auto p = ProtocolParams::table_high_fidelity();
    CHECK(updates_per_shift(p) == 100);
    CHECK(rotation_events(p) == 3);
    CHECK(steps_per_hold(p, p.T) == 10);
    const auto s = build_field_schedule(p, true);
    CHECK(s.events.size() == 6 * 100 + 2 * 3);
    const auto ops = discretize(p, s);
    CHECK(count_trotter_steps(ops) == 6030);
}

TEST_CASE("schedule invariants") {
    for (auto p : {ProtocolParams::table_high_fidelity(), ProtocolParams::table_shallow()}) {
        const auto s = build_field_schedule(p, true);
        const auto configs = field_configs(s);
        const double total = std::accumulate(s.initial_fields.begin(), s.initial_fields.end(), 0.0);
        for (const auto &f : configs) {
            for (double h : f) {
                CHECK(h >= p.h_ferro);
                CHECK(h <= p.h_para);
            }
            // Entering and leaving sites move by equal and opposite amounts.
            CHECK(std::accumulate(f.begin(), f.end(), 0.0) == doctest::Approx(total));
        }
        CHECK(configs.front() == p.chain_config().fields);
        CHECK(configs.back() == p.chain_config().fields);

        // At the end of every shift the domain is intact: N_s/2 contiguous sites at h_ferro.
        const std::size_t n_up = updates_per_shift(p);
        const std::size_t m = configs.size();
        for (std::size_t k = 0; k <= 3; ++k) {
            for (const auto &f : {configs[k * n_up], configs[m - 1 - k * n_up]}) {
                CHECK(std::count(f.begin(), f.end(), p.h_ferro) == 3);
            }
        }
    }
}

TEST_CASE("rotation events sum to theta") {
    ProtocolParams p = ProtocolParams::table_shallow();
    p.Gamma = 0.4 * std::numbers::pi;
    const auto s = build_field_schedule(p, true);
    double total = 0.0;
    std::vector<double> angles;
    for (const auto &e : s.events) {
        if (const auto *r = std::get_if<CouplerRotation>(&e)) {
            angles.push_back(r->angle);
            total += r->angle;
        }
    }
    REQUIRE(angles.size() == 3);
    CHECK(angles[2] == doctest::Approx(0.2 * std::numbers::pi));
    CHECK(total == doctest::Approx(p.theta));
    CHECK(build_field_schedule(p, false).events.size() == 6 * updates_per_shift(p));
}

TEST_CASE("there-and-back schedule is a palindrome when dh divides the field range") {
    ProtocolParams p;
    p.h_ferro = 0.25;
    p.h_para = 4.25;
    p.dh = 0.5;
    p.theta = 0.0;
    const auto configs = field_configs(build_field_schedule(p, false));
    const std::size_t m = configs.size();
    for (std::size_t i = 0; i < m; ++i) {
        CHECK(configs[i] == configs[m - 1 - i]);
    }
}

TEST_CASE("discretization") {
    ProtocolParams p;
    FieldSchedule one{p.chain_config().fields, {FieldUpdate{p.chain_config().fields, 2.0}}};
    auto ops = discretize(p, one);
    CHECK(count_trotter_steps(ops) == 10);
    CHECK(ops.size() == 1);

    // Linear mode samples the ramp at interval midpoints.
    auto next = one.initial_fields;
    next[3] -= 1.0;
    FieldSchedule ramp{one.initial_fields, {FieldUpdate{next, 2.0}}};
    ops = discretize(p, ramp);
    REQUIRE(ops.size() == 10);
    CHECK(std::get<TrotterInterval>(ops[0]).fields[3] == doctest::Approx(5.0 - 0.05));
    CHECK(std::get<TrotterInterval>(ops[9]).fields[3] == doctest::Approx(5.0 - 0.95));

    p.update_mode = UpdateMode::Stepped;
    ops = discretize(p, ramp);
    REQUIRE(ops.size() == 1);
    CHECK(std::get<TrotterInterval>(ops[0]).repeat == 10);
    CHECK(std::get<TrotterInterval>(ops[0]).fields == next);

    FieldSchedule empty{one.initial_fields, {}};
    CHECK(build_protocol_circuit(p, empty).empty());

    FieldSchedule short_hold{one.initial_fields, {FieldUpdate{next, 0.1}}};
    CHECK_THROWS_AS(discretize(p, short_hold), ConfigError);
}

TEST_CASE("evolution circuit size and depth") {
    for (auto p : {ProtocolParams::table_high_fidelity(), ProtocolParams::table_shallow()}) {
        const auto s = build_field_schedule(p, true);
        const auto c = build_protocol_circuit(p, s);
        const std::size_t steps = steps_per_hold(p, p.T) *
                                  (p.N_s * updates_per_shift(p) + rotation_events(p));
        CHECK(count_trotter_steps(discretize(p, s)) == steps);
        CHECK(c.size() == steps * 23 + rotation_events(p));
        CHECK(c.depth() <= 12 * steps);
    }
}

TEST_CASE("logical targets") {
    const auto up = logical_amplitudes(LogicalLabel::AllUp);
    const auto down = exchange(up, std::numbers::pi);
    const auto expect = logical_amplitudes(LogicalLabel::AllDown);
    // Equal up to a global phase.
    const Amplitude overlap = std::conj(expect.c0) * down.c0 + std::conj(expect.c1) * down.c1;
    CHECK(std::abs(overlap) == doctest::Approx(1.0));

    const auto l0 = exchange(logical_amplitudes(LogicalLabel::L0), std::numbers::pi);
    CHECK(std::abs(l0.c0) == doctest::Approx(1.0));
    CHECK(std::abs(l0.c1) == doctest::Approx(0.0));
}

TEST_CASE("target preparation reaches the requested domain state") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    const ProtocolParams p;
    for (int rep = 0; rep < 20; ++rep) {
        Amplitude c0{g(rng), g(rng)}, c1{g(rng), g(rng)};
        const double n = std::sqrt(std::norm(c0) + std::norm(c1));
        c0 /= n;
        c1 /= n;
        if (rep == 0) {
            c0 = 1.0;
            c1 = 0.0;
        }
        QuantumState s(7);
        s.run(target_prep_circuit(p, {c0, c1}));
        const double r = std::numbers::sqrt2 / 2;
        const Amplitude a = r * (c0 + c1), b = r * (c0 - c1);
        const Amplitude overlap = std::conj(a) * s[0] + std::conj(b) * s[0b111];
        CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("readout scope") {
    ProtocolParams p;
    CHECK(readout_qubits(p) == kDomain);
    p.readout = ReadoutScope::Chain;
    CHECK(readout_qubits(p) == std::vector<std::size_t>{0, 1, 2, 4, 5, 6});
    // With chain scope an ideal initial state reads back as all zeros.
    const auto c = initialization_circuit(p, LogicalLabel::L0);
    QuantumState s(7);
    s.run(c);
    s.run(target_prep_circuit(p, logical_amplitudes(LogicalLabel::L0)).inverse());
    CHECK(s.probability_all_zero(readout_qubits(p)) == doctest::Approx(1.0));
}

TEST_CASE("parameter validation") {
    ProtocolParams p;
    CHECK(p.validate().empty());
    p.h_para = 1.0;
    CHECK(p.validate().size() == 1);
    p = ProtocolParams{};
    p.dh = 0.6;
    p.T = 0.5;
    p.dt = 0.5;
    CHECK(!p.validate().empty());

    auto bad = [](auto mutate) {
        ProtocolParams q;
        mutate(q);
        CHECK_THROWS_AS(q.validate(), ConfigError);
    };
    bad([](ProtocolParams &q) { q.N_s = 7; });
    bad([](ProtocolParams &q) { q.N_s = 4; });
    bad([](ProtocolParams &q) { q.N_s = 26; });
    bad([](ProtocolParams &q) { q.dt = 0.0; });
    bad([](ProtocolParams &q) { q.T = 0.1; });
    bad([](ProtocolParams &q) { q.dh = 6.0; });
    bad([](ProtocolParams &q) { q.Gamma = 4.0; });
    bad([](ProtocolParams &q) { q.h_ferro = 0.0; });
    bad([](ProtocolParams &q) { q.J = -1.0; });
    bad([](ProtocolParams &q) { q.dt = std::nan(""); });
}

TEST_CASE("ceil conventions tolerate rounding") {
    CHECK(ceil_count(2.0 / 0.2) == 10);
    CHECK(ceil_count(2.0 / 0.7) == 3);
    CHECK(ceil_count(std::numbers::pi / (std::numbers::pi / 3)) == 3);
    CHECK(ceil_count(0.0) == 0);
    CHECK(ceil_count(4.9900000000000002 / 0.05) == 100);
}

TEST_CASE("enum names round trip") {
    for (auto s : {Scenario::TranslateNoCoupler, Scenario::TranslateWithCoupler, Scenario::Braid}) {
        CHECK(parse_scenario(to_string(s)) == s);
    }
    for (auto l : {LogicalLabel::L0, LogicalLabel::L1, LogicalLabel::AllUp, LogicalLabel::AllDown}) {
        CHECK(parse_logical_label(to_string(l)) == l);
    }
    CHECK(parse_coupler_prep("H") == CouplerPrep::Hadamard);
    CHECK(parse_update_mode("stepped") == UpdateMode::Stepped);
    CHECK(parse_readout_scope("chain") == ReadoutScope::Chain);
    CHECK_FALSE(parse_scenario("Braid").has_value());
}

TEST_CASE("scenario runs at the shallow row") {
    const auto p = ProtocolParams::table_shallow();
    const auto braid = run_scenario(p, Scenario::Braid, LogicalLabel::AllUp);
    CHECK(braid.exact_fidelity >= 0.0);
    CHECK(braid.exact_fidelity <= 1.0);
    CHECK(braid.depth_evolution <= braid.depth_total);
    CHECK(std::abs(braid.sampled_fidelity - braid.exact_fidelity) < 5 * braid.sampled_stderr + 1e-9);
    CHECK(braid.trotter_steps == 276);
    CHECK(braid.params.coupler_prep == CouplerPrep::RxHalfPi);

    const auto nc = run_scenario(p, Scenario::TranslateNoCoupler, LogicalLabel::L0);
    CHECK(nc.scenario == Scenario::TranslateNoCoupler);
    CHECK(nc.params.J_C == 0.0);
    CHECK_FALSE(nc.coupler_prepared);

    // A braid with no rotation is the coupled translation.
    auto zero = p;
    zero.theta = 0.0;
    const auto b0 = run_scenario(zero, Scenario::Braid, LogicalLabel::L0);
    const auto tw = run_scenario(zero, Scenario::TranslateWithCoupler, LogicalLabel::L0);
    CHECK(b0.exact_fidelity == tw.exact_fidelity);
    CHECK(b0.sampled_fidelity == tw.sampled_fidelity);

    const auto d = describe_scenario(p, Scenario::Braid, LogicalLabel::AllUp);
    CHECK(d.depth_total == braid.depth_total);
    CHECK(d.exact_fidelity == 0.0);
}

TEST_CASE("sampled estimator frequency") {
    SampleCounts c;
    c.shots = 10;
    c.counts = {{"000", 7}, {"010", 3}};
    const auto f = all_zero_frequency(c);
    CHECK(f.value == doctest::Approx(0.7));
    CHECK(f.stderr_ == doctest::Approx(std::sqrt(0.21 / 10)));
}
