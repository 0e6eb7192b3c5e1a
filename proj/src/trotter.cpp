#include "isingbraid/trotter.hpp"

#include <cmath>
#include <string>

namespace isingbraid {

std::vector<std::size_t> ChainConfig::chain_qubits() const {
    std::vector<std::size_t> out;
    out.reserve(num_sites());
    for (std::size_t s = 0; s < num_sites(); ++s) {
        out.push_back(site_qubit(s));
    }
    return out;
}

void ChainConfig::validate() const {
    if (chain_len < 3) {
        throw ConfigError("chain_len must be at least 3, got " + std::to_string(chain_len));
    }
    if (!(J > 0.0)) {
        throw ConfigError("J must be positive");
    }
    if (!(J_C >= 0.0)) {
        throw ConfigError("J_C must be non-negative");
    }
    if (fields.size() != num_sites()) {
        throw ConfigError("expected " + std::to_string(num_sites()) + " fields, got " +
                          std::to_string(fields.size()));
    }
    for (double h : fields) {
        if (!std::isfinite(h)) {
            throw ConfigError("fields must be finite");
        }
    }
}

ChainConfig ChainConfig::with_domain(std::size_t chain_len, double J, double J_C, double h_ferro,
                                     double h_para) {
    ChainConfig cfg{chain_len, J, J_C, {}};
    cfg.fields.assign(2 * chain_len, h_para);
    for (std::size_t s = 0; s < chain_len; ++s) {
        cfg.fields[s] = h_ferro;
    }
    return cfg;
}

namespace {

void emit_pair(Circuit &out, std::size_t qi, std::size_t qj, double coupling, double dt) {
    out.append(Gate::cnot(qi, qj));
    out.append(Gate::rz(qj, 2.0 * coupling * dt));
    out.append(Gate::cnot(qi, qj));
}

// Bonds of one parity across both chains, emitted chain by chain so that
// disjoint pairs land in the same ASAP layer.
void emit_bonds(Circuit &out, const ChainConfig &cfg, std::size_t parity, double dt) {
    for (std::size_t chain = 0; chain < 2; ++chain) {
        for (std::size_t local = parity; local + 1 < cfg.chain_len; local += 2) {
            const std::size_t site = chain * cfg.chain_len + local;
            emit_pair(out, cfg.site_qubit(site), cfg.site_qubit(site + 1), -cfg.J, dt);
        }
    }
}

void emit_fields(Circuit &out, const ChainConfig &cfg, std::span<const double> fields, double dt) {
    for (std::size_t s = 0; s < cfg.num_sites(); ++s) {
        out.append(Gate::rx(cfg.site_qubit(s), -2.0 * fields[s] * dt));
    }
}

void emit_coupler(Circuit &out, const ChainConfig &cfg, double dt) {
    const std::size_t a = cfg.site_qubit(cfg.chain_len - 1);
    const std::size_t c = cfg.coupler_qubit();
    const std::size_t b = cfg.site_qubit(cfg.chain_len);
    // Accumulate the parity of (a, c, b) on b, rotate, uncompute.
    out.append(Gate::cnot(a, b));
    out.append(Gate::cnot(c, b));
    out.append(Gate::rz(b, -2.0 * cfg.J_C * dt));
    out.append(Gate::cnot(c, b));
    out.append(Gate::cnot(a, b));
}

} // namespace

Circuit pair_interaction_circuit(const ChainConfig &cfg, std::size_t site_i, std::size_t site_j,
                                 double coupling, double dt) {
    const std::size_t n = cfg.num_sites();
    if (site_i >= n || site_j >= n) {
        throw ConfigError("pair interaction site out of range");
    }
    const bool adjacent = site_i + 1 == site_j || site_j + 1 == site_i;
    const bool same_chain = (site_i < cfg.chain_len) == (site_j < cfg.chain_len);
    if (!adjacent || !same_chain) {
        throw ConfigError("pair interaction needs adjacent sites in one chain, got " +
                          std::to_string(site_i) + " and " + std::to_string(site_j));
    }
    Circuit out(cfg.num_qubits());
    emit_pair(out, cfg.site_qubit(site_i), cfg.site_qubit(site_j), coupling, dt);
    return out;
}

Circuit zeeman_circuit(const ChainConfig &cfg, std::span<const double> fields, double dt) {
    if (fields.size() != cfg.num_sites()) {
        throw ConfigError("zeeman layer expects " + std::to_string(cfg.num_sites()) +
                          " fields, got " + std::to_string(fields.size()));
    }
    Circuit out(cfg.num_qubits());
    emit_fields(out, cfg, fields, dt);
    return out;
}

Circuit coupler_circuit(const ChainConfig &cfg, double dt) {
    if (cfg.J_C < 0.0) {
        throw ConfigError("J_C must be non-negative");
    }
    Circuit out(cfg.num_qubits());
    emit_coupler(out, cfg, dt);
    return out;
}

Circuit even_bond_circuit(const ChainConfig &cfg, double dt) {
    Circuit out(cfg.num_qubits());
    emit_bonds(out, cfg, 0, dt);
    return out;
}

Circuit odd_bond_circuit(const ChainConfig &cfg, double dt) {
    Circuit out(cfg.num_qubits());
    emit_bonds(out, cfg, 1, dt);
    return out;
}

void append_trotter_step(Circuit &out, const ChainConfig &cfg, std::span<const double> fields,
                         double dt) {
    if (fields.size() != cfg.num_sites()) {
        throw ConfigError("trotter step expects " + std::to_string(cfg.num_sites()) + " fields");
    }
    emit_bonds(out, cfg, 0, dt);
    emit_bonds(out, cfg, 1, dt);
    emit_fields(out, cfg, fields, dt);
    emit_coupler(out, cfg, dt);
}

Circuit trotter_step_circuit(const ChainConfig &cfg, double dt) {
    cfg.validate();
    Circuit out(cfg.num_qubits());
    append_trotter_step(out, cfg, cfg.fields, dt);
    return out;
}

} // namespace isingbraid
