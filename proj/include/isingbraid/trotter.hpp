#pragma once

/**
 * @file trotter.hpp
 * First-order product-formula compilation of the two-chain Ising Hamiltonian
 *
 *   H = -J sum_<n,n+1> Z_n Z_{n+1} - sum_n h_n X_n - J_C S^z Z_a Z_b
 *
 * into gate circuits. The Hamiltonian is split into four summands (even
 * bonds, odd bonds, transverse fields, coupler term); each is exponentiated
 * exactly by a fixed-depth subcircuit.
 *
 * Register layout: left chain sites on qubits 0..L-1, the coupler on qubit L,
 * right chain sites on qubits L+1..2L. `a` is the last left-chain site and
 * `b` the first right-chain site.
 */

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "isingbraid/circuit.hpp"

namespace isingbraid {

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct ChainConfig {
    std::size_t chain_len{3};
    double J{1.0};
    double J_C{0.3};
    /// One transverse field per site, sites ordered left chain then right chain.
    std::vector<double> fields;

    [[nodiscard]] std::size_t num_sites() const { return 2 * chain_len; }
    [[nodiscard]] std::size_t num_qubits() const { return 2 * chain_len + 1; }
    [[nodiscard]] std::size_t coupler_qubit() const { return chain_len; }
    [[nodiscard]] std::size_t site_qubit(std::size_t site) const {
        return site < chain_len ? site : site + 1;
    }
    /// Chain-qubit indices in site order (coupler excluded).
    [[nodiscard]] std::vector<std::size_t> chain_qubits() const;

    /// chain_len >= 3, J > 0, J_C >= 0, fields sized to num_sites().
    void validate() const;

    /// Left chain at h_ferro, right chain at h_para.
    static ChainConfig with_domain(std::size_t chain_len, double J, double J_C, double h_ferro,
                                   double h_para);
};

/// exp(-i * coupling * dt * Z_i Z_j) on two adjacent sites of the same chain,
/// realized as CNOT(i->j) RZ(2 coupling dt) CNOT(i->j).
Circuit pair_interaction_circuit(const ChainConfig &cfg, std::size_t site_i, std::size_t site_j,
                                 double coupling, double dt);

/// exp(+i dt sum_n h_n X_n), i.e. RX(-2 h_n dt) on every site.
Circuit zeeman_circuit(const ChainConfig &cfg, std::span<const double> fields, double dt);

/// exp(+i J_C dt Z_a S^z Z_b) as a parity ladder around a single RZ.
Circuit coupler_circuit(const ChainConfig &cfg, double dt);

/// exp(-i H_{J,e} dt): every chain bond whose chain-local left index is even.
Circuit even_bond_circuit(const ChainConfig &cfg, double dt);
/// exp(-i H_{J,o} dt): every chain bond whose chain-local left index is odd.
Circuit odd_bond_circuit(const ChainConfig &cfg, double dt);

/// One product-formula step: even bonds, odd bonds, fields, coupler.
Circuit trotter_step_circuit(const ChainConfig &cfg, double dt);

/// Appends one Trotter step into an existing circuit without copying.
void append_trotter_step(Circuit &out, const ChainConfig &cfg, std::span<const double> fields,
                         double dt);

} // namespace isingbraid
