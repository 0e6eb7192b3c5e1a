#pragma once

/**
 * @file analysis.hpp
 * Error-bound formulas, commutator norms, dense exact-evolution oracles and
 * circuit-depth accounting for the two-chain Ising protocol.
 *
 * Dense matrices use the same basis ordering as QuantumState (qubit 0 is the
 * least-significant bit). All Hamiltonian summands are real symmetric.
 */

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

#include "isingbraid/protocol.hpp"
#include "isingbraid/statevector.hpp"
#include "isingbraid/trotter.hpp"

namespace isingbraid {

/// The four product-formula summands of H as dense matrices on the full register.
struct HamiltonianTerms {
    Eigen::MatrixXd even_bonds;
    Eigen::MatrixXd odd_bonds;
    Eigen::MatrixXd zeeman;
    Eigen::MatrixXd coupler;

    [[nodiscard]] Eigen::MatrixXd total() const {
        return even_bonds + odd_bonds + zeeman + coupler;
    }
};

/// Requires num_qubits() <= kMaxDenseQubits.
HamiltonianTerms dense_terms(const ChainConfig &cfg);

/// exp(-i H t) for real symmetric H, by diagonalization.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXd &H, double t);

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd &m);
double operator_norm(const Eigen::MatrixXd &m);

/// (N_s J + 2 J_C) h_para dt^2.
double per_step_error_bound(const ProtocolParams &p);
/// N_s (h_para/dh) (T/dt) times the per-step bound.
double total_error_bound(const ProtocolParams &p);
/// (2 J T / dh) / dt.
double adiabatic_margin(const ProtocolParams &p);

struct DepthBound {
    double formula{0.0};  // 12 (T/dt) (N_s h_para/dh + pi/Gamma), real-valued
    double rounded{0.0};  // 12 steps_per_hold (N_s updates_per_shift + rotation_events)
};
DepthBound depth_upper_bound(const ProtocolParams &p);

/// ||U_trotter(dt) - exp(-i H dt)|| for one step at the fields in cfg.
double single_step_error(const ChainConfig &cfg, double dt);

struct CommutatorNorms {
    double even_zeeman{0.0};    // [H_Je, H_Z]
    double odd_zeeman{0.0};     // [H_Jo, H_Z]
    double zeeman_coupler{0.0}; // [H_Z, H_CI]
};

struct CommutatorReport {
    /// N_s J h_para for each bond parity (2 N_s J h_para together) and
    /// 4 J_C h_para for the coupler term. These assume half of the sites sit
    /// near h_ferro.
    CommutatorNorms analytic;
    std::optional<CommutatorNorms> exact;
    /// Largest norm among the three pairs expected to commute:
    /// (H_Je, H_Jo), (H_Je, H_CI), (H_Jo, H_CI).
    std::optional<double> max_vanishing;
};

inline constexpr std::size_t kMaxExactCommutatorSites = 10;

/// Analytic bounds always; exact dense norms when with_exact is set.
/// Throws ConfigError if with_exact and N_s > kMaxExactCommutatorSites.
CommutatorReport commutator_norms(const ChainConfig &cfg, double h_para, bool with_exact);

struct BoundReport {
    double per_step{0.0};
    double total{0.0};
    double adiabatic_margin{0.0};
    DepthBound depth;
    CommutatorReport commutators;
};

/// Exact commutator norms are included when N_s <= kMaxExactCommutatorSites.
BoundReport bound_report(const ProtocolParams &p);

inline constexpr std::size_t kMaxExactEvolveSites = 8;

/// Trotter-free reference: exp(-i H(t_j) dt) applied exactly on every interval
/// of the discretized schedule, coupler rotations applied as gates.
/// `refine` > 1 divides dt for the time discretization (finer reference).
/// Throws ConfigError when N_s > kMaxExactEvolveSites.
QuantumState exact_evolve(const FieldSchedule &schedule, const ProtocolParams &params,
                          const QuantumState &initial, std::size_t refine = 1);

} // namespace isingbraid
