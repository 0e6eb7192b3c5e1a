#pragma once

/**
 * @file noise.hpp
 * Stochastic Pauli noise by Monte Carlo trajectories. After every gate, each
 * qubit the gate touches independently receives an X with probability
 * eps_bitflip and a Z with probability eps_phase. Measurement error flips each
 * recorded bit independently.
 *
 * Noise acts on the initialization and evolution gates. The inverse
 * target-preparation circuit used for scoring is applied noiselessly.
 */

#include <cstddef>
#include <cstdint>
#include <optional>

#include "isingbraid/circuit.hpp"
#include "isingbraid/protocol.hpp"
#include "isingbraid/statevector.hpp"

namespace isingbraid {

struct NoiseModel {
    double eps_bitflip{0.0};
    double eps_phase{0.0};
    double eps_meas{0.0};
    std::size_t trajectories{200};
    /// Per-arity overrides; unset means the shared value above.
    std::optional<double> bitflip_1q, bitflip_2q, phase_1q, phase_2q;

    [[nodiscard]] double bitflip(std::size_t arity) const {
        return (arity == 1 ? bitflip_1q : bitflip_2q).value_or(eps_bitflip);
    }
    [[nodiscard]] double phase(std::size_t arity) const {
        return (arity == 1 ? phase_1q : phase_2q).value_or(eps_phase);
    }
    [[nodiscard]] bool gate_noise_free() const;

    /// Probabilities in [0, 0.5], trajectories >= 1. Throws ConfigError.
    void validate() const;
};

/// One trajectory, deterministic in seed.
QuantumState run_noisy(const Circuit &circuit, QuantumState initial, const NoiseModel &model,
                       std::uint64_t seed);

/// Flips each recorded bit with probability eps_meas (any value in [0, 1]).
SampleCounts apply_measurement_error(const SampleCounts &counts, double eps_meas,
                                     std::uint64_t seed);

struct NoisyFidelity {
    double mean{0.0};
    double stderr_{0.0};
    /// All-zeros frequency over shots spread across trajectories, measurement
    /// error included.
    double sampled{0.0};
    double sampled_stderr{0.0};
    std::size_t trajectories{0};
    std::size_t shots{0};
};

/// Trajectory seeds are derive_seed(seed, index). Trajectories run on `jobs`
/// threads (0 = all cores); the result does not depend on `jobs`.
NoisyFidelity noisy_fidelity(const ProtocolParams &params, Scenario scenario, LogicalLabel init,
                             const NoiseModel &model, std::size_t jobs = 0);

} // namespace isingbraid
