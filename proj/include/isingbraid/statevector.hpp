#pragma once

/**
 * @file statevector.hpp
 * Dense statevector engine. Qubit 0 is the least-significant bit of the
 * basis index, and |up> is the computational |0>.
 */

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "isingbraid/circuit.hpp"

namespace isingbraid {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 26;
inline constexpr std::size_t kMaxDenseQubits = 10;

class StateError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class QuantumState {
  public:
    /// |0...0> on n qubits, 1 <= n <= kMaxQubits.
    explicit QuantumState(std::size_t n_qubits);

    /// Takes ownership of amplitudes; the vector length must be a power of
    /// two and its norm 1 within 1e-9.
    static QuantumState from_amplitudes(std::vector<Amplitude> amplitudes);

    /// Computational basis state |index>.
    static QuantumState basis(std::size_t n_qubits, std::uint64_t index);

    [[nodiscard]] std::size_t num_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<const Amplitude> amplitudes() const { return amps_; }
    [[nodiscard]] Amplitude operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const;

    void apply(const Gate &gate);
    void run(const Circuit &circuit);

    /// Applies a unitary given as a 2x2 row-major matrix to qubit q.
    void apply_matrix(std::size_t q, const std::array<Amplitude, 4> &m);

    /// Probability that every listed qubit reads 0.
    [[nodiscard]] double probability_all_zero(std::span<const std::size_t> qubits) const;

  private:
    QuantumState() = default;
    std::size_t n_qubits_{0};
    std::vector<Amplitude> amps_;
};

QuantumState zero_state(std::size_t n_qubits);
QuantumState apply_gate(QuantumState state, const Gate &gate);
QuantumState run(QuantumState state, const Circuit &circuit);

/// |<a|b>|^2.
double fidelity(const QuantumState &a, const QuantumState &b);

struct SampleCounts {
    /// Bit-strings are written most-significant qubit first (qubit 0 rightmost).
    std::map<std::string, std::size_t> counts;
    std::size_t shots{0};

    [[nodiscard]] std::size_t count(const std::string &bits) const {
        auto it = counts.find(bits);
        return it == counts.end() ? 0 : it->second;
    }
};

std::string to_bitstring(std::uint64_t index, std::size_t n_bits);

/// i.i.d. Born-rule draws; deterministic for a given seed.
SampleCounts sample(const QuantumState &state, std::size_t shots, std::uint64_t seed);

/// Like sample(), but only the listed qubits are recorded (listed order maps
/// to bit positions 0, 1, ... of the output strings).
SampleCounts sample_qubits(const QuantumState &state, std::span<const std::size_t> qubits,
                           std::size_t shots, std::uint64_t seed);

/// 2x2 matrix of a single-qubit gate (row-major).
std::array<Amplitude, 4> gate_matrix(const Gate &gate);

/// Full 2^n x 2^n unitary, column k = circuit applied to |k>. n <= 10.
Eigen::MatrixXcd dense_unitary(const Circuit &circuit);

} // namespace isingbraid
