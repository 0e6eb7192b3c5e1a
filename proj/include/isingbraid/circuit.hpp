#pragma once

/**
 * @file circuit.hpp
 * Gate-level circuit representation: an ordered gate program over an
 * indexed qubit register, with composition, inversion, ASAP depth layering
 * and OpenQASM 2.0 export.
 *
 * Rotation gates follow the half-angle convention
 * RX(a) = exp(-i a X / 2), RY(a) = exp(-i a Y / 2), RZ(a) = exp(-i a Z / 2).
 */

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isingbraid {

class CircuitError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class GateKind { RX, RY, RZ, H, X, Z, CNOT };

std::string_view gate_name(GateKind kind);

struct Gate {
    GateKind kind{GateKind::H};
    /// For CNOT: {control, target}. Single-qubit gates only use qubits[0].
    std::array<std::size_t, 2> qubits{0, 0};
    /// Radians; only meaningful for RX/RY/RZ.
    double angle{0.0};

    static Gate rx(std::size_t q, double angle) { return {GateKind::RX, {q, q}, angle}; }
    static Gate ry(std::size_t q, double angle) { return {GateKind::RY, {q, q}, angle}; }
    static Gate rz(std::size_t q, double angle) { return {GateKind::RZ, {q, q}, angle}; }
    static Gate h(std::size_t q) { return {GateKind::H, {q, q}, 0.0}; }
    static Gate x(std::size_t q) { return {GateKind::X, {q, q}, 0.0}; }
    static Gate z(std::size_t q) { return {GateKind::Z, {q, q}, 0.0}; }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, {control, target}, 0.0};
    }

    [[nodiscard]] std::size_t arity() const { return kind == GateKind::CNOT ? 2 : 1; }
    [[nodiscard]] bool is_rotation() const {
        return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
    }
    [[nodiscard]] std::span<const std::size_t> targets() const {
        return {qubits.data(), arity()};
    }
    /// Adjoint gate: rotations get their angle negated, the rest are self-inverse.
    [[nodiscard]] Gate adjoint() const;

    /// Throws CircuitError if the gate is malformed for an n-qubit register.
    void validate(std::size_t n_qubits) const;

    friend bool operator==(const Gate &, const Gate &) = default;
};

struct GateCounts {
    std::size_t one_qubit{0};
    std::size_t two_qubit{0};

    [[nodiscard]] std::size_t total() const { return one_qubit + two_qubit; }
    friend bool operator==(const GateCounts &, const GateCounts &) = default;
};

class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits = 0) : n_qubits_{n_qubits} {}

    [[nodiscard]] std::size_t num_qubits() const { return n_qubits_; }
    [[nodiscard]] std::span<const Gate> gates() const { return gates_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }
    [[nodiscard]] bool empty() const { return gates_.empty(); }

    /// Appends after validating the gate against this register.
    Circuit &append(const Gate &gate);
    /// Appends every gate of `other`; registers must match.
    Circuit &append(const Circuit &other);

    void reserve(std::size_t n) { gates_.reserve(n); }

    [[nodiscard]] Circuit inverse() const;

    /// Number of layers under greedy as-soon-as-possible scheduling.
    [[nodiscard]] std::size_t depth() const;

    [[nodiscard]] GateCounts gate_counts() const;

    /// Optional pass: fuse runs of same-axis rotations on one qubit that are
    /// not separated by any other gate touching that qubit. Off by default in
    /// every builder of this library.
    [[nodiscard]] Circuit merge_rotations() const;

    /// OpenQASM 2.0 text: three header lines, then one gate per line.
    [[nodiscard]] std::string to_qasm() const;

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    std::size_t n_qubits_;
    std::vector<Gate> gates_;
};

/// Runs `a` then `b`.
Circuit compose(const Circuit &a, const Circuit &b);

inline constexpr std::size_t kQasmHeaderLines = 3;

} // namespace isingbraid
