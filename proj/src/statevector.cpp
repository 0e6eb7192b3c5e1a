#include "isingbraid/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace isingbraid {

namespace {

constexpr Amplitude kI{0.0, 1.0};

inline std::size_t insert_zero_bit(std::size_t i, std::size_t q) {
    const std::size_t low = i & ((std::size_t{1} << q) - 1);
    return ((i >> q) << (q + 1)) | low;
}

void check_register(std::size_t n) {
    if (n < 1 || n > kMaxQubits) {
        throw StateError("register size " + std::to_string(n) + " outside [1, " +
                         std::to_string(kMaxQubits) + "]");
    }
}

} // namespace

QuantumState::QuantumState(std::size_t n_qubits) : n_qubits_{n_qubits} {
    check_register(n_qubits);
    amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
}

QuantumState QuantumState::from_amplitudes(std::vector<Amplitude> amplitudes) {
    const auto dim = amplitudes.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw StateError("amplitude vector length must be a power of two >= 2");
    }
    QuantumState s;
    s.n_qubits_ = static_cast<std::size_t>(std::countr_zero(dim));
    check_register(s.n_qubits_);
    s.amps_ = std::move(amplitudes);
    if (std::abs(s.norm() - 1.0) > 1e-9) {
        throw StateError("amplitudes are not normalized");
    }
    return s;
}

QuantumState QuantumState::basis(std::size_t n_qubits, std::uint64_t index) {
    QuantumState s(n_qubits);
    if (index >= s.dim()) {
        throw StateError("basis index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double QuantumState::norm() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

std::array<Amplitude, 4> gate_matrix(const Gate &gate) {
    const double c = std::cos(gate.angle / 2.0);
    const double s = std::sin(gate.angle / 2.0);
    switch (gate.kind) {
    case GateKind::RX:
        return {c, -kI * s, -kI * s, c};
    case GateKind::RY:
        return {c, -s, s, c};
    case GateKind::RZ:
        return {std::polar(1.0, -gate.angle / 2.0), 0.0, 0.0, std::polar(1.0, gate.angle / 2.0)};
    case GateKind::H: {
        const double r = std::numbers::sqrt2 / 2.0;
        return {r, r, r, -r};
    }
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Z:
        return {1.0, 0.0, 0.0, -1.0};
    case GateKind::CNOT:
        break;
    }
    throw StateError("CNOT has no single-qubit matrix");
}

void QuantumState::apply_matrix(std::size_t q, const std::array<Amplitude, 4> &m) {
    const std::size_t mask = std::size_t{1} << q;
    const std::size_t half = amps_.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = insert_zero_bit(i, q);
        const std::size_t i1 = i0 | mask;
        const Amplitude a0 = amps_[i0];
        const Amplitude a1 = amps_[i1];
        amps_[i0] = m[0] * a0 + m[1] * a1;
        amps_[i1] = m[2] * a0 + m[3] * a1;
    }
}

void QuantumState::apply(const Gate &gate) {
    gate.validate(n_qubits_);
    const std::size_t half = amps_.size() / 2;
    switch (gate.kind) {
    case GateKind::X: {
        const std::size_t q = gate.qubits[0];
        const std::size_t mask = std::size_t{1} << q;
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t i0 = insert_zero_bit(i, q);
            std::swap(amps_[i0], amps_[i0 | mask]);
        }
        return;
    }
    case GateKind::Z: {
        const std::size_t q = gate.qubits[0];
        const std::size_t mask = std::size_t{1} << q;
        for (std::size_t i = 0; i < half; ++i) {
            amps_[insert_zero_bit(i, q) | mask] *= -1.0;
        }
        return;
    }
    case GateKind::RZ: {
        const std::size_t q = gate.qubits[0];
        const std::size_t mask = std::size_t{1} << q;
        const Amplitude p0 = std::polar(1.0, -gate.angle / 2.0);
        const Amplitude p1 = std::conj(p0);
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t i0 = insert_zero_bit(i, q);
            amps_[i0] *= p0;
            amps_[i0 | mask] *= p1;
        }
        return;
    }
    case GateKind::CNOT: {
        const std::size_t c = gate.qubits[0];
        const std::size_t t = gate.qubits[1];
        const std::size_t cmask = std::size_t{1} << c;
        const std::size_t tmask = std::size_t{1} << t;
        const std::size_t lo = std::min(c, t);
        const std::size_t hi = std::max(c, t);
        const std::size_t quarter = amps_.size() / 4;
        for (std::size_t i = 0; i < quarter; ++i) {
            const std::size_t base = insert_zero_bit(insert_zero_bit(i, lo), hi) | cmask;
            std::swap(amps_[base], amps_[base | tmask]);
        }
        return;
    }
    default:
        apply_matrix(gate.qubits[0], gate_matrix(gate));
    }
}

void QuantumState::run(const Circuit &circuit) {
    if (circuit.num_qubits() != n_qubits_) {
        throw StateError("circuit acts on " + std::to_string(circuit.num_qubits()) +
                         " qubits, state has " + std::to_string(n_qubits_));
    }
    for (const auto &g : circuit.gates()) {
        apply(g);
    }
}

double QuantumState::probability_all_zero(std::span<const std::size_t> qubits) const {
    std::size_t mask = 0;
    for (auto q : qubits) {
        if (q >= n_qubits_) {
            throw StateError("qubit index out of range");
        }
        mask |= std::size_t{1} << q;
    }
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & mask) == 0) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

QuantumState zero_state(std::size_t n_qubits) { return QuantumState(n_qubits); }

QuantumState apply_gate(QuantumState state, const Gate &gate) {
    state.apply(gate);
    return state;
}

QuantumState run(QuantumState state, const Circuit &circuit) {
    state.run(circuit);
    return state;
}

double fidelity(const QuantumState &a, const QuantumState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw StateError("fidelity between registers of different size");
    }
    Amplitude overlap{0.0, 0.0};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        overlap += std::conj(x[i]) * y[i];
    }
    return std::min(1.0, std::norm(overlap));
}

std::string to_bitstring(std::uint64_t index, std::size_t n_bits) {
    std::string s(n_bits, '0');
    for (std::size_t b = 0; b < n_bits; ++b) {
        if ((index >> b) & 1U) {
            s[n_bits - 1 - b] = '1';
        }
    }
    return s;
}

namespace {

std::vector<std::size_t> draw_indices(const QuantumState &state, std::size_t shots,
                                      std::uint64_t seed) {
    const auto amps = state.amplitudes();
    std::vector<double> cdf(amps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        cdf[i] = acc;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, acc);
    std::vector<std::size_t> out(shots);
    for (auto &idx : out) {
        const double u = uniform(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        // Skip zero-probability entries that share the cumulative value.
        while (idx > 0 && std::norm(amps[idx]) == 0.0) {
            --idx;
        }
    }
    return out;
}

} // namespace

SampleCounts sample(const QuantumState &state, std::size_t shots, std::uint64_t seed) {
    SampleCounts out;
    out.shots = shots;
    for (auto idx : draw_indices(state, shots, seed)) {
        ++out.counts[to_bitstring(idx, state.num_qubits())];
    }
    return out;
}

SampleCounts sample_qubits(const QuantumState &state, std::span<const std::size_t> qubits,
                           std::size_t shots, std::uint64_t seed) {
    SampleCounts out;
    out.shots = shots;
    for (auto idx : draw_indices(state, shots, seed)) {
        std::uint64_t sub = 0;
        for (std::size_t b = 0; b < qubits.size(); ++b) {
            sub |= static_cast<std::uint64_t>((idx >> qubits[b]) & 1U) << b;
        }
        ++out.counts[to_bitstring(sub, qubits.size())];
    }
    return out;
}

Eigen::MatrixXcd dense_unitary(const Circuit &circuit) {
    const auto n = circuit.num_qubits();
    if (n < 1 || n > kMaxDenseQubits) {
        throw StateError("dense unitary limited to 1.." + std::to_string(kMaxDenseQubits) +
                         " qubits, got " + std::to_string(n));
    }
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        auto s = QuantumState::basis(n, k);
        s.run(circuit);
        for (std::size_t r = 0; r < dim; ++r) {
            u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = s[r];
        }
    }
    return u;
}

} // namespace isingbraid
