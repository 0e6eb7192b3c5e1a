#include "isingbraid/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isingbraid {

std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return "rx";
    case GateKind::RY:
        return "ry";
    case GateKind::RZ:
        return "rz";
    case GateKind::H:
        return "h";
    case GateKind::X:
        return "x";
    case GateKind::Z:
        return "z";
    case GateKind::CNOT:
        return "cx";
    }
    return "?";
}

Gate Gate::adjoint() const {
    Gate g = *this;
    if (is_rotation()) {
        g.angle = -angle;
    }
    return g;
}

void Gate::validate(std::size_t n_qubits) const {
    for (auto q : targets()) {
        if (q >= n_qubits) {
            throw CircuitError("gate " + std::string(gate_name(kind)) + " references qubit " +
                               std::to_string(q) + " outside a register of " +
                               std::to_string(n_qubits));
        }
    }
    if (kind == GateKind::CNOT && qubits[0] == qubits[1]) {
        throw CircuitError("CNOT control and target must differ (qubit " +
                           std::to_string(qubits[0]) + ")");
    }
    if (is_rotation() && !std::isfinite(angle)) {
        throw CircuitError("rotation angle must be finite");
    }
    if (!is_rotation() && angle != 0.0) {
        throw CircuitError("gate " + std::string(gate_name(kind)) + " carries no angle");
    }
}

Circuit &Circuit::append(const Gate &gate) {
    gate.validate(n_qubits_);
    gates_.push_back(gate);
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw CircuitError("cannot compose circuits on " + std::to_string(n_qubits_) + " and " +
                           std::to_string(other.n_qubits_) + " qubits");
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

Circuit compose(const Circuit &a, const Circuit &b) {
    Circuit out = a;
    out.append(b);
    return out;
}

Circuit Circuit::inverse() const {
    Circuit out(n_qubits_);
    out.gates_.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        out.gates_.push_back(it->adjoint());
    }
    return out;
}

std::size_t Circuit::depth() const {
    std::vector<std::size_t> frontier(n_qubits_, 0);
    std::size_t depth = 0;
    for (const auto &g : gates_) {
        std::size_t layer = 0;
        for (auto q : g.targets()) {
            layer = std::max(layer, frontier[q]);
        }
        ++layer;
        for (auto q : g.targets()) {
            frontier[q] = layer;
        }
        depth = std::max(depth, layer);
    }
    return depth;
}

GateCounts Circuit::gate_counts() const {
    GateCounts counts;
    for (const auto &g : gates_) {
        if (g.arity() == 1) {
            ++counts.one_qubit;
        } else {
            ++counts.two_qubit;
        }
    }
    return counts;
}

Circuit Circuit::merge_rotations() const {
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    Circuit out(n_qubits_);
    out.gates_.reserve(gates_.size());
    // Position in `out` of the last gate touching each qubit.
    std::vector<std::size_t> last(n_qubits_, none);
    for (const auto &g : gates_) {
        if (g.is_rotation()) {
            const auto q = g.qubits[0];
            if (last[q] != none) {
                auto &prev = out.gates_[last[q]];
                if (prev.kind == g.kind && prev.qubits[0] == q) {
                    prev.angle += g.angle;
                    continue;
                }
            }
        }
        out.gates_.push_back(g);
        for (auto q : g.targets()) {
            last[q] = out.gates_.size() - 1;
        }
    }
    return out;
}

std::string Circuit::to_qasm() const {
    std::ostringstream os;
    os.precision(17);
    os << "OPENQASM 2.0;\n";
    os << "include \"qelib1.inc\";\n";
    os << "qreg q[" << n_qubits_ << "];\n";
    for (const auto &g : gates_) {
        os << gate_name(g.kind);
        if (g.is_rotation()) {
            os << '(' << g.angle << ')';
        }
        os << " q[" << g.qubits[0] << ']';
        if (g.kind == GateKind::CNOT) {
            os << ",q[" << g.qubits[1] << ']';
        }
        os << ";\n";
    }
    return os.str();
}

} // namespace isingbraid
