#include "isingbraid/noise.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "isingbraid/parallel.hpp"
#include "isingbraid/seeding.hpp"

namespace isingbraid {

bool NoiseModel::gate_noise_free() const {
    return bitflip(1) == 0.0 && bitflip(2) == 0.0 && phase(1) == 0.0 && phase(2) == 0.0;
}

void NoiseModel::validate() const {
    for (double p : {bitflip(1), bitflip(2), phase(1), phase(2), eps_meas}) {
        if (!(p >= 0.0 && p <= 0.5)) {
            throw ConfigError("noise probabilities must lie in [0, 0.5]");
        }
    }
    if (trajectories < 1) {
        throw ConfigError("trajectories must be at least 1");
    }
}

QuantumState run_noisy(const Circuit &circuit, QuantumState state, const NoiseModel &model,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (const Gate &g : circuit.gates()) {
        state.apply(g);
        const double px = model.bitflip(g.arity());
        const double pz = model.phase(g.arity());
        for (std::size_t q : g.targets()) {
            if (px > 0.0 && uniform(rng) < px) {
                state.apply(Gate::x(q));
            }
            if (pz > 0.0 && uniform(rng) < pz) {
                state.apply(Gate::z(q));
            }
        }
    }
    return state;
}

SampleCounts apply_measurement_error(const SampleCounts &counts, double eps_meas,
                                     std::uint64_t seed) {
    if (eps_meas == 0.0) {
        return counts;
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(eps_meas);
    SampleCounts out;
    out.shots = counts.shots;
    for (const auto &[bits, n] : counts.counts) {
        for (std::size_t shot = 0; shot < n; ++shot) {
            std::string noisy = bits;
            for (char &b : noisy) {
                if (flip(rng)) {
                    b = b == '0' ? '1' : '0';
                }
            }
            ++out.counts[noisy];
        }
    }
    return out;
}

NoisyFidelity noisy_fidelity(const ProtocolParams &params, Scenario scenario, LogicalLabel init,
                             const NoiseModel &model, std::size_t jobs) {
    params.validate();
    model.validate();
    const auto plan = plan_scenario(params, scenario, init);
    const Circuit noisy_part = compose(plan.init, plan.evolution);
    const std::size_t n = model.trajectories;
    const std::size_t shots_each = (params.shots + n - 1) / n;

    std::vector<double> fids(n);
    std::vector<std::size_t> zeros(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        const std::uint64_t s = derive_seed(params.seed, i);
        QuantumState state(noisy_part.num_qubits());
        state = run_noisy(noisy_part, std::move(state), model, derive_seed(s, 0));
        fids[i] = exact_fidelity(plan, state);
        auto counts = readout_counts(plan, state, shots_each, derive_seed(s, 1));
        counts = apply_measurement_error(counts, model.eps_meas, derive_seed(s, 2));
        const auto width = readout_qubits(plan.effective).size();
        zeros[i] = counts.count(std::string(width, '0'));
    });

    NoisyFidelity out;
    out.trajectories = n;
    out.shots = shots_each * n;
    // Offsets from the first trajectory keep the noiseless case bit-exact.
    double acc = 0.0;
    for (double f : fids) {
        acc += f - fids[0];
    }
    out.mean = fids[0] + acc / static_cast<double>(n);
    if (n > 1) {
        double var = 0.0;
        for (double f : fids) {
            var += (f - out.mean) * (f - out.mean);
        }
        out.stderr_ = std::sqrt(var / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    std::size_t total_zeros = 0;
    for (auto z : zeros) {
        total_zeros += z;
    }
    const double p = static_cast<double>(total_zeros) / static_cast<double>(out.shots);
    out.sampled = p;
    out.sampled_stderr = std::sqrt(p * (1.0 - p) / static_cast<double>(out.shots));
    return out;
}

} // namespace isingbraid
