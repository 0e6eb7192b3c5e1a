#include "isingbraid/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace isingbraid {

namespace {

double spin(std::size_t index, std::size_t q) { return (index >> q) & 1U ? -1.0 : 1.0; }

void require_dense(const ChainConfig &cfg) {
    if (cfg.num_qubits() > kMaxDenseQubits) {
        throw ConfigError("dense matrices are limited to " + std::to_string(kMaxDenseQubits) +
                          " qubits");
    }
}

double commutator_norm(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    const Eigen::SparseMatrix<double> sa = a.sparseView();
    const Eigen::SparseMatrix<double> sb = b.sparseView();
    const Eigen::SparseMatrix<double> c = sa * sb - sb * sa;
    if (c.nonZeros() == 0) {
        return 0.0;
    }
    // c is real antisymmetric; its norm is sqrt of the top eigenvalue of c^T c.
    const Eigen::MatrixXd gram = Eigen::MatrixXd(Eigen::SparseMatrix<double>(c.transpose() * c));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// H restricted to a fixed coupler eigenvalue sz. Basis: one bit per chain site.
Eigen::MatrixXd chain_block(const ChainConfig &cfg, std::span<const double> fields, double sz) {
    const std::size_t n = cfg.num_sites();
    const std::size_t L = cfg.chain_len;
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        double diag = 0.0;
        for (std::size_t chain = 0; chain < 2; ++chain) {
            for (std::size_t local = 0; local + 1 < L; ++local) {
                const std::size_t s = chain * L + local;
                diag -= cfg.J * spin(k, s) * spin(k, s + 1);
            }
        }
        diag -= cfg.J_C * sz * spin(k, L - 1) * spin(k, L);
        const auto ki = static_cast<Eigen::Index>(k);
        h(ki, ki) = diag;
        for (std::size_t s = 0; s < n; ++s) {
            h(static_cast<Eigen::Index>(k ^ (std::size_t{1} << s)), ki) -= fields[s];
        }
    }
    return h;
}

struct BlockState {
    Eigen::VectorXd re;
    Eigen::VectorXd im;
};

void evolve_block(BlockState &v, const Eigen::MatrixXd &h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::MatrixXd &vecs = es.eigenvectors();
    Eigen::VectorXd wr = vecs.transpose() * v.re;
    Eigen::VectorXd wi = vecs.transpose() * v.im;
    for (Eigen::Index i = 0; i < wr.size(); ++i) {
        const double c = std::cos(es.eigenvalues()(i) * t);
        const double s = -std::sin(es.eigenvalues()(i) * t);
        const double r = wr(i) * c - wi(i) * s;
        wi(i) = wr(i) * s + wi(i) * c;
        wr(i) = r;
    }
    v.re = vecs * wr;
    v.im = vecs * wi;
}

std::size_t register_index(std::size_t chain_index, std::size_t coupler_bit, std::size_t L) {
    const std::size_t low = chain_index & ((std::size_t{1} << L) - 1);
    const std::size_t high = chain_index >> L;
    return low | (coupler_bit << L) | (high << (L + 1));
}

} // namespace

HamiltonianTerms dense_terms(const ChainConfig &cfg) {
    cfg.validate();
    require_dense(cfg);
    const std::size_t dim = std::size_t{1} << cfg.num_qubits();
    const auto d = static_cast<Eigen::Index>(dim);
    HamiltonianTerms t{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d),
                       Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
    const std::size_t L = cfg.chain_len;
    const std::size_t qa = cfg.site_qubit(L - 1);
    const std::size_t qc = cfg.coupler_qubit();
    const std::size_t qb = cfg.site_qubit(L);
    for (std::size_t k = 0; k < dim; ++k) {
        const auto ki = static_cast<Eigen::Index>(k);
        for (std::size_t chain = 0; chain < 2; ++chain) {
            for (std::size_t local = 0; local + 1 < L; ++local) {
                const std::size_t s = chain * L + local;
                const double zz = spin(k, cfg.site_qubit(s)) * spin(k, cfg.site_qubit(s + 1));
                auto &target = local % 2 == 0 ? t.even_bonds : t.odd_bonds;
                target(ki, ki) -= cfg.J * zz;
            }
        }
        t.coupler(ki, ki) = -cfg.J_C * spin(k, qa) * spin(k, qc) * spin(k, qb);
        for (std::size_t s = 0; s < cfg.num_sites(); ++s) {
            const std::size_t flipped = k ^ (std::size_t{1} << cfg.site_qubit(s));
            t.zeeman(static_cast<Eigen::Index>(flipped), ki) -= cfg.fields[s];
        }
    }
    return t;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXd &H, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -t))
            .array()
            .exp();
    const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
    return v * phases.asDiagonal() * v.adjoint();
}

double operator_norm(const Eigen::MatrixXcd &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double operator_norm(const Eigen::MatrixXd &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

double per_step_error_bound(const ProtocolParams &p) {
    const auto n = static_cast<double>(p.N_s);
    return (n * p.J + 2.0 * p.J_C) * p.h_para * p.dt * p.dt;
}

double total_error_bound(const ProtocolParams &p) {
    const auto n = static_cast<double>(p.N_s);
    return n * (p.h_para / p.dh) * (p.T / p.dt) * per_step_error_bound(p);
}

double adiabatic_margin(const ProtocolParams &p) { return (2.0 * p.J * p.T / p.dh) / p.dt; }

DepthBound depth_upper_bound(const ProtocolParams &p) {
    const auto n = static_cast<double>(p.N_s);
    DepthBound d;
    d.formula = 12.0 * (p.T / p.dt) * (n * p.h_para / p.dh + std::numbers::pi / p.Gamma);
    d.rounded = 12.0 * static_cast<double>(steps_per_hold(p, p.T)) *
                static_cast<double>(p.N_s * updates_per_shift(p) + rotation_events(p));
    return d;
}

double single_step_error(const ChainConfig &cfg, double dt) {
    const auto terms = dense_terms(cfg);
    const Eigen::MatrixXcd trotter = dense_unitary(trotter_step_circuit(cfg, dt));
    return operator_norm(Eigen::MatrixXcd(trotter - expm_hermitian(terms.total(), dt)));
}

CommutatorReport commutator_norms(const ChainConfig &cfg, double h_para, bool with_exact) {
    cfg.validate();
    CommutatorReport rep;
    const auto n = static_cast<double>(cfg.num_sites());
    rep.analytic.even_zeeman = n * cfg.J * h_para;
    rep.analytic.odd_zeeman = n * cfg.J * h_para;
    rep.analytic.zeeman_coupler = 4.0 * cfg.J_C * h_para;
    if (!with_exact) {
        return rep;
    }
    if (cfg.num_sites() > kMaxExactCommutatorSites) {
        throw ConfigError("exact commutator norms need N_s <= " +
                          std::to_string(kMaxExactCommutatorSites));
    }
    const auto t = dense_terms(cfg);
    rep.exact = CommutatorNorms{commutator_norm(t.even_bonds, t.zeeman),
                                commutator_norm(t.odd_bonds, t.zeeman),
                                commutator_norm(t.zeeman, t.coupler)};
    rep.max_vanishing = std::max({commutator_norm(t.even_bonds, t.odd_bonds),
                                  commutator_norm(t.even_bonds, t.coupler),
                                  commutator_norm(t.odd_bonds, t.coupler)});
    return rep;
}

BoundReport bound_report(const ProtocolParams &p) {
    BoundReport r;
    r.per_step = per_step_error_bound(p);
    r.total = total_error_bound(p);
    r.adiabatic_margin = adiabatic_margin(p);
    r.depth = depth_upper_bound(p);
    r.commutators =
        commutator_norms(p.chain_config(), p.h_para, p.N_s <= kMaxExactCommutatorSites);
    return r;
}

QuantumState exact_evolve(const FieldSchedule &schedule, const ProtocolParams &params,
                          const QuantumState &initial, std::size_t refine) {
    if (params.N_s > kMaxExactEvolveSites) {
        throw ConfigError("exact evolution needs N_s <= " + std::to_string(kMaxExactEvolveSites));
    }
    if (refine < 1) {
        throw ConfigError("refine must be at least 1");
    }
    const auto cfg = params.chain_config();
    if (initial.num_qubits() != cfg.num_qubits()) {
        throw StateError("initial state has the wrong number of qubits");
    }
    ProtocolParams fine = params;
    fine.dt = params.dt / static_cast<double>(refine);
    const auto ops = discretize(fine, schedule);

    // The coupler has no transverse field, so H is block diagonal in its Z basis.
    const std::size_t L = cfg.chain_len;
    const std::size_t block_dim = std::size_t{1} << cfg.num_sites();
    std::array<BlockState, 2> blocks;
    for (auto &b : blocks) {
        b.re = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(block_dim));
        b.im = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(block_dim));
    }
    for (std::size_t cb = 0; cb < 2; ++cb) {
        for (std::size_t m = 0; m < block_dim; ++m) {
            const Amplitude a = initial[register_index(m, cb, L)];
            blocks[cb].re(static_cast<Eigen::Index>(m)) = a.real();
            blocks[cb].im(static_cast<Eigen::Index>(m)) = a.imag();
        }
    }

    for (const auto &op : ops) {
        if (const auto *iv = std::get_if<TrotterInterval>(&op)) {
            const double t = fine.dt * static_cast<double>(iv->repeat);
            evolve_block(blocks[0], chain_block(cfg, iv->fields, 1.0), t);
            evolve_block(blocks[1], chain_block(cfg, iv->fields, -1.0), t);
        } else {
            const double half = std::get<CouplerRotation>(op).angle / 2.0;
            const double c = std::cos(half);
            const double s = std::sin(half);
            BlockState up = blocks[0];
            blocks[0].re = c * up.re - s * blocks[1].re;
            blocks[0].im = c * up.im - s * blocks[1].im;
            blocks[1].re = s * up.re + c * blocks[1].re;
            blocks[1].im = s * up.im + c * blocks[1].im;
        }
    }

    std::vector<Amplitude> amps(initial.dim());
    for (std::size_t cb = 0; cb < 2; ++cb) {
        for (std::size_t m = 0; m < block_dim; ++m) {
            const auto mi = static_cast<Eigen::Index>(m);
            amps[register_index(m, cb, L)] = {blocks[cb].re(mi), blocks[cb].im(mi)};
        }
    }
    // Renormalize away accumulated rounding so from_amplitudes accepts the state.
    double norm = 0.0;
    for (const auto &a : amps) {
        norm += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm);
    }
    return QuantumState::from_amplitudes(std::move(amps));
}

} // namespace isingbraid
