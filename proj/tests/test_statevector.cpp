#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isingbraid/statevector.hpp"
#include "oracles.hpp"

using namespace isingbraid;

namespace {

QuantumState random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<Amplitude> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &x : a) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    for (auto &x : a) {
        x /= std::sqrt(norm);
    }
    return QuantumState::from_amplitudes(a);
}

oracle::Vec to_vec(const QuantumState &s) {
    oracle::Vec v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

std::vector<Gate> every_kind(std::size_t n) {
    return {Gate::rx(n - 1, 0.7), Gate::ry(0, -1.1), Gate::rz(n / 2, 2.3), Gate::h(n - 1),
            Gate::x(0),          Gate::z(n - 1),     Gate::cnot(0, n - 1), Gate::cnot(n - 1, 0)};
}

} // namespace

TEST_CASE("zero state") {
    QuantumState s1(1);
    CHECK(s1.dim() == 2);
    CHECK(s1[0] == Amplitude(1.0));
    CHECK(s1[1] == Amplitude(0.0));
    QuantumState s3(3);
    CHECK(s3.dim() == 8);
    CHECK(s3[0] == Amplitude(1.0));
    CHECK(QuantumState(7).dim() == 128);
    CHECK_THROWS_AS(QuantumState(0), StateError);
    CHECK_THROWS_AS(QuantumState(kMaxQubits + 1), StateError);
    CHECK_THROWS_AS(QuantumState::from_amplitudes({1.0, 1.0}), StateError);
    CHECK_THROWS_AS(QuantumState::from_amplitudes({1.0, 0.0, 0.0}), StateError);
}

TEST_CASE("basic gate actions") {
    QuantumState s(1);
    s.apply(Gate::x(0));
    CHECK(std::norm(s[1]) == doctest::Approx(1.0));

    QuantumState h(1);
    h.apply(Gate::h(0));
    CHECK(h[0].real() == doctest::Approx(M_SQRT1_2));
    CHECK(h[1].real() == doctest::Approx(M_SQRT1_2));

    // qubit 0 is the low bit: (|00> + |01>)/sqrt2 -> (|00> + |11>)/sqrt2
    auto b = QuantumState::from_amplitudes({M_SQRT1_2, M_SQRT1_2, 0.0, 0.0});
    b.apply(Gate::cnot(0, 1));
    CHECK(std::abs(b[0] - Amplitude(M_SQRT1_2)) < 1e-15);
    CHECK(std::abs(b[3] - Amplitude(M_SQRT1_2)) < 1e-15);
    CHECK(std::abs(b[1]) < 1e-15);
}

TEST_CASE("cat state preparation and fidelity") {
    Circuit prep(3);
    prep.append(Gate::h(0)).append(Gate::cnot(0, 1)).append(Gate::cnot(0, 2));
    QuantumState s(3);
    s.run(Circuit(3));
    CHECK(s[0] == Amplitude(1.0));
    s.run(prep);
    CHECK(std::norm(s[0]) == doctest::Approx(0.5));
    CHECK(std::norm(s[7]) == doctest::Approx(0.5));
    CHECK(fidelity(s, s) == doctest::Approx(1.0));
    CHECK(fidelity(s, QuantumState(3)) == doctest::Approx(0.5));
    CHECK(fidelity(QuantumState::basis(1, 0), QuantumState::basis(1, 1)) == 0.0);
    s.run(prep.inverse());
    CHECK(std::norm(s[0]) == doctest::Approx(1.0));
}

TEST_CASE("apply agrees with the Kronecker oracle for every gate kind") {
    std::mt19937_64 rng(1);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (const auto &g : every_kind(n)) {
            auto s = random_state(n, rng);
            const auto expected = (oracle::gate(g, n) * to_vec(s)).eval();
            s.apply(g);
            CHECK((to_vec(s) - expected).norm() < 1e-12);
        }
    }
}

TEST_CASE("gate matrices") {
    const auto h = gate_matrix(Gate::h(0));
    CHECK(h[0].real() == doctest::Approx(M_SQRT1_2));
    CHECK(h[3].real() == doctest::Approx(-M_SQRT1_2));
    Circuit xx(1);
    xx.append(Gate::x(0)).append(Gate::x(0));
    CHECK(dense_unitary(xx).isApprox(Eigen::MatrixXcd::Identity(2, 2)));

    Circuit hc(1);
    hc.append(Gate::h(0));
    CHECK((dense_unitary(hc) - oracle::gate(Gate::h(0), 1)).norm() < 1e-15);
}

TEST_CASE("pair interaction unitary is the analytic diagonal") {
    const double jdt = 0.37;
    Circuit c(2);
    c.append(Gate::cnot(0, 1)).append(Gate::rz(1, 2 * jdt)).append(Gate::cnot(0, 1));
    const auto u = dense_unitary(c);
    const Amplitude m = std::polar(1.0, -jdt), p = std::polar(1.0, jdt);
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
    expected.diagonal() << m, p, p, m;
    CHECK((u - expected).norm() < 1e-12);
}

TEST_CASE("dense unitary is unitary and inverts") {
    std::mt19937_64 rng(9);
    for (std::size_t n = 1; n <= 4; ++n) {
        Circuit c(n);
        for (int k = 0; k < 40; ++k) {
            for (const auto &g : every_kind(n)) {
                if (g.arity() == 1 || n > 1) {
                    c.append(g);
                }
            }
        }
        const auto u = dense_unitary(c);
        const auto id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
        CHECK((u * u.adjoint() - id).norm() < 1e-10);
        CHECK((u * dense_unitary(c.inverse()) - id).norm() < 1e-10);
    }
}

TEST_CASE("norm is preserved") {
    std::mt19937_64 rng(2);
    auto s = random_state(4, rng);
    std::uniform_int_distribution<int> pick(0, 7);
    const auto gates = every_kind(4);
    for (int k = 0; k < 100000; ++k) {
        const double before = s.norm();
        s.apply(gates[static_cast<std::size_t>(pick(rng))]);
        if (k < 100) {
            CHECK(std::abs(s.norm() - before) < 1e-12);
        }
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-9);
}

TEST_CASE("sampling") {
    const auto one = QuantumState::basis(1, 1);
    const auto c = sample(one, 100, 1);
    CHECK(c.count("1") == 100);
    CHECK(c.counts.size() == 1);

    QuantumState plus(1);
    plus.apply(Gate::h(0));
    const auto pc = sample(plus, 10000, 42);
    CHECK(std::abs(static_cast<double>(pc.count("0")) - 5000.0) < 5 * 50.0);
    CHECK(sample(plus, 10000, 42).counts == pc.counts);

    CHECK(to_bitstring(1, 3) == "001");
    auto s = QuantumState::basis(3, 0b100);
    const std::vector<std::size_t> q{2, 0};
    CHECK(sample_qubits(s, q, 10, 3).count("01") == 10);
}

TEST_CASE("chi-square goodness of fit on random 4-qubit states") {
    // Critical value of chi-square with 15 degrees of freedom at p = 0.001.
    const double critical = 37.697;
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 5; ++rep) {
        const auto s = random_state(4, rng);
        const std::size_t shots = 10000;
        const auto c = sample(s, shots, 100 + static_cast<std::uint64_t>(rep));
        double chi2 = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            const double expected = std::norm(s[i]) * shots;
            const double observed = static_cast<double>(c.count(to_bitstring(i, 4)));
            chi2 += (observed - expected) * (observed - expected) / expected;
        }
        CHECK(chi2 < critical);
    }
}

TEST_CASE("probability_all_zero marginalizes") {
    std::mt19937_64 rng(4);
    const auto s = random_state(4, rng);
    const std::vector<std::size_t> q{1, 3};
    double p = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        if (((i >> 1) & 1) == 0 && ((i >> 3) & 1) == 0) {
            p += std::norm(s[i]);
        }
    }
    CHECK(s.probability_all_zero(q) == doctest::Approx(p).epsilon(1e-14));
}
