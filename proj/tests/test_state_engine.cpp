#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "lgt/circuit.hpp"
#include "lgt/random.hpp"
#include "lgt/state_vector.hpp"

using namespace lgt;

namespace {

// Independent oracle: dense matrix exponential of a k-qubit Pauli string via
// Eigen eigendecomposition (never touches the pair-update kernel).
Eigen::MatrixXcd dense_pauli(const PauliString& p, int n) {
    using M2 = Eigen::Matrix2cd;
    M2 id = M2::Identity(), x, y, z;
    x << 0, 1, 1, 0;
    y << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
    z << 1, 0, 0, -1;
    // out = op_{n-1} x ... x op_0 so qubit 0 is the least-significant bit.
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1) * static_cast<double>(p.sign);
    for (int q = 0; q < n; ++q) {
        const M2* factor = &id;
        switch (p.op_at(q)) {
        case 'X': factor = &x; break;
        case 'Y': factor = &y; break;
        case 'Z': factor = &z; break;
        }
        Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
        next.setZero();
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                next.block(r * out.rows(), c * out.cols(), out.rows(), out.cols()) =
                    (*factor)(r, c) * out;
        out = next;
    }
    return out;
}

Eigen::MatrixXcd dense_exp_i_theta(const Eigen::MatrixXcd& p, double theta) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p);
    Eigen::VectorXcd phases(p.rows());
    for (int i = 0; i < p.rows(); ++i)
        phases(i) = std::exp(std::complex<double>(0, theta * es.eigenvalues()(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

StateVector random_state(int n, uint64_t seed) {
    StateVector s(n);
    RandomSource rng(seed);
    for (auto& a : s.amplitudes()) a = {rng.next_double() - 0.5, rng.next_double() - 0.5};
    s.normalize();
    return s;
}

} // namespace

TEST_CASE("init_zero") {
    StateVector s1 = init_zero(1);
    CHECK(s1.amplitudes()[0] == cplx{1, 0});
    CHECK(s1.amplitudes()[1] == cplx{0, 0});
    StateVector s2 = init_zero(2);
    CHECK(s2.dim() == 4);
    CHECK(std::abs(s2.amplitudes()[0] - cplx{1, 0}) == 0);
    CHECK_THROWS_AS(init_zero(27), std::invalid_argument);
    CHECK_NOTHROW(init_zero(5, 5));
    CHECK_THROWS_AS(init_zero(6, 5), std::invalid_argument);
}

TEST_CASE("basic gates") {
    StateVector s(1);
    apply_gate(s, Gate::x(0));
    CHECK(std::abs(s.amplitudes()[1] - cplx{1, 0}) < 1e-15);

    StateVector h(1);
    apply_gate(h, Gate::h(0));
    apply_gate(h, Gate::h(0));
    CHECK(std::abs(h.amplitudes()[0] - cplx{1, 0}) < 1e-14);

    StateVector cz(2);
    apply_gate(cz, Gate::x(0));
    apply_gate(cz, Gate::x(1));
    apply_gate(cz, Gate::cz(0, 1));
    CHECK(std::abs(cz.amplitudes()[3] - cplx{-1, 0}) < 1e-15);

    CHECK_THROWS_AS(Gate::cz(1, 1), std::invalid_argument);
    StateVector t(2);
    CHECK_THROWS_AS(apply_gate(t, Gate::x(5)), std::out_of_range);
}

TEST_CASE("phased_xz composes with its inverse") {
    StateVector s = random_state(1, 5);
    StateVector orig = s;
    Gate g = Gate::phased_xz(0, 0.37, -0.22, 0.61);
    apply_gate(s, g);
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    apply_gate(s, g.inverse());
    CHECK(std::abs(overlap(orig, s) - cplx{1, 0}) < 1e-12);
}

TEST_CASE("pauli exponential basics") {
    // exp(i theta Z)|0> = e^{i theta}|0>
    StateVector s(1);
    apply_pauli_exp(s, PauliString::single('Z', 0), 0.7);
    CHECK(std::abs(s.amplitudes()[0] - std::exp(cplx{0, 0.7})) < 1e-14);

    // exp(i theta XXXX)|0000> = cos(theta)|0000> + i sin(theta)|1111>
    StateVector s4(4);
    std::vector<int> qs{0, 1, 2, 3};
    apply_pauli_exp(s4, PauliString::x_product(qs), 0.3);
    CHECK(std::abs(s4.amplitudes()[0] - cplx{std::cos(0.3), 0}) < 1e-14);
    CHECK(std::abs(s4.amplitudes()[15] - cplx{0, std::sin(0.3)}) < 1e-14);

    // exp(i pi/2 X)|0> = i|1>
    StateVector sx(1);
    apply_pauli_exp(sx, PauliString::single('X', 0), M_PI / 2);
    CHECK(std::abs(sx.amplitudes()[1] - cplx{0, 1}) < 1e-14);

    CHECK_THROWS_AS(apply_pauli_exp(sx, PauliString{}, 0.1), std::invalid_argument);
}

TEST_CASE("pauli exponential matches dense oracle") {
    RandomSource rng(42);
    const char ops[] = {'X', 'Y', 'Z'};
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(3)); // up to 4 qubits
        PauliString p;
        int weight = 1 + static_cast<int>(rng.next_below(n));
        for (int q = 0; q < weight; ++q) p.mul(ops[rng.next_below(3)], q);
        if (rng.bernoulli(0.3)) p.sign = -1;
        double theta = 4 * rng.next_double() - 2;

        StateVector s = random_state(n, 1000 + trial);
        Eigen::VectorXcd v(s.dim());
        for (uint64_t k = 0; k < s.dim(); ++k) v(k) = s.amplitudes()[k];

        apply_pauli_exp(s, p, theta);
        Eigen::VectorXcd expect = dense_exp_i_theta(dense_pauli(p, n), theta) * v;
        double diff = 0;
        for (uint64_t k = 0; k < s.dim(); ++k) diff += std::abs(s.amplitudes()[k] - expect(k));
        CHECK(diff < 1e-12);
    }
}

TEST_CASE("pauli exponential properties") {
    RandomSource rng(7);
    // Inverse pair and norm preservation.
    for (int trial = 0; trial < 10; ++trial) {
        StateVector s = random_state(5, 300 + trial);
        StateVector orig = s;
        PauliString p;
        p.mul('X', 0).mul('Z', 2).mul('Y', 4);
        double theta = 3 * rng.next_double();
        apply_pauli_exp(s, p, theta);
        CHECK(std::abs(s.norm() - 1.0) < 1e-10);
        apply_pauli_exp(s, p, -theta);
        CHECK(std::abs(overlap(orig, s) - cplx{1, 0}) < 1e-10);
    }

    // Commuting strings: exponentials commute.
    PauliString zz, xx;
    zz.mul('Z', 0).mul('Z', 1);
    xx.mul('X', 0).mul('X', 1);
    StateVector a = random_state(3, 99), b = a;
    apply_pauli_exp(a, zz, 0.4);
    apply_pauli_exp(a, xx, 0.9);
    apply_pauli_exp(b, xx, 0.9);
    apply_pauli_exp(b, zz, 0.4);
    CHECK(std::abs(overlap(a, b) - cplx{1, 0}) < 1e-10);
}

TEST_CASE("norm preserved over long random gate sequences") {
    RandomSource rng(17);
    StateVector s = random_state(6, 55);
    for (int i = 0; i < 1000; ++i) {
        int q = static_cast<int>(rng.next_below(6));
        switch (rng.next_below(5)) {
        case 0: apply_gate(s, Gate::ry(q, rng.next_double() * 6 - 3)); break;
        case 1: apply_gate(s, Gate::rz(q, rng.next_double() * 6 - 3)); break;
        case 2: apply_gate(s, Gate::h(q)); break;
        case 3: apply_gate(s, Gate::cz(q, (q + 1) % 6)); break;
        default: apply_gate(s, Gate::cnot(q, (q + 1) % 6)); break;
        }
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
}

TEST_CASE("expectation") {
    StateVector zero(1);
    CHECK(expectation(zero, PauliString::single('Z', 0)) == doctest::Approx(1.0));
    CHECK(expectation(zero, PauliString::single('X', 0)) == doctest::Approx(0.0));

    // |result| <= 1 on random states.
    for (int t = 0; t < 5; ++t) {
        StateVector s = random_state(4, 600 + t);
        PauliString p;
        p.mul('Y', 1).mul('Z', 3);
        CHECK(std::abs(expectation(s, p)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("overlap") {
    StateVector a(1), b(1);
    CHECK(std::abs(overlap(a, b) - cplx{1, 0}) < 1e-15);
    apply_gate(b, Gate::x(0));
    CHECK(std::abs(overlap(a, b)) < 1e-15);
    StateVector plus(1);
    apply_gate(plus, Gate::h(0));
    CHECK(std::abs(overlap(a, plus) - cplx{1 / std::sqrt(2.0), 0}) < 1e-14);
    StateVector c(2);
    CHECK_THROWS_AS(overlap(a, c), std::invalid_argument);
}

TEST_CASE("sampling") {
    // |1> samples all ones.
    StateVector one(1);
    apply_gate(one, Gate::x(0));
    ShotTable t1 = sample(one, 50, 3);
    for (const auto& row : t1.rows) CHECK(row.bits == 1);

    // |+> ones fraction within 3 sigma of 1/2.
    StateVector plus(1);
    apply_gate(plus, Gate::h(0));
    const int n = 100000;
    ShotTable tp = sample(plus, n, 4);
    int ones = 0;
    for (const auto& row : tp.rows) ones += static_cast<int>(row.bits & 1);
    double sigma = std::sqrt(0.25 * n);
    CHECK(std::abs(ones - n / 2.0) < 3 * sigma);

    // Fixed seed reproduces bit-for-bit.
    ShotTable ta = sample(plus, 1000, 77), tb = sample(plus, 1000, 77);
    REQUIRE(ta.rows.size() == tb.rows.size());
    for (size_t i = 0; i < ta.rows.size(); ++i) CHECK(ta.rows[i].bits == tb.rows[i].bits);

    CHECK_THROWS_AS(sample(plus, 0, 1), std::invalid_argument);
}

TEST_CASE("projection") {
    StateVector zero(1);
    CHECK(project(zero, 0, 0) == doctest::Approx(1.0));

    StateVector plus(1);
    apply_gate(plus, Gate::h(0));
    double p = project(plus, 0, 1);
    CHECK(p == doctest::Approx(0.5));
    CHECK(std::abs(plus.amplitudes()[1] - cplx{1, 0}) < 1e-14);

    StateVector z2(1);
    CHECK_THROWS_AS(project(z2, 0, 1), std::runtime_error);
}

TEST_CASE("circuit layering and accounting") {
    Circuit c(3);
    c.append(Gate::h(0));
    c.append(Gate::h(1)); // packs into the same layer
    c.append(Gate::cnot(0, 2));
    c.append(Gate::cz(1, 2));
    CHECK(c.layers().size() == 3);
    CHECK(c.entangling_count() == 2);
    for (const auto& layer : c.layers()) {
        uint64_t seen = 0;
        for (const Gate& g : layer)
            for (int i = 0; i < g.nq; ++i) {
                CHECK((seen & (uint64_t{1} << g.q[i])) == 0);
                seen |= uint64_t{1} << g.q[i];
            }
    }

    // Inverse circuit undoes the original on a random state.
    StateVector s = random_state(3, 12), orig = s;
    execute(s, c);
    execute(s, c.inverse());
    CHECK(std::abs(overlap(orig, s) - cplx{1, 0}) < 1e-12);

    auto j = c.to_json();
    CHECK(j["entangling_count"] == 2);
    CHECK(j["gates"].size() == 4);
}
