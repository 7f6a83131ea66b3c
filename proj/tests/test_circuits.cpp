#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lgt/compilers.hpp"
#include "lgt/random.hpp"
#include "lgt/wala.hpp"

using namespace lgt;

namespace {

PauliString vertex_op(const Lattice& l, VertexId v) {
    const auto& s = l.vertex_support(v);
    return PauliString::z_product(std::span<const int>(s.data(), s.size()));
}

PauliString plaquette_op(const Lattice& l, PlaquetteId p) {
    const auto& s = l.plaquette_support(p);
    return PauliString::x_product(std::span<const int>(s.data(), s.size()));
}

StateVector wala_state(const Lattice& l, double theta) {
    StateVector s(l.n_links());
    execute(s, build_wala(l, theta, WalaMode::AncillaFree));
    return s;
}

// Random product state on the first n_active qubits; the rest stay |0>.
StateVector random_product_state(int n, int n_active, uint64_t seed) {
    StateVector s(n);
    RandomSource rng(seed);
    for (int q = 0; q < n_active; ++q) {
        apply_gate(s, Gate::ry(q, rng.next_double() * 3));
        apply_gate(s, Gate::rz(q, rng.next_double() * 3));
    }
    return s;
}

} // namespace

TEST_CASE("wala at pi/2 prepares the toric-code ground state") {
    for (auto spec : {LatticeSpec{2, 2}, LatticeSpec{3, 4}}) {
        Lattice l(spec);
        StateVector s = wala_state(l, M_PI / 2);
        for (VertexId v = 0; v < l.n_vertices(); ++v)
            CHECK(expectation(s, vertex_op(l, v)) == doctest::Approx(1.0).epsilon(1e-12));
        for (PlaquetteId p = 0; p < l.n_plaquettes(); ++p)
            CHECK(expectation(s, plaquette_op(l, p)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("wala at theta 0 is the identity") {
    Lattice l({2, 3});
    StateVector s = wala_state(l, 0.0);
    CHECK(std::abs(s.amplitudes()[0] - cplx{1, 0}) < 1e-12);
}

TEST_CASE("wala rejects theta outside range") {
    Lattice l({2, 2});
    CHECK_THROWS_AS(build_wala(l, -0.1, WalaMode::AncillaFree), std::invalid_argument);
    CHECK_THROWS_AS(build_wala(l, 3.5, WalaMode::AncillaFree), std::invalid_argument);
}

TEST_CASE("wala modes agree on the link register") {
    Lattice l({2, 3});
    const double theta = 0.7;
    const int n_anc = wala_ancilla_count(l, WalaMode::Ancilla);

    StateVector with_anc(l.n_links() + n_anc);
    execute(with_anc, build_wala(l, theta, WalaMode::Ancilla));

    StateVector free_padded(l.n_links() + n_anc);
    execute(free_padded, build_wala(l, theta, WalaMode::AncillaFree, n_anc));

    CHECK(std::abs(std::abs(overlap(with_anc, free_padded)) - 1.0) < 1e-10);

    // Every plaquette ancilla is restored to |0>.
    Circuit c = build_wala(l, theta, WalaMode::Ancilla);
    CHECK(all_zero_probability(with_anc, c.ancillas()) >= 1.0 - 1e-12);
}

TEST_CASE("wala expectations match the analytic record") {
    for (double theta : {0.2, 0.9, M_PI / 2}) {
        Lattice l({2, 3});
        StateVector s = wala_state(l, theta);
        AnalyticExpectations ex = analytic_expectations(theta);
        for (VertexId v = 0; v < l.n_vertices(); ++v)
            CHECK(std::abs(expectation(s, vertex_op(l, v)) - ex.a_v) < 1e-10);
        for (PlaquetteId p = 0; p < l.n_plaquettes(); ++p)
            CHECK(std::abs(expectation(s, plaquette_op(l, p)) - ex.b_p) < 1e-10);
        for (const LinkInfo& li : l.links()) {
            double want = l.is_boundary_link(li.id) ? ex.z_boundary : ex.z_bulk;
            CHECK(std::abs(expectation(s, PauliString::single('Z', li.id)) - want) < 1e-10);
            CHECK(std::abs(expectation(s, PauliString::single('X', li.id)) - ex.x_link) < 1e-10);
        }
    }
}

TEST_CASE("trotter gate accounting matches the closed form") {
    for (int lx = 2; lx <= 5; ++lx) {
        for (int ly = 2; ly <= 5; ++ly) {
            Lattice l({lx, ly});
            TrotterSpec spec;
            spec.params = {1.0, 1.0, 0.6, 0.25, {}};
            spec.dt = 0.3;
            spec.mode = TrotterMode::GateLevel;
            Circuit c = build_trotter_step(l, spec);
            CHECK(c.entangling_count() == entangling_count_per_cycle(lx, ly));
        }
    }
    Lattice l34({3, 4});
    TrotterSpec spec;
    spec.params = {1.0, 1.0, 2.0, 0.25, {}};
    spec.mode = TrotterMode::GateLevel;
    spec.dt = 0.3;
    CHECK(build_trotter_step(l34, spec).entangling_count() == 116);
}

TEST_CASE("toric-code state is stationary under the lambda = h = 0 step") {
    Lattice l({2, 3});
    StateVector s = wala_state(l, M_PI / 2);
    TrotterSpec spec;
    spec.params = {1.0, 1.0, 0.0, 0.0, {}};
    spec.dt = 0.37;
    spec.mode = TrotterMode::Direct;
    StateVector evolved = s;
    execute(evolved, build_trotter_step(l, spec));
    CHECK(std::abs(std::abs(overlap(s, evolved)) - 1.0) < 1e-12);
}

TEST_CASE("gate-level and direct steps agree") {
    Lattice l({2, 3});
    RandomSource rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        TrotterSpec spec;
        spec.params = {1.0, 1.0, 2 * rng.next_double(), rng.next_double(), {}};
        spec.dt = 0.05 + 0.5 * rng.next_double();
        spec.mode = TrotterMode::Direct;
        // Pad the direct circuit so registers line up with the ancilla mode.
        Circuit direct = build_trotter_step(l, spec, 1);
        spec.mode = TrotterMode::GateLevel;
        Circuit gate = build_trotter_step(l, spec);

        // Random product input on the links; the recycled ancilla needs |0>.
        StateVector in = random_product_state(l.n_links() + 1, l.n_links(), 400 + trial);
        StateVector a = in, b = in;
        execute(a, direct);
        execute(b, gate);
        CHECK(std::abs(std::abs(overlap(a, b)) - 1.0) < 1e-10);
    }
}

TEST_CASE("gate-level step restores its ancilla") {
    Lattice l({2, 3});
    TrotterSpec spec;
    spec.params = {1.0, 1.0, 0.8, 0.25, {}};
    spec.dt = 0.3;
    spec.mode = TrotterMode::GateLevel;
    Circuit c = build_trotter_step(l, spec);
    StateVector s(c.n_qubits());
    execute(s, build_wala(l, 1.1, WalaMode::AncillaFree, 1));
    execute(s, c);
    CHECK(all_zero_probability(s, c.ancillas()) >= 1.0 - 1e-12);
}

TEST_CASE("field mask applies to pinned links only") {
    Lattice pinned({3, 3, {{Side::Left, 1, 0}}});
    TrotterSpec spec;
    spec.params = {1.0, 1.0, 0.5, 0.25, {}};
    spec.dt = 0.3;
    spec.field_mask = {pinned.pinned_link(0)};
    CHECK_NOTHROW(build_trotter_step(pinned, spec));
    spec.field_mask = {pinned.horizontal_link(0, 0)};
    CHECK_THROWS_AS(build_trotter_step(pinned, spec), std::invalid_argument);
    spec.field_mask.clear();
    spec.dt = -0.1;
    CHECK_THROWS_AS(build_trotter_step(pinned, spec), std::invalid_argument);
}

TEST_CASE("superposition prep") {
    Lattice l({3, 4});
    // Interleaved vertical pairs along the middle column.
    PathSpec s1{{l.vertical_link(0, 1), l.vertical_link(1, 1)}};
    PathSpec s2{{l.vertical_link(1, 1), l.vertical_link(2, 1)}};
    StateVector psi0 = wala_state(l, 1.0);

    SUBCASE("degenerate paths") {
        SuperpositionSpec same{s1, s1, '+'};
        StateVector direct = prepare_superposition_direct(l, psi0, same);
        StateVector expect = psi0;
        for (LinkId x : s1.links) apply_pauli(expect, PauliString::single('X', x));
        CHECK(std::abs(std::abs(overlap(direct, expect)) - 1.0) < 1e-12);

        SuperpositionSpec minus{s1, s1, '-'};
        CHECK_THROWS_AS(prepare_superposition_direct(l, psi0, minus), std::invalid_argument);
    }

    SUBCASE("four touched vertices with vanishing parity") {
        SuperpositionSpec spec{s1, s2, '+'};
        auto touched = validate_superposition_paths(l, spec);
        REQUIRE(touched.size() == 4);
        StateVector plus = prepare_superposition_direct(l, psi0, spec);
        for (VertexId v : touched)
            CHECK(std::abs(expectation(plus, vertex_op(l, v))) < 1e-10);
    }

    SUBCASE("circuit with projection equals direct construction") {
        for (char branch : {'+', '-'}) {
            SuperpositionSpec spec{s1, s2, branch};
            StateVector direct = prepare_superposition_direct(l, psi0, spec);

            const int anc = l.n_links();
            StateVector joint(l.n_links() + 1);
            execute(joint, build_wala(l, 1.0, WalaMode::AncillaFree, 1));
            auto sc = build_superposition_circuit(l, spec, l.n_links() + 1, anc);
            execute(joint, sc.circuit);
            double prob = project(joint, anc, sc.select_outcome);
            CHECK(prob == doctest::Approx(0.5).epsilon(1e-10));
            if (sc.select_outcome == 1) apply_gate(joint, Gate::x(anc)); // reset ancilla

            StateVector direct_padded(l.n_links() + 1);
            for (uint64_t k = 0; k < direct.dim(); ++k)
                direct_padded.amplitudes()[k] = direct.amplitudes()[k];
            CHECK(std::abs(std::abs(overlap(direct_padded, joint)) - 1.0) < 1e-10);
        }
    }

    SUBCASE("rejects strings with wrong endpoints") {
        PathSpec bad{{l.vertical_link(0, 1)}}; // endpoints at distance 1
        SuperpositionSpec spec{bad, s2, '+'};
        CHECK_THROWS_AS(validate_superposition_paths(l, spec), std::invalid_argument);
    }
}

TEST_CASE("hadamard test estimator follows the sign convention") {
    // Small system: 2 system qubits + 1 ancilla; A = Z_0, B = Z_0 after a
    // scrambling unitary. The estimator must equal
    // sin(vt) cos(phi) Re<B(t)A> - sin(vt) sin(phi) Im<B(t)A>.
    const int n = 3, anc = 2;
    Circuit u(n);
    u.append(Gate::ry(0, 0.83));
    u.append(Gate::cnot(0, 1));
    u.append(Gate::rz(1, -0.41));
    u.append(Gate::ry(1, 1.21));
    u.append(Gate::cz(0, 1));

    StateVector prep(n);
    apply_gate(prep, Gate::ry(0, 0.9));
    apply_gate(prep, Gate::cnot(0, 1));
    apply_gate(prep, Gate::ry(1, 0.4));

    // Direct computation of c = <psi| U^dag B U A |psi> on the system alone.
    PauliString a_op = PauliString::single('Z', 0);
    PauliString b_op = PauliString::single('Z', 0);
    StateVector phi_a = prep;
    apply_pauli(phi_a, a_op);
    execute(phi_a, u);
    apply_pauli(phi_a, b_op);
    StateVector phi_b = prep;
    execute(phi_b, u);
    cplx c = overlap(phi_b, phi_a);

    for (auto [vt, phi] : std::vector<std::pair<double, double>>{
             {M_PI / 2, 0.0}, {M_PI / 2, M_PI / 2}, {0.0, 0.0}, {0.7, 1.3}}) {
        HadamardTest ht = build_hadamard_test(a_op, vt, phi, n, anc);
        StateVector joint = prep;
        execute(joint, ht.fragment);
        execute(joint, u);
        double est = expectation(joint, ht.measured_operator(b_op));
        double want = std::sin(vt) * std::cos(phi) * c.real() -
                      std::sin(vt) * std::sin(phi) * c.imag();
        CHECK(est == doctest::Approx(want).epsilon(1e-10));
    }

    CHECK_THROWS_AS(build_hadamard_test(PauliString::single('Y', 0), 1.0, 0.0, n, anc),
                    std::invalid_argument);
    PauliString two;
    two.mul('Z', 0).mul('Z', 1);
    CHECK_THROWS_AS(build_hadamard_test(two, 1.0, 0.0, n, anc), std::invalid_argument);
}
