#include "lgt/compilers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace lgt {

namespace {

PauliString vertex_operator(const Lattice& lattice, VertexId v) {
    const auto& sup = lattice.vertex_support(v);
    return PauliString::z_product(std::span<const int>(sup.data(), sup.size()));
}

PauliString plaquette_operator(const Lattice& lattice, PlaquetteId p) {
    const auto& sup = lattice.plaquette_support(p);
    return PauliString::x_product(std::span<const int>(sup.data(), sup.size()));
}

// Parity ladder onto `ancilla`, Rz(angle), ladder back. For an X-type
// stabilizer the links are conjugated by Hadamards around the block.
void emit_stabilizer_block(Circuit& c, std::span<const LinkId> support, int ancilla,
                           double rz_angle, bool x_type) {
    if (x_type)
        for (LinkId l : support) c.append(Gate::h(l));
    for (LinkId l : support) c.append(Gate::cnot(l, ancilla));
    c.append(Gate::rz(ancilla, rz_angle));
    for (auto it = support.rbegin(); it != support.rend(); ++it)
        c.append(Gate::cnot(*it, ancilla));
    if (x_type)
        for (LinkId l : support) c.append(Gate::h(l));
}

std::vector<PlaquetteId> wala_plaquette_order(const Lattice& lattice) {
    // Bottom row first, right to left within a row. This guarantees the top
    // link of each plaquette is still untouched when its element runs, so the
    // Ry always acts on |0>.
    std::vector<PlaquetteId> order;
    for (int r = lattice.ly() - 2; r >= 0; --r)
        for (int c = lattice.lx() - 2; c >= 0; --c)
            order.push_back(r * (lattice.lx() - 1) + c);
    return order;
}

} // namespace

int wala_ancilla_count(const Lattice& lattice, WalaMode mode) {
    return mode == WalaMode::Ancilla ? lattice.n_plaquettes() : 0;
}

Circuit build_wala(const Lattice& lattice, double theta, WalaMode mode, int extra_qubits) {
    if (theta < 0 || theta > M_PI) throw std::invalid_argument("theta must be in [0, pi]");

    const int n_anc = wala_ancilla_count(lattice, mode);
    Circuit circuit(lattice.n_links() + n_anc + extra_qubits);
    for (int a = 0; a < n_anc; ++a) circuit.declare_ancilla(lattice.n_links() + a);

    const int lx = lattice.lx();
    for (PlaquetteId p : wala_plaquette_order(lattice)) {
        int r = p / (lx - 1), c = p % (lx - 1);
        LinkId top = lattice.horizontal_link(r, c);
        LinkId left = lattice.vertical_link(r, c);
        LinkId right = lattice.vertical_link(r, c + 1);
        LinkId bottom = lattice.horizontal_link(r + 1, c);
        if (mode == WalaMode::AncillaFree) {
            circuit.append(Gate::ry(top, theta));
            circuit.append(Gate::cnot(top, left));
            circuit.append(Gate::cnot(top, right));
            circuit.append(Gate::cnot(top, bottom));
        } else {
            int anc = lattice.n_links() + p;
            circuit.append(Gate::ry(anc, theta));
            circuit.append(Gate::cnot(anc, top));
            circuit.append(Gate::cnot(anc, left));
            circuit.append(Gate::cnot(anc, right));
            circuit.append(Gate::cnot(anc, bottom));
            // The top link now equals the ancilla in both branches.
            circuit.append(Gate::cnot(top, anc));
        }
    }
    return circuit;
}

int trotter_ancilla_count(TrotterMode mode) { return mode == TrotterMode::GateLevel ? 1 : 0; }

Circuit build_trotter_step(const Lattice& lattice, const TrotterSpec& spec, int extra_qubits) {
    if (spec.dt <= 0) throw std::invalid_argument("dt must be positive");
    for (LinkId l : spec.field_mask)
        if (!lattice.links().at(l).pinned)
            throw std::invalid_argument("field mask may only contain pinned links");
    for (const auto& [v, s] : spec.params.vertex_sign_overrides) {
        if (v < 0 || v >= lattice.n_vertices())
            throw std::invalid_argument("vertex sign override outside lattice");
        if (s != 1 && s != -1) throw std::invalid_argument("vertex sign must be +1 or -1");
    }

    const HamiltonianParams& hp = spec.params;
    const bool gate_level = spec.mode == TrotterMode::GateLevel;
    const int ancilla = lattice.n_links();
    Circuit circuit(lattice.n_links() + trotter_ancilla_count(spec.mode) + extra_qubits);
    if (gate_level) circuit.declare_ancilla(ancilla);

    std::set<LinkId> masked(spec.field_mask.begin(), spec.field_mask.end());

    // Field unitary first: exp(i dt (lam X + h_E Z)) on every unmasked link,
    // a rotation by -2 dt sqrt(lam^2 + h_E^2) about the axis (lam, 0, h_E).
    const double omega = std::sqrt(hp.lam * hp.lam + hp.h_e * hp.h_e);
    if (omega > 0) {
        for (const LinkInfo& l : lattice.links()) {
            if (masked.count(l.id)) continue;
            circuit.append(Gate::axis_angle(l.id, hp.lam / omega, 0.0, hp.h_e / omega,
                                            -2.0 * spec.dt * omega));
        }
    }

    // Vertex exponentials exp(i J_E sign_v dt A_v), then the external single-Z
    // vertices carried by pinned links, then plaquettes exp(i J_M dt B_p).
    for (VertexId v = 0; v < lattice.n_vertices(); ++v) {
        double angle = hp.j_e * hp.vertex_sign(v) * spec.dt;
        if (gate_level) {
            const auto& sup = lattice.vertex_support(v);
            emit_stabilizer_block(circuit, std::span<const LinkId>(sup.data(), sup.size()),
                                  ancilla, -2.0 * angle, /*x_type=*/false);
        } else {
            circuit.append(Gate::pauli_exp(vertex_operator(lattice, v), angle));
        }
    }
    for (int i = 0; i < lattice.n_pinned(); ++i) {
        LinkId pin = lattice.pinned_link(i);
        double angle = hp.j_e * spec.dt;
        if (gate_level)
            circuit.append(Gate::rz(pin, -2.0 * angle));
        else
            circuit.append(Gate::pauli_exp(PauliString::single('Z', pin), angle));
    }
    for (PlaquetteId p = 0; p < lattice.n_plaquettes(); ++p) {
        double angle = hp.j_m * spec.dt;
        if (gate_level) {
            const auto& sup = lattice.plaquette_support(p);
            emit_stabilizer_block(circuit, std::span<const LinkId>(sup.data(), sup.size()),
                                  ancilla, -2.0 * angle, /*x_type=*/true);
        } else {
            circuit.append(Gate::pauli_exp(plaquette_operator(lattice, p), angle));
        }
    }
    return circuit;
}

std::vector<VertexId> validate_superposition_paths(const Lattice& lattice,
                                                   const SuperpositionSpec& spec) {
    std::vector<VertexId> touched;
    for (const PathSpec* path : {&spec.s1, &spec.s2}) {
        auto ends = path_endpoints(lattice, *path);
        if (ends.size() != 2)
            throw std::invalid_argument("superposition string must violate exactly two vertices");
        if (lattice.manhattan_distance(ends[0], ends[1]) != 2)
            throw std::invalid_argument("superposition string endpoints must be at distance 2");
        touched.insert(touched.end(), ends.begin(), ends.end());
    }
    return touched;
}

StateVector prepare_superposition_direct(const Lattice& lattice, const StateVector& wala_state,
                                         const SuperpositionSpec& spec) {
    validate_superposition_paths(lattice, spec);
    if (spec.branch != '+' && spec.branch != '-')
        throw std::invalid_argument("branch must be '+' or '-'");

    StateVector a = wala_state;
    for (LinkId l : spec.s1.links) apply_pauli(a, PauliString::single('X', l));
    StateVector b = wala_state;
    for (LinkId l : spec.s2.links) apply_pauli(b, PauliString::single('X', l));

    const double sgn = spec.branch == '+' ? 1.0 : -1.0;
    for (uint64_t k = 0; k < a.dim(); ++k) a.data()[k] += sgn * b.data()[k];
    if (a.norm() < 1e-12) throw std::invalid_argument("requested superposition branch has zero norm");
    a.normalize();
    return a;
}

SuperpositionCircuit build_superposition_circuit(const Lattice& lattice,
                                                 const SuperpositionSpec& spec, int n_qubits,
                                                 int ancilla) {
    validate_superposition_paths(lattice, spec);
    if (spec.branch != '+' && spec.branch != '-')
        throw std::invalid_argument("branch must be '+' or '-'");

    SuperpositionCircuit out{Circuit(n_qubits), ancilla, spec.branch == '+' ? 0 : 1};
    out.circuit.declare_ancilla(ancilla);
    for (LinkId l : spec.s1.links) out.circuit.append(Gate::x(l));
    out.circuit.append(Gate::h(ancilla));
    // Controlled X_{s1 xor s2}: shared links cancel since X^2 = I.
    std::set<LinkId> diff;
    for (LinkId l : spec.s1.links) diff.insert(l);
    for (LinkId l : spec.s2.links) {
        if (diff.count(l))
            diff.erase(l);
        else
            diff.insert(l);
    }
    for (LinkId l : diff) out.circuit.append(Gate::cnot(ancilla, l));
    out.circuit.append(Gate::h(ancilla));
    return out;
}

PauliString HadamardTest::measured_operator(const PauliString& b) const {
    PauliString m = b;
    m.mul('X', ancilla);
    return m;
}

HadamardTest build_hadamard_test(const PauliString& a_op, double vartheta, double phi,
                                 int n_qubits, int ancilla) {
    if (a_op.weight() != 1 || (a_op.x_mask & a_op.z_mask) != 0 || a_op.sign != +1)
        throw std::invalid_argument("controlled operator must be a single-qubit X or Z");
    const int target = a_op.max_qubit();
    if (target == ancilla) throw std::invalid_argument("ancilla cannot be the target");

    HadamardTest ht{Circuit(n_qubits), ancilla, vartheta, phi};
    ht.fragment.declare_ancilla(ancilla);
    ht.fragment.append(Gate::ry(ancilla, vartheta));
    if (phi != 0) ht.fragment.append(Gate::rz(ancilla, phi));
    if (a_op.x_mask)
        ht.fragment.append(Gate::cnot(ancilla, target));
    else
        ht.fragment.append(Gate::cz(ancilla, target));
    return ht;
}

} // namespace lgt
