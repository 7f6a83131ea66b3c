#pragma once

#include <map>
#include <optional>

#include "lgt/circuit.hpp"
#include "lgt/lattice.hpp"

namespace lgt {

struct HamiltonianParams {
    double j_e = 1.0;
    double j_m = 1.0;
    double h_e = 0.0;
    double lam = 0.0;
    std::map<VertexId, int> vertex_sign_overrides; // default +1

    int vertex_sign(VertexId v) const {
        auto it = vertex_sign_overrides.find(v);
        return it == vertex_sign_overrides.end() ? +1 : it->second;
    }
};

enum class WalaMode { Ancilla, AncillaFree };

// Qubit layout used by every compiled circuit: link qubits first (qubit id ==
// LinkId), ancillas after. Helpers so callers agree on the indices.
struct QubitLayout {
    int n_links = 0;
    int n_ancillas = 0;
    int total() const { return n_links + n_ancillas; }
};

// One-parameter loop-gas preparation circuit. Plaquette elements are ordered
// bottom row first, right to left, so each Ry acts on a fresh |0> qubit; in
// ancilla mode each plaquette uses its own ancilla and ends with it back in
// |0>. `extra_qubits` widens the register (ancillas appended by the caller).
Circuit build_wala(const Lattice& lattice, double theta, WalaMode mode, int extra_qubits = 0);

// Number of ancilla qubits build_wala adds beyond the link register.
int wala_ancilla_count(const Lattice& lattice, WalaMode mode);

enum class TrotterMode { Direct, GateLevel };

struct TrotterSpec {
    HamiltonianParams params;
    double dt = 0.1;
    int n_steps = 1;
    TrotterMode mode = TrotterMode::Direct;
    std::vector<LinkId> field_mask; // links excluded from the field unitary
};

// One first-order step: the field unitary on every unmasked link, then the
// vertex and plaquette exponentials. Gate-level mode accumulates stabilizer
// parity on a single recycled ancilla (CNOT ladder in, Rz, ladder out, with a
// Hadamard basis change around plaquette ladders); the ancilla ends in |0>.
// `extra_qubits` counts registers beyond links + trotter ancilla.
Circuit build_trotter_step(const Lattice& lattice, const TrotterSpec& spec, int extra_qubits = 0);

int trotter_ancilla_count(TrotterMode mode);

struct SuperpositionSpec {
    PathSpec s1;
    PathSpec s2;
    char branch = '+'; // '+' or '-'
};

// Validates that each string creates exactly two vertex violations at
// Manhattan distance 2 and returns all touched vertices (per-path endpoints).
std::vector<VertexId> validate_superposition_paths(const Lattice& lattice,
                                                   const SuperpositionSpec& spec);

// Direct construction of (X_s1 +/- X_s2)|psi0>, normalized.
StateVector prepare_superposition_direct(const Lattice& lattice, const StateVector& wala_state,
                                         const SuperpositionSpec& spec);

struct SuperpositionCircuit {
    Circuit circuit;    // X_s1 gates; H(anc); CNOT(anc -> s1 xor s2); H(anc)
    int ancilla = -1;   // measure in Z; outcome selects the branch
    int select_outcome; // 0 -> '+', 1 -> '-'
};

SuperpositionCircuit build_superposition_circuit(const Lattice& lattice,
                                                 const SuperpositionSpec& spec, int n_qubits,
                                                 int ancilla);

// Ancilla preparation |eta(vartheta, phi)> plus the controlled-A at time 0.
// The downstream estimator is <B x X_a> measured after evolution:
//   sin(vartheta) cos(phi) Re<B(t)A(0)> - sin(vartheta) sin(phi) Im<B(t)A(0)>.
struct HadamardTest {
    Circuit fragment;
    int ancilla;
    double vartheta;
    double phi;

    // B extended by X on the ancilla; expectation of this is the estimator.
    PauliString measured_operator(const PauliString& b) const;
};

HadamardTest build_hadamard_test(const PauliString& a_op, double vartheta, double phi,
                                 int n_qubits, int ancilla);

} // namespace lgt
