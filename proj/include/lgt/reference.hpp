#pragma once

#include <span>
#include <vector>

#include "lgt/compilers.hpp"
#include "lgt/lattice.hpp"
#include "lgt/state_vector.hpp"

namespace lgt {

// Hermitian operator as a list of weighted Pauli strings; matrix-free apply.
class SparseHamiltonian {
  public:
    SparseHamiltonian(int n_qubits, std::vector<std::pair<double, PauliString>> terms);

    int n_qubits() const { return n_qubits_; }
    const std::vector<std::pair<double, PauliString>>& terms() const { return terms_; }

    void apply(const StateVector& in, StateVector& out) const; // out = H in
    double expectation(const StateVector& s) const;

  private:
    int n_qubits_;
    std::vector<std::pair<double, PauliString>> terms_;
};

// -sum J_E sign_v A_v - sum J_M B_p - sum h_E Z_l - sum lam X_l over unmasked
// links. Pinned links contribute their own single-Z vertex term. Terms with a
// zero coefficient are dropped.
SparseHamiltonian build_hamiltonian(const Lattice& lattice, const HamiltonianParams& params,
                                    std::span<const LinkId> field_mask = {});

struct GroundState {
    double energy;
    StateVector state;
    int matvecs;
};

// Lowest eigenpair by restarted Lanczos with full reorthogonalization;
// converged when ||H psi - E psi|| <= tol. A random orthogonal restart guards
// against invariant-subspace breakdown.
GroundState ground_state(const SparseHamiltonian& h, double tol = 1e-8, uint64_t seed = 7,
                         int max_restarts = 40);

// exp(-i H t)|psi>. Dense eigendecomposition up to 10 qubits (cached per
// Hamiltonian by the caller via ExactPropagator), Lanczos-Krylov stepping
// above.
StateVector exact_evolve(const StateVector& state, const SparseHamiltonian& h, double t);

// Reusable propagator: factorizes once, then any number of times/states.
class ExactPropagator {
  public:
    explicit ExactPropagator(const SparseHamiltonian& h, int dense_qubit_limit = 10);
    StateVector evolve(const StateVector& state, double t) const;

  private:
    const SparseHamiltonian& h_;
    bool dense_;
    std::vector<double> eigenvalues_;
    std::vector<cplx> eigenvectors_; // column-major, dim x dim
};

struct WalaQuality {
    double rel_energy_error;
    double infidelity;
    double theta;
    double e_wala;
    double e_exact;
};

// Ansatz-vs-exact-diagonalization figures of merit on the link register.
WalaQuality wala_quality(const Lattice& lattice, const HamiltonianParams& params);

} // namespace lgt
