#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "lgt/pauli.hpp"
#include "lgt/shot_table.hpp"

namespace lgt {

using cplx = std::complex<double>;

// Dense amplitude vector over n qubits, qubit 0 = least-significant bit.
class StateVector {
  public:
    static constexpr int kDefaultCap = 26;

    explicit StateVector(int n_qubits, int cap = kDefaultCap);

    int n_qubits() const { return n_qubits_; }
    uint64_t dim() const { return uint64_t{1} << n_qubits_; }

    cplx* data() { return amps_.data(); }
    const cplx* data() const { return amps_.data(); }
    std::vector<cplx>& amplitudes() { return amps_; }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    double norm() const;
    void normalize();

    void set_zero_state(); // |0...0>

  private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

StateVector init_zero(int n_qubits, int cap = StateVector::kDefaultCap);

// Single-qubit unitary given by a row-major 2x2 matrix.
void apply_1q(StateVector& s, int qubit, const cplx m[4]);
void apply_cz(StateVector& s, int a, int b);
void apply_cnot(StateVector& s, int control, int target);

// In-place P|psi>.
void apply_pauli(StateVector& s, const PauliString& p);

// exp(i * theta * P) |psi> via the two-eigenvalue identity
// exp(i theta P) = cos(theta) I + i sin(theta) P.
void apply_pauli_exp(StateVector& s, const PauliString& p, double theta);

// <psi| P |psi>; real because P is Hermitian.
double expectation(const StateVector& s, const PauliString& p);

std::complex<double> overlap(const StateVector& a, const StateVector& b);

// i.i.d. Born-rule samples; deterministic for a fixed seed.
ShotTable sample(const StateVector& s, int n_shots, uint64_t seed);

// Probability of measuring all of `qubits` in |0>.
double all_zero_probability(const StateVector& s, std::span<const int> qubits);

// Projective measurement of one qubit onto `outcome`; returns the
// pre-measurement probability and renormalizes in place. Throws when the
// branch probability is below 1e-12.
double project(StateVector& s, int qubit, int outcome);

} // namespace lgt
