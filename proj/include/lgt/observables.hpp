#pragma once

#include <optional>
#include <vector>

#include "lgt/compilers.hpp"
#include "lgt/lattice.hpp"
#include "lgt/reference.hpp"
#include "lgt/shot_table.hpp"

namespace lgt {

// Vertex parities of one measured bitstring. Parity includes any pinned link
// attached to the vertex; `reference_signs` (when given) re-defines which
// eigenvalue counts as excited, vertex by vertex (used by quench frames).
struct ChargeRecord {
    std::vector<int8_t> parity;    // +1 / -1 per grid vertex
    std::vector<VertexId> violated;
    int sector = 0;                // number of violated vertices
};

ChargeRecord vertex_parities(uint64_t bits, const Lattice& lattice,
                             const std::vector<int8_t>* reference_signs = nullptr);

struct ValueWithError {
    double value = 0;
    double stderr_ = 0;
    size_t n = 0;
};

// Mean Manhattan distance between the two violated vertices; rows must be
// post-selected to the exactly-2 sector.
ValueWithError mean_separation(const ShotTable& shots, const Lattice& lattice);

// Empirical <A_v> per grid vertex.
std::vector<ValueWithError> excitation_heatmap(const ShotTable& shots, const Lattice& lattice);

// Empirical <Z_l> per link.
std::vector<ValueWithError> z_field_map(const ShotTable& shots, const Lattice& lattice);

struct ConditionalMap {
    std::vector<double> p_partner; // P(v excited | reference excited), per vertex
    double p_reference = 0;        // unconditioned P(reference excited)
    size_t n_reference = 0;        // shots with the reference excited
    bool defined = false;          // false when the reference is never excited
};

// Partner-location distribution among sector-2 shots with the reference
// vertex excited.
ConditionalMap conditional_map(const ShotTable& shots, const Lattice& lattice, VertexId reference);

// Exact (state-based) counterparts for noiseless runs.

// Distribution over charge sectors read directly from the amplitudes;
// separation conditioned on the exactly-2 sector.
struct SectorSeparation {
    double mean = 0;
    double sector_probability = 0;
};
SectorSeparation mean_separation_exact(const StateVector& state, const Lattice& lattice,
                                       const std::vector<int8_t>* reference_signs = nullptr);

std::vector<double> excitation_heatmap_exact(const StateVector& state, const Lattice& lattice);
std::vector<double> z_field_map_exact(const StateVector& state, const Lattice& lattice);
ConditionalMap conditional_map_exact(const StateVector& state, const Lattice& lattice,
                                     VertexId reference);

// Distance of the single violated vertex from `origin`, conditioned on the
// exactly-1 sector (quench-frame observable).
SectorSeparation single_excitation_distance_exact(const StateVector& state,
                                                  const Lattice& lattice, VertexId origin,
                                                  const std::vector<int8_t>& reference_signs);

struct Correlator {
    double re = 0;
    double im = 0;
};

// <psi| U(t)^dag B U(t) A |psi> evaluated by state arithmetic, for every time
// on the Trotter grid 0..n_steps. A and B are Pauli strings on the system.
std::vector<Correlator> two_time_oracle(const StateVector& psi0, const Circuit& step,
                                        int n_steps, const PauliString& a_op,
                                        const PauliString& b_op);

// Same series through the single-controlled-operation Hadamard test: ancilla
// prepared in |eta>, controlled-A at time zero, estimator <B x X_a> after each
// step. Two ancilla settings give the real and (minus) imaginary parts.
std::vector<Correlator> two_time_hadamard(const StateVector& psi0_with_ancilla,
                                          const Circuit& step, int n_steps,
                                          const PauliString& a_op, const PauliString& b_op,
                                          int ancilla);

// <Z(0)> extracted from the ancilla of the same Hadamard-test run.
double hadamard_z0(const StateVector& psi0_with_ancilla, const PauliString& a_op, int ancilla);

// S_ZZ(t) = Re<Z(t)Z(0)> x <Z(0)> with propagated standard errors.
struct SeriesPoint {
    double t = 0;
    double value = 0;
    double stderr_ = 0;
};
std::vector<SeriesPoint> s_zz(const std::vector<SeriesPoint>& re_series, ValueWithError z0);

} // namespace lgt
