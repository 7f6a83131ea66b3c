#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lgt/circuit.hpp"
#include "lgt/random.hpp"
#include "lgt/shot_table.hpp"

namespace lgt {

struct ReadoutError {
    double eps0 = 0.0; // P(read 1 | prepared 0)
    double eps1 = 0.0; // P(read 0 | prepared 1)
};

struct ReadoutModel {
    std::vector<ReadoutError> per_qubit; // empty = ideal readout

    static ReadoutModel uniform(int n_qubits, double eps0, double eps1);
    bool enabled() const { return !per_qubit.empty(); }
    void validate() const; // 0 <= eps < 0.5 so confusion matrices invert
};

// Pauli-trajectory model of the post-twirling channel: after every entangling
// gate, with probability p2 one of the 15 non-identity two-qubit Paulis is
// inserted uniformly; readout flips each measured bit independently.
struct NoiseModel {
    double p2 = 0.007;
    ReadoutModel readout;
    uint64_t master_seed = 0;

    void validate() const;
};

uint64_t apply_readout_noise(uint64_t bits, int n_qubits, const ReadoutModel& model,
                             RandomSource& rng);

// Executes the circuit with trajectory noise drawn from rng.
void execute_noisy(StateVector& state, const Circuit& circuit, double p2, RandomSource& rng);

// Independent trajectories, each sampled shots_per_traj times; rows carry the
// trajectory index and per-trajectory RNG streams derive from master_seed, so
// the table is reproducible bit-for-bit regardless of scheduling.
ShotTable run_trajectories(const Circuit& circuit, const StateVector& initial,
                           const NoiseModel& model, int n_traj, int shots_per_traj);

} // namespace lgt
