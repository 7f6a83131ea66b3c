#include "lgt/noise.hpp"

#include <stdexcept>

namespace lgt {

ReadoutModel ReadoutModel::uniform(int n_qubits, double eps0, double eps1) {
    ReadoutModel m;
    m.per_qubit.assign(n_qubits, ReadoutError{eps0, eps1});
    m.validate();
    return m;
}

void ReadoutModel::validate() const {
    for (const ReadoutError& e : per_qubit)
        if (e.eps0 < 0 || e.eps0 >= 0.5 || e.eps1 < 0 || e.eps1 >= 0.5)
            throw std::invalid_argument("readout error rates must lie in [0, 0.5)");
}

void NoiseModel::validate() const {
    if (p2 < 0 || p2 >= 1) throw std::invalid_argument("p2 must lie in [0, 1)");
    readout.validate();
}

uint64_t apply_readout_noise(uint64_t bits, int n_qubits, const ReadoutModel& model,
                             RandomSource& rng) {
    if (!model.enabled()) return bits;
    if (static_cast<int>(model.per_qubit.size()) != n_qubits)
        throw std::invalid_argument("readout model size does not match qubit count");
    for (int q = 0; q < n_qubits; ++q) {
        const ReadoutError& e = model.per_qubit[q];
        double p = (bits >> q & 1) ? e.eps1 : e.eps0;
        if (rng.bernoulli(p)) bits ^= uint64_t{1} << q;
    }
    return bits;
}

void execute_noisy(StateVector& state, const Circuit& circuit, double p2, RandomSource& rng) {
    static const char kPauli[3] = {'X', 'Y', 'Z'};
    for (const auto& layer : circuit.layers()) {
        for (const Gate& g : layer) {
            apply_gate(state, g);
            if (!g.is_entangling() || p2 <= 0) continue;
            if (!rng.bernoulli(p2)) continue;
            // One of the 15 non-identity two-qubit Paulis, uniformly.
            uint64_t pick = 1 + rng.next_below(15);
            int pa = static_cast<int>(pick / 4), pb = static_cast<int>(pick % 4);
            PauliString err;
            if (pa > 0) err.mul(kPauli[pa - 1], g.q[0]);
            if (pb > 0) err.mul(kPauli[pb - 1], g.q[1]);
            apply_pauli(state, err);
        }
    }
}

ShotTable run_trajectories(const Circuit& circuit, const StateVector& initial,
                           const NoiseModel& model, int n_traj, int shots_per_traj) {
    if (n_traj < 1 || shots_per_traj < 1)
        throw std::invalid_argument("need at least one trajectory and one shot");
    model.validate();

    ShotTable table;
    table.n_qubits = circuit.n_qubits();
    table.ancilla_qubits = circuit.ancillas();
    table.master_seed = model.master_seed;
    table.rows.reserve(static_cast<size_t>(n_traj) * shots_per_traj);

    for (int traj = 0; traj < n_traj; ++traj) {
        RandomSource rng(derive_seed(model.master_seed, traj));
        StateVector state = initial;
        execute_noisy(state, circuit, model.p2, rng);
        ShotTable shots = sample(state, shots_per_traj, derive_seed(model.master_seed, traj, 1));
        for (ShotTable::Row& row : shots.rows) {
            row.bits = apply_readout_noise(row.bits, table.n_qubits, model.readout, rng);
            row.trajectory = traj;
            table.rows.push_back(row);
        }
    }
    return table;
}

} // namespace lgt
