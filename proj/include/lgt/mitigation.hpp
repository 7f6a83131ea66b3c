#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lgt/lattice.hpp"
#include "lgt/noise.hpp"
#include "lgt/shot_table.hpp"

namespace lgt {

struct PostselectCriteria {
    bool ancilla_zero = false;
    std::optional<int> charge_count;
    // Per-vertex expected parity for the charge count; empty = all +1.
    std::vector<int8_t> reference_signs;
};

struct PostselectResult {
    ShotTable table;
    size_t kept = 0;
    size_t total = 0;
    double retention() const {
        return total == 0 ? 0.0 : static_cast<double>(kept) / static_cast<double>(total);
    }
};

// Row filter; never alters bits. An empty result is a reported condition, not
// an error. `lattice` is required when charge_count is set.
PostselectResult postselect(const ShotTable& shots, const PostselectCriteria& criteria,
                            const Lattice* lattice = nullptr);

// R^-1 p with R the tensor product of per-qubit confusion matrices. The
// probability vector is indexed with qubits[0] as the least-significant bit.
// Small negative quasi-probabilities are kept unless clip is set (clip
// clamps at zero and renormalizes, for display only).
std::vector<double> invert_readout(std::vector<double> probs, std::span<const int> qubits,
                                   const ReadoutModel& model, bool clip = false);

// Probability vector over the listed qubits, empirically from shots.
std::vector<double> probability_vector(const ShotTable& shots, std::span<const int> qubits);

// <P> of a Z-diagonal Pauli string on the listed qubits from a probability
// vector (parity of the masked bits).
double z_parity_expectation(std::span<const double> probs, uint64_t qubit_mask_in_vector);

struct PEff {
    double value = 0;
    bool in_range = true; // false when the raw estimator left [0, 1]
};

// (measured - initial) / (depolarized - initial); clamped to [0, 1] with the
// excursion flagged.
PEff effective_depol(double measured, double o_initial, double o_depolarized);

// (measured - p_eff * depolarized) / (1 - p_eff).
double rescale(double measured, double p_eff, double o_depolarized);

struct LoschmidtPEff {
    double value = 0;
    bool valid = true; // false when E_measured/E_exact > 1 (unphysical)
};

// p_eff = sqrt(1 - E_measured / E_exact) from the echoed-circuit energy.
LoschmidtPEff loschmidt_p_eff(double e_measured, double e_exact);

} // namespace lgt
