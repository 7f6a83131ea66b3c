#include "lgt/mitigation.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "lgt/observables.hpp"

namespace lgt {

PostselectResult postselect(const ShotTable& shots, const PostselectCriteria& criteria,
                            const Lattice* lattice) {
    if (criteria.charge_count && !lattice)
        throw std::invalid_argument("charge-count post-selection needs the lattice");
    if (!criteria.reference_signs.empty() && lattice &&
        static_cast<int>(criteria.reference_signs.size()) != lattice->n_vertices())
        throw std::invalid_argument("reference sign vector does not match lattice");

    uint64_t ancilla_mask = 0;
    for (int q : shots.ancilla_qubits) ancilla_mask |= uint64_t{1} << q;
    if (criteria.ancilla_zero && shots.ancilla_qubits.empty())
        throw std::invalid_argument("ancilla post-selection on a table without ancilla columns");

    PostselectResult out;
    out.table.n_qubits = shots.n_qubits;
    out.table.ancilla_qubits = shots.ancilla_qubits;
    out.table.master_seed = shots.master_seed;
    out.total = shots.rows.size();

    const std::vector<int8_t>* ref =
        criteria.reference_signs.empty() ? nullptr : &criteria.reference_signs;
    for (const auto& row : shots.rows) {
        if (criteria.ancilla_zero && (row.bits & ancilla_mask)) continue;
        if (criteria.charge_count) {
            ChargeRecord rec = vertex_parities(row.bits, *lattice, ref);
            if (rec.sector != *criteria.charge_count) continue;
        }
        out.table.rows.push_back(row);
    }
    out.kept = out.table.rows.size();
    return out;
}

std::vector<double> invert_readout(std::vector<double> probs, std::span<const int> qubits,
                                   const ReadoutModel& model, bool clip) {
    const size_t n = qubits.size();
    if (probs.size() != (size_t{1} << n))
        throw std::invalid_argument("probability vector size must be 2^#qubits");
    if (n > 16) throw std::invalid_argument("explicit confusion inversion limited to 16 qubits");
    model.validate();
    if (!model.enabled()) return probs;

    for (size_t j = 0; j < n; ++j) {
        int q = qubits[j];
        if (q < 0 || q >= static_cast<int>(model.per_qubit.size()))
            throw std::invalid_argument("qubit outside readout model");
        const ReadoutError& e = model.per_qubit[q];
        const double det = 1.0 - e.eps0 - e.eps1;
        if (det <= 0) throw std::invalid_argument("singular confusion matrix");
        // R = [[1-e0, e1], [e0, 1-e1]]; apply R^-1 along axis j.
        const double i00 = (1.0 - e.eps1) / det, i01 = -e.eps1 / det;
        const double i10 = -e.eps0 / det, i11 = (1.0 - e.eps0) / det;
        const size_t bit = size_t{1} << j;
        for (size_t base = 0; base < probs.size(); base += 2 * bit) {
            for (size_t k = base; k < base + bit; ++k) {
                double p0 = probs[k], p1 = probs[k | bit];
                probs[k] = i00 * p0 + i01 * p1;
                probs[k | bit] = i10 * p0 + i11 * p1;
            }
        }
    }
    if (clip) {
        double total = 0;
        for (double& p : probs) {
            if (p < 0) p = 0;
            total += p;
        }
        if (total > 0)
            for (double& p : probs) p /= total;
    }
    return probs;
}

std::vector<double> probability_vector(const ShotTable& shots, std::span<const int> qubits) {
    if (qubits.size() > 16) throw std::invalid_argument("probability vector limited to 16 qubits");
    std::vector<double> probs(size_t{1} << qubits.size(), 0.0);
    if (shots.rows.empty()) return probs;
    for (const auto& row : shots.rows) {
        size_t idx = 0;
        for (size_t j = 0; j < qubits.size(); ++j)
            if (row.bits >> qubits[j] & 1) idx |= size_t{1} << j;
        probs[idx] += 1.0;
    }
    for (double& p : probs) p /= static_cast<double>(shots.rows.size());
    return probs;
}

double z_parity_expectation(std::span<const double> probs, uint64_t qubit_mask_in_vector) {
    double e = 0;
    for (size_t k = 0; k < probs.size(); ++k)
        e += (std::popcount(k & qubit_mask_in_vector) & 1) ? -probs[k] : probs[k];
    return e;
}

PEff effective_depol(double measured, double o_initial, double o_depolarized) {
    if (o_depolarized == o_initial)
        throw std::invalid_argument("degenerate depolarization references");
    double p = (measured - o_initial) / (o_depolarized - o_initial);
    PEff out{p, p >= 0.0 && p <= 1.0};
    out.value = std::min(1.0, std::max(0.0, p));
    return out;
}

double rescale(double measured, double p_eff, double o_depolarized) {
    if (p_eff >= 1.0) throw std::invalid_argument("rescale requires p_eff < 1");
    return (measured - p_eff * o_depolarized) / (1.0 - p_eff);
}

LoschmidtPEff loschmidt_p_eff(double e_measured, double e_exact) {
    if (e_exact == 0) throw std::invalid_argument("Loschmidt reference energy must be nonzero");
    double ratio = e_measured / e_exact;
    LoschmidtPEff out;
    if (ratio > 1.0) {
        out.valid = false;
        out.value = 0.0;
        return out;
    }
    out.value = std::sqrt(1.0 - ratio);
    return out;
}

} // namespace lgt
