#include "lgt/observables.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace lgt {

namespace {

std::vector<uint64_t> vertex_masks(const Lattice& lattice) {
    std::vector<uint64_t> masks(lattice.n_vertices(), 0);
    for (VertexId v = 0; v < lattice.n_vertices(); ++v)
        for (LinkId l : lattice.vertex_support(v)) masks[v] |= uint64_t{1} << l;
    return masks;
}

ValueWithError mean_with_error(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("empty sample");
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    double sem = xs.size() > 1 ? std::sqrt(var / (static_cast<double>(xs.size()) - 1) /
                                           static_cast<double>(xs.size()))
                               : 0.0;
    return {mean, sem, xs.size()};
}

// Standard error of a mean of +/-1 outcomes.
ValueWithError pm_mean(double sum, size_t n) {
    double m = sum / static_cast<double>(n);
    double sem = n > 1 ? std::sqrt(std::max(0.0, 1.0 - m * m) / (static_cast<double>(n) - 1))
                       : 0.0;
    return {m, sem, n};
}

} // namespace

ChargeRecord vertex_parities(uint64_t bits, const Lattice& lattice,
                             const std::vector<int8_t>* reference_signs) {
    ChargeRecord rec;
    rec.parity.resize(lattice.n_vertices());
    auto masks = vertex_masks(lattice);
    for (VertexId v = 0; v < lattice.n_vertices(); ++v) {
        int8_t p = (std::popcount(bits & masks[v]) & 1) ? -1 : 1;
        rec.parity[v] = p;
        int8_t ref = reference_signs ? (*reference_signs)[v] : 1;
        if (p * ref < 0) rec.violated.push_back(v);
    }
    rec.sector = static_cast<int>(rec.violated.size());
    return rec;
}

ValueWithError mean_separation(const ShotTable& shots, const Lattice& lattice) {
    if (shots.rows.empty()) throw std::invalid_argument("mean_separation on empty table");
    auto masks = vertex_masks(lattice);
    std::vector<double> distances;
    distances.reserve(shots.rows.size());
    for (const auto& row : shots.rows) {
        VertexId a = -1, b = -1;
        int count = 0;
        for (VertexId v = 0; v < lattice.n_vertices(); ++v) {
            if (std::popcount(row.bits & masks[v]) & 1) {
                if (count == 0)
                    a = v;
                else if (count == 1)
                    b = v;
                ++count;
            }
        }
        if (count != 2)
            throw std::invalid_argument("mean_separation requires sector-2 post-selected shots");
        distances.push_back(lattice.manhattan_distance(a, b));
    }
    return mean_with_error(distances);
}

std::vector<ValueWithError> excitation_heatmap(const ShotTable& shots, const Lattice& lattice) {
    auto masks = vertex_masks(lattice);
    std::vector<ValueWithError> out(lattice.n_vertices());
    if (shots.rows.empty()) return out;
    for (VertexId v = 0; v < lattice.n_vertices(); ++v) {
        double sum = 0;
        for (const auto& row : shots.rows)
            sum += (std::popcount(row.bits & masks[v]) & 1) ? -1.0 : 1.0;
        out[v] = pm_mean(sum, shots.rows.size());
    }
    return out;
}

std::vector<ValueWithError> z_field_map(const ShotTable& shots, const Lattice& lattice) {
    std::vector<ValueWithError> out(lattice.n_links());
    if (shots.rows.empty()) return out;
    for (LinkId l = 0; l < lattice.n_links(); ++l) {
        double sum = 0;
        for (const auto& row : shots.rows) sum += (row.bits >> l & 1) ? -1.0 : 1.0;
        out[l] = pm_mean(sum, shots.rows.size());
    }
    return out;
}

ConditionalMap conditional_map(const ShotTable& shots, const Lattice& lattice,
                               VertexId reference) {
    if (reference < 0 || reference >= lattice.n_vertices())
        throw std::out_of_range("reference vertex outside lattice");
    ConditionalMap map;
    map.p_partner.assign(lattice.n_vertices(), 0.0);
    if (shots.rows.empty()) return map;

    auto masks = vertex_masks(lattice);
    size_t n_ref = 0;
    for (const auto& row : shots.rows) {
        VertexId a = -1, b = -1;
        int count = 0;
        for (VertexId v = 0; v < lattice.n_vertices(); ++v) {
            if (std::popcount(row.bits & masks[v]) & 1) {
                (count == 0 ? a : b) = v;
                ++count;
            }
        }
        if (count != 2)
            throw std::invalid_argument("conditional_map requires sector-2 post-selected shots");
        if (a == reference || b == reference) {
            ++n_ref;
            map.p_partner[a == reference ? b : a] += 1.0;
        }
    }
    map.p_reference = static_cast<double>(n_ref) / static_cast<double>(shots.rows.size());
    map.n_reference = n_ref;
    map.defined = n_ref > 0;
    if (n_ref > 0)
        for (double& p : map.p_partner) p /= static_cast<double>(n_ref);
    return map;
}

SectorSeparation mean_separation_exact(const StateVector& state, const Lattice& lattice,
                                       const std::vector<int8_t>* reference_signs) {
    auto masks = vertex_masks(lattice);
    const int nv = lattice.n_vertices();
    double wsum = 0, dsum = 0;
    for (uint64_t k = 0; k < state.dim(); ++k) {
        double w = std::norm(state.data()[k]);
        if (w == 0) continue;
        VertexId a = -1, b = -1;
        int count = 0;
        for (VertexId v = 0; v < nv && count <= 2; ++v) {
            int8_t p = (std::popcount(k & masks[v]) & 1) ? -1 : 1;
            int8_t ref = reference_signs ? (*reference_signs)[v] : 1;
            if (p * ref < 0) {
                (count == 0 ? a : b) = v;
                ++count;
            }
        }
        if (count == 2) {
            wsum += w;
            dsum += w * lattice.manhattan_distance(a, b);
        }
    }
    if (wsum <= 0) return {0.0, 0.0};
    return {dsum / wsum, wsum};
}

std::vector<double> excitation_heatmap_exact(const StateVector& state, const Lattice& lattice) {
    auto masks = vertex_masks(lattice);
    std::vector<double> out(lattice.n_vertices(), 0.0);
    for (uint64_t k = 0; k < state.dim(); ++k) {
        double w = std::norm(state.data()[k]);
        if (w == 0) continue;
        for (VertexId v = 0; v < lattice.n_vertices(); ++v)
            out[v] += (std::popcount(k & masks[v]) & 1) ? -w : w;
    }
    return out;
}

std::vector<double> z_field_map_exact(const StateVector& state, const Lattice& lattice) {
    std::vector<double> out(lattice.n_links(), 0.0);
    for (uint64_t k = 0; k < state.dim(); ++k) {
        double w = std::norm(state.data()[k]);
        if (w == 0) continue;
        for (LinkId l = 0; l < lattice.n_links(); ++l) out[l] += (k >> l & 1) ? -w : w;
    }
    return out;
}

ConditionalMap conditional_map_exact(const StateVector& state, const Lattice& lattice,
                                     VertexId reference) {
    if (reference < 0 || reference >= lattice.n_vertices())
        throw std::out_of_range("reference vertex outside lattice");
    auto masks = vertex_masks(lattice);
    ConditionalMap map;
    map.p_partner.assign(lattice.n_vertices(), 0.0);
    double w_sector = 0, w_ref = 0;
    for (uint64_t k = 0; k < state.dim(); ++k) {
        double w = std::norm(state.data()[k]);
        if (w == 0) continue;
        VertexId a = -1, b = -1;
        int count = 0;
        for (VertexId v = 0; v < lattice.n_vertices() && count <= 2; ++v) {
            if (std::popcount(k & masks[v]) & 1) {
                (count == 0 ? a : b) = v;
                ++count;
            }
        }
        if (count != 2) continue;
        w_sector += w;
        if (a == reference || b == reference) {
            w_ref += w;
            map.p_partner[a == reference ? b : a] += w;
        }
    }
    if (w_sector > 0) map.p_reference = w_ref / w_sector;
    map.defined = w_ref > 0;
    if (w_ref > 0)
        for (double& p : map.p_partner) p /= w_ref;
    return map;
}

SectorSeparation single_excitation_distance_exact(const StateVector& state,
                                                  const Lattice& lattice, VertexId origin,
                                                  const std::vector<int8_t>& reference_signs) {
    auto masks = vertex_masks(lattice);
    double wsum = 0, dsum = 0;
    for (uint64_t k = 0; k < state.dim(); ++k) {
        double w = std::norm(state.data()[k]);
        if (w == 0) continue;
        VertexId site = -1;
        int count = 0;
        for (VertexId v = 0; v < lattice.n_vertices() && count <= 1; ++v) {
            int8_t p = (std::popcount(k & masks[v]) & 1) ? -1 : 1;
            if (p * reference_signs[v] < 0) {
                site = v;
                ++count;
            }
        }
        if (count == 1) {
            wsum += w;
            dsum += w * lattice.manhattan_distance(site, origin);
        }
    }
    if (wsum <= 0) return {0.0, 0.0};
    return {dsum / wsum, wsum};
}

std::vector<Correlator> two_time_oracle(const StateVector& psi0, const Circuit& step,
                                        int n_steps, const PauliString& a_op,
                                        const PauliString& b_op) {
    StateVector phi_a = psi0; // A |psi0>, evolved
    apply_pauli(phi_a, a_op);
    StateVector phi_b = psi0; // |psi0>, evolved

    std::vector<Correlator> series;
    series.reserve(n_steps + 1);
    for (int k = 0;; ++k) {
        StateVector tmp = phi_a;
        apply_pauli(tmp, b_op);
        cplx c = overlap(phi_b, tmp); // <psi| U^dag B U A |psi>
        series.push_back({c.real(), c.imag()});
        if (k == n_steps) break;
        execute(phi_a, step);
        execute(phi_b, step);
    }
    return series;
}

std::vector<Correlator> two_time_hadamard(const StateVector& psi0_with_ancilla,
                                          const Circuit& step, int n_steps,
                                          const PauliString& a_op, const PauliString& b_op,
                                          int ancilla) {
    const int n = psi0_with_ancilla.n_qubits();
    auto run = [&](double vartheta, double phi) {
        HadamardTest ht = build_hadamard_test(a_op, vartheta, phi, n, ancilla);
        PauliString meas = ht.measured_operator(b_op);
        StateVector state = psi0_with_ancilla;
        execute(state, ht.fragment);
        std::vector<double> est;
        est.reserve(n_steps + 1);
        for (int k = 0;; ++k) {
            est.push_back(expectation(state, meas));
            if (k == n_steps) break;
            execute(state, step);
        }
        return est;
    };
    // (pi/2, 0) estimates Re; (pi/2, pi/2) estimates -Im.
    std::vector<double> re = run(M_PI / 2, 0.0);
    std::vector<double> mim = run(M_PI / 2, M_PI / 2);
    std::vector<Correlator> series(re.size());
    for (size_t k = 0; k < re.size(); ++k) series[k] = {re[k], -mim[k]};
    return series;
}

double hadamard_z0(const StateVector& psi0_with_ancilla, const PauliString& a_op, int ancilla) {
    HadamardTest ht = build_hadamard_test(a_op, M_PI / 2, 0.0, psi0_with_ancilla.n_qubits(),
                                          ancilla);
    StateVector state = psi0_with_ancilla;
    execute(state, ht.fragment);
    return expectation(state, PauliString::single('X', ancilla));
}

std::vector<SeriesPoint> s_zz(const std::vector<SeriesPoint>& re_series, ValueWithError z0) {
    std::vector<SeriesPoint> out;
    out.reserve(re_series.size());
    for (const SeriesPoint& p : re_series) {
        double v = p.value * z0.value;
        double err = std::sqrt(p.stderr_ * p.stderr_ * z0.value * z0.value +
                               z0.stderr_ * z0.stderr_ * p.value * p.value);
        out.push_back({p.t, v, err});
    }
    return out;
}

} // namespace lgt
