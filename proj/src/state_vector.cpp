#include "lgt/state_vector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lgt/random.hpp"

namespace lgt {

namespace {

void check_qubit(const StateVector& s, int q) {
    if (q < 0 || q >= s.n_qubits()) throw std::out_of_range("qubit index out of range");
}

void check_support(const StateVector& s, const PauliString& p) {
    if (p.empty()) throw std::invalid_argument("Pauli string has empty support");
    if (p.max_qubit() >= s.n_qubits())
        throw std::out_of_range("Pauli support outside state");
}

// P|j> = phase(j) |j ^ x_mask> with phase(j) = sign * i^{#Y} * (-1)^{popcount(j & z_mask)}.
inline cplx pauli_phase(const PauliString& p, uint64_t j) {
    static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx ph = i_pow[std::popcount(p.x_mask & p.z_mask) & 3];
    if (std::popcount(j & p.z_mask) & 1) ph = -ph;
    return p.sign < 0 ? -ph : ph;
}

} // namespace

StateVector::StateVector(int n_qubits, int cap) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("need at least one qubit");
    if (n_qubits > cap)
        throw std::invalid_argument("qubit count " + std::to_string(n_qubits) +
                                    " exceeds cap " + std::to_string(cap));
    amps_.assign(uint64_t{1} << n_qubits, cplx{0, 0});
    amps_[0] = 1.0;
}

double StateVector::norm() const {
    double n2 = 0;
    for (const cplx& a : amps_) n2 += std::norm(a);
    return std::sqrt(n2);
}

void StateVector::normalize() {
    double n = norm();
    if (n <= 0) throw std::runtime_error("cannot normalize zero vector");
    double inv = 1.0 / n;
    for (cplx& a : amps_) a *= inv;
}

void StateVector::set_zero_state() {
    std::fill(amps_.begin(), amps_.end(), cplx{0, 0});
    amps_[0] = 1.0;
}

StateVector init_zero(int n_qubits, int cap) { return StateVector(n_qubits, cap); }

void apply_1q(StateVector& s, int qubit, const cplx m[4]) {
    check_qubit(s, qubit);
    cplx* a = s.data();
    const uint64_t bit = uint64_t{1} << qubit;
    const uint64_t dim = s.dim();
    for (uint64_t base = 0; base < dim; base += 2 * bit) {
        for (uint64_t k = base; k < base + bit; ++k) {
            cplx a0 = a[k], a1 = a[k | bit];
            a[k] = m[0] * a0 + m[1] * a1;
            a[k | bit] = m[2] * a0 + m[3] * a1;
        }
    }
}

void apply_cz(StateVector& s, int qa, int qb) {
    check_qubit(s, qa);
    check_qubit(s, qb);
    if (qa == qb) throw std::invalid_argument("CZ targets must be distinct");
    cplx* a = s.data();
    const uint64_t mask = (uint64_t{1} << qa) | (uint64_t{1} << qb);
    const uint64_t dim = s.dim();
    for (uint64_t k = 0; k < dim; ++k)
        if ((k & mask) == mask) a[k] = -a[k];
}

void apply_cnot(StateVector& s, int control, int target) {
    check_qubit(s, control);
    check_qubit(s, target);
    if (control == target) throw std::invalid_argument("CNOT targets must be distinct");
    cplx* a = s.data();
    const uint64_t cbit = uint64_t{1} << control;
    const uint64_t tbit = uint64_t{1} << target;
    const uint64_t dim = s.dim();
    for (uint64_t k = 0; k < dim; ++k)
        if ((k & cbit) && !(k & tbit)) std::swap(a[k], a[k | tbit]);
}

void apply_pauli(StateVector& s, const PauliString& p) {
    check_support(s, p);
    cplx* a = s.data();
    const uint64_t f = p.x_mask;
    const uint64_t dim = s.dim();
    if (f == 0) {
        for (uint64_t k = 0; k < dim; ++k) a[k] *= pauli_phase(p, k);
        return;
    }
    const uint64_t h = uint64_t{1} << (63 - std::countl_zero(f));
    for (uint64_t base = 0; base < dim; base += 2 * h) {
        for (uint64_t k = base; k < base + h; ++k) {
            uint64_t j = k ^ f;
            // new[k] = phase(j) a[j], new[j] = phase(k) a[k]
            cplx ak = a[k];
            a[k] = pauli_phase(p, j) * a[j];
            a[j] = pauli_phase(p, k) * ak;
        }
    }
}

void apply_pauli_exp(StateVector& s, const PauliString& p, double theta) {
    check_support(s, p);
    cplx* a = s.data();
    const uint64_t f = p.x_mask;
    const uint64_t dim = s.dim();
    const double c = std::cos(theta);
    const cplx is = cplx{0, 1} * std::sin(theta);
    if (f == 0) {
        // Diagonal string: pure phase per basis state.
        for (uint64_t k = 0; k < dim; ++k) a[k] *= c + is * pauli_phase(p, k);
        return;
    }
    const uint64_t h = uint64_t{1} << (63 - std::countl_zero(f));
    for (uint64_t base = 0; base < dim; base += 2 * h) {
        for (uint64_t k = base; k < base + h; ++k) {
            uint64_t j = k ^ f;
            cplx ak = a[k], aj = a[j];
            a[k] = c * ak + is * pauli_phase(p, j) * aj;
            a[j] = c * aj + is * pauli_phase(p, k) * ak;
        }
    }
}

double expectation(const StateVector& s, const PauliString& p) {
    check_support(s, p);
    const cplx* a = s.data();
    const uint64_t f = p.x_mask;
    const uint64_t dim = s.dim();
    if (f == 0) {
        double e = 0;
        for (uint64_t k = 0; k < dim; ++k)
            e += std::norm(a[k]) * pauli_phase(p, k).real();
        return e;
    }
    cplx e = 0;
    for (uint64_t k = 0; k < dim; ++k)
        e += std::conj(a[k]) * pauli_phase(p, k ^ f) * a[k ^ f];
    return e.real();
}

std::complex<double> overlap(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("overlap requires equal qubit counts");
    cplx e = 0;
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    for (uint64_t k = 0; k < a.dim(); ++k) e += std::conj(pa[k]) * pb[k];
    return e;
}

ShotTable sample(const StateVector& s, int n_shots, uint64_t seed) {
    if (n_shots < 1) throw std::invalid_argument("n_shots >= 1 required");
    RandomSource rng(seed);
    std::vector<std::pair<double, int>> u(n_shots);
    for (int i = 0; i < n_shots; ++i) u[i] = {rng.next_double(), i};
    std::sort(u.begin(), u.end());

    ShotTable table;
    table.n_qubits = s.n_qubits();
    table.master_seed = seed;
    table.rows.resize(n_shots);

    const cplx* a = s.data();
    double cum = 0;
    size_t next = 0;
    uint64_t last_nonzero = 0;
    for (uint64_t k = 0; k < s.dim() && next < u.size(); ++k) {
        double w = std::norm(a[k]);
        if (w > 0) last_nonzero = k;
        cum += w;
        while (next < u.size() && u[next].first < cum) {
            table.rows[u[next].second].bits = k;
            ++next;
        }
    }
    // Rounding can leave a sliver of probability unassigned.
    for (; next < u.size(); ++next) table.rows[u[next].second].bits = last_nonzero;
    return table;
}

double all_zero_probability(const StateVector& s, std::span<const int> qubits) {
    uint64_t mask = 0;
    for (int q : qubits) {
        check_qubit(s, q);
        mask |= uint64_t{1} << q;
    }
    double p = 0;
    const cplx* a = s.data();
    for (uint64_t k = 0; k < s.dim(); ++k)
        if ((k & mask) == 0) p += std::norm(a[k]);
    return p;
}

double project(StateVector& s, int qubit, int outcome) {
    check_qubit(s, qubit);
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    cplx* a = s.data();
    const uint64_t bit = uint64_t{1} << qubit;
    double p = 0;
    for (uint64_t k = 0; k < s.dim(); ++k)
        if (((k & bit) != 0) == (outcome == 1)) p += std::norm(a[k]);
    if (p <= 1e-12) throw std::runtime_error("projection onto (near-)zero-probability branch");
    const double inv = 1.0 / std::sqrt(p);
    for (uint64_t k = 0; k < s.dim(); ++k) {
        if (((k & bit) != 0) == (outcome == 1))
            a[k] *= inv;
        else
            a[k] = 0;
    }
    return p;
}

} // namespace lgt
