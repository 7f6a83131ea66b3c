#include "lgt/reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "lgt/random.hpp"
#include "lgt/wala.hpp"

namespace lgt {

namespace {

// P|j> phase for a term; mirrors the state-engine convention.
inline cplx term_phase(const PauliString& p, uint64_t j) {
    static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx ph = i_pow[std::popcount(p.x_mask & p.z_mask) & 3];
    if (std::popcount(j & p.z_mask) & 1) ph = -ph;
    return p.sign < 0 ? -ph : ph;
}

void random_unit_state(StateVector& v, uint64_t seed) {
    RandomSource rng(seed);
    for (uint64_t k = 0; k < v.dim(); ++k)
        v.data()[k] = cplx{rng.next_double() - 0.5, rng.next_double() - 0.5};
    v.normalize();
}

void axpy(cplx alpha, const StateVector& x, StateVector& y) {
    for (uint64_t k = 0; k < x.dim(); ++k) y.data()[k] += alpha * x.data()[k];
}

// Lanczos basis builder shared by the eigensolver and the Krylov propagator.
struct LanczosBasis {
    std::vector<StateVector> v;
    std::vector<double> alpha;
    std::vector<double> beta; // beta[j] couples v[j-1], v[j]
    bool breakdown = false;

    void build(const SparseHamiltonian& h, const StateVector& start, int m) {
        v.clear();
        alpha.clear();
        beta.clear();
        breakdown = false;
        v.push_back(start);
        StateVector w(h.n_qubits());
        for (int j = 0; j < m; ++j) {
            h.apply(v[j], w);
            if (j > 0) axpy(-beta[j - 1], v[j - 1], w);
            double a = 0;
            for (uint64_t k = 0; k < w.dim(); ++k)
                a += (std::conj(v[j].data()[k]) * w.data()[k]).real();
            alpha.push_back(a);
            axpy(cplx{-a, 0}, v[j], w);
            // Full reorthogonalization keeps the basis clean at this scale.
            for (const StateVector& u : v) {
                cplx ov = overlap(u, w);
                axpy(-ov, u, w);
            }
            double b = w.norm();
            if (b < 1e-12) {
                breakdown = true;
                return;
            }
            beta.push_back(b);
            for (uint64_t k = 0; k < w.dim(); ++k) w.data()[k] /= b;
            v.push_back(w);
        }
    }

    // Eigen-decomposition of the tridiagonal projection (m = alpha.size()).
    void tridiag_eig(Eigen::VectorXd& evals, Eigen::MatrixXd& evecs) const {
        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        evals = es.eigenvalues();
        evecs = es.eigenvectors();
    }
};

} // namespace

SparseHamiltonian::SparseHamiltonian(int n_qubits,
                                     std::vector<std::pair<double, PauliString>> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
    for (const auto& [coeff, p] : terms_) {
        if (p.empty()) throw std::invalid_argument("Hamiltonian term with empty support");
        if (p.max_qubit() >= n_qubits_)
            throw std::invalid_argument("Hamiltonian term outside register");
    }
}

void SparseHamiltonian::apply(const StateVector& in, StateVector& out) const {
    if (in.n_qubits() != n_qubits_ || out.n_qubits() != n_qubits_)
        throw std::invalid_argument("state/Hamiltonian dimension mismatch");
    std::fill(out.amplitudes().begin(), out.amplitudes().end(), cplx{0, 0});
    const cplx* a = in.data();
    cplx* b = out.data();
    const uint64_t dim = in.dim();
    for (const auto& [coeff, p] : terms_) {
        const uint64_t f = p.x_mask;
        for (uint64_t k = 0; k < dim; ++k) b[k] += coeff * term_phase(p, k ^ f) * a[k ^ f];
    }
}

double SparseHamiltonian::expectation(const StateVector& s) const {
    double e = 0;
    for (const auto& [coeff, p] : terms_) e += coeff * lgt::expectation(s, p);
    return e;
}

SparseHamiltonian build_hamiltonian(const Lattice& lattice, const HamiltonianParams& params,
                                    std::span<const LinkId> field_mask) {
    for (LinkId l : field_mask)
        if (!lattice.links().at(l).pinned)
            throw std::invalid_argument("field mask may only contain pinned links");

    std::vector<std::pair<double, PauliString>> terms;
    auto push = [&terms](double coeff, PauliString p) {
        if (coeff != 0.0) terms.emplace_back(coeff, std::move(p));
    };

    for (VertexId v = 0; v < lattice.n_vertices(); ++v) {
        const auto& sup = lattice.vertex_support(v);
        push(-params.j_e * params.vertex_sign(v),
             PauliString::z_product(std::span<const int>(sup.data(), sup.size())));
    }
    for (int i = 0; i < lattice.n_pinned(); ++i)
        push(-params.j_e, PauliString::single('Z', lattice.pinned_link(i)));
    for (PlaquetteId p = 0; p < lattice.n_plaquettes(); ++p) {
        const auto& sup = lattice.plaquette_support(p);
        push(-params.j_m, PauliString::x_product(std::span<const int>(sup.data(), sup.size())));
    }
    std::set<LinkId> masked(field_mask.begin(), field_mask.end());
    for (const LinkInfo& l : lattice.links()) {
        if (masked.count(l.id)) continue;
        push(-params.h_e, PauliString::single('Z', l.id));
        push(-params.lam, PauliString::single('X', l.id));
    }
    return SparseHamiltonian(lattice.n_links(), std::move(terms));
}

GroundState ground_state(const SparseHamiltonian& h, double tol, uint64_t seed,
                         int max_restarts) {
    const int n = h.n_qubits();
    StateVector x(n);
    random_unit_state(x, seed);

    int matvecs = 0;
    const int m_inner = 60;
    LanczosBasis basis;
    double energy = 0;
    for (int restart = 0; restart < max_restarts; ++restart) {
        basis.build(h, x, m_inner);
        matvecs += static_cast<int>(basis.alpha.size());
        if (basis.alpha.empty()) throw std::runtime_error("Lanczos failed to start");

        Eigen::VectorXd evals;
        Eigen::MatrixXd evecs;
        basis.tridiag_eig(evals, evecs);

        StateVector next(n);
        std::fill(next.amplitudes().begin(), next.amplitudes().end(), cplx{0, 0});
        for (size_t j = 0; j < basis.alpha.size(); ++j)
            axpy(cplx{evecs(static_cast<int>(j), 0), 0}, basis.v[j], next);
        next.normalize();
        x = std::move(next);
        energy = evals(0);

        StateVector hx(n);
        h.apply(x, hx);
        ++matvecs;
        axpy(cplx{-energy, 0}, x, hx);
        if (hx.norm() <= tol) return {energy, std::move(x), matvecs};

        if (basis.breakdown) {
            // Invariant subspace hit: restart against it (degeneracy guard).
            StateVector r(n);
            random_unit_state(r, derive_seed(seed, restart + 1));
            cplx ov = overlap(x, r);
            axpy(-ov, x, r);
            r.normalize();
            axpy(cplx{0.1, 0}, r, x);
            x.normalize();
        }
    }
    throw std::runtime_error("Lanczos did not converge within restart budget");
}

ExactPropagator::ExactPropagator(const SparseHamiltonian& h, int dense_qubit_limit)
    : h_(h), dense_(h.n_qubits() <= dense_qubit_limit) {
    if (!dense_) return;
    const uint64_t dim = uint64_t{1} << h.n_qubits();
    Eigen::MatrixXcd hm = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [coeff, p] : h.terms()) {
        const uint64_t f = p.x_mask;
        for (uint64_t col = 0; col < dim; ++col) hm(col ^ f, col) += coeff * term_phase(p, col);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
    eigenvalues_.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim);
    eigenvectors_.resize(dim * dim);
    for (uint64_t c = 0; c < dim; ++c)
        for (uint64_t r = 0; r < dim; ++r) eigenvectors_[c * dim + r] = es.eigenvectors()(r, c);
}

StateVector ExactPropagator::evolve(const StateVector& state, double t) const {
    if (state.n_qubits() != h_.n_qubits())
        throw std::invalid_argument("state/Hamiltonian dimension mismatch");
    if (t < 0) throw std::invalid_argument("t must be non-negative");
    if (t == 0) return state;

    if (dense_) {
        const uint64_t dim = state.dim();
        std::vector<cplx> coeffs(dim, cplx{0, 0});
        for (uint64_t c = 0; c < dim; ++c) {
            cplx ov = 0;
            const cplx* col = &eigenvectors_[c * dim];
            for (uint64_t r = 0; r < dim; ++r) ov += std::conj(col[r]) * state.data()[r];
            coeffs[c] = ov * std::exp(cplx{0, -eigenvalues_[c] * t});
        }
        StateVector out(state.n_qubits());
        std::fill(out.amplitudes().begin(), out.amplitudes().end(), cplx{0, 0});
        for (uint64_t c = 0; c < dim; ++c) {
            const cplx* col = &eigenvectors_[c * dim];
            for (uint64_t r = 0; r < dim; ++r) out.data()[r] += coeffs[c] * col[r];
        }
        return out;
    }

    // Krylov stepping: substeps short enough that a modest subspace converges,
    // halving the step whenever the last-coefficient estimate is not tiny.
    StateVector psi = state;
    double remaining = t;
    const int m_max = 48;
    LanczosBasis basis;
    while (remaining > 1e-14) {
        basis.build(h_, psi, m_max);
        const int m = static_cast<int>(basis.alpha.size());
        Eigen::VectorXd evals;
        Eigen::MatrixXd evecs;
        basis.tridiag_eig(evals, evecs);

        auto propagate_coeffs = [&](double tau) {
            // y = exp(-i T tau) e1 in the Lanczos basis
            Eigen::VectorXcd y = Eigen::VectorXcd::Zero(m);
            for (int c = 0; c < m; ++c) {
                cplx ph = std::exp(cplx{0, -evals(c) * tau});
                for (int r = 0; r < m; ++r) y(r) += evecs(r, c) * ph * evecs(0, c);
            }
            return y;
        };

        double tau = std::min(remaining, 0.5);
        Eigen::VectorXcd y = propagate_coeffs(tau);
        if (!basis.breakdown) {
            while (std::abs(y(m - 1)) > 1e-12 && tau > 1e-4) {
                tau *= 0.5;
                y = propagate_coeffs(tau);
            }
        }

        StateVector next(psi.n_qubits());
        std::fill(next.amplitudes().begin(), next.amplitudes().end(), cplx{0, 0});
        for (int j = 0; j < m; ++j) axpy(y(j), basis.v[j], next);
        // The projection is an isometry; renormalize away rounding drift.
        if (std::abs(next.norm() - 1.0) > 1e-6)
            throw std::runtime_error("Krylov propagation lost unitarity");
        next.normalize();
        psi = std::move(next);
        remaining -= tau;
    }
    return psi;
}

StateVector exact_evolve(const StateVector& state, const SparseHamiltonian& h, double t) {
    return ExactPropagator(h).evolve(state, t);
}

WalaQuality wala_quality(const Lattice& lattice, const HamiltonianParams& params) {
    WalaSolution sol = optimize_theta(lattice.lx(), lattice.ly(), params);
    StateVector psi = init_zero(lattice.n_links());
    execute(psi, build_wala(lattice, sol.theta, WalaMode::AncillaFree));

    SparseHamiltonian h = build_hamiltonian(lattice, params);
    GroundState gs = ground_state(h);
    double e_wala = h.expectation(psi);
    double fid = std::norm(overlap(gs.state, psi));
    return {std::abs(gs.energy - e_wala) / std::abs(gs.energy), 1.0 - fid, sol.theta, e_wala,
            gs.energy};
}

} // namespace lgt
