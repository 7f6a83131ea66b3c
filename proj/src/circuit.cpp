#include "lgt/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lgt {

namespace {

constexpr double kPi = std::numbers::pi;

Gate one_qubit(GateKind kind, int q) {
    Gate g;
    g.kind = kind;
    g.q = {q, -1};
    g.nq = 1;
    return g;
}

Gate two_qubit(GateKind kind, int a, int b) {
    if (a == b) throw std::invalid_argument("two-qubit gate targets must be distinct");
    Gate g;
    g.kind = kind;
    g.q = {a, b};
    g.nq = 2;
    return g;
}

// Matrix of Z^t in the convention with eigenvalues (1, e^{i pi t}).
void zpow(double t, cplx m[4]) {
    m[0] = 1;
    m[1] = 0;
    m[2] = 0;
    m[3] = std::exp(cplx{0, kPi * t});
}

void matmul2(const cplx a[4], const cplx b[4], cplx out[4]) {
    out[0] = a[0] * b[0] + a[1] * b[2];
    out[1] = a[0] * b[1] + a[1] * b[3];
    out[2] = a[2] * b[0] + a[3] * b[2];
    out[3] = a[2] * b[1] + a[3] * b[3];
}

void gate_matrix(const Gate& g, cplx m[4]) {
    switch (g.kind) {
    case GateKind::Ry: {
        double c = std::cos(g.params[0] / 2), s = std::sin(g.params[0] / 2);
        m[0] = c; m[1] = -s; m[2] = s; m[3] = c;
        return;
    }
    case GateKind::Rz: {
        m[0] = std::exp(cplx{0, -g.params[0] / 2});
        m[1] = 0;
        m[2] = 0;
        m[3] = std::exp(cplx{0, g.params[0] / 2});
        return;
    }
    case GateKind::H: {
        double r = 1.0 / std::sqrt(2.0);
        m[0] = r; m[1] = r; m[2] = r; m[3] = -r;
        return;
    }
    case GateKind::S: m[0] = 1; m[1] = 0; m[2] = 0; m[3] = cplx{0, 1}; return;
    case GateKind::Sdg: m[0] = 1; m[1] = 0; m[2] = 0; m[3] = cplx{0, -1}; return;
    case GateKind::X: m[0] = 0; m[1] = 1; m[2] = 1; m[3] = 0; return;
    case GateKind::Y: m[0] = 0; m[1] = cplx{0, -1}; m[2] = cplx{0, 1}; m[3] = 0; return;
    case GateKind::Z: m[0] = 1; m[1] = 0; m[2] = 0; m[3] = -1; return;
    case GateKind::PhasedXZ: {
        // Z^{z+a} X^{x} Z^{-a} with X^t = H Z^t H.
        double x = g.params[0], z = g.params[1], a = g.params[2];
        cplx za[4], xp[4], zb[4], hz[4], tmp[4];
        double r = 1.0 / std::sqrt(2.0);
        cplx h[4] = {r, r, r, -r};
        zpow(x, hz);
        matmul2(hz, h, tmp);
        matmul2(h, tmp, xp);
        zpow(z + a, za);
        zpow(-a, zb);
        matmul2(xp, zb, tmp);
        matmul2(za, tmp, m);
        return;
    }
    case GateKind::AxisAngle: {
        double nx = g.params[0], ny = g.params[1], nz = g.params[2], ang = g.params[3];
        double nn = std::sqrt(nx * nx + ny * ny + nz * nz);
        if (nn <= 0) throw std::invalid_argument("axis-angle rotation needs a nonzero axis");
        nx /= nn; ny /= nn; nz /= nn;
        double c = std::cos(ang / 2), s = std::sin(ang / 2);
        // exp(-i ang/2 n.sigma) = c I - i s (nx X + ny Y + nz Z)
        m[0] = cplx{c, -s * nz};
        m[1] = cplx{-s * ny, -s * nx};
        m[2] = cplx{s * ny, -s * nx};
        m[3] = cplx{c, s * nz};
        return;
    }
    default: throw std::logic_error("not a single-qubit matrix gate");
    }
}

} // namespace

Gate Gate::ry(int q, double theta) {
    Gate g = one_qubit(GateKind::Ry, q);
    g.params[0] = theta;
    return g;
}

Gate Gate::rz(int q, double theta) {
    Gate g = one_qubit(GateKind::Rz, q);
    g.params[0] = theta;
    return g;
}

Gate Gate::h(int q) { return one_qubit(GateKind::H, q); }
Gate Gate::s(int q) { return one_qubit(GateKind::S, q); }
Gate Gate::sdg(int q) { return one_qubit(GateKind::Sdg, q); }
Gate Gate::x(int q) { return one_qubit(GateKind::X, q); }
Gate Gate::y(int q) { return one_qubit(GateKind::Y, q); }
Gate Gate::z(int q) { return one_qubit(GateKind::Z, q); }

Gate Gate::phased_xz(int q, double x_exp, double z_exp, double axis_exp) {
    Gate g = one_qubit(GateKind::PhasedXZ, q);
    g.params = {x_exp, z_exp, axis_exp, 0};
    return g;
}

Gate Gate::axis_angle(int q, double nx, double ny, double nz, double angle) {
    Gate g = one_qubit(GateKind::AxisAngle, q);
    g.params = {nx, ny, nz, angle};
    return g;
}

Gate Gate::cz(int a, int b) { return two_qubit(GateKind::CZ, a, b); }
Gate Gate::cnot(int control, int target) { return two_qubit(GateKind::CNOT, control, target); }

Gate Gate::pauli_exp(const PauliString& p, double angle) {
    if (p.empty()) throw std::invalid_argument("PauliExp requires non-empty support");
    Gate g;
    g.kind = GateKind::PauliExp;
    g.nq = p.weight();
    g.pauli = p;
    g.params[0] = angle;
    return g;
}

Gate Gate::inverse() const {
    Gate g = *this;
    switch (kind) {
    case GateKind::Ry:
    case GateKind::Rz: g.params[0] = -params[0]; return g;
    case GateKind::H:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::CZ:
    case GateKind::CNOT: return g;
    case GateKind::S: g.kind = GateKind::Sdg; return g;
    case GateKind::Sdg: g.kind = GateKind::S; return g;
    case GateKind::PhasedXZ: {
        // (Z^{z+a} X^x Z^{-a})^-1 = Z^{a} X^{-x} Z^{-a} Z^{-z} = PhXZ(-x, -z, a+z)
        g.params = {-params[0], -params[1], params[2] + params[1], 0};
        return g;
    }
    case GateKind::AxisAngle: g.params[3] = -params[3]; return g;
    case GateKind::PauliExp: g.params[0] = -params[0]; return g;
    }
    throw std::logic_error("unreachable");
}

const char* Gate::name() const {
    switch (kind) {
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::PhasedXZ: return "phased_xz";
    case GateKind::AxisAngle: return "axis_angle";
    case GateKind::CZ: return "cz";
    case GateKind::CNOT: return "cnot";
    case GateKind::PauliExp: return "pauli_exp";
    }
    return "?";
}

void Circuit::declare_ancilla(int qubit) {
    if (qubit < 0 || qubit >= n_qubits_) throw std::out_of_range("ancilla outside circuit");
    if (std::find(ancillas_.begin(), ancillas_.end(), qubit) == ancillas_.end())
        ancillas_.push_back(qubit);
}

void Circuit::append(const Gate& g) {
    uint64_t used = 0;
    if (g.kind == GateKind::PauliExp) {
        used = g.pauli.support_mask();
        if (g.pauli.max_qubit() >= n_qubits_) throw std::out_of_range("gate outside circuit");
    } else {
        for (int i = 0; i < g.nq; ++i) {
            if (g.q[i] < 0 || g.q[i] >= n_qubits_) throw std::out_of_range("gate outside circuit");
            used |= uint64_t{1} << g.q[i];
        }
    }
    auto layer_mask = [](const std::vector<Gate>& layer) {
        uint64_t m = 0;
        for (const Gate& x : layer)
            m |= x.kind == GateKind::PauliExp
                     ? x.pauli.support_mask()
                     : (x.nq == 2 ? (uint64_t{1} << x.q[0]) | (uint64_t{1} << x.q[1])
                                  : uint64_t{1} << x.q[0]);
        return m;
    };
    if (force_new_layer_ || layers_.empty() || (layer_mask(layers_.back()) & used)) {
        layers_.emplace_back();
        force_new_layer_ = false;
    }
    layers_.back().push_back(g);
}

void Circuit::extend(const Circuit& other) {
    if (other.n_qubits_ != n_qubits_)
        throw std::invalid_argument("extend requires matching qubit counts");
    for (const auto& layer : other.layers_) {
        layers_.push_back(layer);
    }
    for (int a : other.ancillas_) declare_ancilla(a);
    force_new_layer_ = false;
}

size_t Circuit::n_gates() const {
    size_t n = 0;
    for (const auto& layer : layers_) n += layer.size();
    return n;
}

int Circuit::entangling_count() const {
    int n = 0;
    for (const auto& layer : layers_)
        for (const Gate& g : layer)
            if (g.is_entangling()) ++n;
    return n;
}

Circuit Circuit::inverse() const {
    Circuit inv(n_qubits_);
    inv.ancillas_ = ancillas_;
    for (auto layer = layers_.rbegin(); layer != layers_.rend(); ++layer) {
        inv.layers_.emplace_back();
        for (auto g = layer->rbegin(); g != layer->rend(); ++g)
            inv.layers_.back().push_back(g->inverse());
    }
    return inv;
}

nlohmann::json Circuit::to_json() const {
    nlohmann::json gates = nlohmann::json::array();
    for (size_t li = 0; li < layers_.size(); ++li) {
        for (const Gate& g : layers_[li]) {
            nlohmann::json jg;
            jg["layer"] = li;
            jg["gate"] = g.name();
            if (g.kind == GateKind::PauliExp) {
                jg["targets"] = nlohmann::json::array();
                for (int q = 0; q <= g.pauli.max_qubit(); ++q)
                    if (g.pauli.op_at(q) != 'I') jg["targets"].push_back(q);
                jg["pauli"] = g.pauli.to_string();
                jg["params"] = {g.params[0]};
            } else {
                jg["targets"] = g.nq == 2 ? std::vector<int>{g.q[0], g.q[1]}
                                          : std::vector<int>{g.q[0]};
                jg["params"] = g.params;
            }
            gates.push_back(std::move(jg));
        }
    }
    return {{"n_qubits", n_qubits_},
            {"ancillas", ancillas_},
            {"entangling_count", entangling_count()},
            {"gates", std::move(gates)}};
}

void apply_gate(StateVector& state, const Gate& g) {
    switch (g.kind) {
    case GateKind::CZ: apply_cz(state, g.q[0], g.q[1]); return;
    case GateKind::CNOT: apply_cnot(state, g.q[0], g.q[1]); return;
    case GateKind::PauliExp: apply_pauli_exp(state, g.pauli, g.params[0]); return;
    case GateKind::X: {
        apply_pauli(state, PauliString::single('X', g.q[0]));
        return;
    }
    case GateKind::Z: {
        apply_pauli(state, PauliString::single('Z', g.q[0]));
        return;
    }
    default: {
        cplx m[4];
        gate_matrix(g, m);
        apply_1q(state, g.q[0], m);
        return;
    }
    }
}

void execute(StateVector& state, const Circuit& circuit) {
    if (state.n_qubits() != circuit.n_qubits())
        throw std::invalid_argument("state/circuit qubit count mismatch");
    for (const auto& layer : circuit.layers())
        for (const Gate& g : layer) apply_gate(state, g);
}

} // namespace lgt
