#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgt/pauli.hpp"
#include "lgt/state_vector.hpp"

namespace lgt {

enum class GateKind {
    Ry,
    Rz,
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    PhasedXZ,  // Z^{z+a} X^{x} Z^{-a}, exponents in units of pi
    AxisAngle, // exp(-i angle/2 * n.sigma)
    CZ,
    CNOT,
    PauliExp, // exp(i angle * P); direct-mode macro gate
};

struct Gate {
    GateKind kind;
    std::array<int, 2> q{-1, -1};
    int nq = 1;
    std::array<double, 4> params{}; // angle / (x,z,a) / (nx,ny,nz,angle)
    PauliString pauli;              // PauliExp only

    static Gate ry(int q, double theta);
    static Gate rz(int q, double theta);
    static Gate h(int q);
    static Gate s(int q);
    static Gate sdg(int q);
    static Gate x(int q);
    static Gate y(int q);
    static Gate z(int q);
    static Gate phased_xz(int q, double x_exp, double z_exp, double axis_exp);
    static Gate axis_angle(int q, double nx, double ny, double nz, double angle);
    static Gate cz(int a, int b);
    static Gate cnot(int control, int target);
    static Gate pauli_exp(const PauliString& p, double angle);

    bool is_entangling() const { return kind == GateKind::CZ || kind == GateKind::CNOT; }
    Gate inverse() const;
    const char* name() const;
};

// Layered gate list. Within a layer no qubit appears twice; append() packs a
// gate into the last layer when possible and opens a new one otherwise.
class Circuit {
  public:
    explicit Circuit(int n_qubits) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    const std::vector<std::vector<Gate>>& layers() const { return layers_; }
    const std::vector<int>& ancillas() const { return ancillas_; }

    void declare_ancilla(int qubit);
    void append(const Gate& g);
    void new_layer() { force_new_layer_ = true; }
    void extend(const Circuit& other); // same qubit count; layers concatenated

    size_t n_gates() const;
    int entangling_count() const;
    Circuit inverse() const;

    nlohmann::json to_json() const;

  private:
    int n_qubits_;
    std::vector<std::vector<Gate>> layers_;
    std::vector<int> ancillas_;
    bool force_new_layer_ = false;
};

// Applies every gate of the circuit in layer order.
void execute(StateVector& state, const Circuit& circuit);

void apply_gate(StateVector& state, const Gate& g);

} // namespace lgt
