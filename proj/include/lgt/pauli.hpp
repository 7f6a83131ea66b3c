#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace lgt {

// Hermitian Pauli string with an overall sign. Stored as X/Z bit masks
// (a set bit in both marks a Y), qubit 0 at the least-significant bit.
struct PauliString {
    uint64_t x_mask = 0;
    uint64_t z_mask = 0;
    int sign = +1;

    uint64_t support_mask() const { return x_mask | z_mask; }
    bool empty() const { return support_mask() == 0; }
    int weight() const { return std::popcount(support_mask()); }
    int max_qubit() const {
        return support_mask() == 0 ? -1 : 63 - std::countl_zero(support_mask());
    }

    PauliString& mul(char op, int qubit) {
        if (qubit < 0 || qubit >= 64) throw std::out_of_range("qubit index out of range");
        uint64_t bit = 1ULL << qubit;
        if (support_mask() & bit) throw std::invalid_argument("duplicate qubit in Pauli string");
        switch (op) {
        case 'X': x_mask |= bit; break;
        case 'Y': x_mask |= bit; z_mask |= bit; break;
        case 'Z': z_mask |= bit; break;
        default: throw std::invalid_argument("Pauli op must be X, Y or Z");
        }
        return *this;
    }

    static PauliString single(char op, int qubit, int sign = +1) {
        PauliString p;
        p.sign = check_sign(sign);
        p.mul(op, qubit);
        return p;
    }

    static PauliString z_product(std::span<const int> qubits, int sign = +1) {
        PauliString p;
        p.sign = check_sign(sign);
        for (int q : qubits) p.mul('Z', q);
        return p;
    }

    static PauliString x_product(std::span<const int> qubits, int sign = +1) {
        PauliString p;
        p.sign = check_sign(sign);
        for (int q : qubits) p.mul('X', q);
        return p;
    }

    char op_at(int qubit) const {
        uint64_t bit = 1ULL << qubit;
        bool x = x_mask & bit, z = z_mask & bit;
        if (x && z) return 'Y';
        if (x) return 'X';
        if (z) return 'Z';
        return 'I';
    }

    std::string to_string() const {
        std::string s = sign < 0 ? "-" : "+";
        for (int q = 0; q <= max_qubit(); ++q) {
            char op = op_at(q);
            if (op != 'I') s += op + std::to_string(q) + " ";
        }
        return s;
    }

    bool operator==(const PauliString&) const = default;

  private:
    static int check_sign(int s) {
        if (s != 1 && s != -1) throw std::invalid_argument("Pauli sign must be +1 or -1");
        return s;
    }
};

} // namespace lgt
