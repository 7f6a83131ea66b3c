#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lgt {

// Measured bitstrings. Bit b of `bits` is the outcome of qubit b; serialized
// bitstrings are written qubit-0-first.
struct ShotTable {
    struct Row {
        uint64_t bits = 0;
        int32_t trajectory = 0;
    };

    int n_qubits = 0;
    std::vector<int> ancilla_qubits; // columns eligible for ancilla post-selection
    std::vector<Row> rows;
    uint64_t master_seed = 0; // RNG provenance; per-trajectory seeds derive from it

    size_t size() const { return rows.size(); }

    std::string bitstring(size_t row) const {
        std::string s(n_qubits, '0');
        for (int q = 0; q < n_qubits; ++q)
            if (rows[row].bits >> q & 1) s[q] = '1';
        return s;
    }
};

} // namespace lgt
