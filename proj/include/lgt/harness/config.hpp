#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgt/compilers.hpp"
#include "lgt/lattice.hpp"
#include "lgt/noise.hpp"

namespace lgt {

struct PrepSpec {
    enum class Kind { Wala, WalaPair, WalaSuperposition, WalaString, Toric, Polarized };
    Kind kind = Kind::Wala;
    std::optional<double> theta;               // default: optimized for (h_E, J_M)
    std::optional<LinkId> pair_link;           // default: most central link
    std::optional<SuperpositionSpec> superposition;
    std::optional<PathSpec> string_path;       // default: pinned bump path
};

struct MitigationToggles {
    bool postselect_ancilla = true;
    bool postselect_charge = true;
    bool depol_rescale = true;
    bool readout_invert = false;
};

struct NoiseConfig {
    NoiseModel model;
    int n_traj = 30;
    int shots_per_traj = 400;
};

struct ExperimentConfig {
    std::string scenario;
    LatticeSpec lattice{3, 4, {}};
    double j_e = 1.0;
    double j_m = 1.0;
    std::vector<double> h_e_grid{0.0};
    std::vector<double> lambda_grid{0.0};
    double dt = 0.3;
    int n_steps = 9;
    PrepSpec prep;
    TrotterMode mode = TrotterMode::Direct;
    std::optional<NoiseConfig> noise;
    MitigationToggles mitigation;
    uint64_t seed = 7;
    std::string out_dir = "results";

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    void validate() const;
};

// Scenario-independent geometry defaults.
LinkId default_pair_link(const Lattice& lattice);
SuperpositionSpec default_superposition(const Lattice& lattice, char branch);
PathSpec default_string_path(const Lattice& lattice); // needs the two mid-row pins
double resolve_theta(const Lattice& lattice, const PrepSpec& prep,
                     const HamiltonianParams& params);

} // namespace lgt
