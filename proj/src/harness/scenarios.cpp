#include <algorithm>
#include <stdexcept>

#include "lgt/harness/runner.hpp"

namespace lgt {

int catalog_version() { return 1; }

const std::vector<ScenarioInfo>& list_scenarios() {
    static const std::vector<ScenarioInfo> catalog = [] {
        std::vector<ScenarioInfo> v{
            {"edfig4_depol_models",
             "Noisy charge-pair separation on 2x3 with the lambda=0 calibration twin, "
             "effective depolarization extraction and rescaling"},
            {"edfig9_aux_correlators",
             "Z(0), Im<Z(t)Z(0)> and <Z(t)> for the centre-top and centre-bottom string qubits"},
            {"fig2_energy",
             "Energy error of the loop-ansatz, toric and polarized initial states against "
             "exact diagonalization over an h_E grid"},
            {"fig2_wala_terms",
             "Class-averaged vertex, plaquette, Z and X expectations of the optimized ansatz "
             "versus the analytic record"},
            {"fig3_charges",
             "Separation and excitation heatmaps of an adjacent charge pair under Trotter "
             "dynamics over an h_E grid"},
            {"fig3_conditional",
             "Conditional partner-location maps for the superposition states at fixed time"},
            {"fig3_superposition",
             "Separation dynamics of the +/- interference superposition states"},
            {"fig4_string_szz",
             "Per-link Re<Z(t)Z(0)>, <Z(0)> and S_ZZ maps for the pinned string with a bump"},
            {"fig5_breaking",
             "Vertex excitation buildup with and without the initial string across lambda"},
            {"fig5_resonance",
             "P(A_v) against h_E at fixed time, locating the string-breaking resonance"},
            {"loschmidt_calibration",
             "Echoed state-preparation energy under trajectory noise; extracts the global "
             "depolarization parameter and rescales"},
            {"s4_single_charge_quench",
             "Single mobile excitation via the vertex-sign quench; distance and field maps"},
            {"s5_string_correlator",
             "X-string two-time correlator C(j, t) from the left pinned qubit"},
            {"s6_lambda_zero_strings",
             "String S_ZZ at lambda in {0, 0.25}: motion dominates over breaking"},
            {"trotter_error_scan",
             "Charge-pair separation across Trotter step sizes with error versus dt = 0.1"},
            {"wala_quality",
             "Relative energy error and infidelity of the optimized ansatz against exact "
             "diagonalization"},
        };
        // Catalog contract: stable alphabetical order.
        std::sort(v.begin(), v.end(),
                  [](const ScenarioInfo& a, const ScenarioInfo& b) { return a.name < b.name; });
        return v;
    }();
    return catalog;
}

namespace {

LatticeSpec string_lattice() {
    // Landscape grid with a middle row; pins carry the string endpoints.
    return {4, 3, {{Side::Left, 1, 0}, {Side::Right, 1, 3}}};
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

} // namespace

ExperimentConfig default_config(const std::string& scenario) {
    ExperimentConfig cfg;
    cfg.scenario = scenario;
    cfg.out_dir = "results/" + scenario;

    if (scenario == "wala_quality") {
        cfg.lattice = {3, 4, {}};
        cfg.lambda_grid = {0.0, 0.25};
        cfg.h_e_grid = linspace(0.0, 2.0, 9);
        cfg.n_steps = 0;
    } else if (scenario == "fig2_energy") {
        cfg.lattice = {3, 4, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = linspace(0.0, 2.0, 9);
        cfg.n_steps = 0;
    } else if (scenario == "fig2_wala_terms") {
        cfg.lattice = {3, 4, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 0.3, 0.6, 1.0};
        cfg.n_steps = 0;
    } else if (scenario == "fig3_charges") {
        cfg.lattice = {3, 4, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 0.3, 0.6, 1.0, 2.0};
        cfg.dt = 0.3;
        cfg.n_steps = 9;
        cfg.prep.kind = PrepSpec::Kind::WalaPair;
    } else if (scenario == "fig3_superposition") {
        cfg.lattice = {3, 4, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 2.0};
        cfg.dt = 0.5;
        cfg.n_steps = 7;
        cfg.prep.kind = PrepSpec::Kind::WalaSuperposition;
    } else if (scenario == "fig3_conditional") {
        cfg.lattice = {3, 4, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 2.0};
        cfg.dt = 0.5;
        cfg.n_steps = 7; // t = 3.5
        cfg.prep.kind = PrepSpec::Kind::WalaSuperposition;
    } else if (scenario == "fig4_string_szz") {
        cfg.lattice = string_lattice();
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.1, 0.6, 1.4};
        cfg.dt = 0.3;
        cfg.n_steps = 9;
        cfg.prep.kind = PrepSpec::Kind::WalaString;
    } else if (scenario == "fig5_breaking") {
        cfg.lattice = string_lattice();
        cfg.lambda_grid = {0.0, 0.25, 0.5};
        cfg.h_e_grid = {1.4};
        cfg.dt = 0.3;
        cfg.n_steps = 9; // t = 2.7
        cfg.prep.kind = PrepSpec::Kind::WalaString;
    } else if (scenario == "fig5_resonance") {
        cfg.lattice = string_lattice();
        cfg.lambda_grid = {0.0, 0.25, 0.5};
        cfg.h_e_grid = linspace(1.0, 3.0, 11);
        cfg.dt = 0.2;
        cfg.n_steps = 10; // t = 2
        cfg.prep.kind = PrepSpec::Kind::WalaString;
    } else if (scenario == "edfig4_depol_models") {
        cfg.lattice = {2, 3, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 0.25, 2.25};
        cfg.dt = 0.3;
        cfg.n_steps = 9;
        cfg.prep.kind = PrepSpec::Kind::WalaPair;
        cfg.mode = TrotterMode::GateLevel;
        NoiseConfig nc;
        nc.model.p2 = 0.007;
        nc.model.readout.per_qubit = {{0.006, 0.02}};
        cfg.noise = nc;
    } else if (scenario == "edfig9_aux_correlators") {
        cfg.lattice = string_lattice();
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 0.1, 0.6, 1.4};
        cfg.dt = 0.3;
        cfg.n_steps = 9;
        cfg.prep.kind = PrepSpec::Kind::WalaString;
    } else if (scenario == "s4_single_charge_quench") {
        cfg.lattice = {4, 3, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 0.3, 0.6, 2.0};
        cfg.dt = 0.3;
        cfg.n_steps = 9;
        cfg.prep.kind = PrepSpec::Kind::Wala;
    } else if (scenario == "s5_string_correlator") {
        cfg.lattice = {4, 3, {{Side::Left, 1, 0}}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 0.3, 0.6, 0.8, 2.0};
        cfg.dt = 0.5;
        cfg.n_steps = 8;
        cfg.prep.kind = PrepSpec::Kind::Wala;
    } else if (scenario == "s6_lambda_zero_strings") {
        cfg.lattice = string_lattice();
        cfg.lambda_grid = {0.0, 0.25};
        cfg.h_e_grid = {0.1, 0.6, 1.4};
        cfg.dt = 0.3;
        cfg.n_steps = 9;
        cfg.prep.kind = PrepSpec::Kind::WalaString;
    } else if (scenario == "trotter_error_scan") {
        cfg.lattice = {3, 4, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 2.0};
        cfg.dt = 0.1; // finest grid; the scenario also runs 0.3 and 0.5
        cfg.n_steps = 27;
        cfg.prep.kind = PrepSpec::Kind::WalaPair;
    } else if (scenario == "loschmidt_calibration") {
        cfg.lattice = {2, 3, {}};
        cfg.lambda_grid = {0.25};
        cfg.h_e_grid = {0.0, 0.5, 1.0, 2.0};
        cfg.n_steps = 0;
        cfg.mode = TrotterMode::GateLevel;
        NoiseConfig nc;
        nc.model.p2 = 0.007;
        cfg.noise = nc;
    } else {
        throw std::invalid_argument("unknown scenario '" + scenario + "'");
    }
    return cfg;
}

} // namespace lgt
