#pragma once

#include <functional>

#include "lgt/compilers.hpp"

namespace lgt {

struct AnalyticExpectations {
    double a_v;        // vertex parity, always 1
    double b_p;        // plaquette parity, sin(theta)
    double z_bulk;     // cos^2(theta)
    double z_boundary; // cos(theta)
    double x_link;     // 0
};

AnalyticExpectations analytic_expectations(double theta);

// Variational energy of the loop ansatz on an lx-by-ly grid. lam never enters:
// the ansatz is a superposition of closed loops, so every <X_l> vanishes.
double energy_theta(double theta, int lx, int ly, const HamiltonianParams& params);

// Thermodynamic-limit energy density (terms proportional to lx*ly only).
double energy_density_thermo(double theta, const HamiltonianParams& params);

struct WalaSolution {
    double theta;
    double energy;
    AnalyticExpectations expectations;
};

// Global minimizer of energy_theta on [0, pi/2]: coarse scan to bracket, then
// golden-section refinement; exact ties resolve to theta = pi/2.
WalaSolution optimize_theta(int lx, int ly, const HamiltonianParams& params);

// Thermodynamic-limit optimum: pi/2 below the crossover h_E = J_M/4, then
// arcsin(J_M / 4 h_E).
double theta_thermo(double h_e, double j_m);

// Generic bracketed scalar minimizer used by optimize_theta; exposed for the
// oracle tests.
double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-11);

} // namespace lgt
