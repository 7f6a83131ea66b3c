#include "lgt/wala.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace lgt {

namespace {
constexpr double kPi = std::numbers::pi;
}

AnalyticExpectations analytic_expectations(double theta) {
    if (theta < 0 || theta > kPi) throw std::invalid_argument("theta must be in [0, pi]");
    double c = std::cos(theta);
    return {1.0, std::sin(theta), c * c, c, 0.0};
}

double energy_theta(double theta, int lx, int ly, const HamiltonianParams& params) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double bulk_links = (lx - 2) * (ly - 1) + (lx - 1) * (ly - 2);
    const double boundary_links = 2.0 * (lx - 1 + ly - 1);
    return -params.j_e * lx * ly
           - params.j_m * (lx - 1) * (ly - 1) * s
           - params.h_e * bulk_links * c * c
           - params.h_e * boundary_links * c;
}

double energy_density_thermo(double theta, const HamiltonianParams& params) {
    const double c = std::cos(theta);
    return -params.j_e - params.j_m * std::sin(theta) - 2.0 * params.h_e * c * c;
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

WalaSolution optimize_theta(int lx, int ly, const HamiltonianParams& params) {
    if (params.j_m <= 0) throw std::invalid_argument("optimize_theta requires J_M > 0");
    auto f = [&](double th) { return energy_theta(th, lx, ly, params); };

    // Coarse bracket of the global minimum; the energy is a low-order trig
    // polynomial so a fixed grid cannot miss the basin.
    constexpr int kGrid = 4096;
    int best = kGrid;
    double best_val = f(kPi / 2);
    for (int i = 0; i <= kGrid; ++i) {
        double th = kPi / 2 * i / kGrid;
        double v = f(th);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = kPi / 2 * std::max(0, best - 1) / kGrid;
    double hi = kPi / 2 * std::min(kGrid, best + 1) / kGrid;
    double theta = golden_section_minimize(f, lo, hi);

    // Degenerate minima (crossover point) resolve to the toric-code angle.
    if (f(kPi / 2) <= f(theta) + 1e-14) theta = kPi / 2;

    return {theta, f(theta), analytic_expectations(theta)};
}

double theta_thermo(double h_e, double j_m) {
    if (j_m <= 0) throw std::invalid_argument("theta_thermo requires J_M > 0");
    if (h_e < 0) throw std::invalid_argument("theta_thermo requires h_E >= 0");
    if (h_e <= j_m / 4) return kPi / 2;
    return std::asin(j_m / (4.0 * h_e));
}

} // namespace lgt
