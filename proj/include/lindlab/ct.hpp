// ct.hpp — non-normal Combes-Thomas machinery: the weighted sum S_alpha and
// both bound regimes, plus verification sweeps against dense resolvents

#pragma once

#include <vector>

#include "lindlab/lattice.hpp"
#include "lindlab/numerics.hpp"

namespace lindlab {

struct SAlphaProfile {
    double alpha = 0.0;
    double row_sum = 0.0;  // sup_x sum_y |A(x,y)| e^{alpha d(x,y)}
    double col_sum = 0.0;
    double s_alpha = 0.0;  // geometric mean
};

// Entries pairing disconnected sites must vanish; otherwise the profile is infinite
// and this throws.
SAlphaProfile s_alpha(const Matrix& a, const Lattice& lat, double alpha);

enum class CtMode { small_mu, small_eps };

// Thm-style bound value at (x, y, z). Preconditions: sigma_min(z - A) >= eps;
// small_mu additionally needs S_mu < eps and mu < alpha, small_eps needs eps < 2 S_alpha.
double ct_bound(const Matrix& a, const Lattice& lat, Complex z, double eps, int x, int y,
                CtMode mode, double alpha, double mu = 0.0);

struct CtViolation {
    Complex z;
    int x = 0, y = 0;
    double measured = 0.0;
    double bound = 0.0;
};

struct CtVerifyReport {
    int grid_points = 0;
    int pairs_checked = 0;
    std::vector<CtViolation> violations;
    double min_margin = 0.0;  // min over checks of bound - measured
};

// eps at each z is min(eps_cap, sigma_min(z - A) * (1 - deflation)); the measured
// sigma_min keeps every grid point admissible.
struct EpsRule {
    double eps_cap = std::numeric_limits<double>::infinity();
    double deflation = 1e-6;
};

// Checks |<x|(z-A)^{-1}|y>| <= (2/eps) exp(-alpha eps d(x,y) / (2 S_alpha)) for every
// site pair and grid point; expected to return no violations.
CtVerifyReport ct_verify_region(const Matrix& a, const Lattice& lat,
                                const std::vector<Complex>& z_grid, const EpsRule& rule,
                                double alpha, int threads = 1);

}  // namespace lindlab
