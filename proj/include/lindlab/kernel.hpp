// kernel.hpp — contour construction, the coherence kernel k_{x,y}^eps, the integral
// representation check, and the finite-volume coherence bound report

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lindlab/dissipative.hpp"
#include "lindlab/dynamics.hpp"

namespace lindlab {

struct ContourOptions {
    double gamma = 0.25;
    int nodes_per_side = 64;  // composite Gauss-Legendre, panels of 16
    double f_override = -1.0;  // > 0 replaces the measured ||Re D|| + ||Im D||
    double right_offset = std::numeric_limits<double>::quiet_NaN();  // NaN: 0 if gapped, eps/2 otherwise
};

// Anticlockwise rectangle -i(F+g) -> i(F+g) -> -F-g+i(F+g) -> -F-g-i(F+g) -> close,
// with the right segment at Re z = right_offset. Validated to enclose the spectrum
// once, keep Re z < eps, and stay outside the gamma-pseudospectrum off the right segment.
struct Contour {
    double f = 0.0;
    double gamma = 0.0;
    double right_offset = 0.0;
    int nodes_per_side = 0;
    std::vector<Complex> nodes;
    std::vector<Complex> weights;  // include segment direction; integral = sum w_i f(z_i) / (2 pi i)
    double min_sigma_off_right = 0.0;
};

Contour build_contour(const Matrix& d, double eps, const ContourOptions& opts = {});

enum class KernelGeometry { three_block, two_block };

// Built-in closure recipes, materialized on the derived regions.
enum class ClosureRecipe { none, dephasing_min_site, dirichlet };

struct KernelOptions {
    KernelGeometry geometry = KernelGeometry::three_block;
    ContourOptions contour;
    double rel_target = 1e-9;      // node-doubling stop criterion
    int max_nodes_per_side = 1024;
    int threads = 1;
};

struct CoherenceKernel {
    int x = 0;
    int y = 0;
    double eps = 0.0;
    KernelGeometry geometry = KernelGeometry::three_block;
    Region region_x, region_y;
    Matrix values;  // k(u,v) for u in region_x, v in region_y (member order)
    double rel_change = 0.0;
    int nodes_per_side = 0;
    Contour contour;
    BoundaryClosure closure;
};

BoundaryClosure materialize_closure(const LindbladModel& model, ClosureRecipe recipe,
                                    const Region& region_x, const Region& region_y);

CoherenceKernel compute_kernel(const LindbladModel& model, int x, int y, double eps,
                               ClosureRecipe recipe = ClosureRecipe::none,
                               const KernelOptions& opts = {});
CoherenceKernel compute_kernel(const LindbladModel& model, int x, int y, double eps,
                               const BoundaryClosure& closure, const KernelOptions& opts = {});

// Contour route vs dense (eps - L0)^{-1} on an off-diagonal block; returns the max
// entry deviation. rho must be supported on rows in one half and columns in the other.
double verify_integral_representation(const LindbladModel& model, const Region& half,
                                      const BoundaryClosure& closure_half,
                                      const BoundaryClosure& closure_complement,
                                      const Matrix& rho_offblock, double eps,
                                      const KernelOptions& opts = {});

// Triangle-inequality upper bound on ||L_boundary||_infty for the bipartition
// (lambda1, complement): 2||h_Z|| per crossing commutator, 2||L||^2 per crossing
// dissipator, plus the closure terms.
double boundary_norm_bound(const LindbladModel& model, const Region& lambda1,
                           const BoundaryClosure& closure);

struct CoherenceBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double boundary_bound = 0.0;     // bound on ||L_boundary||
    double restricted_kernel_sum = 0.0;
    bool satisfied = false;
    Complex abel_element;
    Complex kernel_term;
    double fit_c = 0.0;
    double fit_mu = 0.0;
    double fit_r2 = 0.0;
    CoherenceKernel kernel;
};

CoherenceBoundReport coherence_bound_report(const LindbladModel& model, const Matrix& rho0, int x,
                                            int y, double eps,
                                            ClosureRecipe recipe = ClosureRecipe::none,
                                            KernelOptions opts = {});

}  // namespace lindlab
