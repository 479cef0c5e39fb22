// dissipative.hpp — non-hermitian Hamiltonians D_Ω with boundary closures,
// spectral envelopes, pseudospectra, rank-one identities and dark states

#pragma once

#include <string>
#include <vector>

#include "lindlab/model.hpp"

namespace lindlab {

// Admissible boundary Lindbladian terms (b_Z, B_alpha) attached to a region.
struct BoundaryClosure {
    enum class Kind { none, dephasing_site, dirichlet, explicit_terms };
    Kind kind = Kind::none;
    std::vector<HamiltonianTerm> hamiltonian_terms;  // b_Z
    std::vector<JumpOperator> jump_operators;        // B_alpha
};

BoundaryClosure closure_none();

// B_u = |u><u| at the listed sites.
BoundaryClosure closure_dephasing_sites(const LatticePtr& lattice, const std::vector<int>& sites);

// B_x = sqrt(2 (deg_Lambda(x) - deg_region(x))) |x><x| at region sites adjacent to the
// complement; together with the coherence-creation dissipator this realizes the
// Dirichlet Laplacian of the region as a subgraph of the parent lattice.
BoundaryClosure closure_dirichlet(const Region& region);

BoundaryClosure closure_explicit(std::vector<HamiltonianTerm> terms, std::vector<JumpOperator> jumps);

// Checks closure supports lie in the inner boundary family of `region` at range R
// and that norms satisfy the model's locality bound.
void validate_closure(const LindbladModel& model, const Region& region,
                      const BoundaryClosure& closure);

struct DissipativeHamiltonian {
    Region region;
    Matrix matrix;  // -i sum h_Z - 1/2 sum L*L (+ closure terms), indexed by region members
    std::string provenance;

    int local_index(int site) const;  // position of a lattice site within the region
};

// Restriction to `region`: model terms with support inside the region plus closure
// terms with support inside the region.
DissipativeHamiltonian build_dissipative(const LindbladModel& model, const Region& region,
                                         const BoundaryClosure& closure);

struct SpectralEnvelope {
    Vector eigenvalues;
    double re_norm = 0.0;   // ||Re D||
    double im_norm = 0.0;   // ||Im D||
    double box_extent = 0.0;  // re_norm + im_norm; spectrum lies in F([-1,0] + i[-1,1])
    double gap = 0.0;       // smallest eigenvalue of -Re D
    double max_real_part = 0.0;
    bool eigenvalues_in_box = false;
};

SpectralEnvelope spectral_envelope(const Matrix& d, int dim_cap = 2048);

struct PseudospectrumPoint {
    Complex z;
    double sigma_min = 0.0;
    bool member = false;  // sigma_min < eps
};

std::vector<PseudospectrumPoint> pseudospectrum_grid(const Matrix& a, Complex corner_lo,
                                                     Complex corner_hi, int nx, int ny, double eps,
                                                     int threads = 1);

struct PerturbationCheckPoint {
    Complex z;
    double measured = 0.0;
    double bound = 0.0;
    bool ok = false;
};

struct PerturbationCheckReport {
    std::vector<PerturbationCheckPoint> points;
    double b_norm = 0.0;
    bool all_ok = false;
};

// Lemma-style check: for z outside the eps-pseudospectrum of A and ||B|| < eps,
// ||(A + B - z)^{-1}|| <= 1/(eps - ||B||).
PerturbationCheckReport perturbation_bound_check(const Matrix& a, const Matrix& b, double eps,
                                                 const std::vector<Complex>& z_grid);

struct RankOneCheckReport {
    double deviation_plus = 0.0;   // update with +(2-g)^{-1} G P G
    double deviation_minus = 0.0;  // update with -(2-g)^{-1} G P G
    std::string matched;           // "plus", "minus", or "none"
    Complex denominator;           // 1/strength - <delta_0, G delta_0>
};

// Compares direct inversion of (z - D_hat - strength |site><site|) against both sign
// variants of the rank-one update formula.
RankOneCheckReport rank_one_resolvent_check(const Matrix& d_hat, int site, Complex z,
                                            double strength = 0.5);

// min over the (eps, E) grid of Re(2 - <delta_site, (eps + iE - D_hat)^{-1} delta_site>).
double rank_one_denominator_infimum(const Matrix& d_hat, int site,
                                    const std::vector<double>& e_values,
                                    const std::vector<double>& eps_values);

struct DarkState {
    Vector psi;
    double energy = 0.0;  // <psi, H psi>
};

// Orthonormal basis of { psi : L_a psi = 0 for all a } intersected with H-eigenvectors.
std::vector<DarkState> dark_states(const LindbladModel& model, double tol = 1e-10);

}  // namespace lindlab
