// dynamics.hpp — vectorized superoperators, time evolution, steady states and Abel averages

#pragma once

#include <cstdint>
#include <vector>

#include "lindlab/model.hpp"
#include "lindlab/numerics.hpp"

namespace lindlab {

// Hermitian, positive-semidefinite, unit-trace matrix in the site basis.
struct DensityMatrix {
    Matrix rho;

    static DensityMatrix pure_site(int n, int site);
    static DensityMatrix maximally_mixed(int n);
    static DensityMatrix uniform_superposition(int n);
    static DensityMatrix pair_superposition(int n, int a, int b);
    static DensityMatrix from_vector(const Vector& psi);
};

struct StateDiagnostics {
    double herm_deviation = 0.0;
    double trace_deviation = 0.0;
    double min_eigenvalue = 0.0;
};

StateDiagnostics state_diagnostics(const Matrix& rho);
void require_state(const Matrix& rho, double tol);

// Sparse matrix of L (or its Heisenberg adjoint) under column-stacking
// vectorization, vec(A rho B) = (B^T ⊗ A) vec(rho).
SparseMatrix assemble_superoperator(const LindbladModel& model, bool adjoint = false,
                                    int site_cap = 64);

// Direct dense action of L (independent of the vectorized assembly).
Matrix apply_lindbladian(const LindbladModel& model, const Matrix& rho);
Matrix apply_adjoint_lindbladian(const LindbladModel& model, const Matrix& a);

// Raw exp(tL)(rho0): dense scaling-and-squaring up to 24 sites, adaptive RK45 above.
Matrix propagate(const LindbladModel& model, const Matrix& rho0, double t);

// Validated evolution: Hermitize guard, clip eigenvalues in [-1e-10, 0) and
// renormalize the trace; deviations beyond 1e-8 are numerical failures.
DensityMatrix evolve(const LindbladModel& model, const DensityMatrix& rho0, double t);

struct SteadyBasis {
    std::vector<Matrix> kernel_matrices;      // unvectorized orthonormal kernel vectors
    std::vector<double> residuals;            // ||L(k)||_F per kernel matrix
    std::vector<DensityMatrix> states;        // trace-normalized positive representatives
    double sigma_max = 0.0;
    bool empty_kernel = false;
};

SteadyBasis steady_states(const LindbladModel& model, double tol_factor = 1e-10);

// Abel average eps (eps - L)^{-1}(rho0) via a sparse direct solve.
Matrix abel_average(const LindbladModel& model, const Matrix& rho0, double eps,
                    bool validate = true);

// Independent oracle: eps * integral_0^T e^{-eps t} exp(tL)(rho0) dt with T = 40/eps,
// composite Gauss-Legendre with panel doubling.
Matrix abel_average_quadrature(const LindbladModel& model, const Matrix& rho0, double eps,
                               double rel_tol = 1e-8);

struct TraceNormBoundReport {
    double sampled_lower_bound = 0.0;
    double paper_bound = 0.0;
    int cover_count = 0;
    double norm = 0.0;
    int per_region = 0;
    bool pass = false;
};

// Randomized lower bound on the induced trace norm of L against 2 C_R N (1 + N I)
// with C_R, N, I the measured locality constants.
TraceNormBoundReport trace_norm_bound_check(const LindbladModel& model, int n_pairs = 64,
                                            std::uint64_t seed = 1);

}  // namespace lindlab
