// numerics.hpp — shared linear-algebra helpers, quadrature, RNG, and a small thread pool

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lindlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

namespace num {

// Gauss-Legendre nodes/weights on [-1, 1] via the Golub-Welsch Jacobi matrix.
std::pair<RealVector, RealVector> gauss_legendre(int n);

// Kronecker product of sparse matrices, (X ⊗ Y)[i1*rows(Y)+i2, j1*cols(Y)+j2] = X(i1,j1) Y(i2,j2).
SparseMatrix kron(const SparseMatrix& x, const SparseMatrix& y);

SparseMatrix sparse_identity(Eigen::Index n);

// Column-stacking vectorization, vec(A rho B) = (B^T ⊗ A) vec(rho).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index rows);

double operator_norm(const Matrix& m);       // largest singular value
double min_singular_value(const Matrix& m);
double trace_norm(const Matrix& m);          // sum of singular values
double min_eigenvalue_hermitian(const Matrix& m);
double max_eigenvalue_hermitian(const Matrix& m);

Matrix hermitian_part(const Matrix& m);       // (M + M*)/2
Matrix antihermitian_part_over_i(const Matrix& m);  // (M - M*)/(2i), Hermitian

double hermiticity_deviation(const Matrix& m);

Matrix expm(const Matrix& m);

// Adaptive Dormand-Prince 5(4) for y' = S y over [0, t]; used where the dense
// matrix exponential is too large.
Vector rk45_sparse_expv(const SparseMatrix& s, const Vector& y0, double t,
                        double rel_tol = 1e-10, double abs_tol = 1e-13);

// Largest singular value of a sparse operator, estimated by power iteration on S*S.
double sparse_operator_norm_estimate(const SparseMatrix& s, int iters = 30, std::uint64_t seed = 7);

// Counter-based RNG: a pure function of (seed, realization, counter), so parallel
// workers need no shared state.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t realization, std::uint64_t counter);
double uniform01(std::uint64_t seed, std::uint64_t realization, std::uint64_t counter);
double gaussian(std::uint64_t seed, std::uint64_t realization, std::uint64_t counter);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Outputs must be written
// to per-index slots; any reduction happens afterwards in index order so results
// are independent of the worker count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace num
}  // namespace lindlab
