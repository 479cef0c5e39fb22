// dynamics.cpp — superoperator assembly, propagation, steady states, Abel averages

#include "lindlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

namespace lindlab {

namespace {

constexpr int kDenseExpSiteCap = 24;
constexpr int kDenseSvdSiteCap = 16;

Eigen::SparseLU<SparseMatrix>& factorize(Eigen::SparseLU<SparseMatrix>& lu, SparseMatrix m) {
    m.makeCompressed();
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw std::runtime_error("sparse LU factorization failed");
    return lu;
}

}  // namespace

DensityMatrix DensityMatrix::pure_site(int n, int site) {
    Matrix rho = Matrix::Zero(n, n);
    rho(site, site) = 1.0;
    return {rho};
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    return {Matrix::Identity(n, n) / static_cast<double>(n)};
}

DensityMatrix DensityMatrix::uniform_superposition(int n) {
    Vector psi = Vector::Constant(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    return from_vector(psi);
}

DensityMatrix DensityMatrix::pair_superposition(int n, int a, int b) {
    Vector psi = Vector::Zero(n);
    psi(a) = Complex(M_SQRT1_2, 0.0);
    psi(b) = Complex(M_SQRT1_2, 0.0);
    return from_vector(psi);
}

DensityMatrix DensityMatrix::from_vector(const Vector& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw std::invalid_argument("density: zero vector");
    Vector unit = psi / norm;
    return {unit * unit.adjoint()};
}

StateDiagnostics state_diagnostics(const Matrix& rho) {
    StateDiagnostics d;
    d.herm_deviation = num::hermiticity_deviation(rho);
    d.trace_deviation = std::abs(rho.trace() - Complex(1.0, 0.0));
    d.min_eigenvalue = num::min_eigenvalue_hermitian(num::hermitian_part(rho));
    return d;
}

void require_state(const Matrix& rho, double tol) {
    const StateDiagnostics d = state_diagnostics(rho);
    if (d.herm_deviation > tol || d.trace_deviation > tol || d.min_eigenvalue < -tol) {
        throw std::runtime_error("density matrix violates state tolerances");
    }
}

SparseMatrix assemble_superoperator(const LindbladModel& model, bool adjoint, int site_cap) {
    const Eigen::Index n = model.lattice->size();
    if (n > site_cap) {
        throw std::runtime_error("assemble_superoperator: site count exceeds cap");
    }
    const SparseMatrix id = num::sparse_identity(n);
    const SparseMatrix h = model.hamiltonian();
    const Complex unit_sign = adjoint ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
    SparseMatrix s = unit_sign * (num::kron(id, h) - num::kron(SparseMatrix(h.transpose()), id));
    for (const auto& jump : model.jump_operators) {
        const SparseMatrix l = model.embed(jump.support, jump.matrix);
        const SparseMatrix ldag = SparseMatrix(l.adjoint());
        const SparseMatrix q = ldag * l;  // L*L
        if (adjoint) {
            s += num::kron(SparseMatrix(l.transpose()), ldag);
        } else {
            s += num::kron(SparseMatrix(l.conjugate()), l);
        }
        s -= 0.5 * num::kron(id, q);
        s -= 0.5 * num::kron(SparseMatrix(q.transpose()), id);
    }
    s.makeCompressed();
    return s;
}

Matrix apply_lindbladian(const LindbladModel& model, const Matrix& rho) {
    const Matrix h = model.hamiltonian_dense();
    Matrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
    for (const auto& jump : model.jump_operators) {
        const Matrix l = Matrix(model.embed(jump.support, jump.matrix));
        const Matrix q = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (q * rho + rho * q);
    }
    return out;
}

Matrix apply_adjoint_lindbladian(const LindbladModel& model, const Matrix& a) {
    const Matrix h = model.hamiltonian_dense();
    Matrix out = Complex(0.0, 1.0) * (h * a - a * h);
    for (const auto& jump : model.jump_operators) {
        const Matrix l = Matrix(model.embed(jump.support, jump.matrix));
        const Matrix q = l.adjoint() * l;
        out += l.adjoint() * a * l - 0.5 * (q * a + a * q);
    }
    return out;
}

Matrix propagate(const LindbladModel& model, const Matrix& rho0, double t) {
    if (t < 0) throw std::invalid_argument("propagate: negative time");
    const Eigen::Index n = model.lattice->size();
    if (rho0.rows() != n || rho0.cols() != n) {
        throw std::invalid_argument("propagate: dimension mismatch");
    }
    if (t == 0) return rho0;
    const SparseMatrix s = assemble_superoperator(model);
    if (n <= kDenseExpSiteCap) {
        const Matrix st = Matrix(s) * t;
        return num::unvec(num::expm(st) * num::vec(rho0), n);
    }
    return num::unvec(num::rk45_sparse_expv(s, num::vec(rho0), t), n);
}

DensityMatrix evolve(const LindbladModel& model, const DensityMatrix& rho0, double t) {
    Matrix raw = propagate(model, rho0.rho, t);
    const StateDiagnostics d = state_diagnostics(raw);
    if (d.herm_deviation > 1e-8 || d.trace_deviation > 1e-8 || d.min_eigenvalue < -1e-8) {
        throw std::runtime_error("evolve: tolerance violation beyond 1e-8");
    }
    Matrix herm = num::hermitian_part(raw);
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    RealVector vals = es.eigenvalues();
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < 0.0 && vals(i) >= -1e-10) vals(i) = 0.0;
    }
    Matrix repaired =
        es.eigenvectors() * vals.asDiagonal().toDenseMatrix().cast<Complex>() * es.eigenvectors().adjoint();
    const double tr = repaired.trace().real();
    if (tr <= 0) throw std::runtime_error("evolve: nonpositive trace after repair");
    return {repaired / tr};
}

namespace {

SteadyBasis steady_dense_svd(const SparseMatrix& s, Eigen::Index n, double tol_factor) {
    Eigen::BDCSVD<Matrix> svd(Matrix(s), Eigen::ComputeFullV);
    const RealVector sigma = svd.singularValues();
    SteadyBasis basis;
    basis.sigma_max = sigma.size() ? sigma(0) : 0.0;
    const double tol = tol_factor * std::max(basis.sigma_max, 1.0);
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) <= tol) {
            basis.kernel_matrices.push_back(num::unvec(svd.matrixV().col(i), n));
        }
    }
    return basis;
}

SteadyBasis steady_shift_invert(const SparseMatrix& s, Eigen::Index n, double tol_factor) {
    SteadyBasis basis;
    basis.sigma_max = num::sparse_operator_norm_estimate(s);
    const double tol = tol_factor * std::max(basis.sigma_max, 1.0);
    const Eigen::Index dim = s.rows();
    // shift trades iteration pollution (~shift) against solve roundoff
    // (~eps ||S|| / shift); 1e-4 ||S|| keeps both under the 1e-10 kernel tolerance
    const Complex shift(1e-4 * std::max(basis.sigma_max, 1.0), 0.0);
    SparseMatrix shifted = s;
    shifted -= shift * num::sparse_identity(dim);
    Eigen::SparseLU<SparseMatrix> lu;
    factorize(lu, shifted);

    int block = std::min<Eigen::Index>(8, dim);
    while (true) {
        Matrix q(dim, block);
        for (Eigen::Index c = 0; c < block; ++c) {
            for (Eigen::Index r = 0; r < dim; ++r) {
                q(r, c) = Complex(num::gaussian(41, c, 2 * r), num::gaussian(41, c, 2 * r + 1));
            }
        }
        for (int iter = 0; iter < 40; ++iter) {
            Matrix next(dim, block);
            for (Eigen::Index c = 0; c < block; ++c) next.col(c) = lu.solve(q.col(c));
            Eigen::HouseholderQR<Matrix> qr(next);
            q = qr.householderQ() * Matrix::Identity(dim, block);
        }
        // Ritz extraction via the SVD of S q (no Gram matrix, which would square
        // the conditioning and floor the residuals at sqrt(eps))
        Matrix sq(dim, block);
        for (Eigen::Index c = 0; c < block; ++c) sq.col(c) = s * q.col(c);
        Eigen::BDCSVD<Matrix> svd(sq, Eigen::ComputeFullV);
        int found = 0;
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) <= tol) {
                keep.push_back(i);
                ++found;
            }
        }
        if (found == block && block < dim) {
            block = std::min<Eigen::Index>(2 * block, dim);
            continue;  // kernel may be larger than the block
        }
        for (Eigen::Index i : keep) {
            basis.kernel_matrices.push_back(num::unvec((q * svd.matrixV().col(i)).eval(), n));
        }
        break;
    }
    return basis;
}

}  // namespace

SteadyBasis steady_states(const LindbladModel& model, double tol_factor) {
    const Eigen::Index n = model.lattice->size();
    const SparseMatrix s = assemble_superoperator(model);
    SteadyBasis basis = n <= kDenseSvdSiteCap ? steady_dense_svd(s, n, tol_factor)
                                              : steady_shift_invert(s, n, tol_factor);
    basis.empty_kernel = basis.kernel_matrices.empty();
    const double residual_tol = 1e-8 * std::max(basis.sigma_max, 1.0);
    for (const auto& k : basis.kernel_matrices) {
        basis.residuals.push_back((s * num::vec(k)).norm());
        // kernel vectors carry an arbitrary phase; align so the trace is real >= 0
        Matrix aligned = k;
        const Complex tr_k = k.trace();
        if (std::abs(tr_k) > 1e-12) aligned *= std::conj(tr_k) / std::abs(tr_k);
        Eigen::SelfAdjointEigenSolver<Matrix> es(num::hermitian_part(aligned));
        Matrix positive = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (es.eigenvalues()(i) > 0) {
                positive += es.eigenvalues()(i) * es.eigenvectors().col(i) *
                            es.eigenvectors().col(i).adjoint();
            }
        }
        const double tr = positive.trace().real();
        if (tr <= 1e-12) continue;
        Matrix candidate = positive / tr;
        if ((s * num::vec(candidate)).norm() <= residual_tol) {
            basis.states.push_back({std::move(candidate)});
        }
    }
    return basis;
}

Matrix abel_average(const LindbladModel& model, const Matrix& rho0, double eps, bool validate) {
    if (eps <= 0) throw std::invalid_argument("abel_average: eps must be positive");
    const Eigen::Index n = model.lattice->size();
    SparseMatrix s = assemble_superoperator(model);
    SparseMatrix resolvent_matrix = -s;
    resolvent_matrix += Complex(eps, 0.0) * num::sparse_identity(s.rows());
    Eigen::SparseLU<SparseMatrix> lu;
    factorize(lu, resolvent_matrix);
    const Vector sol = lu.solve(eps * num::vec(rho0));
    if (lu.info() != Eigen::Success) throw std::runtime_error("abel_average: solve failed");
    Matrix out = num::unvec(sol, n);
    if (validate) require_state(out, 1e-8);
    return out;
}

Matrix abel_average_quadrature(const LindbladModel& model, const Matrix& rho0, double eps,
                               double rel_tol) {
    if (eps <= 0) throw std::invalid_argument("abel_average_quadrature: eps must be positive");
    const Eigen::Index n = model.lattice->size();
    const Matrix s = Matrix(assemble_superoperator(model));
    const Vector rho_vec = num::vec(rho0);
    const double horizon = 40.0 / eps;
    const auto [gl_nodes, gl_weights] = num::gauss_legendre(12);

    auto integrand = [&](double t) -> Vector {
        return std::exp(-eps * t) * (num::expm(s * t) * rho_vec);
    };
    auto panel = [&](double a, double b) -> Vector {
        Vector acc = Vector::Zero(n * n);
        for (int i = 0; i < gl_nodes.size(); ++i) {
            acc += gl_weights(i) * integrand(a + 0.5 * (b - a) * (gl_nodes(i) + 1.0));
        }
        return (0.5 * (b - a)) * acc;
    };
    // recursive panel refinement; the transient near t = 0 needs panels of width
    // ~ 1/||S|| while the exponential tail tolerates wide ones
    std::function<Vector(double, double, const Vector&, double, int)> refine =
        [&](double a, double b, const Vector& coarse, double tol, int depth) -> Vector {
        const double mid = 0.5 * (a + b);
        const Vector left = panel(a, mid);
        const Vector right = panel(mid, b);
        const Vector fine = left + right;
        if ((fine - coarse).norm() <= tol || depth >= 26) return fine;
        return refine(a, mid, left, 0.5 * tol, depth + 1) +
               refine(mid, b, right, 0.5 * tol, depth + 1);
    };

    const Vector rough = panel(0.0, horizon);
    const double tol = rel_tol * std::max(rough.norm(), rho_vec.norm() * 0.01);
    return num::unvec((eps * refine(0.0, horizon, rough, tol, 0)).eval(), n);
}

TraceNormBoundReport trace_norm_bound_check(const LindbladModel& model, int n_pairs,
                                            std::uint64_t seed) {
    const Eigen::Index n = model.lattice->size();
    const LocalityReport loc = validate_locality(model);
    TraceNormBoundReport report;
    report.cover_count = loc.cover_count;
    report.norm = loc.norm;
    report.per_region = loc.per_region;
    report.paper_bound = 2.0 * loc.cover_count * loc.norm * (1.0 + loc.norm * loc.per_region);
    for (int p = 0; p < n_pairs; ++p) {
        Vector psi(n), phi(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            psi(i) = Complex(num::gaussian(seed, p, 4 * i), num::gaussian(seed, p, 4 * i + 1));
            phi(i) = Complex(num::gaussian(seed, p, 4 * i + 2), num::gaussian(seed, p, 4 * i + 3));
        }
        psi.normalize();
        phi.normalize();
        const Matrix image = apply_lindbladian(model, psi * phi.adjoint());
        report.sampled_lower_bound = std::max(report.sampled_lower_bound, num::trace_norm(image));
    }
    report.pass = report.sampled_lower_bound <= report.paper_bound + 1e-10;
    return report;
}

}  // namespace lindlab
