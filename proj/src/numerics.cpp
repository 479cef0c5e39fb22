// numerics.cpp — implementation of shared numerical helpers

#include "lindlab/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace lindlab::num {

std::pair<RealVector, RealVector> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    RealMatrix jacobi = RealMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(jacobi);
    RealVector nodes = es.eigenvalues();
    RealVector weights(n);
    for (int i = 0; i < n; ++i) {
        const double v = es.eigenvectors()(0, i);
        weights(i) = 2.0 * v * v;
    }
    return {nodes, weights};
}

SparseMatrix kron(const SparseMatrix& x, const SparseMatrix& y) {
    SparseMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<std::size_t>(x.nonZeros()) * static_cast<std::size_t>(y.nonZeros()));
    for (int kx = 0; kx < x.outerSize(); ++kx) {
        for (SparseMatrix::InnerIterator ix(x, kx); ix; ++ix) {
            for (int ky = 0; ky < y.outerSize(); ++ky) {
                for (SparseMatrix::InnerIterator iy(y, ky); iy; ++iy) {
                    trips.emplace_back(ix.row() * y.rows() + iy.row(),
                                       ix.col() * y.cols() + iy.col(),
                                       ix.value() * iy.value());
                }
            }
        }
    }
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SparseMatrix sparse_identity(Eigen::Index n) {
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index rows) {
    if (v.size() % rows != 0) throw std::invalid_argument("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

namespace {

Eigen::JacobiSVD<Matrix> small_svd(const Matrix& m) {
    return Eigen::JacobiSVD<Matrix>(m);
}

RealVector singular_values(const Matrix& m) {
    if (m.rows() <= 48) return small_svd(m).singularValues();
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues();
}

}  // namespace

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

double min_singular_value(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    const RealVector sv = singular_values(m);
    return sv(sv.size() - 1);
}

double trace_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m).sum();
}

double min_eigenvalue_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Matrix hermitian_part(const Matrix& m) {
    return 0.5 * (m + m.adjoint());
}

Matrix antihermitian_part_over_i(const Matrix& m) {
    return (m - m.adjoint()) / Complex(0.0, 2.0);
}

double hermiticity_deviation(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix expm(const Matrix& m) {
    return m.exp();
}

namespace {

struct Rk45Step {
    Vector y;
    double err;
};

Rk45Step dp_step(const SparseMatrix& s, const Vector& y, double h) {
    // Dormand-Prince coefficients
    const Vector k1 = s * y;
    const Vector k2 = s * (y + h * (1.0 / 5.0) * k1);
    const Vector k3 = s * (y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    const Vector k4 = s * (y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
    const Vector k5 = s * (y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                                    64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
    const Vector k6 = s * (y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                    46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                    5103.0 / 18656.0 * k5));
    const Vector y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                               2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
    const Vector k7 = s * y5;
    const Vector y4 = y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                               393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                               187.0 / 2100.0 * k6 + 1.0 / 40.0 * k7);
    return {y5, (y5 - y4).norm()};
}

}  // namespace

Vector rk45_sparse_expv(const SparseMatrix& s, const Vector& y0, double t,
                        double rel_tol, double abs_tol) {
    if (t < 0) throw std::invalid_argument("rk45_sparse_expv: negative time");
    if (t == 0) return y0;
    Vector y = y0;
    double time = 0.0;
    double h = t / 64.0;
    const int max_steps = 2000000;
    for (int step = 0; step < max_steps && time < t; ++step) {
        h = std::min(h, t - time);
        const Rk45Step r = dp_step(s, y, h);
        const double scale = abs_tol + rel_tol * std::max(y.norm(), r.y.norm());
        const double err = r.err / scale;
        if (err <= 1.0) {
            time += h;
            y = r.y;
        }
        const double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }
    if (time < t) throw std::runtime_error("rk45_sparse_expv: step limit exceeded");
    return y;
}

double sparse_operator_norm_estimate(const SparseMatrix& s, int iters, std::uint64_t seed) {
    const Eigen::Index n = s.cols();
    if (n == 0) return 0.0;
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = Complex(gaussian(seed, 0, 2 * i), gaussian(seed, 0, 2 * i + 1));
    }
    v.normalize();
    const SparseMatrix sh = SparseMatrix(s.adjoint());
    double sigma = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vector w = sh * (s * v).eval();
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        sigma = std::sqrt(nw);
        v = w / nw;
    }
    return sigma;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t realization, std::uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ realization) ^ counter);
}

double uniform01(std::uint64_t seed, std::uint64_t realization, std::uint64_t counter) {
    return static_cast<double>(counter_hash(seed, realization, counter) >> 11) * 0x1.0p-53;
}

double gaussian(std::uint64_t seed, std::uint64_t realization, std::uint64_t counter) {
    // Box-Muller on two decorrelated counter streams
    const double u1 = std::max(uniform01(seed, realization, 2 * counter), 1e-300);
    const double u2 = uniform01(seed, realization, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace lindlab::num
