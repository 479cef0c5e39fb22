#include "doctest.h"

#include <cmath>

#include "lindlab/dynamics.hpp"

using namespace lindlab;

namespace {

LindbladModel dephasing_plus_hopping(int n, double rate = 1.0, double lambda = 0.0,
                                     std::uint64_t seed = 3) {
    auto chain = build_chain(n);
    RealVector omega = RealVector::Zero(n);
    if (lambda != 0.0) {
        for (int i = 0; i < n; ++i) omega(i) = 2.0 * num::uniform01(seed, 0, i) - 1.0;
    }
    return compose_models(dephasing_model(chain, rate), anderson_model(chain, lambda, omega));
}

Matrix random_state(int n, std::uint64_t seed) {
    Vector psi(n);
    for (int i = 0; i < n; ++i) {
        psi(i) = Complex(num::gaussian(seed, 0, 2 * i), num::gaussian(seed, 0, 2 * i + 1));
    }
    return DensityMatrix::from_vector(psi).rho;
}

}  // namespace

TEST_CASE("two-site dephasing superoperator is diagonal (0,-1,-1,0)") {
    auto chain = build_chain(2);
    const auto model = dephasing_model(chain);
    const Matrix s = Matrix(assemble_superoperator(model));
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = -1.0;
    expected(2, 2) = -1.0;
    CHECK((s - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("vectorization convention on random triples") {
    const int n = 4;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Matrix a(n, n), b(n, n), rho(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                const auto g = [&](int k) {
                    return Complex(num::gaussian(seed, k, 2 * (r * n + c)),
                                   num::gaussian(seed, k, 2 * (r * n + c) + 1));
                };
                a(r, c) = g(0);
                b(r, c) = g(1);
                rho(r, c) = g(2);
            }
        }
        const SparseMatrix sa = a.sparseView();
        const SparseMatrix sb = b.sparseView();
        const Vector lhs = num::vec((a * rho * b).eval());
        const Vector rhs = num::kron(SparseMatrix(sb.transpose()), sa) * num::vec(rho);
        CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }
}

TEST_CASE("adjoint superoperator annihilates the identity") {
    const auto model = dephasing_plus_hopping(5, 1.0, 1.5);
    const SparseMatrix s_adj = assemble_superoperator(model, true);
    const Vector image = s_adj * num::vec(Matrix::Identity(5, 5).eval());
    CHECK(image.norm() <= 1e-12);
    // equivalently: trace preservation of the non-adjoint generator
    const SparseMatrix s = assemble_superoperator(model);
    const Vector id_vec = num::vec(Matrix::Identity(5, 5).eval());
    CHECK((SparseMatrix(s.adjoint()) * id_vec).norm() <= 1e-12);
}

TEST_CASE("superoperator agrees with the direct dense action") {
    const auto model = dephasing_plus_hopping(4, 0.7, 2.0);
    const SparseMatrix s = assemble_superoperator(model);
    const Matrix rho = random_state(4, 11);
    const Vector via_superop = s * num::vec(rho);
    const Vector direct = num::vec(apply_lindbladian(model, rho));
    CHECK((via_superop - direct).norm() <= 1e-12 * std::max(1.0, direct.norm()));
}

TEST_CASE("coherence creation annihilates the uniform projector") {
    auto chain = build_chain(3);
    const auto model = coherence_creation_model(chain);
    const Matrix uniform = DensityMatrix::uniform_superposition(3).rho;
    CHECK(apply_lindbladian(model, uniform).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("single-qubit dephasing decay") {
    auto chain = build_chain(2);
    const auto model = dephasing_model(chain);
    const Matrix rho0 = DensityMatrix::pair_superposition(2, 0, 1).rho;
    for (double t : {0.3, 1.0, 2.5}) {
        const Matrix rho_t = propagate(model, rho0, t);
        CHECK(std::abs(rho_t(0, 1) - Complex(0.5 * std::exp(-t), 0.0)) <= 1e-10);
        CHECK(std::abs(rho_t(0, 0) - Complex(0.5, 0.0)) <= 1e-12);
    }
    CHECK((propagate(model, rho0, 0.0) - rho0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("maximally mixed state is steady under dephasing with any H") {
    const auto model = dephasing_plus_hopping(5, 1.0, 2.0);
    const Matrix mixed = DensityMatrix::maximally_mixed(5).rho;
    for (double t : {0.5, 3.0}) {
        CHECK((propagate(model, mixed, t) - mixed).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("semigroup law and contraction") {
    const auto model = dephasing_plus_hopping(4, 1.0, 1.0);
    const Matrix rho0 = random_state(4, 21);
    const Matrix one_shot = propagate(model, rho0, 1.7);
    const Matrix two_step = propagate(model, propagate(model, rho0, 0.7), 1.0);
    CHECK((one_shot - two_step).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(num::trace_norm(one_shot) <= num::trace_norm(rho0) + 1e-10);
}

TEST_CASE("rk45 integrator matches the dense exponential") {
    const auto model = dephasing_plus_hopping(5, 1.0, 1.0);
    const SparseMatrix s = assemble_superoperator(model);
    const Matrix rho0 = random_state(5, 5);
    const Vector via_rk = num::rk45_sparse_expv(s, num::vec(rho0), 1.3);
    const Vector via_exp = num::expm((Matrix(s) * 1.3).eval()) * num::vec(rho0);
    CHECK((via_rk - via_exp).norm() <= 1e-8);
}

TEST_CASE("evolve validates and repairs") {
    const auto model = dephasing_plus_hopping(4, 1.0, 0.5);
    const DensityMatrix rho0 = DensityMatrix::pure_site(4, 1);
    const DensityMatrix rho_t = evolve(model, rho0, 2.0);
    const StateDiagnostics d = state_diagnostics(rho_t.rho);
    CHECK(d.trace_deviation <= 1e-12);
    CHECK(d.min_eigenvalue >= -1e-16);
}

TEST_CASE("steady states of dephasing on n=4 are the position projectors") {
    auto chain = build_chain(4);
    const auto model = dephasing_model(chain);
    const SteadyBasis basis = steady_states(model);
    CHECK(basis.kernel_matrices.size() == 4);
    CHECK(!basis.empty_kernel);
    const double scale = std::max(basis.sigma_max, 1.0);
    for (double r : basis.residuals) CHECK(r <= 1e-8 * scale);
    for (const auto& k : basis.kernel_matrices) {
        // kernel members are diagonal in the position basis
        Matrix off = k;
        off.diagonal().setZero();
        CHECK(off.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("incoherent hopping ring keeps the maximally mixed steady state with local H") {
    auto ring = build_ring(5);
    RealVector omega(5);
    for (int i = 0; i < 5; ++i) omega(i) = num::uniform01(17, 0, i) - 0.5;
    const auto model =
        compose_models(incoherent_hopping_model(ring), anderson_model(ring, 1.0, omega));
    const Matrix mixed = DensityMatrix::maximally_mixed(5).rho;
    CHECK(apply_lindbladian(model, mixed).cwiseAbs().maxCoeff() <= 1e-14);
    const SteadyBasis basis = steady_states(model);
    bool found = false;
    for (const auto& state : basis.states) {
        if ((state.rho - mixed).cwiseAbs().maxCoeff() <= 1e-8) found = true;
    }
    CHECK(found);
}

TEST_CASE("coherence creation steady state is the uniform projector") {
    auto chain = build_chain(4);
    const auto model = coherence_creation_model(chain);
    const SteadyBasis basis = steady_states(model);
    const Matrix uniform = DensityMatrix::uniform_superposition(4).rho;
    bool found = false;
    for (const auto& state : basis.states) {
        if ((state.rho - uniform).cwiseAbs().maxCoeff() <= 1e-8) found = true;
    }
    CHECK(found);
}

TEST_CASE("steady states via shift-invert beyond the dense cap") {
    auto chain = build_chain(20);
    const auto model = dephasing_model(chain);
    const SteadyBasis basis = steady_states(model);
    CHECK(basis.kernel_matrices.size() == 20);
    const double scale = std::max(basis.sigma_max, 1.0);
    for (double r : basis.residuals) CHECK(r <= 1e-8 * scale);
}

TEST_CASE("abel average fixes steady states and matches the scalar resolvent") {
    auto chain = build_chain(2);
    const auto model = dephasing_model(chain);

    const Matrix mixed = DensityMatrix::maximally_mixed(2).rho;
    for (double eps : {0.01, 1.0, 50.0}) {
        CHECK((abel_average(model, mixed, eps) - mixed).cwiseAbs().maxCoeff() <= 1e-12);
    }

    const Matrix rho0 = DensityMatrix::pair_superposition(2, 0, 1).rho;
    for (double eps : {0.05, 0.5, 2.0}) {
        const Matrix a = abel_average(model, rho0, eps);
        CHECK(std::abs(a(0, 1) - Complex(0.5 * eps / (eps + 1.0), 0.0)) <= 1e-12);
    }
}

TEST_CASE("abel average at huge eps returns the initial state") {
    const auto model = dephasing_plus_hopping(6, 1.0, 1.0);
    const Matrix rho0 = random_state(6, 2);
    const Matrix a = abel_average(model, rho0, 1e6);
    CHECK((a - rho0).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("abel average converges to the steady projection as eps -> 0") {
    auto chain = build_chain(4);
    const auto model = dephasing_model(chain);
    const Matrix rho0 = random_state(4, 9);
    const Matrix a = abel_average(model, rho0, 1e-6);
    Matrix diag = Matrix::Zero(4, 4);
    diag.diagonal() = rho0.diagonal();
    CHECK((a - diag).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("abel average agrees with the time-quadrature oracle") {
    const auto model = dephasing_plus_hopping(4, 1.0, 1.0, 13);
    const Matrix rho0 = random_state(4, 31);
    for (double eps : {0.1, 1.0}) {
        const Matrix direct = abel_average(model, rho0, eps);
        const Matrix quad = abel_average_quadrature(model, rho0, eps, 1e-8);
        CHECK((direct - quad).cwiseAbs().maxCoeff() <= 1e-6 * direct.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("trace norm bound check") {
    auto chain = build_chain(4);

    const auto dephasing = dephasing_model(chain);
    const auto dep_report = trace_norm_bound_check(dephasing);
    CHECK(dep_report.paper_bound == doctest::Approx(4.0));
    CHECK(dep_report.pass);

    const auto zero = explicit_model(chain, {}, {}, {0, 0, 1.0});
    const auto zero_report = trace_norm_bound_check(zero);
    CHECK(zero_report.sampled_lower_bound == 0.0);
    CHECK(zero_report.pass);

    const auto genesis = coherence_creation_model(chain);
    const auto gen_report = trace_norm_bound_check(genesis);
    CHECK(gen_report.cover_count == 2);
    CHECK(gen_report.norm == doctest::Approx(2.0));
    CHECK(gen_report.per_region == 1);
    CHECK(gen_report.paper_bound == doctest::Approx(24.0));  // 2 C_R N (1 + N I)
    CHECK(gen_report.pass);
}
