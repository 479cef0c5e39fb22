#include "doctest.h"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "lindlab/dissipative.hpp"
#include "lindlab/dynamics.hpp"
#include "support.hpp"

using namespace lindlab;
using namespace lindlab::testing;

TEST_CASE("dephasing gives D = -1/2 identity on any region") {
    auto chain = build_chain(8);
    const auto model = dephasing_model(chain);
    const Region region = make_region(chain, {2, 3, 4});
    const auto d = build_dissipative(model, region, closure_none());
    CHECK((d.matrix + 0.5 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("coherence creation gives the graph Laplacian as real part") {
    auto chain = build_chain(6);
    const auto model = coherence_creation_model(chain);
    const Region all = make_region(chain, {0, 1, 2, 3, 4, 5});
    const auto d = build_dissipative(model, all, closure_none());
    Matrix neg_laplacian = Matrix::Zero(6, 6);
    for (int v = 0; v < 6; ++v) {
        neg_laplacian(v, v) = chain->degree(v);
        for (int w : chain->adjacency[v]) neg_laplacian(v, w) = -1.0;
    }
    CHECK((num::hermitian_part(d.matrix) + neg_laplacian).cwiseAbs().maxCoeff() <= 1e-14);
    const auto env = spectral_envelope(d.matrix);
    CHECK(env.gap == doctest::Approx(0.0).epsilon(1e-12));  // Laplacian zero mode
}

TEST_CASE("hopping interval with a dephasing closure at its left end") {
    auto chain = build_chain(12);
    const auto model = incoherent_hopping_model(chain);
    const Region box = make_region(chain, {3, 4, 5, 6, 7});
    const auto closure = closure_dephasing_sites(chain, {3});
    const auto d = build_dissipative(model, box, closure);
    CHECK((num::hermitian_part(d.matrix) + 0.5 * Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <=
          1e-14);
    const auto env = spectral_envelope(d.matrix);
    CHECK(env.gap == doctest::Approx(0.5));
}

TEST_CASE("closure validation rejects supports away from the boundary") {
    auto chain = build_chain(12);
    const auto model = incoherent_hopping_model(chain);  // R = 1
    const Region box = make_region(chain, {3, 4, 5, 6, 7});
    CHECK_THROWS(build_dissipative(model, box, closure_dephasing_sites(chain, {5})));
    CHECK_THROWS(validate_closure(model, box, closure_dephasing_sites(chain, {9})));
}

TEST_CASE("spectral envelope of dephasing") {
    auto chain = build_chain(6);
    RealVector omega = random_potential(6, 5);
    const auto model =
        compose_models(dephasing_model(chain), anderson_model(chain, 1.0, omega));
    const Region all = make_region(chain, {0, 1, 2, 3, 4, 5});
    const auto d = build_dissipative(model, all, closure_none());
    const auto env = spectral_envelope(d.matrix);
    for (Eigen::Index i = 0; i < env.eigenvalues.size(); ++i) {
        CHECK(env.eigenvalues(i).real() == doctest::Approx(-0.5).epsilon(1e-10));
    }
    CHECK(env.gap == doctest::Approx(0.5));
    CHECK(env.eigenvalues_in_box);
    CHECK(env.max_real_part <= 1e-10);

    const auto report = validate_locality(model);
    CHECK(env.re_norm <= report.cover_count * report.per_region * report.norm * report.norm + 1e-12);
    CHECK(env.im_norm <= report.cover_count * report.norm + 1e-12);
}

TEST_CASE("dirichlet closure reproduces the path Laplacian gap") {
    auto chain = build_chain(13);
    const auto model = coherence_creation_model(chain);
    for (int n : {3, 5, 8}) {
        std::vector<int> members;
        for (int u = 2; u < 2 + n; ++u) members.push_back(u);
        const Region interval = make_region(chain, members);
        const auto d = build_dissipative(model, interval, closure_dirichlet(interval));
        const auto env = spectral_envelope(d.matrix);
        const double expected = 4.0 * std::pow(std::sin(M_PI / (2.0 * (n + 1))), 2);
        CHECK(env.gap == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("maximal dissipativity of every built D") {
    auto chain = build_chain(9);
    const RealVector omega = random_potential(9, 23);
    const Region region = make_region(chain, {1, 2, 3, 4, 5, 6});
    const std::vector<LindbladModel> models = {
        dephasing_model(chain, 0.7),
        coherence_creation_model(chain),
        incoherent_hopping_model(chain),
        compose_models(coherence_creation_model(chain), anderson_model(chain, 2.0, omega))};
    for (const auto& model : models) {
        const auto d = build_dissipative(model, region, closure_none());
        CHECK(num::max_eigenvalue_hermitian(num::hermitian_part(d.matrix)) <= 1e-12);
    }
}

TEST_CASE("pseudospectrum of a normal operator is the eps-neighborhood of the spectrum") {
    Matrix a = Matrix::Zero(4, 4);
    a.diagonal() << Complex(-0.2, 0.3), Complex(-1.0, -0.4), Complex(-0.5, 0.9), Complex(-2.0, 0.0);
    const double eps = 0.35;
    const auto grid = pseudospectrum_grid(a, Complex(-2.5, -1.5), Complex(0.5, 1.5), 13, 13, eps);
    for (const auto& p : grid) {
        double dist = 1e300;
        for (int i = 0; i < 4; ++i) dist = std::min(dist, std::abs(p.z - a(i, i)));
        CHECK(p.sigma_min == doctest::Approx(dist).epsilon(1e-10));
        CHECK(p.member == (dist < eps));
    }
}

TEST_CASE("resolvent bounds for maximally dissipative operators") {
    const Matrix a = random_dissipative(10, 77);
    const Matrix id = Matrix::Identity(10, 10);

    // eps not in sigma_eps(A)
    for (double eps : {0.05, 0.3, 2.0}) {
        CHECK(num::min_singular_value(eps * id - a) >= eps * (1.0 - 1e-12));
    }

    // moved-axis bound with lambda = smallest eigenvalue of the positive part
    const double lambda = -num::max_eigenvalue_hermitian(num::hermitian_part(a));
    for (double re : {0.1, 0.7}) {
        for (double im : {-1.2, 0.4}) {
            const Complex z(re, im);
            const double norm = 1.0 / num::min_singular_value(z * id - a);
            CHECK(norm <= 1.0 / std::abs(re + lambda) + 1e-12);
        }
    }
}

TEST_CASE("perturbation bound") {
    const Matrix a = random_dissipative(8, 3);
    const double eps = 0.4;

    SUBCASE("B = 0 reduces to the dissipative bound at z = eps") {
        const auto report = perturbation_bound_check(a, Matrix::Zero(8, 8), eps, {Complex(eps, 0.0)});
        CHECK(report.all_ok);
        CHECK(report.points[0].bound == doctest::Approx(1.0 / eps));
    }

    SUBCASE("random B with norm eps/2") {
        Matrix b = random_complex(8, 5);
        b *= (eps / 2.0) / num::operator_norm(b) * (1.0 - 1e-12);
        std::vector<Complex> grid;
        for (double re : {0.45, 1.0, 3.0}) grid.push_back(Complex(re, 0.2));
        const auto report = perturbation_bound_check(a, b, eps, grid);
        CHECK(report.all_ok);
    }

    SUBCASE("far from the spectrum the measured norm is ~ 1/|z|") {
        const Complex z(50.0, 0.0);
        const auto report = perturbation_bound_check(a, Matrix::Zero(8, 8), eps, {z});
        CHECK(report.points[0].measured <= 1.5 / std::abs(z));
        CHECK(report.points[0].measured < report.points[0].bound);
    }

    SUBCASE("precondition violations throw") {
        Matrix big = Matrix::Identity(8, 8) * eps;
        CHECK_THROWS(perturbation_bound_check(a, big, eps, {Complex(1.0, 0.0)}));
        Eigen::ComplexEigenSolver<Matrix> es(a, false);
        const Complex on_spectrum = es.eigenvalues()(0);
        CHECK_THROWS(perturbation_bound_check(a, Matrix::Zero(8, 8), eps, {on_spectrum}));
    }
}

TEST_CASE("rank-one resolvent identity") {
    // hopping-style D_hat = -iH - 1/2 on the region, perturbed at its first site
    auto chain = build_chain(9);
    const RealVector omega = random_potential(9, 31);
    const Matrix h_full = anderson_model(chain, 1.0, omega).hamiltonian_dense();
    const int m = 5;
    const Matrix h = h_full.topLeftCorner(m, m);
    const Matrix d_hat = Complex(0.0, -1.0) * h - 0.5 * Matrix::Identity(m, m);

    SUBCASE("the plus variant matches direct inversion on the contour") {
        for (double e : {-1.3, 0.0, 0.8}) {
            const auto report = rank_one_resolvent_check(d_hat, 0, Complex(0.0, e));
            CHECK(report.deviation_plus <= 1e-10);
            CHECK(report.matched == "plus");
            CHECK(report.deviation_minus > 1e-6);  // the displayed minus variant does not
        }
    }

    SUBCASE("strength zero is an identity check") {
        const auto report = rank_one_resolvent_check(d_hat, 0, Complex(0.1, 0.4), 0.0);
        CHECK(report.deviation_plus <= 1e-13);
        CHECK(report.matched == "both");
    }

    SUBCASE("denominator infimum is positive") {
        std::vector<double> es, epss;
        for (int k = -5; k <= 5; ++k) es.push_back(0.6 * k);
        for (double e : {1e-4, 1e-2, 0.1, 1.0, 10.0}) epss.push_back(e);
        CHECK(rank_one_denominator_infimum(d_hat, 0, es, epss) > 0.0);
    }
}

TEST_CASE("dark states") {
    auto chain = build_chain(5);
    const RealVector omega = random_potential(5, 41);

    SUBCASE("dephasing has none") {
        const auto model = compose_models(dephasing_model(chain), anderson_model(chain, 1.0, omega));
        CHECK(dark_states(model).empty());
    }

    SUBCASE("coherence creation with H = 0 has exactly the uniform vector") {
        const auto model = coherence_creation_model(chain);
        const auto dark = dark_states(model);
        REQUIRE(dark.size() == 1);
        const Vector uniform = Vector::Constant(5, Complex(1.0 / std::sqrt(5.0), 0.0));
        CHECK(std::abs(std::abs(uniform.dot(dark[0].psi)) - 1.0) <= 1e-12);
        CHECK(dark[0].energy == doctest::Approx(0.0));
    }

    SUBCASE("generic Anderson H destroys the dark state") {
        const auto model =
            compose_models(coherence_creation_model(chain), anderson_model(chain, 1.0, omega));
        CHECK(dark_states(model).empty());
    }

    SUBCASE("dark states sit on the imaginary axis of D") {
        const auto model = coherence_creation_model(chain);
        const Region all = make_region(chain, {0, 1, 2, 3, 4});
        const auto d = build_dissipative(model, all, closure_none());
        for (const auto& dark : dark_states(model)) {
            const Vector image = d.matrix * dark.psi;
            const Vector expected = Complex(0.0, -dark.energy) * dark.psi;
            CHECK((image - expected).norm() <= 1e-10);
        }
    }
}
