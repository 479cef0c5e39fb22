// dissipative.cpp — boundary closures, D_Omega assembly, spectra and pseudospectra

#include "lindlab/dissipative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "lindlab/numerics.hpp"

namespace lindlab {

BoundaryClosure closure_none() {
    return {};
}

BoundaryClosure closure_dephasing_sites(const LatticePtr& lattice, const std::vector<int>& sites) {
    BoundaryClosure closure;
    closure.kind = BoundaryClosure::Kind::dephasing_site;
    for (int u : sites) {
        if (u < 0 || u >= lattice->size()) {
            throw std::invalid_argument("closure: site outside lattice");
        }
        Matrix m(1, 1);
        m(0, 0) = 1.0;
        closure.jump_operators.push_back({{u}, m, "closure_dephasing_" + std::to_string(u)});
    }
    return closure;
}

BoundaryClosure closure_dirichlet(const Region& region) {
    BoundaryClosure closure;
    closure.kind = BoundaryClosure::Kind::dirichlet;
    const auto& lat = *region.lattice;
    for (int x : region.members) {
        int missing = 0;
        for (int nb : lat.adjacency[x]) {
            if (!region.contains(nb)) ++missing;
        }
        if (missing == 0) continue;
        Matrix m(1, 1);
        m(0, 0) = std::sqrt(2.0 * missing);
        closure.jump_operators.push_back({{x}, m, "closure_dirichlet_" + std::to_string(x)});
    }
    return closure;
}

BoundaryClosure closure_explicit(std::vector<HamiltonianTerm> terms,
                                 std::vector<JumpOperator> jumps) {
    BoundaryClosure closure;
    closure.kind = BoundaryClosure::Kind::explicit_terms;
    closure.hamiltonian_terms = std::move(terms);
    closure.jump_operators = std::move(jumps);
    return closure;
}

void validate_closure(const LindbladModel& model, const Region& region,
                      const BoundaryClosure& closure) {
    const auto& lat = *model.lattice;
    const int r = model.declared.range;
    const std::vector<int> comp = region.complement();
    auto check_support = [&](const std::vector<int>& support) {
        for (int u : support) {
            if (!region.contains(u)) {
                throw std::invalid_argument("closure: support outside inner boundary region");
            }
        }
        Region z{region.lattice, support};
        if (z.diameter() > r) {
            throw std::invalid_argument("closure: support diameter exceeds model range");
        }
        if (!comp.empty() && set_distance(lat, support, comp) > r) {
            throw std::invalid_argument("closure: support outside inner boundary region");
        }
    };
    for (const auto& term : closure.hamiltonian_terms) check_support(term.support);
    for (const auto& jump : closure.jump_operators) check_support(jump.support);
}

int DissipativeHamiltonian::local_index(int site) const {
    const auto it = std::lower_bound(region.members.begin(), region.members.end(), site);
    if (it == region.members.end() || *it != site) {
        throw std::invalid_argument("dissipative: site not in region");
    }
    return static_cast<int>(it - region.members.begin());
}

namespace {

bool support_inside(const std::vector<int>& support, const Region& region) {
    return std::all_of(support.begin(), support.end(),
                       [&](int u) { return region.contains(u); });
}

void add_restricted(Matrix& target, const Region& region, const std::vector<int>& support,
                    const Matrix& local, const Complex& scale) {
    std::vector<int> positions(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto it = std::lower_bound(region.members.begin(), region.members.end(), support[i]);
        positions[i] = static_cast<int>(it - region.members.begin());
    }
    for (Eigen::Index r = 0; r < local.rows(); ++r) {
        for (Eigen::Index c = 0; c < local.cols(); ++c) {
            target(positions[r], positions[c]) += scale * local(r, c);
        }
    }
}

}  // namespace

DissipativeHamiltonian build_dissipative(const LindbladModel& model, const Region& region,
                                         const BoundaryClosure& closure) {
    if (region.members.empty()) throw std::invalid_argument("build_dissipative: empty region");
    const int dim = region.size();
    Matrix d = Matrix::Zero(dim, dim);
    const Complex minus_i(0.0, -1.0);
    for (const auto& term : model.hamiltonian_terms) {
        if (support_inside(term.support, region)) {
            add_restricted(d, region, term.support, term.matrix, minus_i);
        }
    }
    for (const auto& jump : model.jump_operators) {
        if (support_inside(jump.support, region)) {
            add_restricted(d, region, jump.support,
                           Matrix(jump.matrix.adjoint() * jump.matrix), Complex(-0.5, 0.0));
        }
    }
    if (closure.kind != BoundaryClosure::Kind::none) {
        validate_closure(model, region, closure);
        for (const auto& term : closure.hamiltonian_terms) {
            if (support_inside(term.support, region)) {
                add_restricted(d, region, term.support, term.matrix, minus_i);
            }
        }
        for (const auto& jump : closure.jump_operators) {
            if (support_inside(jump.support, region)) {
                add_restricted(d, region, jump.support,
                               Matrix(jump.matrix.adjoint() * jump.matrix), Complex(-0.5, 0.0));
            }
        }
    }
    DissipativeHamiltonian out;
    out.region = region;
    out.matrix = std::move(d);
    out.provenance = model.kind;
    return out;
}

SpectralEnvelope spectral_envelope(const Matrix& d, int dim_cap) {
    if (d.rows() > dim_cap) {
        throw std::invalid_argument("spectral_envelope: dimension exceeds dense eigensolver cap");
    }
    SpectralEnvelope env;
    const Matrix re = num::hermitian_part(d);
    const Matrix im = num::antihermitian_part_over_i(d);
    Eigen::SelfAdjointEigenSolver<Matrix> re_es(re, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> im_es(im, Eigen::EigenvaluesOnly);
    env.re_norm = re_es.eigenvalues().cwiseAbs().maxCoeff();
    env.im_norm = im_es.eigenvalues().cwiseAbs().maxCoeff();
    env.box_extent = env.re_norm + env.im_norm;
    env.gap = -re_es.eigenvalues().maxCoeff();
    Eigen::ComplexEigenSolver<Matrix> es(d, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_envelope: eigensolver failed");
    env.eigenvalues = es.eigenvalues();
    env.max_real_part = env.eigenvalues.real().maxCoeff();
    env.eigenvalues_in_box = true;
    const double slack = 1e-8;
    for (Eigen::Index i = 0; i < env.eigenvalues.size(); ++i) {
        const Complex z = env.eigenvalues(i);
        if (z.real() > slack || z.real() < -env.box_extent - slack ||
            std::abs(z.imag()) > env.box_extent + slack) {
            env.eigenvalues_in_box = false;
        }
    }
    return env;
}

std::vector<PseudospectrumPoint> pseudospectrum_grid(const Matrix& a, Complex corner_lo,
                                                     Complex corner_hi, int nx, int ny, double eps,
                                                     int threads) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("pseudospectrum_grid: empty grid");
    std::vector<PseudospectrumPoint> out(static_cast<std::size_t>(nx) * ny);
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    num::parallel_for(out.size(), threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) % nx;
        const int j = static_cast<int>(idx) / nx;
        const double re = nx == 1 ? corner_lo.real()
                                  : corner_lo.real() + (corner_hi.real() - corner_lo.real()) * i / (nx - 1);
        const double im = ny == 1 ? corner_lo.imag()
                                  : corner_lo.imag() + (corner_hi.imag() - corner_lo.imag()) * j / (ny - 1);
        const Complex z(re, im);
        const double sigma = num::min_singular_value(z * id - a);
        out[idx] = {z, sigma, sigma < eps};
    });
    return out;
}

PerturbationCheckReport perturbation_bound_check(const Matrix& a, const Matrix& b, double eps,
                                                 const std::vector<Complex>& z_grid) {
    PerturbationCheckReport report;
    report.b_norm = num::operator_norm(b);
    if (report.b_norm >= eps) {
        throw std::invalid_argument("perturbation_bound_check: requires ||B|| < eps");
    }
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    report.all_ok = true;
    for (const Complex& z : z_grid) {
        const double sigma = num::min_singular_value(z * id - a);
        if (sigma < eps) {
            throw std::invalid_argument("perturbation_bound_check: grid point inside eps-pseudospectrum");
        }
        PerturbationCheckPoint point;
        point.z = z;
        point.measured = 1.0 / num::min_singular_value(z * id - a - b);
        point.bound = 1.0 / (eps - report.b_norm);
        point.ok = point.measured <= point.bound * (1.0 + 1e-12);
        report.all_ok = report.all_ok && point.ok;
        report.points.push_back(point);
    }
    return report;
}

RankOneCheckReport rank_one_resolvent_check(const Matrix& d_hat, int site, Complex z,
                                            double strength) {
    const Eigen::Index n = d_hat.rows();
    if (site < 0 || site >= n) throw std::invalid_argument("rank_one: site out of range");
    Matrix perturbed = d_hat;
    perturbed(site, site) += strength;
    const Matrix id = Matrix::Identity(n, n);
    Eigen::PartialPivLU<Matrix> lu_direct(z * id - perturbed);
    Eigen::PartialPivLU<Matrix> lu_hat(z * id - d_hat);
    const Matrix direct = lu_direct.solve(id);
    const Matrix g = lu_hat.solve(id);

    RankOneCheckReport report;
    if (strength == 0.0) {
        report.denominator = Complex(0.0, 0.0);
        report.deviation_plus = (direct - g).cwiseAbs().maxCoeff();
        report.deviation_minus = report.deviation_plus;
    } else {
        const Complex denom = 1.0 / strength - g(site, site);
        report.denominator = denom;
        const Matrix correction = g.col(site) * g.row(site) / denom;
        report.deviation_plus = (direct - (g + correction)).cwiseAbs().maxCoeff();
        report.deviation_minus = (direct - (g - correction)).cwiseAbs().maxCoeff();
    }
    const double scale = std::max(1.0, direct.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * scale;
    if (report.deviation_plus <= tol && report.deviation_minus <= tol) {
        report.matched = "both";
    } else if (report.deviation_plus <= tol) {
        report.matched = "plus";
    } else if (report.deviation_minus <= tol) {
        report.matched = "minus";
    } else {
        report.matched = "none";
    }
    return report;
}

double rank_one_denominator_infimum(const Matrix& d_hat, int site,
                                    const std::vector<double>& e_values,
                                    const std::vector<double>& eps_values) {
    const Eigen::Index n = d_hat.rows();
    const Matrix id = Matrix::Identity(n, n);
    double inf_value = std::numeric_limits<double>::infinity();
    Vector delta = Vector::Zero(n);
    delta(site) = 1.0;
    for (double eps : eps_values) {
        for (double e : e_values) {
            const Complex z(eps, e);
            Eigen::PartialPivLU<Matrix> lu(z * id - d_hat);
            const Complex g = delta.dot(lu.solve(delta));
            inf_value = std::min(inf_value, (Complex(2.0, 0.0) - g).real());
        }
    }
    return inf_value;
}

std::vector<DarkState> dark_states(const LindbladModel& model, double tol) {
    const Eigen::Index n = model.lattice->size();
    Matrix q = Matrix::Zero(n, n);
    std::vector<Matrix> jumps;
    for (const auto& jump : model.jump_operators) {
        jumps.push_back(Matrix(model.embed(jump.support, jump.matrix)));
        q += jumps.back().adjoint() * jumps.back();
    }
    const Matrix h = model.hamiltonian_dense();

    Matrix basis;
    if (jumps.empty()) {
        basis = Matrix::Identity(n, n);
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(q);
        const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (es.eigenvalues()(i) <= 1e-12 * scale) keep.push_back(i);
        }
        basis = Matrix(n, keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) basis.col(i) = es.eigenvectors().col(keep[i]);
    }

    // iteratively intersect with H-invariance: keep w with H (basis w) in span(basis)
    const double h_scale = std::max(1.0, num::operator_norm(h));
    while (basis.cols() > 0) {
        const Matrix hb = h * basis;
        const Matrix outside = hb - basis * (basis.adjoint() * hb);
        Eigen::JacobiSVD<Matrix> svd(outside, Eigen::ComputeFullV);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) <= 1e-12 * h_scale) keep.push_back(i);
        }
        if (static_cast<Eigen::Index>(keep.size()) == basis.cols()) break;
        Matrix next(basis.rows(), keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            next.col(i) = basis * svd.matrixV().col(keep[i]);
        }
        basis = next;
    }

    std::vector<DarkState> out;
    if (basis.cols() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Matrix> hes(Matrix(basis.adjoint() * h * basis));
    for (Eigen::Index i = 0; i < hes.eigenvalues().size(); ++i) {
        Vector psi = basis * hes.eigenvectors().col(i);
        psi.normalize();
        const double energy = psi.dot(h * psi).real();
        bool ok = (h * psi - energy * psi).norm() <= tol;
        for (const auto& l : jumps) ok = ok && (l * psi).norm() <= tol;
        if (ok) out.push_back({psi, energy});
    }
    return out;
}

}  // namespace lindlab
