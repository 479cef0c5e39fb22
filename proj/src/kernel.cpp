// kernel.cpp — contour quadrature for the coherence kernel and the coherence bound

#include "lindlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "lindlab/disorder.hpp"

namespace lindlab {

namespace {

constexpr double kGapTol = 1e-12;

struct Segment {
    Complex from, to;
    bool right = false;
};

void append_segment_nodes(const Segment& seg, int nodes, Contour& contour) {
    const int panel_order = 16;
    const int panels = std::max(1, nodes / panel_order);
    static const auto gl = num::gauss_legendre(panel_order);
    const Complex span = seg.to - seg.from;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double width = 1.0 / panels;
        for (int i = 0; i < panel_order; ++i) {
            const double t = a + 0.5 * width * (gl.first(i) + 1.0);
            contour.nodes.push_back(seg.from + t * span);
            contour.weights.push_back(span * (0.5 * width * gl.second(i)));
        }
    }
}

}  // namespace

Contour build_contour(const Matrix& d, double eps, const ContourOptions& opts) {
    if (eps <= 0) throw std::invalid_argument("build_contour: eps must be positive");
    const SpectralEnvelope env = spectral_envelope(d);
    Contour contour;
    contour.gamma = opts.gamma;
    if (contour.gamma <= 0) throw std::invalid_argument("build_contour: gamma must be positive");
    contour.f = opts.f_override > 0 ? opts.f_override : env.box_extent;
    if (std::isnan(opts.right_offset)) {
        if (env.gap > kGapTol) {
            contour.right_offset = 0.0;
        } else {
            contour.right_offset = 0.5 * eps;  // gapless: move off the imaginary axis
        }
    } else {
        contour.right_offset = opts.right_offset;
    }
    if (contour.right_offset >= eps) {
        throw std::invalid_argument("build_contour: right segment must satisfy Re z < eps");
    }
    if (contour.right_offset == 0.0 && env.gap <= kGapTol) {
        throw std::runtime_error("build_contour: spectrum touches the right segment (gap <= 0)");
    }
    contour.nodes_per_side = opts.nodes_per_side;

    const double h = contour.f + contour.gamma;  // half-height and left extent
    const Complex c_br(contour.right_offset, -h);
    const Complex c_tr(contour.right_offset, h);
    const Complex c_tl(-h, h);
    const Complex c_bl(-h, -h);

    // enclosure (winding number one): every eigenvalue strictly inside the rectangle
    for (Eigen::Index i = 0; i < env.eigenvalues.size(); ++i) {
        const Complex ev = env.eigenvalues(i);
        if (ev.real() >= contour.right_offset - kGapTol || ev.real() <= -h ||
            std::abs(ev.imag()) >= h) {
            throw std::runtime_error("build_contour: contour does not enclose the spectrum");
        }
    }

    append_segment_nodes({c_br, c_tr, true}, opts.nodes_per_side, contour);   // right, upward
    append_segment_nodes({c_tr, c_tl, false}, opts.nodes_per_side, contour);  // top
    append_segment_nodes({c_tl, c_bl, false}, opts.nodes_per_side, contour);  // left
    append_segment_nodes({c_bl, c_br, false}, opts.nodes_per_side, contour);  // bottom

    // off the right segment the contour must stay out of the gamma-pseudospectrum
    const Matrix id = Matrix::Identity(d.rows(), d.cols());
    double min_sigma = std::numeric_limits<double>::infinity();
    const std::size_t per_side = contour.nodes.size() / 4;
    for (std::size_t i = per_side; i < contour.nodes.size(); ++i) {
        min_sigma = std::min(min_sigma, num::min_singular_value(contour.nodes[i] * id - d));
    }
    contour.min_sigma_off_right = min_sigma;
    if (min_sigma < contour.gamma * (1.0 - 1e-9)) {
        throw std::runtime_error("build_contour: node inside the gamma-pseudospectrum");
    }
    return contour;
}

namespace {

// One quadrature pass: row x of (z - Dx)^{-1} and column y of ((eps - z) - Dy*)^{-1}
// per node, accumulated in node order for a worker-count-independent result.
Matrix kernel_quadrature(const Matrix& dx, const Matrix& dy_adjoint, int x_local, int y_local,
                         double eps, const Contour& contour, int threads) {
    const Eigen::Index nx = dx.rows();
    const Eigen::Index ny = dy_adjoint.rows();
    const std::size_t m = contour.nodes.size();
    std::vector<Vector> rows(m), cols(m);
    const Matrix idx = Matrix::Identity(nx, nx);
    const Matrix idy = Matrix::Identity(ny, ny);
    num::parallel_for(m, threads, [&](std::size_t i) {
        const Complex z = contour.nodes[i];
        Vector ex = Vector::Zero(nx);
        ex(x_local) = 1.0;
        rows[i] = Eigen::PartialPivLU<Matrix>(Matrix((z * idx - dx).transpose())).solve(ex);
        Vector ey = Vector::Zero(ny);
        ey(y_local) = 1.0;
        cols[i] = Eigen::PartialPivLU<Matrix>(Matrix((eps - z) * idy - dy_adjoint)).solve(ey);
    });
    Matrix values = Matrix::Zero(nx, ny);
    const Complex two_pi_i(0.0, 2.0 * M_PI);
    for (std::size_t i = 0; i < m; ++i) {
        values.noalias() += (contour.weights[i] / two_pi_i) * (rows[i] * cols[i].transpose());
    }
    return values;
}

double max_abs(const Matrix& m) {
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

BoundaryClosure materialize_closure(const LindbladModel& model, ClosureRecipe recipe,
                                    const Region& region_x, const Region& region_y) {
    switch (recipe) {
        case ClosureRecipe::none:
            return closure_none();
        case ClosureRecipe::dephasing_min_site: {
            std::vector<int> sites;
            if (!region_x.members.empty()) sites.push_back(region_x.members.front());
            if (!region_y.members.empty()) sites.push_back(region_y.members.front());
            return closure_dephasing_sites(model.lattice, sites);
        }
        case ClosureRecipe::dirichlet: {
            std::vector<int> joint = region_x.members;
            joint.insert(joint.end(), region_y.members.begin(), region_y.members.end());
            return closure_dirichlet(make_region(model.lattice, joint));
        }
    }
    throw std::logic_error("materialize_closure: unknown recipe");
}

namespace {

CoherenceKernel compute_kernel_impl(const LindbladModel& model, int x, int y, double eps,
                                    const BoundaryClosure& closure, const KernelOptions& opts) {
    const auto& lat = *model.lattice;
    const int d = lat.distance(x, y);
    if (d == Lattice::kInfinity) {
        throw std::invalid_argument("compute_kernel: x and y are in different components");
    }
    const int range = validate_locality(model).range;
    CoherenceKernel kernel;
    kernel.x = x;
    kernel.y = y;
    kernel.eps = eps;
    kernel.geometry = opts.geometry;
    if (opts.geometry == KernelGeometry::three_block) {
        if (d < 3 * range) {
            throw std::invalid_argument("compute_kernel: requires d(x,y) >= 3R");
        }
        std::vector<int> mx, my;
        for (int u = 0; u < lat.size(); ++u) {
            const int du = lat.distance(x, u);
            const int dv = lat.distance(y, u);
            if (du != Lattice::kInfinity && 3 * du <= d) mx.push_back(u);
            if (dv != Lattice::kInfinity && 3 * dv <= d) my.push_back(u);
        }
        kernel.region_x = make_region(model.lattice, mx);
        kernel.region_y = make_region(model.lattice, my);
    } else {
        if (d < 2 * range) {
            throw std::invalid_argument("compute_kernel: requires d(x,y) >= 2R");
        }
        std::vector<int> mx, my;
        for (int u = 0; u < lat.size(); ++u) {
            const int du = lat.distance(x, u);
            if (du != Lattice::kInfinity && 2 * du < d) {
                mx.push_back(u);
            } else {
                my.push_back(u);
            }
        }
        kernel.region_x = make_region(model.lattice, mx);
        kernel.region_y = make_region(model.lattice, my);
    }
    kernel.closure = closure;

    const DissipativeHamiltonian dx = build_dissipative(model, kernel.region_x, closure);
    const DissipativeHamiltonian dy = build_dissipative(model, kernel.region_y, closure);
    const Matrix dy_adjoint = dy.matrix.adjoint();
    const int x_local = dx.local_index(x);
    const int y_local = dy.local_index(y);

    Matrix previous;
    ContourOptions copts = opts.contour;
    for (int nodes = opts.contour.nodes_per_side; nodes <= opts.max_nodes_per_side; nodes *= 2) {
        copts.nodes_per_side = nodes;
        kernel.contour = build_contour(dx.matrix, eps, copts);
        kernel.values =
            kernel_quadrature(dx.matrix, dy_adjoint, x_local, y_local, eps, kernel.contour, opts.threads);
        kernel.nodes_per_side = nodes;
        if (previous.size()) {
            kernel.rel_change = max_abs(kernel.values - previous) /
                                std::max(max_abs(kernel.values), 1e-300);
            if (kernel.rel_change <= opts.rel_target) break;
        }
        previous = kernel.values;
    }
    return kernel;
}

}  // namespace

CoherenceKernel compute_kernel(const LindbladModel& model, int x, int y, double eps,
                               ClosureRecipe recipe, const KernelOptions& opts) {
    // regions depend only on geometry, so materialize on a dry pass
    const auto& lat = *model.lattice;
    const int d = lat.distance(x, y);
    if (d == Lattice::kInfinity) {
        throw std::invalid_argument("compute_kernel: x and y are in different components");
    }
    std::vector<int> mx, my;
    for (int u = 0; u < lat.size(); ++u) {
        const int du = lat.distance(x, u);
        const int dv = lat.distance(y, u);
        if (opts.geometry == KernelGeometry::three_block) {
            if (du != Lattice::kInfinity && 3 * du <= d) mx.push_back(u);
            if (dv != Lattice::kInfinity && 3 * dv <= d) my.push_back(u);
        } else {
            if (du != Lattice::kInfinity && 2 * du < d) {
                mx.push_back(u);
            } else {
                my.push_back(u);
            }
        }
    }
    const BoundaryClosure closure = materialize_closure(
        model, recipe, make_region(model.lattice, mx), make_region(model.lattice, my));
    return compute_kernel_impl(model, x, y, eps, closure, opts);
}

CoherenceKernel compute_kernel(const LindbladModel& model, int x, int y, double eps,
                               const BoundaryClosure& closure, const KernelOptions& opts) {
    return compute_kernel_impl(model, x, y, eps, closure, opts);
}

double boundary_norm_bound(const LindbladModel& model, const Region& lambda1,
                           const BoundaryClosure& closure) {
    double bound = 0.0;
    auto crossing = [&](const std::vector<int>& support) {
        bool inside = false, outside = false;
        for (int u : support) {
            (lambda1.contains(u) ? inside : outside) = true;
        }
        return inside && outside;
    };
    for (const auto& term : model.hamiltonian_terms) {
        if (crossing(term.support)) bound += 2.0 * num::operator_norm(term.matrix);
    }
    for (const auto& jump : model.jump_operators) {
        if (crossing(jump.support)) {
            const double n = num::operator_norm(jump.matrix);
            bound += 2.0 * n * n;
        }
    }
    for (const auto& term : closure.hamiltonian_terms) {
        bound += 2.0 * num::operator_norm(term.matrix);
    }
    for (const auto& jump : closure.jump_operators) {
        const double n = num::operator_norm(jump.matrix);
        bound += 2.0 * n * n;
    }
    return bound;
}

double verify_integral_representation(const LindbladModel& model, const Region& half,
                                      const BoundaryClosure& closure_half,
                                      const BoundaryClosure& closure_complement,
                                      const Matrix& rho_offblock, double eps,
                                      const KernelOptions& opts) {
    const auto& lat = *model.lattice;
    const Eigen::Index n = lat.size();
    if (rho_offblock.rows() != n || rho_offblock.cols() != n) {
        throw std::invalid_argument("integral representation: rho dimension mismatch");
    }
    const Region comp = make_region(model.lattice, half.complement());

    // locate the off-diagonal block carrying rho
    bool rows_in_half = false, rows_in_comp = false, cols_in_half = false, cols_in_comp = false;
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            if (rho_offblock(r, c) == Complex(0.0, 0.0)) continue;
            (half.contains(static_cast<int>(r)) ? rows_in_half : rows_in_comp) = true;
            (half.contains(static_cast<int>(c)) ? cols_in_half : cols_in_comp) = true;
        }
    }
    if (rows_in_half == rows_in_comp || cols_in_half == cols_in_comp ||
        rows_in_half == cols_in_half) {
        throw std::invalid_argument("integral representation: rho must occupy one off-diagonal block");
    }
    const Region& row_region = rows_in_half ? half : comp;
    const Region& col_region = rows_in_half ? comp : half;
    const BoundaryClosure& row_closure = rows_in_half ? closure_half : closure_complement;
    const BoundaryClosure& col_closure = rows_in_half ? closure_complement : closure_half;

    const DissipativeHamiltonian d_row = build_dissipative(model, row_region, row_closure);
    const DissipativeHamiltonian d_col = build_dissipative(model, col_region, col_closure);
    Matrix rho_block(row_region.size(), col_region.size());
    for (int r = 0; r < row_region.size(); ++r) {
        for (int c = 0; c < col_region.size(); ++c) {
            rho_block(r, c) = rho_offblock(row_region.members[r], col_region.members[c]);
        }
    }

    // contour route, with node doubling
    const Matrix col_adjoint = d_col.matrix.adjoint();
    const Matrix id_row = Matrix::Identity(d_row.matrix.rows(), d_row.matrix.rows());
    const Matrix id_col = Matrix::Identity(col_adjoint.rows(), col_adjoint.rows());
    ContourOptions copts = opts.contour;
    Matrix integral, previous;
    for (int nodes = opts.contour.nodes_per_side; nodes <= opts.max_nodes_per_side; nodes *= 2) {
        copts.nodes_per_side = nodes;
        const Contour contour = build_contour(d_row.matrix, eps, copts);
        const std::size_t m = contour.nodes.size();
        std::vector<Matrix> pieces(m);
        num::parallel_for(m, opts.threads, [&](std::size_t i) {
            const Complex z = contour.nodes[i];
            const Matrix left = Eigen::PartialPivLU<Matrix>(z * id_row - d_row.matrix).solve(rho_block);
            pieces[i] = Eigen::PartialPivLU<Matrix>(Matrix(((eps - z) * id_col - col_adjoint).transpose()))
                            .solve(left.transpose())
                            .transpose();
        });
        integral = Matrix::Zero(row_region.size(), col_region.size());
        const Complex two_pi_i(0.0, 2.0 * M_PI);
        for (std::size_t i = 0; i < m; ++i) {
            integral.noalias() += (contour.weights[i] / two_pi_i) * pieces[i];
        }
        if (previous.size() &&
            max_abs(integral - previous) <= opts.rel_target * std::max(max_abs(integral), 1e-300)) {
            break;
        }
        previous = integral;
    }

    // dense oracle: (eps - L0)^{-1} on the decoupled generator
    LindbladModel decoupled;
    decoupled.lattice = model.lattice;
    decoupled.kind = model.kind + "_decoupled";
    decoupled.declared = model.declared;
    auto inside = [](const std::vector<int>& support, const Region& region) {
        return std::all_of(support.begin(), support.end(),
                           [&](int u) { return region.contains(u); });
    };
    for (const auto& term : model.hamiltonian_terms) {
        if (inside(term.support, half) || inside(term.support, comp)) {
            decoupled.hamiltonian_terms.push_back(term);
        }
    }
    for (const auto& jump : model.jump_operators) {
        if (inside(jump.support, half) || inside(jump.support, comp)) {
            decoupled.jump_operators.push_back(jump);
        }
    }
    for (const auto* closure : {&closure_half, &closure_complement}) {
        decoupled.hamiltonian_terms.insert(decoupled.hamiltonian_terms.end(),
                                           closure->hamiltonian_terms.begin(),
                                           closure->hamiltonian_terms.end());
        decoupled.jump_operators.insert(decoupled.jump_operators.end(),
                                        closure->jump_operators.begin(),
                                        closure->jump_operators.end());
    }
    SparseMatrix resolvent_matrix = -assemble_superoperator(decoupled);
    resolvent_matrix += Complex(eps, 0.0) * num::sparse_identity(n * n);
    resolvent_matrix.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(resolvent_matrix);
    if (lu.info() != Eigen::Success) {
        throw std::runtime_error("integral representation: oracle factorization failed");
    }
    const Matrix oracle_full = num::unvec(lu.solve(num::vec(rho_offblock)).eval(), n);

    double deviation = 0.0;
    for (int r = 0; r < row_region.size(); ++r) {
        for (int c = 0; c < col_region.size(); ++c) {
            deviation = std::max(
                deviation,
                std::abs(integral(r, c) - oracle_full(row_region.members[r], col_region.members[c])));
        }
    }
    return deviation;
}

CoherenceBoundReport coherence_bound_report(const LindbladModel& model, const Matrix& rho0, int x,
                                            int y, double eps, ClosureRecipe recipe,
                                            KernelOptions opts) {
    require_state(rho0, 1e-8);
    if (opts.geometry != KernelGeometry::three_block) {
        throw std::invalid_argument("coherence_bound_report: three-block geometry required");
    }
    opts.rel_target = std::min(opts.rel_target, 1e-11);
    CoherenceBoundReport report;
    report.kernel = compute_kernel(model, x, y, eps, recipe, opts);
    const Region& rx = report.kernel.region_x;
    const Region& ry = report.kernel.region_y;

    const Matrix abel = abel_average(model, rho0, eps);
    report.abel_element = abel(x, y);

    Complex kernel_term(0.0, 0.0);
    for (int u = 0; u < rx.size(); ++u) {
        for (int v = 0; v < ry.size(); ++v) {
            kernel_term += report.kernel.values(u, v) * rho0(rx.members[u], ry.members[v]);
        }
    }
    report.kernel_term = eps * kernel_term;
    report.lhs = std::abs(report.abel_element - report.kernel_term);

    const int range = validate_locality(model).range;
    const std::vector<int> rb_x = r_boundary(rx, range);
    const std::vector<int> rb_y = r_boundary(ry, range);
    auto in_sorted = [](const std::vector<int>& sorted, int u) {
        return std::binary_search(sorted.begin(), sorted.end(), u);
    };
    report.restricted_kernel_sum = 0.0;
    for (int u = 0; u < rx.size(); ++u) {
        for (int v = 0; v < ry.size(); ++v) {
            if (in_sorted(rb_x, rx.members[u]) || in_sorted(rb_y, ry.members[v])) {
                report.restricted_kernel_sum += std::abs(report.kernel.values(u, v));
            }
        }
    }

    std::vector<int> joint = rx.members;
    joint.insert(joint.end(), ry.members.begin(), ry.members.end());
    report.boundary_bound =
        boundary_norm_bound(model, make_region(model.lattice, joint), report.kernel.closure);
    report.rhs = report.restricted_kernel_sum * report.boundary_bound;
    report.satisfied = report.lhs <= report.rhs + 1e-10;

    std::vector<std::pair<double, double>> points;
    for (int u = 0; u < rx.size(); ++u) {
        for (int v = 0; v < ry.size(); ++v) {
            const int du = model.lattice->distance(x, rx.members[u]);
            const int dv = model.lattice->distance(y, ry.members[v]);
            points.emplace_back(du + dv, std::abs(report.kernel.values(u, v)));
        }
    }
    try {
        const DecayFit fit = fit_exponential_decay(points);
        report.fit_c = fit.c;
        report.fit_mu = fit.mu;
        report.fit_r2 = fit.r2;
    } catch (const std::exception&) {
        report.fit_c = report.fit_mu = report.fit_r2 = 0.0;  // too few usable points
    }
    return report;
}

}  // namespace lindlab
