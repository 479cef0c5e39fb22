// model.cpp — builders for the example Lindbladian families and locality validation

#include "lindlab/model.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lindlab {

namespace {

constexpr double kHermTol = 1e-12;

void check_term_support(const LindbladModel& model, const std::vector<int>& support,
                        Eigen::Index rows) {
    if (support.empty()) throw std::invalid_argument("model: empty term support");
    if (!std::is_sorted(support.begin(), support.end())) {
        throw std::invalid_argument("model: term support must be sorted");
    }
    for (int u : support) {
        if (u < 0 || u >= model.lattice->size()) {
            throw std::invalid_argument("model: term support outside lattice");
        }
    }
    if (rows != static_cast<Eigen::Index>(support.size())) {
        throw std::invalid_argument("model: term matrix does not match support size");
    }
}

int support_diameter(const Lattice& lat, const std::vector<int>& support) {
    int diam = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        for (std::size_t k = i + 1; k < support.size(); ++k) {
            diam = std::max(diam, lat.distance(support[i], support[k]));
        }
    }
    return diam;
}

}  // namespace

SparseMatrix LindbladModel::embed(const std::vector<int>& support, const Matrix& local) const {
    SparseMatrix out(lattice->size(), lattice->size());
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index r = 0; r < local.rows(); ++r) {
        for (Eigen::Index c = 0; c < local.cols(); ++c) {
            if (local(r, c) != Complex(0.0, 0.0)) {
                trips.emplace_back(support[r], support[c], local(r, c));
            }
        }
    }
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SparseMatrix LindbladModel::hamiltonian() const {
    SparseMatrix h(lattice->size(), lattice->size());
    for (const auto& term : hamiltonian_terms) {
        h += embed(term.support, term.matrix);
    }
    return h;
}

Matrix LindbladModel::hamiltonian_dense() const {
    return Matrix(hamiltonian());
}

nlohmann::json LindbladModel::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["lattice"] = lattice->to_json();
    j["declared"] = {{"range", declared.range},
                     {"per_region", declared.per_region},
                     {"norm_bound", declared.norm_bound}};
    auto term_json = [&](const std::vector<int>& support, const Matrix& m) {
        nlohmann::json t;
        std::vector<std::vector<int>> coords;
        for (int u : support) coords.push_back(lattice->sites[u]);
        t["support"] = coords;
        std::vector<std::vector<double>> entries;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                entries.push_back({m(r, c).real(), m(r, c).imag()});
            }
        }
        t["entries"] = entries;
        return t;
    };
    j["hamiltonian_terms"] = nlohmann::json::array();
    for (const auto& term : hamiltonian_terms) {
        j["hamiltonian_terms"].push_back(term_json(term.support, term.matrix));
    }
    j["jump_operators"] = nlohmann::json::array();
    for (const auto& jump : jump_operators) {
        auto t = term_json(jump.support, jump.matrix);
        t["label"] = jump.label;
        j["jump_operators"].push_back(t);
    }
    return j;
}

LocalityReport validate_locality(const LindbladModel& model) {
    const auto& lat = *model.lattice;
    LocalityReport report;
    std::map<std::vector<int>, int> jumps_per_support;
    std::map<std::vector<int>, int> distinct_supports;
    for (const auto& term : model.hamiltonian_terms) {
        report.range = std::max(report.range, support_diameter(lat, term.support));
        report.norm = std::max(report.norm, num::operator_norm(term.matrix));
        distinct_supports.emplace(term.support, 0);
    }
    for (const auto& jump : model.jump_operators) {
        report.range = std::max(report.range, support_diameter(lat, jump.support));
        report.norm = std::max(report.norm, num::operator_norm(jump.matrix));
        distinct_supports.emplace(jump.support, 0);
        report.per_region = std::max(report.per_region, ++jumps_per_support[jump.support]);
    }
    std::vector<int> cover(lat.size(), 0);
    for (const auto& [support, unused] : distinct_supports) {
        for (int u : support) ++cover[u];
    }
    report.cover_count = cover.empty() ? 0 : *std::max_element(cover.begin(), cover.end());
    report.pass = report.range <= model.declared.range &&
                  report.per_region <= model.declared.per_region &&
                  report.norm <= model.declared.norm_bound + 1e-12;
    return report;
}

LindbladModel dephasing_model(LatticePtr lattice, double rate) {
    if (rate < 0) throw std::invalid_argument("dephasing: rate must be nonnegative");
    LindbladModel model;
    model.lattice = lattice;
    model.kind = "dephasing";
    const double amp = std::sqrt(rate);
    if (rate > 0) {
        for (int v = 0; v < lattice->size(); ++v) {
            Matrix m(1, 1);
            m(0, 0) = amp;
            model.jump_operators.push_back({{v}, m, "dephasing_" + std::to_string(v)});
        }
    }
    model.declared = {0, 1, std::max(1.0, amp)};
    return model;
}

LindbladModel coherence_creation_model(LatticePtr lattice) {
    LindbladModel model;
    model.lattice = lattice;
    model.kind = "coherence_creation";
    for (int v = 0; v < lattice->size(); ++v) {
        for (int w : lattice->adjacency[v]) {
            if (w <= v) continue;
            Matrix m(2, 2);
            // (|v> + |w>)(<v| - <w|) in support order [v, w]
            m << 1, -1, 1, -1;
            model.jump_operators.push_back(
                {{v, w}, m, "genesis_" + std::to_string(v) + "_" + std::to_string(w)});
        }
    }
    model.declared = {1, 1, 2.0};
    return model;
}

std::vector<std::pair<int, int>> default_hopping_orientation(const Lattice& lattice) {
    std::vector<std::pair<int, int>> edges;  // (source w, target v): L = |v><w|
    if (lattice.ring) {
        const int n = lattice.size();
        for (int k = 0; k < n; ++k) {
            edges.emplace_back(k, (k + n - 1) % n);
        }
        return edges;
    }
    for (int v = 0; v < lattice.size(); ++v) {
        for (int w : lattice.adjacency[v]) {
            if (w > v) edges.emplace_back(w, v);
        }
    }
    return edges;
}

LindbladModel incoherent_hopping_model(LatticePtr lattice,
                                       std::optional<std::vector<std::pair<int, int>>> oriented_edges) {
    LindbladModel model;
    model.lattice = lattice;
    model.kind = "incoherent_hopping";
    const auto edges = oriented_edges ? *oriented_edges : default_hopping_orientation(*lattice);
    for (const auto& [source, target] : edges) {
        if (!lattice->adjacent(source, target)) {
            throw std::invalid_argument("incoherent_hopping: oriented edge is not an adjacency");
        }
        std::vector<int> support{std::min(source, target), std::max(source, target)};
        Matrix m = Matrix::Zero(2, 2);
        const int row = target == support[0] ? 0 : 1;
        const int col = source == support[0] ? 0 : 1;
        m(row, col) = 1.0;
        model.jump_operators.push_back(
            {support, m, "hop_" + std::to_string(source) + "_to_" + std::to_string(target)});
    }
    model.declared = {1, 1, 1.0};
    return model;
}

LindbladModel anderson_model(LatticePtr lattice, double lambda, const RealVector& potential,
                             bool laplacian_diagonal) {
    if (!std::isfinite(lambda)) throw std::invalid_argument("anderson: lambda must be finite");
    if (potential.size() != lattice->size()) {
        throw std::invalid_argument("anderson: potential size mismatch");
    }
    if (!potential.allFinite()) throw std::invalid_argument("anderson: potential must be bounded");
    LindbladModel model;
    model.lattice = lattice;
    model.kind = "anderson";
    double max_onsite = 0.0;
    for (int v = 0; v < lattice->size(); ++v) {
        for (int w : lattice->adjacency[v]) {
            if (w <= v) continue;
            Matrix m(2, 2);
            m << 0, -1, -1, 0;
            model.hamiltonian_terms.push_back({{v, w}, m});
        }
        const double onsite = lambda * potential(v) + (laplacian_diagonal ? lattice->degree(v) : 0.0);
        if (onsite != 0.0) {
            Matrix m(1, 1);
            m(0, 0) = onsite;
            model.hamiltonian_terms.push_back({{v}, m});
            max_onsite = std::max(max_onsite, std::abs(onsite));
        }
    }
    model.declared = {1, 0, std::max(1.0, max_onsite)};
    return model;
}

LindbladModel explicit_model(LatticePtr lattice, std::vector<HamiltonianTerm> terms,
                             std::vector<JumpOperator> jumps, Locality declared) {
    LindbladModel model;
    model.lattice = lattice;
    model.kind = "explicit";
    model.declared = declared;
    for (auto& term : terms) {
        check_term_support(model, term.support, term.matrix.rows());
        if (num::hermiticity_deviation(term.matrix) > kHermTol) {
            throw std::invalid_argument("explicit_model: non-Hermitian Hamiltonian term");
        }
        model.hamiltonian_terms.push_back(std::move(term));
    }
    for (auto& jump : jumps) {
        check_term_support(model, jump.support, jump.matrix.rows());
        model.jump_operators.push_back(std::move(jump));
    }
    return model;
}

LindbladModel compose_models(const LindbladModel& a, const LindbladModel& b) {
    if (a.lattice != b.lattice) {
        throw std::invalid_argument("compose_models: lattice mismatch");
    }
    LindbladModel model;
    model.lattice = a.lattice;
    model.kind = a.kind + "+" + b.kind;
    model.hamiltonian_terms = a.hamiltonian_terms;
    model.hamiltonian_terms.insert(model.hamiltonian_terms.end(), b.hamiltonian_terms.begin(),
                                   b.hamiltonian_terms.end());
    model.jump_operators = a.jump_operators;
    model.jump_operators.insert(model.jump_operators.end(), b.jump_operators.begin(),
                                b.jump_operators.end());
    model.declared.range = std::max(a.declared.range, b.declared.range);
    model.declared.per_region = a.declared.per_region + b.declared.per_region;
    model.declared.norm_bound = std::max(a.declared.norm_bound, b.declared.norm_bound);
    return model;
}

}  // namespace lindlab
