// model.hpp — construction and validation of (R,I,N)-local Lindbladians

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lindlab/lattice.hpp"
#include "lindlab/numerics.hpp"

namespace lindlab {

// Hermitian local Hamiltonian term h_Z, stored dense on its (small) support.
struct HamiltonianTerm {
    std::vector<int> support;  // sorted site ordinals
    Matrix matrix;             // support.size() x support.size(), Hermitian
};

struct JumpOperator {
    std::vector<int> support;
    Matrix matrix;
    std::string label;
};

// Declared locality parameters (R, I, N).
struct Locality {
    int range = 0;        // max support diameter
    int per_region = 0;   // max jump operators per support set
    double norm_bound = 0.0;
};

struct LindbladModel {
    LatticePtr lattice;
    std::vector<HamiltonianTerm> hamiltonian_terms;
    std::vector<JumpOperator> jump_operators;
    Locality declared;
    std::string kind;

    SparseMatrix hamiltonian() const;                      // assembled global H
    SparseMatrix embed(const std::vector<int>& support, const Matrix& local) const;
    Matrix hamiltonian_dense() const;

    nlohmann::json to_json() const;
};

struct LocalityReport {
    int range = 0;
    int per_region = 0;
    double norm = 0.0;
    int cover_count = 0;  // max number of distinct term supports covering one site
    bool pass = false;
};

LocalityReport validate_locality(const LindbladModel& model);

// L_v = sqrt(rate) |v><v| on every site.
LindbladModel dephasing_model(LatticePtr lattice, double rate = 1.0);

// L_(v,w) = (|v> + |w>)(<v| - <w|) on every edge; the dissipator sum is the
// negative graph Laplacian.
LindbladModel coherence_creation_model(LatticePtr lattice);

// L_e = |target><source| per oriented edge. Default orientation: cyclic on rings,
// otherwise from the larger to the smaller site ordinal (matching L_k = |k><k+1|
// on a chain).
LindbladModel incoherent_hopping_model(
    LatticePtr lattice,
    std::optional<std::vector<std::pair<int, int>>> oriented_edges = std::nullopt);

std::vector<std::pair<int, int>> default_hopping_orientation(const Lattice& lattice);

// H = H0 + lambda V with H0 the nearest-neighbor hopping -sum |v><w|+|w><v| and V
// the supplied per-site potential. `laplacian_diagonal` adds the degree diagonal,
// turning H0 into the full negative graph Laplacian.
LindbladModel anderson_model(LatticePtr lattice, double lambda, const RealVector& potential,
                             bool laplacian_diagonal = false);

LindbladModel explicit_model(LatticePtr lattice, std::vector<HamiltonianTerm> terms,
                             std::vector<JumpOperator> jumps, Locality declared);

LindbladModel compose_models(const LindbladModel& a, const LindbladModel& b);

}  // namespace lindlab
