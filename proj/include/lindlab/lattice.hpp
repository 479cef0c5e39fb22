// lattice.hpp — finite lattice geometry: sites, induced adjacency, graph distance,
// balls, bipartitions and the boundary-set families used by the coherence bound

#pragma once

#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace lindlab {

// Finite subset of Z^d with induced nearest-neighbor adjacency. The `ring` kind
// additionally closes a 1-d chain into a cycle. Immutable after construction;
// the all-pairs BFS distance table is built eagerly.
struct Lattice {
    static constexpr int kInfinity = std::numeric_limits<int>::max();

    int dimension = 0;
    std::vector<std::vector<int>> sites;
    std::vector<std::vector<int>> adjacency;  // sorted neighbor ordinals per site
    bool ring = false;

    int size() const { return static_cast<int>(sites.size()); }
    bool has_site(const std::vector<int>& coords) const;
    int site_index(const std::vector<int>& coords) const;  // throws if absent
    int distance(int a, int b) const;                      // kInfinity if disconnected
    int degree(int a) const { return static_cast<int>(adjacency[a].size()); }
    bool adjacent(int a, int b) const;
    int edge_count() const;

    nlohmann::json to_json() const;  // {"dimension": d, "sites": [[...], ...]}

  private:
    friend struct LatticeBuilder;
    std::map<std::vector<int>, int> index_;
    std::vector<std::vector<int>> distances_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

LatticePtr build_box(const std::vector<int>& extents);
LatticePtr build_chain(int n);
LatticePtr build_ring(int n);
LatticePtr build_explicit_lattice(int dimension, std::vector<std::vector<int>> sites);
LatticePtr lattice_from_json(const nlohmann::json& j);

// Site subset of a parent lattice; distances and diameters are those of the parent.
struct Region {
    LatticePtr lattice;
    std::vector<int> members;  // sorted ordinals

    int size() const { return static_cast<int>(members.size()); }
    bool contains(int site) const;
    int diameter() const;  // Lattice::kInfinity if some pair is disconnected
    std::vector<int> complement() const;
};

Region make_region(LatticePtr lattice, std::vector<int> members);

// Ball {u : d(x,u) <= r} in the parent graph distance.
Region ball(const LatticePtr& lattice, int center, double radius);

// Graph distance between two site sets (kInfinity when unreachable).
int set_distance(const Lattice& lat, const std::vector<int>& a, const std::vector<int>& b);

// Largest distance from a member to the complement; kInfinity if the region is
// the whole lattice.
int region_inradius(const Region& region);

// R-boundary of a region within its parent: sites u with
// max{d(u, region), d(u, complement)} <= R.
std::vector<int> r_boundary(const Region& region, int r);

// Boundary families attached to a bipartition (half, complement):
//   crossing_sets  — connected Z with diam(Z) <= R meeting both halves
//   inner_boundary — connected Z inside `half` with diam(Z) <= R and d(Z, complement) <= R
struct BoundaryFamily {
    std::vector<Region> crossing_sets;
    std::vector<Region> inner_boundary;
    std::vector<int> r_boundary_half;
    std::vector<int> r_boundary_complement;
};

BoundaryFamily bipartition_boundaries(const Region& half, int r);

// All connected subsets of diameter <= R (each such set lies in the R-ball of its
// minimal member). Used by the boundary enumeration; desk-scale only.
std::vector<std::vector<int>> connected_subsets_up_to_diameter(const Lattice& lat, int r,
                                                               std::size_t cap = 2000000);

}  // namespace lindlab
