// lattice.cpp — lattice construction, BFS distances, and boundary-set enumeration

#include "lindlab/lattice.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

namespace lindlab {

struct LatticeBuilder {
    static Lattice finalize(int dimension, std::vector<std::vector<int>> sites, bool ring_closure) {
        Lattice lat;
        lat.dimension = dimension;
        lat.sites = std::move(sites);
        lat.ring = ring_closure;
        for (int i = 0; i < lat.size(); ++i) {
            const auto& coords = lat.sites[i];
            if (static_cast<int>(coords.size()) != dimension) {
                throw std::invalid_argument("lattice: site dimension mismatch");
            }
            if (!lat.index_.emplace(coords, i).second) {
                throw std::invalid_argument("lattice: duplicate site");
            }
        }
        lat.adjacency.assign(lat.size(), {});
        for (int i = 0; i < lat.size(); ++i) {
            std::vector<int> probe = lat.sites[i];
            for (int axis = 0; axis < dimension; ++axis) {
                for (int step : {-1, +1}) {
                    probe[axis] += step;
                    auto it = lat.index_.find(probe);
                    if (it != lat.index_.end() && it->second != i) {
                        lat.adjacency[i].push_back(it->second);
                    }
                    probe[axis] -= step;
                }
            }
        }
        if (ring_closure && lat.size() > 2) {
            const int first = 0;
            const int last = lat.size() - 1;
            lat.adjacency[first].push_back(last);
            lat.adjacency[last].push_back(first);
        }
        for (auto& nbrs : lat.adjacency) {
            std::sort(nbrs.begin(), nbrs.end());
            nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        }
        lat.distances_.assign(lat.size(), std::vector<int>(lat.size(), Lattice::kInfinity));
        for (int source = 0; source < lat.size(); ++source) {
            auto& row = lat.distances_[source];
            row[source] = 0;
            std::deque<int> queue{source};
            while (!queue.empty()) {
                const int u = queue.front();
                queue.pop_front();
                for (int v : lat.adjacency[u]) {
                    if (row[v] == Lattice::kInfinity) {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        return lat;
    }
};

bool Lattice::has_site(const std::vector<int>& coords) const {
    return index_.count(coords) > 0;
}

int Lattice::site_index(const std::vector<int>& coords) const {
    auto it = index_.find(coords);
    if (it == index_.end()) throw std::invalid_argument("lattice: site not in lattice");
    return it->second;
}

int Lattice::distance(int a, int b) const {
    if (a < 0 || a >= size() || b < 0 || b >= size()) {
        throw std::invalid_argument("lattice: site ordinal out of range");
    }
    return distances_[a][b];
}

bool Lattice::adjacent(int a, int b) const {
    return std::binary_search(adjacency[a].begin(), adjacency[a].end(), b);
}

int Lattice::edge_count() const {
    int twice = 0;
    for (const auto& nbrs : adjacency) twice += static_cast<int>(nbrs.size());
    return twice / 2;
}

nlohmann::json Lattice::to_json() const {
    nlohmann::json j;
    j["dimension"] = dimension;
    j["sites"] = sites;
    return j;
}

LatticePtr build_box(const std::vector<int>& extents) {
    if (extents.empty()) throw std::invalid_argument("box: empty extent list");
    for (int e : extents) {
        if (e <= 0) throw std::invalid_argument("box: extents must be positive");
    }
    std::vector<std::vector<int>> sites;
    std::vector<int> coords(extents.size(), 0);
    while (true) {
        sites.push_back(coords);
        int axis = static_cast<int>(extents.size()) - 1;
        while (axis >= 0) {
            if (++coords[axis] < extents[axis]) break;
            coords[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return std::make_shared<Lattice>(
        LatticeBuilder::finalize(static_cast<int>(extents.size()), std::move(sites), false));
}

LatticePtr build_chain(int n) {
    return build_box({n});
}

LatticePtr build_ring(int n) {
    if (n <= 0) throw std::invalid_argument("ring: size must be positive");
    std::vector<std::vector<int>> sites;
    sites.reserve(n);
    for (int i = 0; i < n; ++i) sites.push_back({i});
    return std::make_shared<Lattice>(LatticeBuilder::finalize(1, std::move(sites), true));
}

LatticePtr build_explicit_lattice(int dimension, std::vector<std::vector<int>> sites) {
    if (dimension <= 0) throw std::invalid_argument("lattice: dimension must be positive");
    if (sites.empty()) throw std::invalid_argument("lattice: site list empty");
    return std::make_shared<Lattice>(LatticeBuilder::finalize(dimension, std::move(sites), false));
}

LatticePtr lattice_from_json(const nlohmann::json& j) {
    return build_explicit_lattice(j.at("dimension").get<int>(),
                                  j.at("sites").get<std::vector<std::vector<int>>>());
}

bool Region::contains(int site) const {
    return std::binary_search(members.begin(), members.end(), site);
}

int Region::diameter() const {
    int diam = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t k = i + 1; k < members.size(); ++k) {
            const int d = lattice->distance(members[i], members[k]);
            if (d == Lattice::kInfinity) return Lattice::kInfinity;
            diam = std::max(diam, d);
        }
    }
    return diam;
}

std::vector<int> Region::complement() const {
    std::vector<int> out;
    out.reserve(lattice->size() - size());
    for (int i = 0; i < lattice->size(); ++i) {
        if (!contains(i)) out.push_back(i);
    }
    return out;
}

Region make_region(LatticePtr lattice, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && (members.front() < 0 || members.back() >= lattice->size())) {
        throw std::invalid_argument("region: member outside lattice");
    }
    return Region{std::move(lattice), std::move(members)};
}

Region ball(const LatticePtr& lattice, int center, double radius) {
    if (center < 0 || center >= lattice->size()) {
        throw std::invalid_argument("ball: center not in lattice");
    }
    if (radius < 0) throw std::invalid_argument("ball: negative radius");
    std::vector<int> members;
    for (int u = 0; u < lattice->size(); ++u) {
        const int d = lattice->distance(center, u);
        if (d != Lattice::kInfinity && d <= radius) members.push_back(u);
    }
    return Region{lattice, std::move(members)};
}

int set_distance(const Lattice& lat, const std::vector<int>& a, const std::vector<int>& b) {
    int best = Lattice::kInfinity;
    for (int u : a) {
        for (int v : b) {
            best = std::min(best, lat.distance(u, v));
        }
    }
    return best;
}

int region_inradius(const Region& region) {
    const std::vector<int> comp = region.complement();
    if (comp.empty()) return Lattice::kInfinity;
    int best = 0;
    for (int u : region.members) {
        best = std::max(best, set_distance(*region.lattice, {u}, comp));
    }
    return best;
}

std::vector<int> r_boundary(const Region& region, int r) {
    const auto& lat = *region.lattice;
    const std::vector<int> comp = region.complement();
    std::vector<int> out;
    for (int u = 0; u < lat.size(); ++u) {
        const int to_region = set_distance(lat, {u}, region.members);
        const int to_comp = comp.empty() ? Lattice::kInfinity : set_distance(lat, {u}, comp);
        if (std::max(to_region, to_comp) <= r) out.push_back(u);
    }
    return out;
}

std::vector<std::vector<int>> connected_subsets_up_to_diameter(const Lattice& lat, int r,
                                                               std::size_t cap) {
    // Enumerates each connected subset once, rooted at its minimal ordinal; a set of
    // diameter <= r is contained in the r-ball around any member.
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    std::vector<char> forbidden(lat.size(), 0);

    auto diameter_ok = [&](const std::vector<int>& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t k = i + 1; k < s.size(); ++k) {
                const int d = lat.distance(s[i], s[k]);
                if (d == Lattice::kInfinity || d > r) return false;
            }
        }
        return true;
    };

    std::function<void(int, std::vector<int>)> grow = [&](int root, std::vector<int> frontier) {
        if (out.size() >= cap) throw std::runtime_error("boundary enumeration exceeds cap");
        if (diameter_ok(current)) {
            std::vector<int> sorted = current;
            std::sort(sorted.begin(), sorted.end());
            out.push_back(std::move(sorted));
        } else {
            return;  // supersets only get wider
        }
        // frontier: candidate extensions, each > root and within the root ball
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            const int cand = frontier[i];
            if (forbidden[cand]) continue;
            std::vector<int> next_frontier(frontier.begin() + i + 1, frontier.end());
            for (int nb : lat.adjacency[cand]) {
                const int droot = lat.distance(root, nb);
                if (nb > root && !forbidden[nb] && droot != Lattice::kInfinity && droot <= r &&
                    std::find(current.begin(), current.end(), nb) == current.end() &&
                    std::find(next_frontier.begin(), next_frontier.end(), nb) == next_frontier.end() &&
                    std::find(frontier.begin(), frontier.begin() + i + 1, nb) ==
                        frontier.begin() + i + 1) {
                    next_frontier.push_back(nb);
                }
            }
            current.push_back(cand);
            grow(root, next_frontier);
            current.pop_back();
            forbidden[cand] = 1;
        }
        for (std::size_t i = 0; i < frontier.size(); ++i) forbidden[frontier[i]] = 0;
    };

    for (int root = 0; root < lat.size(); ++root) {
        current = {root};
        std::vector<int> frontier;
        for (int nb : lat.adjacency[root]) {
            if (nb > root) frontier.push_back(nb);
        }
        grow(root, frontier);
    }
    return out;
}

BoundaryFamily bipartition_boundaries(const Region& half, int r) {
    const auto& lat = *half.lattice;
    for (int u : half.members) {
        if (u < 0 || u >= lat.size()) throw std::invalid_argument("bipartition: half not a subset");
    }
    const std::vector<int> comp = half.complement();
    BoundaryFamily fam;
    const auto subsets = connected_subsets_up_to_diameter(lat, r);
    for (const auto& z : subsets) {
        bool meets_half = false, meets_comp = false;
        for (int u : z) {
            if (half.contains(u)) {
                meets_half = true;
            } else {
                meets_comp = true;
            }
        }
        if (meets_half && meets_comp) {
            fam.crossing_sets.push_back(Region{half.lattice, z});
        }
        if (meets_half && !meets_comp && !comp.empty() && set_distance(lat, z, comp) <= r) {
            fam.inner_boundary.push_back(Region{half.lattice, z});
        }
    }
    fam.r_boundary_half = r_boundary(half, r);
    fam.r_boundary_complement = r_boundary(make_region(half.lattice, comp), r);
    return fam;
}

}  // namespace lindlab
