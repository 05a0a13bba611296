#ifndef BRATTELI_SKELETON_HPP
#define BRATTELI_SKELETON_HPP

#include <optional>
#include <string>
#include <vector>

#include "bratteli/ordering.hpp"

namespace bratteli {

// Designated extremal edges per vertex (levels >= 2) together with the sets
// of maximal/minimal vertices per level (levels >= 1) through which the
// designated extremal edge chains flow.
struct Skeleton {
    // max_edges[k-2][v] / min_edges[k-2][v] for edge level k in 2..depth.
    std::vector<std::vector<EdgeId>> max_edges;
    std::vector<std::vector<EdgeId>> min_edges;
    // Membership masks, indexed [n-1][v] for level n in 1..depth.
    std::vector<std::vector<char>> max_vertices;
    std::vector<std::vector<char>> min_vertices;

    int depth() const { return static_cast<int>(max_vertices.size()); }
    int max_source(int level, int v) const { return max_edges.at(level - 2).at(v).source; }
    int min_source(int level, int v) const { return min_edges.at(level - 2).at(v).source; }
    bool is_max_vertex(int n, int v) const { return max_vertices.at(n - 1).at(v) != 0; }
    bool is_min_vertex(int n, int v) const { return min_vertices.at(n - 1).at(v) != 0; }
    std::vector<int> max_vertex_list(int n) const;
    std::vector<int> min_vertex_list(int n) const;

    // Backward chase along designated extremal edges, from level `from` down
    // to level `to` (from > to >= 1).
    int max_chain_source(int from, int to, int v) const;
    int min_chain_source(int from, int to, int v) const;
};

// Checks the structural invariants: ranges match, sources lie in the
// extremal vertex sets, distinct edges where a vertex is both maximal and
// minimal, and extendability of the vertex sets. Throws input_error.
void validate_skeleton(const BratteliDiagram& b, const Skeleton& s);

// Extremal edges read off an order, with maximal/minimal vertex sets taken
// as the vertices whose extremal chains survive to the deepest level.
Skeleton extract_skeleton(const BratteliDiagram& b, const DiagramOrder& o);

// True when every designated extremal edge has its source in the
// corresponding extremal vertex set.
bool well_telescoped(const BratteliDiagram& b, const Skeleton& s);

struct WellTelescoped {
    TelescopeResult tel;
    DiagramOrder order;
    Skeleton skeleton;
};

// Telescopes (B, o) along the greedily-chosen smallest admissible levels so
// that the extracted skeleton is valid. Throws input_error when not even one
// telescoping step fits in the available depth.
WellTelescoped skeleton_from_order(const BratteliDiagram& b, const DiagramOrder& o);

// Level maps from maximal vertices to sets of minimal vertices.
struct Correspondence {
    // sigma[n-1][vt] = sorted minimal-vertex list, empty unless vt is maximal
    // at level n.
    std::vector<std::vector<std::vector<int>>> sigma;

    int levels() const { return static_cast<int>(sigma.size()); }
    const std::vector<int>& at(int n, int vt) const { return sigma.at(n - 1).at(vt); }
};

// sigma_n read off the level-n language: vt maps to the minimal vertices
// that follow it in some factor, up to the stated horizon.
std::vector<std::vector<int>> sigma_from_order(const BratteliDiagram& b, const DiagramOrder& o,
                                               const Skeleton& s, int n, int horizon,
                                               long long budget = 1'000'000);

// All levels 1..max_level at horizon min(level + window, depth).
Correspondence correspondence_from_order(const BratteliDiagram& b, const DiagramOrder& o,
                                         const Skeleton& s, int max_level, int window = 3);

// Stationary variant: sigma from the two-letter closure of the per-vertex
// word patterns, the same at every level.
std::vector<std::vector<int>> sigma_stationary(const BratteliDiagram& b, const Skeleton& s,
                                               const std::vector<std::vector<int>>& words_by_vertex,
                                               int n);

struct CorrespondenceReport {
    bool covering_ok = true;
    bool composition_ok = true;
    bool threads_ok = true;           // every maximal chain admits a compatible minimal chain
    bool threads_unique = true;       // ... exactly one, up to the checked depth
    int point_map_from_level = -1;    // all images singletons from this level on; -1 if never
    int checked_depth = 0;
    std::string witness;
    std::vector<std::string> assumed;  // assumptions that are not finitely checkable

    bool valid() const { return covering_ok && composition_ok && threads_ok; }
};

CorrespondenceReport validate_correspondence(const BratteliDiagram& b, const Skeleton& s,
                                             const Correspondence& c, int depth = -1);

}  // namespace bratteli

#endif
