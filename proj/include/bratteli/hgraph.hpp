#ifndef BRATTELI_HGRAPH_HPP
#define BRATTELI_HGRAPH_HPP

#include <optional>
#include <string>
#include <vector>

#include "bratteli/skeleton.hpp"

namespace bratteli {

// One block of the common refinement of the two extremal-source partitions
// of V_n: the vertices whose minimal edge comes from `min_vertex` and whose
// maximal edge comes from `max_vertex` (both at level n-1).
struct Cell {
    int min_vertex = 0;
    int max_vertex = 0;
    std::vector<int> members;
};

// Directed graph on the nonempty cells at level n. There is an edge from
// [vb, vt] to [vb', vt'] exactly when vb' lies in sigma_{n-1}(vt).
struct AssociatedGraph {
    int level = 0;
    std::vector<Cell> cells;
    std::vector<std::vector<int>> adj;
    std::vector<int> cell_of_vertex;  // V_n -> cell index

    bool has_loop(int cell) const;
    std::string label(const BratteliDiagram& b, int cell) const;
};

std::vector<Cell> build_cells(const BratteliDiagram& b, const Skeleton& s, int n);

AssociatedGraph build_graph(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c,
                            int n);

// Crossing numbers for a target u at level n+1: how many times an order-
// defining walk for r^{-1}(u) passes through each cell. The terminal cell is
// the cell of the designated maximal edge's source; the final arrival there
// is not a crossing.
struct CrossingNumbers {
    std::vector<long long> per_cell;
    int terminal_cell = -1;
};

CrossingNumbers crossing_numbers(const BratteliDiagram& b, const Skeleton& s,
                                 const AssociatedGraph& g, int u);

struct Connectivity {
    bool strong = false;
    bool weak = false;
    // Present when crossing data was supplied: whether the cells with
    // positive crossing number form a single strongly connected subgraph and
    // the terminal cell can be entered from it.
    std::optional<bool> positively_strong;
    std::string witness;  // offending cell pair on failure
};

Connectivity connectivity(const BratteliDiagram& b, const AssociatedGraph& g,
                          const CrossingNumbers* crossings = nullptr);

// SCCs in deterministic order (each component sorted, components sorted by
// least member).
std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<int>>& adj);

std::string export_dot(const BratteliDiagram& b, const AssociatedGraph& g,
                       const CrossingNumbers* crossings = nullptr,
                       const std::string& name = "H");

}  // namespace bratteli

#endif
