#ifndef BRATTELI_DIAGRAM_HPP
#define BRATTELI_DIAGRAM_HPP

#include <optional>
#include <string>
#include <vector>

#include "bratteli/core.hpp"

namespace bratteli {

// Finite-depth leveled multigraph with a singleton root level. Edges are
// stored implicitly as multiplicity matrices; EdgeIds enumerate parallel
// edges deterministically (source-major, copy-minor). Immutable after
// construction.
class BratteliDiagram {
public:
    // Empty shell; usable only after assignment from a factory result.
    BratteliDiagram() = default;

    // matrices[k] counts the edges between V_k and V_{k+1}; a leading root
    // connector (|V_1| x 1) is prepended when the first matrix is wider.
    static BratteliDiagram from_matrices(std::vector<Matrix> matrices, bool stationary = false);

    // edges[k] lists [source, range] pairs for edge level k+1; multiplicities
    // are derived by counting.
    static BratteliDiagram from_edges(std::vector<int> levels,
                                      std::vector<std::vector<std::pair<int, int>>> edges,
                                      bool stationary = false);

    int depth() const { return static_cast<int>(counts_.size()) - 1; }
    int vertex_count(int level) const { return counts_.at(level); }

    // Incidence matrix F_n between V_n and V_{n+1}, 0 <= n < depth.
    const Matrix& incidence(int n) const;

    // Product F_{m-1} ... F_n, entries count paths from V_n to V_m.
    Matrix path_counts(int n, int m) const;

    long long in_degree(int level, int v) const;
    std::vector<EdgeId> incoming(int level, int v) const;
    long long multiplicity(int level, int range, int source) const;

    bool stationary() const { return stationary_; }
    const Matrix& stationary_block() const;

    // Stationary diagrams can be materialized to any requested depth by
    // repeating the trailing block.
    BratteliDiagram extended(int new_depth) const;

    // Vertex display names, used in reports. Empty means numeric labels.
    const std::vector<std::string>& names() const { return names_; }
    void set_names(std::vector<std::string> names);
    std::string vertex_name(int level, int v) const;

private:
    void validate() const;

    std::vector<int> counts_;       // |V_0| .. |V_N|
    std::vector<Matrix> matrices_;  // matrices_[n] = F_n
    bool stationary_ = false;
    std::vector<std::string> names_;
};

// Telescoping replaces edges between retained levels with the finite paths of
// the original diagram. The path behind each new edge is recorded so orders
// can be transported.
struct TelescopeResult {
    BratteliDiagram diagram;
    std::vector<int> levels;
    // paths[k][v][i] = original edge path for incoming(k+1, v)[i], listed in
    // the same deterministic enumeration order as the new edges.
    std::vector<std::vector<std::vector<std::vector<EdgeId>>>> paths;

    const std::vector<EdgeId>& path_of(const EdgeId& e) const;
};

TelescopeResult telescope(const BratteliDiagram& b, const std::vector<int>& levels);

struct ClassABlocks {
    int k = 0;                                   // number of minimal components
    std::vector<std::vector<int>> components;    // vertex groups, stationary indexing
    std::vector<int> c_vertices;                 // vertices of the C block
    bool c_square = false;
    int c_size = 0;
    bool c_all_ones = false;                     // C_n == (1) at every checked level
};

struct DiagramClass {
    bool simple_verified = false;   // some product between checked levels is positive
    bool finite_rank = true;
    int rank = 0;                   // largest |V_n| over checked levels
    bool constant_vertex_counts = false;
    bool stationary = false;
    bool candidate_periodic = false;  // a vertex chain with in-degree 1 throughout
    std::optional<ClassABlocks> class_a;
};

DiagramClass classify(const BratteliDiagram& b, int check_depth = -1);

}  // namespace bratteli

#endif
