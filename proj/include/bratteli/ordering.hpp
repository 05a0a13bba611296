#ifndef BRATTELI_ORDERING_HPP
#define BRATTELI_ORDERING_HPP

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "bratteli/diagram.hpp"

namespace bratteli {

// Per-vertex total order of incoming edges. perm(level, v) lists r^{-1}(v)
// from minimal (front) to maximal (back). Immutable after validation.
class DiagramOrder {
public:
    static DiagramOrder enumeration(const BratteliDiagram& b);
    static DiagramOrder assign(const BratteliDiagram& b,
                               std::vector<std::vector<std::vector<EdgeId>>> perms);

    // Builds an order from per-vertex source words; copy indices are assigned
    // in order of occurrence. One word per vertex per level, levels 1..depth.
    static DiagramOrder from_source_words(const BratteliDiagram& b,
                                          const std::vector<std::vector<std::vector<int>>>& words);

    // Stationary helper: the same per-vertex source words at every level >= 2
    // (level-1 orders are the enumeration order).
    static DiagramOrder stationary_from_source_words(const BratteliDiagram& b,
                                                     const std::vector<std::vector<int>>& words);

    const std::vector<EdgeId>& at(int level, int v) const { return perms_.at(level - 1).at(v); }
    int position(const EdgeId& e) const;
    const EdgeId& min_edge(int level, int v) const { return at(level, v).front(); }
    const EdgeId& max_edge(int level, int v) const { return at(level, v).back(); }
    int depth() const { return static_cast<int>(perms_.size()); }

    std::vector<int> source_word(int level, int v) const;

private:
    // perms_[k-1][v] is the order on r^{-1}(v) at level k.
    std::vector<std::vector<std::vector<EdgeId>>> perms_;
};

// Lexicographically extremal path into `v` at level m, going back to level n.
// Edges are returned in increasing level order (levels n+1..m).
enum class Extreme { Min, Max };
std::vector<EdgeId> extremal_path(const BratteliDiagram& b, const DiagramOrder& o, Extreme kind,
                                  int from_level, int to_level, int v);

// The word w(v, m, n): sources at level m of all paths into v at level n,
// in increasing lexicographic order. Throws input_error when the expansion
// exceeds `budget` letters.
std::vector<int> word(const BratteliDiagram& b, const DiagramOrder& o, int v, int m, int n,
                      long long budget = 1'000'000);

// Level-n language up to a horizon: the factor-closed set generated by the
// words w(v, n, N), v in V_N. Factors are answered by substring search over
// the generators.
struct LevelLanguage {
    int level = 0;
    int horizon = 0;
    std::vector<std::vector<int>> generators;
    std::set<std::pair<int, int>> two_letter;

    bool contains(const std::vector<int>& w) const;
};

LevelLanguage level_language(const BratteliDiagram& b, const DiagramOrder& o, int n, int horizon,
                             long long budget = 1'000'000);

// Two-letter factor closure for a stationary diagram carrying the same order
// pattern at every level: iterates junction pairs to a fixed point, which is
// the full two-letter factor content of the limit language.
std::set<std::pair<int, int>> stationary_two_letter_closure(
    const std::vector<std::vector<int>>& words_by_vertex);

// Order on a telescoped diagram induced by lexicographic comparison of the
// underlying paths.
DiagramOrder telescope_order(const BratteliDiagram& b, const DiagramOrder& o,
                             const TelescopeResult& tel);

// Successor of a root path under the adic (Vershik) rule: flip the lowest
// non-maximal edge, reset everything below to minimal. Returns nothing when
// the path is maximal.
std::optional<std::vector<EdgeId>> vershik_successor(const BratteliDiagram& b,
                                                     const DiagramOrder& o,
                                                     const std::vector<EdgeId>& path);

}  // namespace bratteli

#endif
