#ifndef BRATTELI_SYNTH_HPP
#define BRATTELI_SYNTH_HPP

#include <optional>
#include <string>
#include <vector>

#include "bratteli/hgraph.hpp"

namespace bratteli {

// F with 1 subtracted, per row u, at the source of the designated maximal
// (f_tilde) respectively minimal (f_bar) edge of u.
struct ModifiedMatrices {
    int level = 0;  // the level n of F_n
    Matrix f_tilde;
    Matrix f_bar;
};

ModifiedMatrices modified_matrices(const BratteliDiagram& b, const Skeleton& s, int n);

// Split of the u-th modified row: counts[w][vb] units of f_tilde(u, w) are
// routed toward the minimal vertex vb (a choice of sigma_{n-1} image per
// departure).
struct BalanceDecomposition {
    int level = 0;
    int target = 0;
    Matrix counts;  // |V_n| x |V_{n-1}|, zero where inapplicable
};

struct BalanceReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Verifies the row-sum identities and the balance relations for the given
// decomposition.
BalanceReport check_balance(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c,
                            int n, int u, const BalanceDecomposition& dec);

// Finds any nonnegative integer decomposition satisfying both relation
// families, by integer flow feasibility; deterministic. Returns nothing when
// infeasible. The row overrides exist so corrupted data can be probed.
std::optional<BalanceDecomposition> solve_decomposition(const BratteliDiagram& b, const Skeleton& s,
                                                        const Correspondence& c, int n, int u);
std::optional<BalanceDecomposition> solve_decomposition_rows(
    const BratteliDiagram& b, const Skeleton& s, const Correspondence& c, int n, int u,
    const std::vector<long long>& f_tilde_row, const std::vector<long long>& f_bar_row);

// The order on r^{-1}(u) produced by walking the associated graph: starts
// with the designated minimal edge, ends with the designated maximal edge,
// drains loops when entering a looped cell, otherwise moves to the admissible
// vertex with the largest remaining modified count (ties to the lowest
// index).
struct SynthesizedOrder {
    int level = 0;   // n; the target u lives at level n+1
    int target = 0;
    std::vector<int> word;        // sources, minimal first
    std::vector<EdgeId> edges;    // the order on r^{-1}(u)
    std::vector<int> cell_walk;   // cells visited, one per word letter
};

struct stuck_error : std::runtime_error {
    explicit stuck_error(std::string state) : std::runtime_error("synthesis stuck: " + state) {}
};

SynthesizedOrder synthesize_vertex_order(const BratteliDiagram& b, const Skeleton& s,
                                         const Correspondence& c, int n, int u,
                                         const BalanceDecomposition& dec);

struct SynthFailure {
    int level = 0;
    int target = 0;
    std::string reason;
};

struct SynthResult {
    bool ok = false;
    DiagramOrder order;  // meaningful only when ok
    std::vector<SynthesizedOrder> traces;
    std::vector<SynthFailure> failures;
};

// Full-order synthesis: per-(n, u) walks assembled into a DiagramOrder.
// Refuses, collecting every per-target failure, when a balance decomposition
// does not exist or the positive cells are not strongly connected.
SynthResult synthesize_order(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c);

// Post-assertions on a synthesized word: endpoints, letter counts, successor
// law, and the Eulerian crossing count per cell. Throws on violation.
void assert_eulerian(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c, int n,
                     int u, const SynthesizedOrder& so);

}  // namespace bratteli

#endif
