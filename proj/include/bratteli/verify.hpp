#ifndef BRATTELI_VERIFY_HPP
#define BRATTELI_VERIFY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bratteli/synth.hpp"

namespace bratteli {

enum class PerfectStatus { PerfectUpToDepth, NotPerfect, Inconclusive };

struct PerfectVerdict {
    PerfectStatus status = PerfectStatus::Inconclusive;
    int horizon = 0;
    bool stationary_certificate = false;  // one level's check repeats forever
    int max_path_count = 0;
    int min_path_count = 0;
    std::vector<std::pair<int, int>> pairing;  // maximal vertex -> minimal vertex
    std::string witness;
};

std::string to_string(PerfectStatus s);

// Every word of the level-n language up to the horizon must trace a walk in
// the associated graph at that level.
struct WordsFollowGraph {
    bool ok = true;
    std::pair<int, int> offending_factor{-1, -1};
};

WordsFollowGraph check_words_follow_graph(const BratteliDiagram& b, const DiagramOrder& o,
                                          const Skeleton& s, const Correspondence& c, int n,
                                          int horizon);

// Language-based perfectness check for constant-vertex-count diagrams with
// vertical extremal chains after well-telescoping. Stationary diagrams with
// level-independent orders get a genuine fixed-point certificate; otherwise
// the verdict is bounded by the horizon.
PerfectVerdict check_perfect_finite_rank(const BratteliDiagram& b, const DiagramOrder& o,
                                         int horizon = -1);

enum class CensusMode { Stationary, PerLevel };

struct CensusEntry {
    std::vector<std::vector<int>> words;  // per-vertex source words (one level)
    PerfectVerdict verdict;
    bool balance_ok = false;            // filled for perfect orders
    bool positively_strong = false;     // ... for every target
};

struct Census {
    std::vector<CensusEntry> entries;
    long long order_count = 0;
    int perfect_count = 0;
};

// Enumerates orders (stationary mode: one per-vertex pattern reused at every
// level) and runs the perfectness check on each. Necessity data (balance
// solvability, positive strong connectedness) is attached to every perfect
// entry. Throws input_error when the order count exceeds the budget.
Census brute_force_orders(const BratteliDiagram& b, CensusMode mode, long long budget);

enum class ObstructionVerdict { NoPerfectOrder, NotBlocked, NotApplicable };

struct ObstructionReport {
    ObstructionVerdict verdict = ObstructionVerdict::NotApplicable;
    std::string reason;
};

// Block-structure obstruction: k > 2 minimal components with a small
// connecting block never admit a perfect order; k = 2 requires the
// connecting block to be the 1x1 identity.
ObstructionReport class_A_obstruction(const BratteliDiagram& b);

}  // namespace bratteli

#endif
