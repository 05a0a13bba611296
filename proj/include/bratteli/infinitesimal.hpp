#ifndef BRATTELI_INFINITESIMAL_HPP
#define BRATTELI_INFINITESIMAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "bratteli/skeleton.hpp"

namespace bratteli {

// Integer vector over V_{base+offset} built from a maximal base vertex: +1 on
// vertices whose extremal chains enter the maximal class but not the paired
// minimal class, -1 on the opposite pattern, 0 elsewhere. Equal, when the
// balance relations hold, to the difference of path counts into the two
// classes.
struct InfinitesimalVector {
    int base_level = 0;   // the level n of the defining partition
    int base_vertex = 0;  // maximal vertex at level n-1
    int offset = 1;       // k: the vector lives over V_{n+k}
    std::vector<long long> entries;
};

// Requires sigma_{n-1}(base_vertex) to be a singleton. Both the sign-pattern
// form and the path-count form are computed and compared; a mismatch means
// the balance relations fail and is reported as an error.
InfinitesimalVector epsilon_vector(const BratteliDiagram& b, const Skeleton& s,
                                   const Correspondence& c, int n, int base_vertex, int k);

// Sign-pattern route alone (the extremal-chain trichotomy), any offset.
std::vector<long long> epsilon_by_chains(const BratteliDiagram& b, const Skeleton& s,
                                         const Correspondence& c, int n, int base_vertex, int k);

// Path-count route alone.
std::vector<long long> epsilon_by_counts(const BratteliDiagram& b, const Skeleton& s,
                                         const Correspondence& c, int n, int base_vertex, int k);

struct PropagateReport {
    bool ok = true;
    int failed_offset = -1;
    int failed_row = -1;
};

// Verifies F_{n+k} * eps^{(n+k)} = eps^{(n+k+1)} exactly over the integers
// for every offset within depth.
PropagateReport propagate_check(const BratteliDiagram& b, const Skeleton& s,
                                const Correspondence& c, int n, int base_vertex, int max_offset);

struct RankReport {
    int rank = 0;
    // An exact integer dependency among the vectors when one exists
    // (coefficients, not all zero, combining to the zero vector).
    std::optional<std::vector<long long>> dependency;
};

// Exact rank over the rationals via fraction-free elimination.
RankReport independence_rank(const std::vector<std::vector<long long>>& vectors);

struct PairingReport {
    bool ok = false;
    double pairing = 0.0;
    double eigenvalue = 0.0;
    std::vector<double> weights;
    std::string reason;
};

// For stationary diagrams with a strictly positive block: the normalized
// dominant left-eigenvector weights p satisfy F^T p = lambda p; an
// infinitesimal must pair to zero against them.
PairingReport perron_pairing_check(const BratteliDiagram& b, const std::vector<long long>& eps,
                                   double power_tol = 1e-12, double pairing_tol = 1e-9);

// A maximal chain given by its vertex per level (index 0 = level 1).
struct MaximalChain {
    std::vector<int> vertices;
    int base_level = -1;  // chosen automatically when negative
};

struct FamilyMember {
    int base_level = 0;
    InfinitesimalVector vector;            // at the member's own base
    std::vector<long long> at_common_level;
};

struct FamilyReport {
    int common_level = 0;
    std::vector<FamilyMember> members;
    RankReport rank;
};

// Per-chain vectors, each built at the first level from which the chain's
// sigma images are singletons, lifted to a common level and tested for
// independence.
FamilyReport countable_family(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c,
                              const std::vector<MaximalChain>& chains);

}  // namespace bratteli

#endif
