#ifndef BRATTELI_CORE_HPP
#define BRATTELI_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bratteli {

// Rows index range vertices (level n+1), columns index source vertices (level n).
using Matrix = std::vector<std::vector<long long>>;

inline std::size_t rows(const Matrix& m) { return m.size(); }
inline std::size_t cols(const Matrix& m) { return m.empty() ? 0 : m[0].size(); }

Matrix multiply(const Matrix& a, const Matrix& b);
bool strictly_positive(const Matrix& m);

// Identifies one edge of the diagram. `level` is the edge level: edges at
// level k connect V_{k-1} (sources) to V_k (ranges), k >= 1. `copy`
// distinguishes parallel edges with the same source and range.
struct EdgeId {
    int level = 0;
    int range = 0;
    int source = 0;
    int copy = 0;

    friend bool operator==(const EdgeId& a, const EdgeId& b) {
        return a.level == b.level && a.range == b.range && a.source == b.source &&
               a.copy == b.copy;
    }
    friend bool operator!=(const EdgeId& a, const EdgeId& b) { return !(a == b); }
    friend bool operator<(const EdgeId& a, const EdgeId& b) {
        if (a.level != b.level) return a.level < b.level;
        if (a.range != b.range) return a.range < b.range;
        if (a.source != b.source) return a.source < b.source;
        return a.copy < b.copy;
    }
};

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bratteli

#endif
