#ifndef TESTS_HELPERS_HPP
#define TESTS_HELPERS_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "bratteli/json_io.hpp"
#include "bratteli/ordering.hpp"

namespace testutil {

using namespace bratteli;

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

inline BratteliDiagram load_fixture_diagram(const std::string& name, int depth = -1) {
    return diagram_from_json(load_json_file(fixture_path(name)), depth);
}

inline DiagramOrder load_fixture_order(const BratteliDiagram& b, const std::string& name) {
    return order_from_json(b, load_json_file(fixture_path(name)));
}

inline SkeletonData load_fixture_skeleton(const BratteliDiagram& b, const std::string& name) {
    return skeleton_from_json(b, load_json_file(fixture_path(name)));
}

// Oracle: all paths from level m into v at level n, as explicit edge lists
// (levels m+1..n).
inline std::vector<std::vector<EdgeId>> enumerate_paths(const BratteliDiagram& b, int m, int n,
                                                        int v) {
    std::vector<std::vector<EdgeId>> paths{{}};
    for (int lev = n; lev > m; --lev) {
        std::vector<std::vector<EdgeId>> next;
        for (const auto& p : paths) {
            int range = p.empty() ? v : p.back().source;
            for (const EdgeId& e : b.incoming(lev, range)) {
                auto q = p;
                q.push_back(e);
                next.push_back(std::move(q));
            }
        }
        paths = std::move(next);
    }
    for (auto& p : paths) std::reverse(p.begin(), p.end());
    return paths;
}

// Oracle: the source word computed by enumerating and sorting whole paths
// under the lexicographic comparison, independent of the expansion recursion.
inline std::vector<int> word_by_paths(const BratteliDiagram& b, const DiagramOrder& o, int v,
                                      int m, int n) {
    auto paths = enumerate_paths(b, m, n, v);
    auto lex_less = [&](const std::vector<EdgeId>& p, const std::vector<EdgeId>& q) {
        for (std::size_t i = p.size(); i-- > 0;) {
            if (p[i] == q[i]) continue;
            return o.position(p[i]) < o.position(q[i]);
        }
        return false;
    };
    std::sort(paths.begin(), paths.end(), lex_less);
    std::vector<int> w;
    for (const auto& p : paths) w.push_back(p.front().source);
    return w;
}

// Random stationary diagram with positive rows/columns; entry cap keeps the
// census budget small.
inline Matrix random_stationary_block(std::mt19937& rng, int dim, int max_entry,
                                      long long factorial_budget) {
    std::uniform_int_distribution<int> entry(0, max_entry);
    for (;;) {
        Matrix m(dim, std::vector<long long>(dim, 0));
        for (auto& row : m)
            for (auto& x : row) x = entry(rng);
        bool ok = true;
        long long budget = 1;
        for (int i = 0; i < dim && ok; ++i) {
            long long rs = 0, cs = 0;
            for (int j = 0; j < dim; ++j) {
                rs += m[i][j];
                cs += m[j][i];
            }
            if (rs == 0 || cs == 0) ok = false;
            for (long long f = 2; f <= rs; ++f) budget *= f;
            if (budget > factorial_budget) ok = false;
        }
        if (ok) return m;
    }
}

}  // namespace testutil

#endif
