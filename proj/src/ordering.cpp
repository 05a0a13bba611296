#include "bratteli/ordering.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace bratteli {

DiagramOrder DiagramOrder::enumeration(const BratteliDiagram& b) {
    std::vector<std::vector<std::vector<EdgeId>>> perms(b.depth());
    for (int k = 1; k <= b.depth(); ++k) {
        perms[k - 1].resize(b.vertex_count(k));
        for (int v = 0; v < b.vertex_count(k); ++v) perms[k - 1][v] = b.incoming(k, v);
    }
    DiagramOrder o;
    o.perms_ = std::move(perms);
    return o;
}

DiagramOrder DiagramOrder::assign(const BratteliDiagram& b,
                                  std::vector<std::vector<std::vector<EdgeId>>> perms) {
    if (static_cast<int>(perms.size()) != b.depth())
        throw input_error("order must cover every level");
    for (int k = 1; k <= b.depth(); ++k) {
        if (static_cast<int>(perms[k - 1].size()) != b.vertex_count(k))
            throw input_error("order must cover every vertex at level " + std::to_string(k));
        for (int v = 0; v < b.vertex_count(k); ++v) {
            auto expected = b.incoming(k, v);
            auto got = perms[k - 1][v];
            std::sort(got.begin(), got.end());
            if (got != expected)
                throw input_error("order list is not a permutation of the incoming edges of vertex " +
                                  b.vertex_name(k, v) + " at level " + std::to_string(k));
        }
    }
    DiagramOrder o;
    o.perms_ = std::move(perms);
    return o;
}

DiagramOrder DiagramOrder::from_source_words(
    const BratteliDiagram& b, const std::vector<std::vector<std::vector<int>>>& words) {
    std::vector<std::vector<std::vector<EdgeId>>> perms(b.depth());
    for (int k = 1; k <= b.depth(); ++k) {
        perms[k - 1].resize(b.vertex_count(k));
        for (int v = 0; v < b.vertex_count(k); ++v) {
            std::vector<int> seen(b.vertex_count(k - 1), 0);
            std::vector<EdgeId> perm;
            for (int src : words.at(k - 1).at(v)) {
                if (src < 0 || src >= b.vertex_count(k - 1))
                    throw input_error("word letter out of range");
                perm.push_back(EdgeId{k, v, src, seen[src]++});
            }
            perms[k - 1][v] = std::move(perm);
        }
    }
    return assign(b, std::move(perms));
}

DiagramOrder DiagramOrder::stationary_from_source_words(
    const BratteliDiagram& b, const std::vector<std::vector<int>>& words) {
    std::vector<std::vector<std::vector<int>>> all(b.depth());
    for (int k = 1; k <= b.depth(); ++k) {
        if (k == 1) {
            all[0].resize(b.vertex_count(1));
            for (int v = 0; v < b.vertex_count(1); ++v)
                for (const EdgeId& e : b.incoming(1, v)) all[0][v].push_back(e.source);
        } else {
            all[k - 1] = words;
        }
    }
    return from_source_words(b, all);
}

int DiagramOrder::position(const EdgeId& e) const {
    const auto& perm = at(e.level, e.range);
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] == e) return static_cast<int>(i);
    throw input_error("edge not present in order");
}

std::vector<int> DiagramOrder::source_word(int level, int v) const {
    std::vector<int> w;
    for (const EdgeId& e : at(level, v)) w.push_back(e.source);
    return w;
}

std::vector<EdgeId> extremal_path(const BratteliDiagram& b, const DiagramOrder& o, Extreme kind,
                                  int from_level, int to_level, int v) {
    if (from_level < 0 || to_level > b.depth() || from_level >= to_level)
        throw input_error("bad level pair for extremal path");
    std::vector<EdgeId> path;
    int cur = v;
    for (int k = to_level; k > from_level; --k) {
        const EdgeId& e = kind == Extreme::Max ? o.max_edge(k, cur) : o.min_edge(k, cur);
        path.push_back(e);
        cur = e.source;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<int> word(const BratteliDiagram& b, const DiagramOrder& o, int v, int m, int n,
                      long long budget) {
    if (m < 0 || n > b.depth() || m >= n) throw input_error("bad level pair for word");
    // Expected length is the row sum of the path-count matrix.
    Matrix counts = b.path_counts(m, n);
    long long len = std::accumulate(counts.at(v).begin(), counts.at(v).end(), 0LL);
    if (len > budget) throw input_error("word expansion exceeds budget");

    std::vector<int> cur{v};
    for (int k = n; k > m; --k) {
        std::vector<int> next;
        next.reserve(static_cast<std::size_t>(len));
        for (int u : cur)
            for (const EdgeId& e : o.at(k, u)) next.push_back(e.source);
        cur = std::move(next);
    }
    return cur;
}

bool LevelLanguage::contains(const std::vector<int>& w) const {
    if (w.empty()) return false;
    for (const auto& g : generators) {
        if (g.size() < w.size()) continue;
        auto it = std::search(g.begin(), g.end(), w.begin(), w.end());
        if (it != g.end()) return true;
    }
    return false;
}

LevelLanguage level_language(const BratteliDiagram& b, const DiagramOrder& o, int n, int horizon,
                             long long budget) {
    if (n < 0 || horizon <= n || horizon > b.depth())
        throw input_error("bad level/horizon for language");
    LevelLanguage lang;
    lang.level = n;
    lang.horizon = horizon;
    for (int v = 0; v < b.vertex_count(horizon); ++v)
        lang.generators.push_back(word(b, o, v, n, horizon, budget));
    for (const auto& g : lang.generators)
        for (std::size_t i = 0; i + 1 < g.size(); ++i) lang.two_letter.insert({g[i], g[i + 1]});
    return lang;
}

std::set<std::pair<int, int>> stationary_two_letter_closure(
    const std::vector<std::vector<int>>& words_by_vertex) {
    std::set<std::pair<int, int>> factors;
    for (const auto& w : words_by_vertex)
        for (std::size_t i = 0; i + 1 < w.size(); ++i) factors.insert({w[i], w[i + 1]});
    // A factor xy one level up contributes the junction (last of w(x), first
    // of w(y)); iterate until stable.
    for (;;) {
        std::set<std::pair<int, int>> next = factors;
        for (auto [x, y] : factors)
            next.insert({words_by_vertex.at(x).back(), words_by_vertex.at(y).front()});
        if (next == factors) return factors;
        factors = std::move(next);
    }
}

DiagramOrder telescope_order(const BratteliDiagram& b, const DiagramOrder& o,
                             const TelescopeResult& tel) {
    // Compare two same-range paths lexicographically: last differing edge wins.
    auto lex_less = [&](const std::vector<EdgeId>& p, const std::vector<EdgeId>& q) {
        for (std::size_t i = p.size(); i-- > 0;) {
            if (p[i] == q[i]) continue;
            return o.position(p[i]) < o.position(q[i]);
        }
        return false;
    };
    std::vector<std::vector<std::vector<EdgeId>>> perms(tel.diagram.depth());
    for (int k = 1; k <= tel.diagram.depth(); ++k) {
        perms[k - 1].resize(tel.diagram.vertex_count(k));
        for (int v = 0; v < tel.diagram.vertex_count(k); ++v) {
            auto edges = tel.diagram.incoming(k, v);
            std::sort(edges.begin(), edges.end(), [&](const EdgeId& a, const EdgeId& c) {
                return lex_less(tel.path_of(a), tel.path_of(c));
            });
            perms[k - 1][v] = std::move(edges);
        }
    }
    (void)b;
    return DiagramOrder::assign(tel.diagram, std::move(perms));
}

std::optional<std::vector<EdgeId>> vershik_successor(const BratteliDiagram& b,
                                                     const DiagramOrder& o,
                                                     const std::vector<EdgeId>& path) {
    if (path.empty()) throw input_error("empty path");
    for (std::size_t i = 0; i < path.size(); ++i) {
        const EdgeId& e = path[i];
        if (e.level != static_cast<int>(i) + 1) throw input_error("path levels must start at 1 and be consecutive");
        int below = i == 0 ? 0 : path[i - 1].range;
        if (e.source != below) throw input_error("path edges do not chain");
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto& perm = o.at(path[k].level, path[k].range);
        int pos = o.position(path[k]);
        if (pos + 1 == static_cast<int>(perm.size())) continue;  // maximal here
        const EdgeId& next = perm[pos + 1];
        std::vector<EdgeId> out;
        if (k > 0) out = extremal_path(b, o, Extreme::Min, 0, static_cast<int>(k), next.source);
        out.push_back(next);
        for (std::size_t j = k + 1; j < path.size(); ++j) out.push_back(path[j]);
        return out;
    }
    return std::nullopt;
}

}  // namespace bratteli
