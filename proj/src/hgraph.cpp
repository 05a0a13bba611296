#include "bratteli/hgraph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace bratteli {

bool AssociatedGraph::has_loop(int cell) const {
    const auto& out = adj.at(cell);
    return std::find(out.begin(), out.end(), cell) != out.end();
}

std::string AssociatedGraph::label(const BratteliDiagram& b, int cell) const {
    const Cell& c = cells.at(cell);
    return "[" + b.vertex_name(level - 1, c.min_vertex) + "," +
           b.vertex_name(level - 1, c.max_vertex) + "]";
}

std::vector<Cell> build_cells(const BratteliDiagram& b, const Skeleton& s, int n) {
    if (n < 2 || n > b.depth()) throw input_error("cells need a level in 2..depth");
    std::vector<Cell> cells;
    for (int v = 0; v < b.vertex_count(n); ++v) {
        int vb = s.min_source(n, v), vt = s.max_source(n, v);
        auto it = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) {
            return c.min_vertex == vb && c.max_vertex == vt;
        });
        if (it == cells.end()) {
            cells.push_back(Cell{vb, vt, {v}});
        } else {
            it->members.push_back(v);
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& c) {
        return std::pair(a.min_vertex, a.max_vertex) < std::pair(c.min_vertex, c.max_vertex);
    });
    return cells;
}

AssociatedGraph build_graph(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c,
                            int n) {
    AssociatedGraph g;
    g.level = n;
    g.cells = build_cells(b, s, n);
    g.cell_of_vertex.assign(b.vertex_count(n), -1);
    for (int i = 0; i < static_cast<int>(g.cells.size()); ++i)
        for (int v : g.cells[i].members) g.cell_of_vertex[v] = i;
    g.adj.resize(g.cells.size());
    for (int i = 0; i < static_cast<int>(g.cells.size()); ++i) {
        const auto& image = c.at(n - 1, g.cells[i].max_vertex);
        for (int j = 0; j < static_cast<int>(g.cells.size()); ++j)
            if (std::find(image.begin(), image.end(), g.cells[j].min_vertex) != image.end())
                g.adj[i].push_back(j);
    }
    return g;
}

CrossingNumbers crossing_numbers(const BratteliDiagram& b, const Skeleton& s,
                                 const AssociatedGraph& g, int u) {
    int n = g.level;
    if (n + 1 > b.depth()) throw input_error("crossing numbers need skeleton one level up");
    CrossingNumbers out;
    out.per_cell.assign(g.cells.size(), 0);
    int max_src = s.max_source(n + 1, u);
    const Matrix& f = b.incidence(n);
    for (int i = 0; i < static_cast<int>(g.cells.size()); ++i)
        for (int w : g.cells[i].members) {
            long long ft = f.at(u).at(w) - (w == max_src ? 1 : 0);
            out.per_cell[i] += ft;
        }
    out.terminal_cell = g.cell_of_vertex.at(max_src);
    return out;
}

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    std::vector<int> number(n, -1), low(n, -1), stack_index(n, -1), stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    std::function<void(int)> dfs = [&](int v) {
        number[v] = low[v] = counter++;
        stack_index[v] = static_cast<int>(stack.size());
        stack.push_back(v);
        for (int w : adj[v]) {
            if (number[w] == -1) {
                dfs(w);
                low[v] = std::min(low[v], low[w]);
            } else if (number[w] < number[v] && stack_index[w] != -1) {
                low[v] = std::min(low[v], number[w]);
            }
        }
        if (low[v] == number[v]) {
            std::vector<int> scc(stack.begin() + stack_index[v], stack.end());
            for (int w : scc) stack_index[w] = -1;
            stack.resize(stack.size() - scc.size());
            std::sort(scc.begin(), scc.end());
            sccs.push_back(std::move(scc));
        }
    };
    for (int v = 0; v < n; ++v)
        if (number[v] == -1) dfs(v);
    std::sort(sccs.begin(), sccs.end());
    return sccs;
}

namespace {

bool single_scc(const std::vector<std::vector<int>>& adj) {
    return strongly_connected_components(adj).size() <= 1;
}

std::vector<char> reachable_from(const std::vector<std::vector<int>>& adj, int start) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<int> todo{start};
    seen[start] = 1;
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                todo.push_back(w);
            }
    }
    return seen;
}

}  // namespace

Connectivity connectivity(const BratteliDiagram& b, const AssociatedGraph& g,
                          const CrossingNumbers* crossings) {
    Connectivity out;
    out.strong = single_scc(g.adj);
    // Weak: connectivity of the underlying undirected graph.
    {
        std::vector<std::vector<int>> sym = g.adj;
        for (int v = 0; v < static_cast<int>(g.adj.size()); ++v)
            for (int w : g.adj[v]) sym[w].push_back(v);
        out.weak = g.cells.empty() || [&] {
            auto seen = reachable_from(sym, 0);
            return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
        }();
    }
    if (!crossings) return out;

    // Induced subgraph on the positive cells.
    int n = static_cast<int>(g.cells.size());
    std::vector<int> pos;
    for (int i = 0; i < n; ++i)
        if (crossings->per_cell[i] > 0) pos.push_back(i);
    std::vector<int> local(n, -1);
    for (int i = 0; i < static_cast<int>(pos.size()); ++i) local[pos[i]] = i;
    std::vector<std::vector<int>> sub(pos.size());
    for (int i = 0; i < static_cast<int>(pos.size()); ++i)
        for (int w : g.adj[pos[i]])
            if (local[w] != -1) sub[i].push_back(local[w]);

    bool ok = single_scc(sub);
    if (!ok) {
        // Witness: a sink component cannot return; name the least unreachable
        // cell from its least member.
        auto sccs = strongly_connected_components(sub);
        for (const auto& scc : sccs) {
            bool sink = true;
            for (int m : scc)
                for (int w : sub[m])
                    if (std::find(scc.begin(), scc.end(), w) == scc.end()) sink = false;
            if (!sink) continue;
            int v = scc.front();
            auto seen = reachable_from(sub, v);
            for (int t = 0; t < static_cast<int>(pos.size()); ++t)
                if (!seen[t]) {
                    out.witness = "no path from " + g.label(b, pos[v]) + " to " + g.label(b, pos[t]);
                    break;
                }
            if (!out.witness.empty()) break;
        }
    }
    // The walk must be able to enter the terminal cell at the end even when
    // it is never crossed.
    if (ok && !pos.empty() && crossings->per_cell[crossings->terminal_cell] == 0) {
        bool entry = false;
        for (int i : pos)
            for (int w : g.adj[i])
                if (w == crossings->terminal_cell) entry = true;
        if (!entry) {
            ok = false;
            out.witness = "terminal cell " + g.label(b, crossings->terminal_cell) +
                          " cannot be entered from the crossed cells";
        }
    }
    out.positively_strong = ok;
    return out;
}

std::string export_dot(const BratteliDiagram& b, const AssociatedGraph& g,
                       const CrossingNumbers* crossings, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (int i = 0; i < static_cast<int>(g.cells.size()); ++i) {
        os << "  n" << i << " [label=\"" << g.label(b, i);
        if (crossings) {
            os << " P=" << crossings->per_cell[i];
            if (i == crossings->terminal_cell) os << " T";
        }
        os << "\"];\n";
    }
    for (int i = 0; i < static_cast<int>(g.cells.size()); ++i)
        for (int w : g.adj[i]) os << "  n" << i << " -> n" << w << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace bratteli
