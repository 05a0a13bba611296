#include "bratteli/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace bratteli {

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (cols(a) != rows(b)) throw input_error("matrix dimension mismatch in product");
    Matrix out(rows(a), std::vector<long long>(cols(b), 0));
    for (std::size_t i = 0; i < rows(a); ++i)
        for (std::size_t k = 0; k < rows(b); ++k) {
            long long aik = a[i][k];
            if (aik == 0) continue;
            for (std::size_t j = 0; j < cols(b); ++j) out[i][j] += aik * b[k][j];
        }
    return out;
}

bool strictly_positive(const Matrix& m) {
    for (const auto& row : m)
        for (long long x : row)
            if (x <= 0) return false;
    return !m.empty();
}

namespace {

void check_matrix(const Matrix& m, int n) {
    if (m.empty() || m[0].empty()) throw input_error("empty incidence matrix");
    for (const auto& row : m) {
        if (row.size() != m[0].size()) throw input_error("ragged incidence matrix");
        for (long long x : row)
            if (x < 0) throw input_error("negative incidence entry");
    }
    for (const auto& row : m) {
        if (std::accumulate(row.begin(), row.end(), 0LL) == 0)
            throw input_error("vertex with no incoming edges at level " + std::to_string(n + 1));
    }
    for (std::size_t j = 0; j < cols(m); ++j) {
        long long s = 0;
        for (std::size_t i = 0; i < rows(m); ++i) s += m[i][j];
        if (s == 0)
            throw input_error("vertex with no outgoing edges at level " + std::to_string(n));
    }
}

}  // namespace

BratteliDiagram BratteliDiagram::from_matrices(std::vector<Matrix> matrices, bool stationary) {
    if (matrices.empty()) throw input_error("diagram needs at least one incidence matrix");
    if (cols(matrices.front()) != 1) {
        Matrix root(rows(matrices.front()), std::vector<long long>(1, 1));
        matrices.insert(matrices.begin(), std::move(root));
    }
    BratteliDiagram b;
    b.counts_.push_back(static_cast<int>(cols(matrices[0])));
    for (std::size_t n = 0; n < matrices.size(); ++n) {
        if (static_cast<int>(cols(matrices[n])) != b.counts_.back())
            throw input_error("matrix dimensions do not chain at level " + std::to_string(n));
        check_matrix(matrices[n], static_cast<int>(n));
        b.counts_.push_back(static_cast<int>(rows(matrices[n])));
    }
    if (b.counts_[0] != 1) throw input_error("level 0 must be a single vertex");
    b.matrices_ = std::move(matrices);
    b.stationary_ = stationary;
    if (stationary) {
        const Matrix& block = b.matrices_.back();
        if (rows(block) != cols(block))
            throw input_error("stationary block must be square");
    }
    b.validate();
    return b;
}

BratteliDiagram BratteliDiagram::from_edges(std::vector<int> levels,
                                            std::vector<std::vector<std::pair<int, int>>> edges,
                                            bool stationary) {
    if (levels.size() < 2) throw input_error("diagram needs depth at least 1");
    if (edges.size() + 1 != levels.size()) throw input_error("edge list / level count mismatch");
    std::vector<Matrix> ms;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        Matrix m(levels[k + 1], std::vector<long long>(levels[k], 0));
        for (auto [src, rng] : edges[k]) {
            if (src < 0 || src >= levels[k] || rng < 0 || rng >= levels[k + 1])
                throw input_error("edge endpoint out of range at level " + std::to_string(k + 1));
            m[rng][src] += 1;
        }
        ms.push_back(std::move(m));
    }
    if (levels[0] != 1) throw input_error("level 0 must be a single vertex");
    return from_matrices(std::move(ms), stationary);
}

void BratteliDiagram::validate() const {
    for (std::size_t n = 0; n < matrices_.size(); ++n) check_matrix(matrices_[n], static_cast<int>(n));
}

const Matrix& BratteliDiagram::incidence(int n) const {
    if (n < 0 || n >= depth()) throw input_error("incidence level out of range");
    return matrices_[n];
}

Matrix BratteliDiagram::path_counts(int n, int m) const {
    if (n < 0 || m > depth() || n >= m) throw input_error("bad level pair for path counts");
    Matrix acc = matrices_[n];
    for (int k = n + 1; k < m; ++k) acc = multiply(matrices_[k], acc);
    return acc;
}

long long BratteliDiagram::in_degree(int level, int v) const {
    const Matrix& m = incidence(level - 1);
    return std::accumulate(m.at(v).begin(), m.at(v).end(), 0LL);
}

std::vector<EdgeId> BratteliDiagram::incoming(int level, int v) const {
    const Matrix& m = incidence(level - 1);
    std::vector<EdgeId> out;
    for (int w = 0; w < static_cast<int>(cols(m)); ++w)
        for (int c = 0; c < m.at(v)[w]; ++c) out.push_back(EdgeId{level, v, w, c});
    return out;
}

long long BratteliDiagram::multiplicity(int level, int range, int source) const {
    return incidence(level - 1).at(range).at(source);
}

const Matrix& BratteliDiagram::stationary_block() const {
    if (!stationary_) throw input_error("diagram has no stationary block");
    return matrices_.back();
}

BratteliDiagram BratteliDiagram::extended(int new_depth) const {
    if (new_depth <= depth()) return *this;
    if (!stationary_) throw input_error("cannot extend a non-stationary diagram");
    BratteliDiagram b = *this;
    while (b.depth() < new_depth) {
        b.matrices_.push_back(matrices_.back());
        b.counts_.push_back(b.counts_.back());
    }
    return b;
}

void BratteliDiagram::set_names(std::vector<std::string> names) { names_ = std::move(names); }

std::string BratteliDiagram::vertex_name(int level, int v) const {
    if (!names_.empty() && vertex_count(level) == static_cast<int>(names_.size()))
        return names_[v];
    return "v" + std::to_string(v);
}

const std::vector<EdgeId>& TelescopeResult::path_of(const EdgeId& e) const {
    const auto& by_vertex = paths.at(e.level - 1).at(e.range);
    // Enumeration is source-major, copy-minor; locate the slot of e.
    const Matrix& m = diagram.incidence(e.level - 1);
    int idx = 0;
    for (int w = 0; w < e.source; ++w) idx += static_cast<int>(m[e.range][w]);
    idx += e.copy;
    return by_vertex.at(idx);
}

TelescopeResult telescope(const BratteliDiagram& b, const std::vector<int>& levels) {
    if (levels.size() < 2 || levels.front() != 0)
        throw input_error("telescoping levels must start at 0 and keep at least two levels");
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        if (levels[i] >= levels[i + 1]) throw input_error("telescoping levels must be increasing");
    if (levels.back() > b.depth()) throw input_error("telescoping level beyond depth");

    TelescopeResult result;
    result.levels = levels;
    std::vector<Matrix> new_matrices;
    result.paths.resize(levels.size() - 1);

    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        int lo = levels[k], hi = levels[k + 1];
        int nv = b.vertex_count(hi);
        result.paths[k].resize(nv);
        Matrix m(nv, std::vector<long long>(b.vertex_count(lo), 0));
        for (int v = 0; v < nv; ++v) {
            // Enumerate paths from level lo into v, top edge first.
            std::vector<std::vector<EdgeId>> paths;
            paths.push_back({});
            for (int lev = hi; lev > lo; --lev) {
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
            // Stored bottom-up; group by source preserving enumeration order.
            for (auto& p : paths) std::reverse(p.begin(), p.end());
            std::stable_sort(paths.begin(), paths.end(),
                             [](const auto& a, const auto& c) { return a.front().source < c.front().source; });
            for (const auto& p : paths) m[v][p.front().source] += 1;
            result.paths[k][v] = std::move(paths);
        }
        new_matrices.push_back(std::move(m));
    }
    result.diagram = BratteliDiagram::from_matrices(std::move(new_matrices));
    result.diagram.set_names(b.names());
    return result;
}

namespace {

// Groups the rows of a square-or-rectangular nonnegative matrix into the
// lower block-triangular shape with positive diagonal blocks, positive final
// row block and zeros elsewhere. Returns column groups, or nothing.
struct BlockGrouping {
    std::vector<std::vector<int>> component_cols;
    std::vector<int> c_cols;
    std::vector<std::vector<int>> component_rows;
    std::vector<int> full_rows;
};

std::optional<BlockGrouping> block_grouping(const Matrix& m) {
    int nr = static_cast<int>(rows(m)), nc = static_cast<int>(cols(m));
    BlockGrouping g;
    std::vector<std::vector<int>> supports(nr);
    for (int r = 0; r < nr; ++r)
        for (int c = 0; c < nc; ++c)
            if (m[r][c] > 0) supports[r].push_back(c);

    std::vector<int> nonfull;
    for (int r = 0; r < nr; ++r) {
        if (static_cast<int>(supports[r].size()) == nc)
            g.full_rows.push_back(r);
        else
            nonfull.push_back(r);
    }
    if (nonfull.empty()) {
        // Strictly positive matrix: one component, no C block.
        if (!strictly_positive(m)) return std::nullopt;
        std::vector<int> all_cols(nc), all_rows(nr);
        for (int c = 0; c < nc; ++c) all_cols[c] = c;
        for (int r = 0; r < nr; ++r) all_rows[r] = r;
        g.component_cols.push_back(all_cols);
        g.component_rows.push_back(all_rows);
        g.full_rows.clear();
        return g;
    }
    // Distinct supports of non-full rows are the component column groups and
    // must be pairwise disjoint.
    std::map<std::vector<int>, std::vector<int>> by_support;
    for (int r : nonfull) {
        if (supports[r].empty()) return std::nullopt;
        by_support[supports[r]].push_back(r);
    }
    std::vector<char> claimed(nc, 0);
    for (const auto& [sup, rs] : by_support) {
        for (int c : sup) {
            if (claimed[c]) return std::nullopt;
            claimed[c] = 1;
        }
        g.component_cols.push_back(sup);
        g.component_rows.push_back(rs);
    }
    for (int c = 0; c < nc; ++c)
        if (!claimed[c]) g.c_cols.push_back(c);
    if (g.full_rows.empty() && !g.c_cols.empty()) return std::nullopt;
    return g;
}

}  // namespace

DiagramClass classify(const BratteliDiagram& b, int check_depth) {
    DiagramClass out;
    int top = (check_depth > 0 && check_depth <= b.depth()) ? check_depth : b.depth();

    out.stationary = b.stationary();
    out.rank = 0;
    bool constant = true;
    for (int n = 1; n <= top; ++n) {
        out.rank = std::max(out.rank, b.vertex_count(n));
        if (b.vertex_count(n) != b.vertex_count(1)) constant = false;
    }
    out.constant_vertex_counts = constant;

    for (int n = 1; n < top && !out.simple_verified; ++n) {
        Matrix acc = b.incidence(n);
        for (int m = n + 1; m <= top; ++m) {
            if (strictly_positive(acc)) {
                out.simple_verified = true;
                break;
            }
            if (m < top) acc = multiply(b.incidence(m), acc);
        }
    }

    // A chain of vertices whose in-degree stays 1 flags a periodicity candidate.
    {
        std::vector<char> ok(b.vertex_count(1), 1);
        for (int n = 2; n <= top; ++n) {
            std::vector<char> next(b.vertex_count(n), 0);
            const Matrix& m = b.incidence(n - 1);
            for (int v = 0; v < b.vertex_count(n); ++v) {
                long long deg = 0;
                int src = -1;
                for (int w = 0; w < b.vertex_count(n - 1); ++w) {
                    deg += m[v][w];
                    if (m[v][w] > 0) src = w;
                }
                if (deg == 1 && ok[src]) next[v] = 1;
            }
            ok = std::move(next);
        }
        out.candidate_periodic = std::any_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
    }

    // Block shape detection: every checked matrix (levels >= 1) must fit one
    // grouping, with row groups feeding the next level's column groups.
    {
        std::optional<ClassABlocks> blocks;
        bool consistent = true;
        bool c_all_ones = true;
        for (int n = 1; n < top && consistent; ++n) {
            auto g = block_grouping(b.incidence(n));
            if (!g) {
                consistent = false;
                break;
            }
            if (!blocks) {
                blocks = ClassABlocks{};
                blocks->k = static_cast<int>(g->component_cols.size());
                blocks->components = g->component_cols;
                blocks->c_vertices = g->c_cols;
            } else {
                if (g->component_cols != blocks->components || g->c_cols != blocks->c_vertices) {
                    consistent = false;
                    break;
                }
            }
            // Chaining: row groups must coincide with column groups when the
            // vertex sets repeat (stationary-style data).
            if (rows(b.incidence(n)) == cols(b.incidence(n))) {
                if (g->component_rows != g->component_cols || g->full_rows != g->c_cols) {
                    consistent = false;
                    break;
                }
            }
            int d_lo = static_cast<int>(g->c_cols.size());
            int d_hi = static_cast<int>(g->full_rows.size());
            if (n == 1) blocks->c_square = d_lo > 0;
            blocks->c_square = blocks->c_square && d_lo == d_hi && d_lo > 0;
            blocks->c_size = std::max(blocks->c_size, d_lo);
            if (d_lo == 1 && d_hi == 1) {
                if (b.incidence(n)[g->full_rows[0]][g->c_cols[0]] != 1) c_all_ones = false;
            } else if (d_lo > 0) {
                c_all_ones = false;
            }
        }
        if (consistent && blocks) {
            blocks->c_all_ones = blocks->c_size > 0 && c_all_ones;
            out.class_a = blocks;
        }
    }
    return out;
}

}  // namespace bratteli
