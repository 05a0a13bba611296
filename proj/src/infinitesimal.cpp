#include "bratteli/infinitesimal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bratteli {

namespace {

int single_sigma_image(const Correspondence& c, int n, int vt) {
    const auto& img = c.at(n, vt);
    if (img.size() != 1)
        throw input_error("sigma image at the base vertex must be a singleton");
    return img.front();
}

}  // namespace

std::vector<long long> epsilon_by_chains(const BratteliDiagram& b, const Skeleton& s,
                                         const Correspondence& c, int n, int base_vertex, int k) {
    if (n < 2 || n + k > b.depth()) throw input_error("epsilon levels out of range");
    int paired = single_sigma_image(c, n - 1, base_vertex);
    std::vector<long long> eps(b.vertex_count(n + k), 0);
    for (int v = 0; v < b.vertex_count(n + k); ++v) {
        // Sources at level n of the extremal finite paths into v.
        int max_src = s.max_chain_source(n + k, n, v);
        int min_src = s.min_chain_source(n + k, n, v);
        bool in_max_class = s.max_source(n, max_src) == base_vertex;
        bool in_min_class = s.min_source(n, min_src) == paired;
        if (in_max_class && !in_min_class) eps[v] = 1;
        if (!in_max_class && in_min_class) eps[v] = -1;
    }
    return eps;
}

std::vector<long long> epsilon_by_counts(const BratteliDiagram& b, const Skeleton& s,
                                         const Correspondence& c, int n, int base_vertex, int k) {
    if (n < 2 || n + k > b.depth()) throw input_error("epsilon levels out of range");
    int paired = single_sigma_image(c, n - 1, base_vertex);
    Matrix counts = b.path_counts(n, n + k);
    std::vector<long long> eps(b.vertex_count(n + k), 0);
    for (int v = 0; v < b.vertex_count(n + k); ++v) {
        long long plus = 0, minus = 0;
        for (int w = 0; w < b.vertex_count(n); ++w) {
            if (s.max_source(n, w) == base_vertex) plus += counts[v][w];
            if (s.min_source(n, w) == paired) minus += counts[v][w];
        }
        eps[v] = plus - minus;
    }
    return eps;
}

InfinitesimalVector epsilon_vector(const BratteliDiagram& b, const Skeleton& s,
                                   const Correspondence& c, int n, int base_vertex, int k) {
    if (!s.is_max_vertex(n - 1, base_vertex))
        throw input_error("epsilon base must be a maximal vertex");
    auto chains = epsilon_by_chains(b, s, c, n, base_vertex, k);
    auto counts = epsilon_by_counts(b, s, c, n, base_vertex, k);
    if (chains != counts)
        throw input_error(
            "sign-pattern and path-count forms disagree; balance relations fail at the base");
    InfinitesimalVector out;
    out.base_level = n;
    out.base_vertex = base_vertex;
    out.offset = k;
    out.entries = std::move(chains);
    return out;
}

PropagateReport propagate_check(const BratteliDiagram& b, const Skeleton& s,
                                const Correspondence& c, int n, int base_vertex, int max_offset) {
    PropagateReport rep;
    for (int k = 1; k < max_offset && n + k + 1 <= b.depth(); ++k) {
        auto lo = epsilon_by_chains(b, s, c, n, base_vertex, k);
        auto hi = epsilon_by_chains(b, s, c, n, base_vertex, k + 1);
        const Matrix& f = b.incidence(n + k);
        for (int v = 0; v < b.vertex_count(n + k + 1); ++v) {
            long long acc = 0;
            for (int w = 0; w < b.vertex_count(n + k); ++w) acc += f[v][w] * lo[w];
            if (acc != hi[v]) {
                rep.ok = false;
                rep.failed_offset = k;
                rep.failed_row = v;
                return rep;
            }
        }
    }
    return rep;
}

RankReport independence_rank(const std::vector<std::vector<long long>>& vectors) {
    RankReport rep;
    if (vectors.empty()) return rep;
    std::size_t dim = vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != dim) throw input_error("rank needs vectors of a common length");

    // Fraction-free elimination on the transpose, tracking the combination
    // that produced each row so a dependency witness can be reported.
    std::size_t m = vectors.size();
    std::vector<std::vector<long long>> a(m, std::vector<long long>(dim + m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < dim; ++j) a[i][j] = vectors[i][j];
        a[i][dim + i] = 1;
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < dim && rank < m; ++col) {
        std::size_t pivot = rank;
        while (pivot < m && a[pivot][col] == 0) ++pivot;
        if (pivot == m) continue;
        std::swap(a[rank], a[pivot]);
        for (std::size_t i = rank + 1; i < m; ++i) {
            if (a[i][col] == 0) continue;
            long long g = std::gcd(std::abs(a[i][col]), std::abs(a[rank][col]));
            long long fi = a[rank][col] / g, fr = a[i][col] / g;
            for (std::size_t j = 0; j < dim + m; ++j) a[i][j] = a[i][j] * fi - a[rank][j] * fr;
        }
        ++rank;
    }
    rep.rank = static_cast<int>(rank);
    for (std::size_t i = rank; i < m; ++i) {
        bool zero_row = true;
        for (std::size_t j = 0; j < dim; ++j) zero_row &= a[i][j] == 0;
        if (!zero_row) continue;
        std::vector<long long> dep(a[i].begin() + dim, a[i].end());
        long long g = 0;
        for (long long x : dep) g = std::gcd(g, std::abs(x));
        if (g > 1)
            for (long long& x : dep) x /= g;
        for (long long x : dep) {
            if (x == 0) continue;
            if (x < 0)
                for (long long& y : dep) y = -y;
            break;
        }
        rep.dependency = dep;
        break;
    }
    return rep;
}

PairingReport perron_pairing_check(const BratteliDiagram& b, const std::vector<long long>& eps,
                                   double power_tol, double pairing_tol) {
    PairingReport rep;
    if (!b.stationary()) {
        rep.reason = "diagram is not stationary";
        return rep;
    }
    const Matrix& f = b.stationary_block();
    if (!strictly_positive(f)) {
        rep.reason = "stationary block is not strictly positive";
        return rep;
    }
    std::size_t d = rows(f);
    if (eps.size() != d) {
        rep.reason = "vector length does not match the block";
        return rep;
    }
    // Power iteration on F^T with a uniform start.
    std::vector<double> p(d, 1.0 / static_cast<double>(d)), next(d, 0.0);
    double lambda = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
        for (std::size_t j = 0; j < d; ++j) {
            next[j] = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                next[j] += static_cast<double>(f[i][j]) * p[i];
        }
        double sum = std::accumulate(next.begin(), next.end(), 0.0);
        for (double& x : next) x /= sum;
        double delta = 0.0;
        for (std::size_t j = 0; j < d; ++j) delta = std::max(delta, std::abs(next[j] - p[j]));
        p = next;
        lambda = sum;
        if (delta < power_tol) break;
    }
    rep.weights = p;
    rep.eigenvalue = lambda;
    double pair = 0.0;
    for (std::size_t j = 0; j < d; ++j) pair += p[j] * static_cast<double>(eps[j]);
    rep.pairing = pair;
    rep.ok = std::abs(pair) <= pairing_tol;
    if (!rep.ok) rep.reason = "pairing exceeds tolerance";
    return rep;
}

FamilyReport countable_family(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c,
                              const std::vector<MaximalChain>& chains) {
    FamilyReport rep;
    if (chains.empty()) throw input_error("family needs at least one chain");

    std::vector<std::pair<int, int>> bases;  // (base level n, base vertex at n-1)
    for (const auto& chain : chains) {
        if (static_cast<int>(chain.vertices.size()) < b.depth())
            throw input_error("chain must name a vertex per level up to depth");
        // Chain sanity: consecutive vertices joined by designated maximal edges.
        for (int k = 2; k <= b.depth(); ++k)
            if (s.max_source(k, chain.vertices[k - 1]) != chain.vertices[k - 2])
                throw input_error("chain does not follow designated maximal edges at level " +
                                  std::to_string(k));
        int base = -1;
        if (chain.base_level > 0) {
            base = chain.base_level;
        } else {
            // First base level n >= 2 from which every sigma image along the
            // chain stays a singleton.
            for (int n = 2; n + 1 <= b.depth() && base < 0; ++n) {
                bool ok = true;
                for (int j = n - 1; j <= std::min(c.levels(), b.depth() - 1); ++j)
                    if (c.at(j, chain.vertices[j - 1]).size() != 1) ok = false;
                if (ok) base = n;
            }
            if (base < 0)
                throw input_error("chain sigma images never become singletons within depth");
        }
        if (c.at(base - 1, chain.vertices[base - 2]).size() != 1)
            throw input_error("sigma image at the chosen base is not a singleton");
        bases.push_back({base, chain.vertices[base - 2]});
    }

    int common = 0;
    for (auto [n, vt] : bases) common = std::max(common, n + 1);
    common = std::min(common, b.depth());
    rep.common_level = common;

    std::vector<std::vector<long long>> lifted;
    for (auto [n, vt] : bases) {
        FamilyMember member;
        member.base_level = n;
        member.vector = epsilon_vector(b, s, c, n, vt, 1);
        member.at_common_level = epsilon_by_chains(b, s, c, n, vt, common - n);
        lifted.push_back(member.at_common_level);
        rep.members.push_back(std::move(member));
    }
    rep.rank = independence_rank(lifted);
    return rep;
}

}  // namespace bratteli
