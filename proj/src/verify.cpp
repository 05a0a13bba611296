#include "bratteli/verify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace bratteli {

std::string to_string(PerfectStatus s) {
    switch (s) {
        case PerfectStatus::PerfectUpToDepth: return "PERFECT_UP_TO_DEPTH";
        case PerfectStatus::NotPerfect: return "NOT_PERFECT";
        case PerfectStatus::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

WordsFollowGraph check_words_follow_graph(const BratteliDiagram& b, const DiagramOrder& o,
                                          const Skeleton& s, const Correspondence& c, int n,
                                          int horizon) {
    if (n < 2) throw input_error("word/graph check needs a level >= 2");
    AssociatedGraph g = build_graph(b, s, c, n);
    LevelLanguage lang = level_language(b, o, n, horizon);
    WordsFollowGraph out;
    for (auto [x, y] : lang.two_letter) {
        int from = g.cell_of_vertex[x], to = g.cell_of_vertex[y];
        if (std::find(g.adj[from].begin(), g.adj[from].end(), to) == g.adj[from].end()) {
            out.ok = false;
            out.offending_factor = {x, y};
            return out;
        }
    }
    return out;
}

namespace {

bool repeats_stationary(const BratteliDiagram& b, const DiagramOrder& o) {
    if (b.depth() < 3) return false;
    for (int n = 2; n < b.depth(); ++n) {
        if (b.vertex_count(n) != b.vertex_count(1)) return false;
        if (!(b.incidence(n) == b.incidence(1))) return false;
    }
    for (int k = 3; k <= b.depth(); ++k)
        for (int v = 0; v < b.vertex_count(k); ++v)
            if (o.source_word(k, v) != o.source_word(2, v)) return false;
    return true;
}

struct Verticalized {
    BratteliDiagram diagram;
    DiagramOrder order;
    Skeleton skeleton;
    bool ok = false;
    std::string obstruction;
};

bool masks_vertical(const BratteliDiagram& b, const Skeleton& s) {
    // Surviving extremal chains must hold their vertex below the top level.
    for (int n = 2; n < b.depth(); ++n)
        for (int v = 0; v < b.vertex_count(n); ++v) {
            if (s.is_max_vertex(n, v) && s.max_source(n, v) != v) return false;
            if (s.is_min_vertex(n, v) && s.min_source(n, v) != v) return false;
        }
    return true;
}

Verticalized verticalize(const BratteliDiagram& b, const DiagramOrder& o) {
    Verticalized out{b, o, Skeleton{}, false, ""};
    BratteliDiagram base = b;
    DiagramOrder base_order = o;
    try {
        WellTelescoped wt = skeleton_from_order(b, o);
        if (masks_vertical(wt.tel.diagram, wt.skeleton)) {
            out.diagram = std::move(wt.tel.diagram);
            out.order = std::move(wt.order);
            out.skeleton = std::move(wt.skeleton);
            out.ok = true;
            return out;
        }
        base = wt.tel.diagram;
        base_order = wt.order;
    } catch (const input_error& e) {
        out.obstruction = e.what();
        return out;
    }
    // Extremal chains cycle; collapse whole cycles with a uniform step.
    for (int step = 2; 1 + 2 * step <= base.depth(); ++step) {
        std::vector<int> levels{0, 1};
        for (int l = 1 + step; l <= base.depth(); l += step) levels.push_back(l);
        TelescopeResult tel = telescope(base, levels);
        DiagramOrder to = telescope_order(base, base_order, tel);
        Skeleton sk = extract_skeleton(tel.diagram, to);
        if (well_telescoped(tel.diagram, sk) && masks_vertical(tel.diagram, sk)) {
            out.diagram = std::move(tel.diagram);
            out.order = std::move(to);
            out.skeleton = std::move(sk);
            out.ok = true;
            return out;
        }
    }
    out.obstruction = "extremal chains do not become vertical within the available depth";
    return out;
}

}  // namespace

namespace {

// Functional-graph core: the vertices lying on cycles of the map.
std::vector<int> eventual_image(const std::vector<int>& step) {
    int n = static_cast<int>(step.size());
    std::vector<char> on_core(n, 0);
    for (int v = 0; v < n; ++v) {
        int slow = v, fast = v;
        do {
            slow = step[slow];
            fast = step[step[fast]];
        } while (slow != fast);
        on_core[slow] = 1;
        for (int x = step[slow]; x != slow; x = step[x]) on_core[x] = 1;
    }
    std::vector<int> core;
    for (int v = 0; v < n; ++v)
        if (on_core[v]) core.push_back(v);
    return core;
}

// Stationary data admits a level-free verdict: the vertical extremal
// vertices are the cycle vertices of the extremal source maps, and the
// two-letter factor closure of the repeating words is the full factor
// content of the limit language.
PerfectVerdict stationary_perfect_verdict(const BratteliDiagram& b,
                                          const std::vector<std::vector<int>>& words) {
    PerfectVerdict verdict;
    verdict.horizon = b.depth();
    verdict.stationary_certificate = true;
    int d = static_cast<int>(words.size());
    std::vector<int> t_max(d), t_min(d);
    for (int v = 0; v < d; ++v) {
        t_max[v] = words[v].back();
        t_min[v] = words[v].front();
    }
    std::vector<int> vmax = eventual_image(t_max), vmin = eventual_image(t_min);
    verdict.max_path_count = static_cast<int>(vmax.size());
    verdict.min_path_count = static_cast<int>(vmin.size());
    if (vmax.size() != vmin.size()) {
        verdict.status = PerfectStatus::NotPerfect;
        verdict.witness = "maximal and minimal path counts differ: " +
                          std::to_string(vmax.size()) + " vs " + std::to_string(vmin.size());
        return verdict;
    }
    auto factors = stationary_two_letter_closure(words);
    std::map<int, std::vector<int>> rel;
    for (int vt : vmax)
        for (int vb : vmin)
            if (factors.count({vt, vb})) rel[vt].push_back(vb);
    std::map<int, int> hit;
    for (int vt : vmax) {
        if (rel[vt].size() != 1) {
            verdict.status = PerfectStatus::NotPerfect;
            verdict.witness = rel[vt].empty()
                                  ? "maximal vertex " + b.vertex_name(1, vt) + " has no follower"
                                  : "maximal vertex " + b.vertex_name(1, vt) +
                                        " has ambiguous followers";
            return verdict;
        }
        hit[rel[vt].front()] += 1;
    }
    for (int vb : vmin)
        if (hit[vb] != 1) {
            verdict.status = PerfectStatus::NotPerfect;
            verdict.witness = "minimal vertex " + b.vertex_name(1, vb) +
                              (hit[vb] ? " is reached twice" : " is never reached");
            return verdict;
        }
    for (int vt : vmax) verdict.pairing.push_back({vt, rel[vt].front()});
    verdict.status = PerfectStatus::PerfectUpToDepth;
    return verdict;
}

}  // namespace

PerfectVerdict check_perfect_finite_rank(const BratteliDiagram& b, const DiagramOrder& o,
                                         int horizon) {
    PerfectVerdict verdict;
    int top = horizon > 0 ? std::min(horizon, b.depth()) : b.depth();
    verdict.horizon = top;

    if (repeats_stationary(b, o)) {
        std::vector<std::vector<int>> words;
        for (int v = 0; v < b.vertex_count(2); ++v) words.push_back(o.source_word(2, v));
        return stationary_perfect_verdict(b, words);
    }

    for (int n = 2; n <= top; ++n)
        if (b.vertex_count(n) != b.vertex_count(1)) {
            verdict.status = PerfectStatus::Inconclusive;
            verdict.witness = "vertex counts are not constant across levels";
            return verdict;
        }

    Verticalized vert = verticalize(b, o);
    if (!vert.ok) {
        verdict.status = PerfectStatus::Inconclusive;
        verdict.witness = vert.obstruction;
        return verdict;
    }
    const BratteliDiagram& bb = vert.diagram;
    const Skeleton& sk = vert.skeleton;

    // Vertical extremal vertices, read off below the top level.
    std::vector<int> vmax = sk.max_vertex_list(1);
    std::vector<int> vmin = sk.min_vertex_list(1);
    verdict.max_path_count = static_cast<int>(vmax.size());
    verdict.min_path_count = static_cast<int>(vmin.size());
    if (vmax.size() != vmin.size()) {
        verdict.status = PerfectStatus::NotPerfect;
        verdict.witness = "maximal and minimal path counts differ: " +
                          std::to_string(vmax.size()) + " vs " + std::to_string(vmin.size());
        return verdict;
    }

    std::set<std::pair<int, int>> factors;
    bool certificate = repeats_stationary(bb, vert.order);
    if (certificate) {
        std::vector<std::vector<int>> words;
        for (int v = 0; v < bb.vertex_count(2); ++v) words.push_back(vert.order.source_word(2, v));
        factors = stationary_two_letter_closure(words);
    } else {
        LevelLanguage lang = level_language(bb, vert.order, 1, bb.depth());
        factors = lang.two_letter;
    }
    verdict.stationary_certificate = certificate;

    // The relation between vertical maximal and minimal vertices must be the
    // graph of a bijection.
    std::map<int, std::vector<int>> rel;
    for (int vt : vmax)
        for (int vb : vmin)
            if (factors.count({vt, vb})) rel[vt].push_back(vb);
    std::map<int, int> hit;
    for (int vt : vmax) {
        const auto& img = rel[vt];
        if (img.size() != 1) {
            verdict.status = PerfectStatus::NotPerfect;
            verdict.witness = img.empty()
                                  ? "maximal vertex " + bb.vertex_name(1, vt) + " has no follower"
                                  : "maximal vertex " + bb.vertex_name(1, vt) +
                                        " has ambiguous followers";
            if (!certificate && img.empty()) {
                verdict.status = PerfectStatus::Inconclusive;
                verdict.witness += " up to the checked horizon";
            }
            return verdict;
        }
        hit[img.front()] += 1;
    }
    for (int vb : vmin)
        if (hit[vb] != 1) {
            verdict.status = PerfectStatus::NotPerfect;
            verdict.witness = "minimal vertex " + bb.vertex_name(1, vb) +
                              (hit[vb] ? " is reached twice" : " is never reached");
            return verdict;
        }
    for (int vt : vmax) verdict.pairing.push_back({vt, rel[vt].front()});
    verdict.status = PerfectStatus::PerfectUpToDepth;
    return verdict;
}

namespace {

long long permutation_count(long long n) {
    long long f = 1;
    for (long long i = 2; i <= n; ++i) f *= i;
    return f;
}

bool necessity_on(const BratteliDiagram& b, const DiagramOrder& o, CensusEntry& entry) {
    Skeleton sk = extract_skeleton(b, o);
    validate_skeleton(b, sk);
    Correspondence c = correspondence_from_order(b, o, sk, b.depth() - 1,
                                                 std::min(3, b.depth() - 1));
    entry.balance_ok = true;
    entry.positively_strong = true;
    int n = 2;
    for (int u = 0; u < b.vertex_count(n + 1); ++u) {
        auto dec = solve_decomposition(b, sk, c, n, u);
        if (!dec) entry.balance_ok = false;
        AssociatedGraph g = build_graph(b, sk, c, n);
        CrossingNumbers cross = crossing_numbers(b, sk, g, u);
        Connectivity conn = connectivity(b, g, &cross);
        if (!conn.positively_strong.value_or(false)) entry.positively_strong = false;
    }
    return true;
}

void attach_necessity(const BratteliDiagram& b, const DiagramOrder& o, CensusEntry& entry) {
    try {
        necessity_on(b, o, entry);
        return;
    } catch (const std::exception&) {
        // A coincident extremal edge can block the raw skeleton; collapsing
        // level pairs restores distinct extremal edges when the diagram is
        // aperiodic enough.
    }
    for (int step = 2; step <= 4; ++step) {
        if (1 + 2 * step > b.depth()) break;
        try {
            std::vector<int> levels{0, 1};
            for (int l = 1 + step; l <= b.depth(); l += step) levels.push_back(l);
            TelescopeResult tel = telescope(b, levels);
            DiagramOrder lo = telescope_order(b, o, tel);
            necessity_on(tel.diagram, lo, entry);
            return;
        } catch (const std::exception&) {
        }
    }
    entry.balance_ok = false;
    entry.positively_strong = false;
}

}  // namespace

Census brute_force_orders(const BratteliDiagram& b, CensusMode mode, long long budget) {
    Census census;
    if (mode == CensusMode::Stationary) {
        for (int n = 2; n < b.depth(); ++n)
            if (b.vertex_count(n + 1) != b.vertex_count(2) || !(b.incidence(n) == b.incidence(1)))
                throw input_error("stationary census needs a repeating block");
        int d = b.vertex_count(1);
        long long count = 1;
        for (int v = 0; v < d; ++v) {
            count *= permutation_count(b.in_degree(2, v));
            if (count > budget)
                throw input_error("census budget exceeded; would enumerate at least " +
                                  std::to_string(count) + " orders");
        }
        census.order_count = count;

        std::vector<std::vector<EdgeId>> pools(d);
        for (int v = 0; v < d; ++v) pools[v] = b.incoming(2, v);
        std::vector<std::vector<EdgeId>> current(d);

        std::function<void(int)> rec = [&](int v) {
            if (v == d) {
                std::vector<std::vector<int>> words(d);
                for (int w = 0; w < d; ++w)
                    for (const EdgeId& e : current[w]) words[w].push_back(e.source);
                DiagramOrder o = DiagramOrder::stationary_from_source_words(b, words);
                CensusEntry entry;
                entry.words = words;
                entry.verdict = check_perfect_finite_rank(b, o);
                if (entry.verdict.status == PerfectStatus::PerfectUpToDepth) {
                    census.perfect_count += 1;
                    attach_necessity(b, o, entry);
                }
                census.entries.push_back(std::move(entry));
                return;
            }
            std::vector<EdgeId> pool = pools[v];
            std::sort(pool.begin(), pool.end());
            do {
                current[v] = pool;
                rec(v + 1);
            } while (std::next_permutation(pool.begin(), pool.end()));
        };
        rec(0);
        return census;
    }

    // Per-level enumeration.
    long long count = 1;
    for (int k = 2; k <= b.depth(); ++k)
        for (int v = 0; v < b.vertex_count(k); ++v) {
            count *= permutation_count(b.in_degree(k, v));
            if (count > budget)
                throw input_error("census budget exceeded; would enumerate at least " +
                                  std::to_string(count) + " orders");
        }
    census.order_count = count;

    std::vector<std::pair<int, int>> slots;  // (level, vertex)
    for (int k = 2; k <= b.depth(); ++k)
        for (int v = 0; v < b.vertex_count(k); ++v) slots.push_back({k, v});
    std::vector<std::vector<EdgeId>> current(slots.size());

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == slots.size()) {
            std::vector<std::vector<std::vector<EdgeId>>> perms(b.depth());
            perms[0].resize(b.vertex_count(1));
            for (int v = 0; v < b.vertex_count(1); ++v) perms[0][v] = b.incoming(1, v);
            for (std::size_t j = 0; j < slots.size(); ++j) {
                auto [k, v] = slots[j];
                if (perms[k - 1].empty()) perms[k - 1].resize(b.vertex_count(k));
                perms[k - 1][v] = current[j];
            }
            DiagramOrder o = DiagramOrder::assign(b, std::move(perms));
            CensusEntry entry;
            for (std::size_t j = 0; j < slots.size(); ++j) {
                std::vector<int> w;
                for (const EdgeId& e : current[j]) w.push_back(e.source);
                entry.words.push_back(std::move(w));
            }
            entry.verdict = check_perfect_finite_rank(b, o);
            if (entry.verdict.status == PerfectStatus::PerfectUpToDepth) {
                census.perfect_count += 1;
                attach_necessity(b, o, entry);
            }
            census.entries.push_back(std::move(entry));
            return;
        }
        auto [k, v] = slots[i];
        std::vector<EdgeId> pool = b.incoming(k, v);
        do {
            current[i] = pool;
            rec(i + 1);
        } while (std::next_permutation(pool.begin(), pool.end()));
    };
    rec(0);
    return census;
}

ObstructionReport class_A_obstruction(const BratteliDiagram& b) {
    ObstructionReport rep;
    DiagramClass cls = classify(b);
    if (!cls.class_a || cls.class_a->c_size == 0 || !cls.class_a->c_square) {
        rep.verdict = ObstructionVerdict::NotApplicable;
        rep.reason = "no square connecting block detected";
        return rep;
    }
    int k = cls.class_a->k, d = cls.class_a->c_size;
    if (d > k - 1) {
        rep.verdict = ObstructionVerdict::NotApplicable;
        rep.reason = "connecting block too large for the obstruction";
        return rep;
    }
    if (k > 2) {
        rep.verdict = ObstructionVerdict::NoPerfectOrder;
        rep.reason = std::to_string(k) + " minimal components with a " + std::to_string(d) + "x" +
                     std::to_string(d) + " connecting block";
        return rep;
    }
    if (k == 2 && cls.class_a->c_all_ones) {
        rep.verdict = ObstructionVerdict::NotBlocked;
        rep.reason = "connecting block is (1) at every checked level";
        return rep;
    }
    rep.verdict = ObstructionVerdict::NoPerfectOrder;
    rep.reason = "two minimal components with a connecting block other than (1)";
    return rep;
}

}  // namespace bratteli
