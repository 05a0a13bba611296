#include <doctest.h>

#include "helpers.hpp"
#include "bratteli/infinitesimal.hpp"
#include "bratteli/verify.hpp"

using namespace bratteli;
using testutil::load_fixture_diagram;
using testutil::load_fixture_skeleton;

namespace {

// The restricted family: rows (x, x', s, s), (y, y', t, t), (z, z', g+1, g),
// (w, w', h, h+1); the twin-pair skeleton balances on every member.
Matrix family_instance(long long free, long long g, long long h) {
    return Matrix{{free + 1, free, free, free},
                  {free, free + 1, free, free},
                  {free, free, g + 1, g},
                  {free, free, h, h + 1}};
}

}  // namespace

TEST_CASE("the twin-pair vectors have the recorded sign patterns") {
    BratteliDiagram b = load_fixture_diagram("sym4.json", 5);
    SkeletonData sd = load_fixture_skeleton(b, "twin_skeleton_id.json");
    InfinitesimalVector ea = epsilon_vector(b, sd.skeleton, sd.sigma, 2, 0, 1);
    CHECK(ea.entries == std::vector<long long>{0, 0, -1, 1});
    InfinitesimalVector eb = epsilon_vector(b, sd.skeleton, sd.sigma, 2, 1, 1);
    CHECK(eb.entries == std::vector<long long>{0, 0, 1, -1});

    SUBCASE("the pair is dependent with the all-ones witness") {
        RankReport rank = independence_rank({ea.entries, eb.entries});
        CHECK(rank.rank == 1);
        REQUIRE(rank.dependency.has_value());
        CHECK(*rank.dependency == std::vector<long long>{1, 1});
    }
    SUBCASE("the swapped correspondence yields the complementary vector") {
        SkeletonData swap = load_fixture_skeleton(b, "twin_skeleton_swap.json");
        InfinitesimalVector ea2 = epsilon_vector(b, swap.skeleton, swap.sigma, 2, 0, 1);
        CHECK(ea2.entries == std::vector<long long>{1, -1, 0, 0});
        RankReport rank = independence_rank({ea.entries, ea2.entries});
        CHECK(rank.rank == 2);
        CHECK(!rank.dependency.has_value());
    }
    SUBCASE("a nonzero singleton has rank one") {
        RankReport rank = independence_rank({ea.entries});
        CHECK(rank.rank == 1);
        CHECK(!rank.dependency.has_value());
    }
}

TEST_CASE("sign-pattern and path-count forms agree across offsets") {
    BratteliDiagram b = load_fixture_diagram("sym4.json", 6);
    SkeletonData sd = load_fixture_skeleton(b, "twin_skeleton_id.json");
    for (int k = 1; k <= 3; ++k) {
        auto chains = epsilon_by_chains(b, sd.skeleton, sd.sigma, 2, 0, k);
        auto counts = epsilon_by_counts(b, sd.skeleton, sd.sigma, 2, 0, k);
        CHECK(chains == counts);
    }
    CHECK(propagate_check(b, sd.skeleton, sd.sigma, 2, 0, 3).ok);
}

TEST_CASE("the incidence family fixes the twin vector exactly") {
    std::vector<long long> eps{0, 0, -1, 1};
    for (long long free = 1; free <= 3; ++free)
        for (long long g = 1; g <= 2; ++g)
            for (long long h = 1; h <= 2; ++h) {
                Matrix f = family_instance(free, g, h);
                std::vector<long long> out(4, 0);
                for (int v = 0; v < 4; ++v)
                    for (int w = 0; w < 4; ++w) out[v] += f[v][w] * eps[w];
                CHECK(out == eps);
            }

    SUBCASE("the zero vector trivially propagates") {
        Matrix f = family_instance(1, 1, 1);
        std::vector<long long> out(4, 0);
        for (int v = 0; v < 4; ++v)
            for (int w = 0; w < 4; ++w) out[v] += f[v][w] * 0;
        CHECK(out == std::vector<long long>(4, 0));
    }
    SUBCASE("perturbing one entry breaks propagation with the offending row") {
        Matrix f = family_instance(1, 1, 1);
        f[2][2] += 1;
        auto b = BratteliDiagram::from_matrices({f, f, f, f}, true);
        // Reuse the twin skeleton: multiplicities still allow it.
        SkeletonData sd = load_fixture_skeleton(b, "twin_skeleton_id.json");
        PropagateReport rep = propagate_check(b, sd.skeleton, sd.sigma, 2, 0, 2);
        CHECK(!rep.ok);
        CHECK(rep.failed_row == 2);
    }
}

TEST_CASE("the vectors of all maximal base vertices sum to zero") {
    for (const char* name : {"twin_skeleton_id.json", "twin_skeleton_swap.json",
                             "sym4_skeleton_cycle.json"}) {
        BratteliDiagram b = load_fixture_diagram("sym4.json", 6);
        SkeletonData sd = load_fixture_skeleton(b, name);
        for (int k = 1; k <= 3; ++k) {
            std::vector<long long> sum(b.vertex_count(2 + k), 0);
            for (int vt : sd.skeleton.max_vertex_list(1)) {
                auto eps = epsilon_by_chains(b, sd.skeleton, sd.sigma, 2, vt, k);
                for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += eps[i];
            }
            CHECK(sum == std::vector<long long>(sum.size(), 0));
        }
    }
}

TEST_CASE("dominant-eigenvector pairing vanishes on the fixtures") {
    SUBCASE("symmetric stationary block with uniform weights") {
        BratteliDiagram b = load_fixture_diagram("sym4.json", 4);
        SkeletonData sd = load_fixture_skeleton(b, "twin_skeleton_id.json");
        InfinitesimalVector ea = epsilon_vector(b, sd.skeleton, sd.sigma, 2, 0, 1);
        PairingReport rep = perron_pairing_check(b, ea.entries);
        CHECK(rep.ok);
        CHECK(std::abs(rep.pairing) <= 1e-9);
        CHECK(rep.eigenvalue == doctest::Approx(5.0).epsilon(1e-9));
        for (double w : rep.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-9));
    }
    SUBCASE("asymmetric family instance pairs to zero by the swap symmetry") {
        Matrix f = family_instance(1, 1, 1);
        auto b = BratteliDiagram::from_matrices({f, f, f}, true);
        PairingReport rep = perron_pairing_check(b, {0, 0, -1, 1});
        CHECK(rep.ok);
    }
    SUBCASE("the zero vector pairs to zero") {
        BratteliDiagram b = load_fixture_diagram("sym4.json", 3);
        PairingReport rep = perron_pairing_check(b, {0, 0, 0, 0});
        CHECK(rep.ok);
        CHECK(rep.pairing == 0.0);
    }
    SUBCASE("non-stationary input is refused with a reason") {
        BratteliDiagram b = load_fixture_diagram("staircase.json");
        PairingReport rep = perron_pairing_check(b, {0, 0, 0, 0});
        CHECK(!rep.ok);
        CHECK(rep.reason == "diagram is not stationary");
    }
}

TEST_CASE("per-chain vectors on the deep staircase") {
    // Depth-5 staircase with the point-map correspondence.
    auto b = BratteliDiagram::from_matrices(
        {{{1}},
         {{2}, {2}},
         {{2, 1}, {1, 2}, {1, 1}},
         {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {1, 1, 1}},
         {{2, 1, 1, 1}, {1, 2, 1, 1}, {1, 1, 2, 1}, {1, 1, 1, 2}, {1, 1, 1, 1}}});
    Skeleton s;
    s.max_edges = {{{2, 0, 0, 1}, {2, 1, 0, 1}},
                   {{3, 0, 0, 1}, {3, 1, 1, 1}, {3, 2, 1, 0}},
                   {{4, 0, 0, 1}, {4, 1, 1, 1}, {4, 2, 2, 1}, {4, 3, 2, 0}},
                   {{5, 0, 0, 1}, {5, 1, 1, 1}, {5, 2, 2, 1}, {5, 3, 3, 1}, {5, 4, 3, 0}}};
    s.min_edges = {{{2, 0, 0, 0}, {2, 1, 0, 0}},
                   {{3, 0, 0, 0}, {3, 1, 1, 0}, {3, 2, 0, 0}},
                   {{4, 0, 0, 0}, {4, 1, 1, 0}, {4, 2, 2, 0}, {4, 3, 0, 0}},
                   {{5, 0, 0, 0}, {5, 1, 1, 0}, {5, 2, 2, 0}, {5, 3, 3, 0}, {5, 4, 0, 0}}};
    s.max_vertices = {{1}, {1, 1}, {1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1, 1}};
    s.min_vertices = s.max_vertices;
    validate_skeleton(b, s);
    Correspondence c;
    c.sigma = {{{0}},
               {{1}, {0}},
               {{1}, {2}, {0}},
               {{1}, {2}, {3}, {0}},
               {{1}, {2}, {3}, {4}, {0}}};

    std::vector<MaximalChain> chains{{{0, 0, 0, 0, 0}, 3},
                                     {{0, 1, 1, 1, 1}, 3},
                                     {{0, 1, 2, 2, 2}, 4}};
    FamilyReport rep = countable_family(b, s, c, chains);
    CHECK(rep.common_level == 5);
    CHECK(rep.members[0].at_common_level == std::vector<long long>{1, -1, 0, 0, 0});
    CHECK(rep.members[1].at_common_level == std::vector<long long>{-1, 1, 0, 0, 0});
    CHECK(rep.members[2].at_common_level == std::vector<long long>{-1, 0, 1, 0, 0});
    CHECK(rep.rank.rank == 2);
    REQUIRE(rep.rank.dependency.has_value());

    SUBCASE("chains sharing base data give identical vectors") {
        std::vector<MaximalChain> same{{{0, 1, 1, 1, 1}, 3}, {{0, 1, 2, 2, 2}, 3}};
        FamilyReport r2 = countable_family(b, s, c, same);
        CHECK(r2.members[0].at_common_level == r2.members[1].at_common_level);
        CHECK(r2.rank.rank == 1);
    }
    SUBCASE("a single chain has rank at most one") {
        FamilyReport r1 = countable_family(b, s, c, {{{0, 0, 0, 0, 0}, 3}});
        CHECK(r1.rank.rank == 1);
    }
    SUBCASE("chains that stray off the designated edges are rejected") {
        CHECK_THROWS_AS(countable_family(b, s, c, {{{0, 1, 0, 0, 0}, 3}}), input_error);
    }
}

TEST_CASE("subfamilies of one fewer vector have full rank on perfect instances") {
    // Three vertical extremal pairs, cyclically paired: the full family sums
    // to zero, every two-vector subfamily is independent.
    BratteliDiagram b = load_fixture_diagram("sym4_squared.json", 6);
    SkeletonData sd = load_fixture_skeleton(b, "sym4_squared_skeleton.json");
    std::vector<std::vector<long long>> family;
    for (int vt : sd.skeleton.max_vertex_list(1))
        family.push_back(epsilon_vector(b, sd.skeleton, sd.sigma, 2, vt, 1).entries);
    REQUIRE(family.size() == 3);
    CHECK(family[0] == std::vector<long long>{1, -1, 0, 0});
    CHECK(family[1] == std::vector<long long>{0, 1, -1, 0});
    CHECK(family[2] == std::vector<long long>{-1, 0, 1, 0});
    RankReport full = independence_rank(family);
    CHECK(full.rank == 2);
    REQUIRE(full.dependency.has_value());
    CHECK(*full.dependency == std::vector<long long>{1, 1, 1});
    for (int skip = 0; skip < 3; ++skip) {
        std::vector<std::vector<long long>> sub;
        for (int i = 0; i < 3; ++i)
            if (i != skip) sub.push_back(family[i]);
        CHECK(independence_rank(sub).rank == 2);
    }

    SUBCASE("the same holds for census-perfect orders of a small instance") {
        Matrix block{{1, 2}, {2, 1}};
        auto sb = BratteliDiagram::from_matrices(std::vector<Matrix>(6, block), true);
        Census census = brute_force_orders(sb, CensusMode::Stationary, 1000);
        int families_checked = 0;
        for (const auto& entry : census.entries) {
            if (entry.verdict.status != PerfectStatus::PerfectUpToDepth) continue;
            DiagramOrder o = DiagramOrder::stationary_from_source_words(sb, entry.words);
            Skeleton sk = extract_skeleton(sb, o);
            try {
                validate_skeleton(sb, sk);
            } catch (const input_error&) {
                continue;
            }
            Correspondence c = correspondence_from_order(sb, o, sk, sb.depth() - 1);
            auto vmax = sk.max_vertex_list(1);
            std::vector<std::vector<long long>> eps;
            bool singleton = true;
            for (int vt : vmax)
                if (c.at(1, vt).size() != 1) singleton = false;
            if (!singleton) continue;
            for (int vt : vmax)
                eps.push_back(epsilon_vector(sb, sk, c, 2, vt, 1).entries);
            int j = static_cast<int>(eps.size());
            if (j < 2) continue;
            ++families_checked;
            for (int skip = 0; skip < j; ++skip) {
                std::vector<std::vector<long long>> sub;
                for (int i = 0; i < j; ++i)
                    if (i != skip) sub.push_back(eps[i]);
                CHECK(independence_rank(sub).rank == j - 1);
            }
        }
        CHECK(families_checked > 0);
    }
}
