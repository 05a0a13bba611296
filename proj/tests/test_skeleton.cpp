#include <doctest.h>

#include "helpers.hpp"
#include "bratteli/skeleton.hpp"

using namespace bratteli;
using testutil::load_fixture_diagram;
using testutil::load_fixture_order;
using testutil::load_fixture_skeleton;

namespace {
const int A = 0, B = 1, C = 2;
}

TEST_CASE("the squared-diagram order is already well telescoped") {
    BratteliDiagram b = load_fixture_diagram("sym4_squared.json", 6);
    DiagramOrder o = load_fixture_order(b, "sym4_squared_order.json");
    WellTelescoped wt = skeleton_from_order(b, o);
    CHECK(wt.tel.levels == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
    CHECK(wt.skeleton.max_vertex_list(2) == std::vector<int>{A, B, C});
    CHECK(wt.skeleton.min_vertex_list(2) == std::vector<int>{A, B, C});
    // Designated sources: (a,b,c,a) maximal and (a,b,c,b) minimal.
    CHECK(wt.skeleton.max_source(3, 0) == 0);
    CHECK(wt.skeleton.max_source(3, 1) == 1);
    CHECK(wt.skeleton.max_source(3, 2) == 2);
    CHECK(wt.skeleton.max_source(3, 3) == 0);
    CHECK(wt.skeleton.min_source(3, 3) == 1);
    CHECK(well_telescoped(wt.tel.diagram, wt.skeleton));
}

TEST_CASE("proper orders contract the extremal vertex sets to singletons") {
    BratteliDiagram b = load_fixture_diagram("sym4.json", 5);
    // Every word starts at a and ends at b: unique minimal and maximal chains.
    std::vector<std::vector<int>> words{{0, 0, 2, 3, 1}, {0, 2, 3, 1, 1}, {0, 2, 2, 3, 1},
                                        {0, 3, 3, 2, 1}};
    REQUIRE_NOTHROW(DiagramOrder::stationary_from_source_words(b, words));
    DiagramOrder o = DiagramOrder::stationary_from_source_words(b, words);
    WellTelescoped wt = skeleton_from_order(b, o);
    for (int n = 1; n < wt.tel.diagram.depth(); ++n) {
        CHECK(wt.skeleton.max_vertex_list(n).size() == 1);
        CHECK(wt.skeleton.min_vertex_list(n).size() == 1);
    }
}

TEST_CASE("staircase skeleton data round-trips through validation") {
    BratteliDiagram b = load_fixture_diagram("staircase.json");
    SkeletonData sd = load_fixture_skeleton(b, "staircase_skeleton.json");
    CHECK_NOTHROW(validate_skeleton(b, sd.skeleton));
    CHECK(well_telescoped(b, sd.skeleton));
}

TEST_CASE("sigma is read off the language factors") {
    BratteliDiagram b = load_fixture_diagram("sym4_squared.json", 6);
    DiagramOrder o = load_fixture_order(b, "sym4_squared_order.json");
    Skeleton s = extract_skeleton(b, o);
    auto sigma = sigma_from_order(b, o, s, 2, 4);
    CHECK(sigma[0] == std::vector<int>{1});
    CHECK(sigma[1] == std::vector<int>{2});
    CHECK(sigma[2] == std::vector<int>{0});
    CHECK(sigma[3].empty());

    SUBCASE("the stationary closure gives the same maps") {
        std::vector<std::vector<int>> words;
        for (int v = 0; v < 4; ++v) words.push_back(o.source_word(2, v));
        CHECK(sigma_stationary(b, s, words, 2) == sigma);
    }
    SUBCASE("a proper order maps the maximal vertex to the minimal vertex") {
        BratteliDiagram p = load_fixture_diagram("sym4.json", 5);
        std::vector<std::vector<int>> words{{0, 0, 2, 3, 1}, {0, 2, 3, 1, 1},
                                            {0, 2, 2, 3, 1}, {0, 3, 3, 2, 1}};
        DiagramOrder po = DiagramOrder::stationary_from_source_words(p, words);
        WellTelescoped wt = skeleton_from_order(p, po);
        auto ps = sigma_from_order(wt.tel.diagram, wt.order, wt.skeleton, 2,
                                   wt.tel.diagram.depth());
        int vt = wt.skeleton.max_vertex_list(2).front();
        int vb = wt.skeleton.min_vertex_list(2).front();
        CHECK(ps[vt] == std::vector<int>{vb});
    }
}

TEST_CASE("point-map correspondence on the staircase validates") {
    BratteliDiagram b = load_fixture_diagram("staircase.json");
    SkeletonData sd = load_fixture_skeleton(b, "staircase_skeleton.json");
    CorrespondenceReport rep = validate_correspondence(b, sd.skeleton, sd.sigma);
    CHECK(rep.covering_ok);
    CHECK(rep.composition_ok);
    CHECK(rep.threads_ok);
    CHECK(rep.threads_unique);
    CHECK(rep.point_map_from_level == 1);
    CHECK(rep.valid());
}

TEST_CASE("set-valued correspondence stays composition consistent") {
    BratteliDiagram b = load_fixture_diagram("staircase2.json");
    SkeletonData sd = load_fixture_skeleton(b, "staircase2_skeleton.json");
    CHECK_NOTHROW(validate_skeleton(b, sd.skeleton));
    CorrespondenceReport rep = validate_correspondence(b, sd.skeleton, sd.sigma);
    CHECK(rep.covering_ok);
    CHECK(rep.composition_ok);
    CHECK(rep.threads_ok);
    CHECK(!rep.threads_unique);  // two threads through the first chain
    CHECK(rep.point_map_from_level == -1);
    for (int n = 3; n <= 5; ++n) CHECK(sd.sigma.at(n, 0).size() == 2);
}

TEST_CASE("covering failures are reported") {
    BratteliDiagram b = load_fixture_diagram("staircase.json");
    SkeletonData sd = load_fixture_skeleton(b, "staircase_skeleton.json");
    // Redirect sigma_3 so one minimal vertex is never reached.
    sd.sigma.sigma[2][2] = {1};
    CorrespondenceReport rep = validate_correspondence(b, sd.skeleton, sd.sigma);
    CHECK(!rep.covering_ok);
    CHECK(rep.witness.find("covering failure") != std::string::npos);
    CHECK(!rep.valid());
}

TEST_CASE("composition inconsistencies are reported") {
    BratteliDiagram b = load_fixture_diagram("staircase.json");
    SkeletonData sd = load_fixture_skeleton(b, "staircase_skeleton.json");
    sd.sigma.sigma[2] = {{2}, {0}, {1}};  // rotate the wrong way at one level
    CorrespondenceReport rep = validate_correspondence(b, sd.skeleton, sd.sigma);
    CHECK(!rep.composition_ok);
}

TEST_CASE("backward extremal chains are functions of the top vertex") {
    BratteliDiagram b = load_fixture_diagram("sym4_squared.json", 5);
    DiagramOrder o = load_fixture_order(b, "sym4_squared_order.json");
    Skeleton s = extract_skeleton(b, o);
    for (int v = 0; v < 4; ++v) {
        int via_chain = s.max_chain_source(5, 2, v);
        auto p = extremal_path(b, o, Extreme::Max, 2, 5, v);
        CHECK(p.front().source == via_chain);
    }
}
