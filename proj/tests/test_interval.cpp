#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgr/interval.hpp"
#include "test_support.hpp"

using namespace kgr;
using kgrtest::make_g1;
using kgrtest::path_of;

namespace {

Rational rq(long long n, long long d = 1) { return Rational(n, d); }

// Interval system on the G1 graph: D_v1 = [0,1/2], D_v2 = (1/2,1],
// tau_f1 = tau_f2 = -x/2 + 1/2, tau_f3 = x. The identity branch on
// (1/2,1] keeps that half unrefined at every level.
IntervalSystem make_g1_system(const KGraph& g1) {
    std::map<VertexId, IntervalSet> domains{
        {g1.vertex_id("v1"), IntervalSet(rq(0), rq(1, 2))},
        {g1.vertex_id("v2"), IntervalSet(rq(1, 2), rq(1))}};
    std::map<EdgeId, AffineMap> maps{
        {*g1.edge_id("f1"), {rq(-1, 2), rq(1, 2)}},
        {*g1.edge_id("f2"), {rq(-1, 2), rq(1, 2)}},
        {*g1.edge_id("f3"), {rq(1), rq(0)}}};
    return IntervalSystem(g1, std::move(domains), std::move(maps));
}

} // namespace

TEST_CASE("interval set arithmetic") {
    IntervalSet a(rq(0), rq(1, 2)), b(rq(1, 4), rq(3, 4));
    CHECK(a.intersect(b).length() == rq(1, 4));
    CHECK(a.unite(b).length() == rq(3, 4));
    CHECK(a.subtract(b).length() == rq(1, 4));
    CHECK(a.subtract(b).equals_mod_null(IntervalSet(rq(0), rq(1, 4))));
    // shared endpoints are null
    IntervalSet c(rq(1, 2), rq(1));
    CHECK(a.intersect(c).length().is_zero());
}

TEST_CASE("two-vertex interval system with a reflecting branch") {
    auto g1 = make_g1();
    auto sys = make_g1_system(*g1);

    CHECK(sys.range_of(path_of(*g1, {"f1"})).equals_mod_null(IntervalSet(rq(1, 4), rq(1, 2))));
    CHECK(sys.range_of(path_of(*g1, {"f2"})).equals_mod_null(IntervalSet(rq(0), rq(1, 4))));
    CHECK(sys.range_of(path_of(*g1, {"f3"})).equals_mod_null(IntervalSet(rq(1, 2), rq(1))));
    CHECK(sys.phi(*g1->edge_id("f1")) == rq(1, 2));
    CHECK(sys.phi(*g1->edge_id("f3")) == rq(1));
}

TEST_CASE("identity system on one loop") {
    KGraph loop(1, {"v"}, {{"f", 1, 0, 0}}, {});
    std::map<VertexId, IntervalSet> domains{{0, IntervalSet(rq(0), rq(1))}};
    std::map<EdgeId, AffineMap> maps{{0, {rq(1), rq(0)}}};
    IntervalSystem sys(loop, std::move(domains), std::move(maps));
    CHECK(sys.phi(0) == rq(1));
    CHECK(sys.range_of(Path(loop, 0)).equals_mod_null(IntervalSet(rq(0), rq(1))));
}

TEST_CASE("overlapping ranges are rejected") {
    auto g1 = make_g1();
    std::map<VertexId, IntervalSet> domains{
        {g1->vertex_id("v1"), IntervalSet(rq(0), rq(1, 2))},
        {g1->vertex_id("v2"), IntervalSet(rq(1, 2), rq(1))}};
    // tau_f1 moved so R_f1 crosses into (1/2, 1] = R_f3's territory
    std::map<EdgeId, AffineMap> maps{
        {*g1->edge_id("f1"), {rq(-1, 2), rq(3, 4)}},
        {*g1->edge_id("f2"), {rq(-1, 2), rq(1, 2)}},
        {*g1->edge_id("f3"), {rq(1), rq(0)}}};
    std::string code = kgrtest::thrown_code(
        [&] { IntervalSystem(*g1, std::move(domains), std::move(maps)); });
    CHECK((code == "RangesOverlap" || code == "CoverFailure"));
}

TEST_CASE("monic check certifies the obstruction atom (1/2,1]") {
    auto g1 = make_g1();
    auto sys = make_g1_system(*g1);
    auto rep = monic_sigma_check_interval(sys, 8);
    CHECK(rep.verdict == "not-monic");
    REQUIRE(!rep.obstructions.empty());
    // largest certified obstruction first: the fixed half (1/2,1]
    CHECK(rep.obstructions[0].find("[1/2,1]") != std::string::npos);
    CHECK(rep.obstructions[0].find("measure 1/2") != std::string::npos);
    // the atom persists at every level
    for (const auto& lvl : rep.levels) {
        bool found = false;
        for (const auto& s : lvl.stable_atoms)
            if (s.find("[1/2,1]") != std::string::npos) found = true;
        CHECK(found);
    }
}

TEST_CASE("contracting variant is monic-likely with shrinking mesh") {
    // strongly connected graph where every branch contracts: v1 <-> v2 with
    // loops, ranges tiling [0,1]
    KGraph g(1, {"v1", "v2"},
             {{"f1", 1, 0, 0}, {"f2", 1, 1, 0}, {"f3", 1, 1, 1}, {"f4", 1, 0, 1}},
             {});
    std::map<VertexId, IntervalSet> doms{{0, IntervalSet(rq(0), rq(1, 2))},
                                         {1, IntervalSet(rq(1, 2), rq(1))}};
    // R_f1 = [1/4,1/2], R_f2 = [0,1/4]; R_f3 = (7/8,1], R_f4 = (1/2,7/8]
    std::map<EdgeId, AffineMap> mps{{0, {rq(-1, 2), rq(1, 2)}},
                                    {1, {rq(-1, 2), rq(1, 2)}},
                                    {2, {rq(1, 4), rq(3, 4)}},
                                    {3, {rq(3, 4), rq(1, 2)}}};
    IntervalSystem sys(g, std::move(doms), std::move(mps));
    auto rep = monic_sigma_check_interval(sys, 6);
    CHECK(rep.verdict == "monic-likely");
    CHECK(rep.obstructions.empty());
    CHECK(rep.levels.back().mesh < 0.3);
}

TEST_CASE("2-graph interval systems check the square maps") {
    KGraph g2(2, {"v"}, {{"f1", 1, 0, 0}, {"f2", 1, 0, 0}, {"e", 2, 0, 0}},
              {{{"f1", "e"}, {"e", "f1"}}, {{"f2", "e"}, {"e", "f2"}}});
    std::map<VertexId, IntervalSet> dom{{0, IntervalSet(rq(0), rq(1))}};

    SUBCASE("identity red map commutes with the blue halving") {
        std::map<EdgeId, AffineMap> maps{{0, {rq(1, 2), rq(0)}},
                                         {1, {rq(1, 2), rq(1, 2)}},
                                         {2, {rq(1), rq(0)}}};
        IntervalSystem sys(g2, std::map<VertexId, IntervalSet>(dom), std::move(maps));
        CHECK(sys.range_of(Path(g2, 0)).length() == rq(1));
    }

    SUBCASE("a reflecting red map breaks the identity squares") {
        std::map<EdgeId, AffineMap> maps{{0, {rq(1, 2), rq(0)}},
                                         {1, {rq(1, 2), rq(1, 2)}},
                                         {2, {rq(-1), rq(1)}}};
        CHECK(kgrtest::thrown_code([&] {
                  IntervalSystem(g2, std::map<VertexId, IntervalSet>(dom), std::move(maps));
              }) == "CompositionMismatch");
    }
}
