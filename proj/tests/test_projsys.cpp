#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgr/projsys.hpp"
#include "test_support.hpp"

using namespace kgr;
using kgrtest::make_g2;
using kgrtest::make_g3;
using kgrtest::markov_mu;
using kgrtest::path_of;
using kgrtest::q;

TEST_CASE("standard system cocycle values") {
    auto g2 = make_g2();

    SUBCASE("bernoulli(1/2,1/2): f_f1 = sqrt(2) on Z(f1)") {
        auto mu = kgrtest::bernoulli_half(*g2);
        auto sys = standard_system(mu, 3, {1, 1});
        const auto& f = sys.cocycle(path_of(*g2, {"f1"}));
        Scalar expected = Scalar(Rational(2)).sqrt();
        for (const auto& [atom, v] : f.values()) {
            bool inside = atom.blocks()[0][0] == *g2->edge_id("f1");
            if (inside)
                CHECK((v - expected).is_zero());
            else
                CHECK(v.is_zero());
        }
    }

    SUBCASE("markov 1/3: f_f1 = sqrt(3) on Z(f1f1.), sqrt(3/2) on Z(f1f2.)") {
        auto mu = markov_mu(*g2, Rational(1, 3));
        auto sys = standard_system(mu, 3, {1, 1});
        const auto& f = sys.cocycle(path_of(*g2, {"f1"}));
        CHECK((f.value(path_of(*g2, {"f1", "f1", "f1", "e", "e", "e"})) -
               Scalar(Rational(3)).sqrt()).is_zero());
        CHECK((f.value(path_of(*g2, {"f1", "f2", "f1", "e", "e", "e"})) -
               Scalar(Rational(3, 2)).sqrt()).is_zero());
    }

    SUBCASE("vertex cocycle is the indicator") {
        auto mu = markov_mu(*g2, Rational(1, 3));
        auto sys = standard_system(mu, 2, {1, 1});
        const auto& f = sys.cocycle(Path(*g2, 0));
        for (const auto& [atom, v] : f.values()) CHECK(v.identical(Scalar::one()));
    }
}

TEST_CASE("verify_projective") {
    auto g2 = make_g2();
    auto mu = markov_mu(*g2, Rational(1, 3));
    auto sys = standard_system(mu, 3, {1, 1});

    SUBCASE("standard system passes exactly") {
        auto rep = verify_projective(sys);
        CHECK(rep.pass);
        for (const auto& c : rep.checks) {
            CHECK(c.exact);
            CHECK(c.max_deviation == 0.0);
        }
    }

    SUBCASE("sign character (-1)^{# f1 edges} still passes") {
        auto signed_sys = character_signs(sys, {*g2->edge_id("f1")});
        auto rep = verify_projective(signed_sys);
        CHECK(rep.pass);
        CHECK((signed_sys.cocycle(path_of(*g2, {"f1"}))
                   .value(path_of(*g2, {"f1", "f1", "f1", "e", "e", "e"}))
                   .to_double()) < 0);
    }

    SUBCASE("flipping one atom of f_f1 breaks the cocycle at (f1,f1)") {
        // a cap admitting the (f1,f1) composition of degree (2,0)
        auto sys2 = standard_system(mu, 3, {2, 1});
        Path f1 = path_of(*g2, {"f1"});
        CylinderFunction f = sys2.cocycle(f1);
        std::map<Path, Scalar> vals = f.values();
        Path atom = path_of(*g2, {"f1", "f1", "f1", "e", "e", "e"});
        vals[atom] = -vals[atom];
        auto broken = sys2.with_cocycle(f1, CylinderFunction(*g2, f.depth(), vals));
        auto rep = verify_projective(broken);
        CHECK_FALSE(rep.pass);
        const CheckRecord* c = rep.find("cocycle");
        REQUIRE(c != nullptr);
        CHECK_FALSE(c->pass);
        bool mentions_f1f1 = false;
        for (const auto& w : c->witnesses)
            if (w.find("(f1,f1)") != std::string::npos) mentions_f1f1 = true;
        CHECK(mentions_f1f1);
    }
}

TEST_CASE("rescale_system") {
    auto g2 = make_g2();
    auto mu = markov_mu(*g2, Rational(1, 3));
    auto sys = standard_system(mu, 3, {1, 1});

    SUBCASE("rescale by 1 is the identity") {
        auto same = rescale_system(sys, CylinderFunction::constant(*g2, 1, Scalar::one()));
        for (const Path& lam : sys.family()) {
            auto diff = same.cocycle(lam) - sys.cocycle(lam).refine_to(same.cocycle(lam).depth());
            CHECK(diff.is_identically_zero());
        }
    }

    SUBCASE("rescale by a constant keeps the cocycles") {
        auto scaled = rescale_system(sys, CylinderFunction::constant(*g2, 1, q(4)));
        CHECK((scaled.measure().total() - q(8)).is_zero());
        for (const Path& lam : sys.family()) {
            auto diff = scaled.cocycle(lam) -
                        sys.cocycle(lam).refine_to(scaled.cocycle(lam).depth());
            CHECK(diff.is_identically_zero());
        }
    }

    SUBCASE("depth-1 density: round trip and projectivity") {
        std::map<Path, Scalar> g1_vals, inv_vals;
        for (const Path& atom : enumerate_paths(*g2, {1, 1})) {
            bool is_f1 = atom.blocks()[0][0] == *g2->edge_id("f1");
            g1_vals.emplace(atom, is_f1 ? q(3, 2) : q(1, 2));
            inv_vals.emplace(atom, is_f1 ? q(2, 3) : q(2));
        }
        CylinderFunction g1(*g2, 1, g1_vals), g1_inv(*g2, 1, inv_vals);
        auto rescaled = rescale_system(sys, g1);
        CHECK(verify_projective(rescaled).pass);
        auto back = rescale_system(rescaled, g1_inv);
        for (const Path& lam : sys.family()) {
            auto diff = back.cocycle(lam) -
                        sys.cocycle(lam).refine_to(back.cocycle(lam).depth());
            CHECK(diff.is_identically_zero());
        }
    }

    SUBCASE("nonpositive density on a supported atom is rejected") {
        std::map<Path, Scalar> bad;
        for (const Path& atom : enumerate_paths(*g2, {1, 1})) bad.emplace(atom, q(0));
        CHECK(kgrtest::thrown_code([&] {
                  rescale_system(sys, CylinderFunction(*g2, 1, bad));
              }) == "InconsistentDensity");
    }
}

TEST_CASE("pathspace monic check") {
    auto g2 = make_g2();
    auto rep = monic_sigma_check_pathspace(markov_mu(*g2, Rational(1, 3)), 5);
    CHECK(rep.verdict == "monic-likely");
    CHECK(rep.obstructions.empty());
    // mesh decays like the largest cylinder mass
    CHECK(rep.levels.back().mesh < rep.levels.front().mesh);
    for (const auto& lvl : rep.levels) CHECK(lvl.unseparated_atoms == 0);

    auto g3 = make_g3();
    auto rep3 = monic_sigma_check_pathspace(perron_frobenius_measure(*g3), 3);
    CHECK(rep3.verdict == "monic-likely");
}

TEST_CASE("null atoms under the cap are dropped and reported") {
    auto g2 = make_g2();
    auto mu_deg = bernoulli_measure(*g2, {{0, q(1)}},
                                    {{*g2->edge_id("f1"), q(0)}, {*g2->edge_id("f2"), q(1)},
                                     {*g2->edge_id("e"), q(1)}});
    auto sys = standard_system(mu_deg, 2, {1, 1});
    CHECK_FALSE(sys.dropped_null_atoms().empty());
    for (const Path& atom : sys.dropped_null_atoms())
        CHECK(mu_deg.mass(atom).is_zero());
    // the system still verifies on its support
    CHECK(verify_projective(sys).pass);
}
