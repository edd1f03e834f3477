#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"

using namespace kgr;
using kgrtest::make_g1;
using kgrtest::make_g2;
using kgrtest::make_g3;
using kgrtest::make_g4;
using kgrtest::markov_mu;
using kgrtest::path_of;
using kgrtest::q;
using kgrtest::thrown_code;

TEST_CASE("bernoulli measure") {
    auto g2 = make_g2();
    auto mu = kgrtest::bernoulli_half(*g2);
    CHECK(mu.mass(path_of(*g2, {"f1"})).rational_value() == Rational(1, 2));
    CHECK(mu.mass(Path(*g2, 0)).rational_value() == Rational(1));
    CHECK_FALSE(mu.degenerate());
    CHECK(verify_consistency(mu, 3, 1e-12).pass);

    // all-zero vertex mass: a valid degenerate measure
    auto zero = bernoulli_measure(*g2, {{0, q(0)}},
                                  {{0, q(1, 2)}, {1, q(1, 2)}, {2, q(1)}});
    CHECK(zero.degenerate());
    CHECK(zero.total().is_zero());

    CHECK(kgrtest::thrown_code([&] {
              bernoulli_measure(*g2, {{0, q(1)}},
                                {{0, q(3, 10)}, {1, q(6, 10)}, {2, q(1)}});
          }) == "WeightRowNotStochastic");
}

TEST_CASE("markov measure on G2") {
    auto g2 = make_g2();
    auto mu = markov_mu(*g2, Rational(1, 3));
    // mu(Z(f1f2)) = lambda_1 T_{12} = 2/3
    CHECK(mu.mass(path_of(*g2, {"f1", "f2"})).rational_value() == Rational(2, 3));
    // red edge carries no information
    CHECK(mu.mass(path_of(*g2, {"e"})).rational_value() == Rational(2));
    CHECK(mu.mass(Path(*g2, 0)).rational_value() == Rational(2));
    CHECK(verify_consistency(mu, 3, 1e-12).pass);
    CHECK(verify_consistency(mu, 3, 1e-12).exact);
}

TEST_CASE("markov preconditions") {
    auto g1 = make_g1();
    // 1-graphs are trivially sequentializable; adjacency zeros trip the
    // positivity requirement instead
    std::vector<Scalar> st{q(1), q(1), q(1)};
    std::vector<std::vector<Scalar>> tr{{q(1, 2), q(1, 2), q(0)},
                                        {q(1, 2), q(1, 2), q(0)},
                                        {q(0), q(1, 2), q(1, 2)}};
    CHECK(kgrtest::thrown_code([&] { markov_measure(*g1, 1, st, tr); }) == "NotStochastic");

    // fully positive T on G1 cannot follow every letter with every letter
    std::vector<Scalar> st2{q(1), q(1), q(1)};
    std::vector<std::vector<Scalar>> tr2{{q(1, 3), q(1, 3), q(1, 3)},
                                         {q(1, 3), q(1, 3), q(1, 3)},
                                         {q(1, 3), q(1, 3), q(1, 3)}};
    CHECK(kgrtest::thrown_code([&] { markov_measure(*g1, 1, st2, tr2); }) ==
          "NotSequentializable");

    // non-stationary vector
    auto g2 = make_g2();
    std::vector<Scalar> st3{q(1), q(2)};
    std::vector<std::vector<Scalar>> tr3{{q(1, 3), q(2, 3)}, {q(2, 3), q(1, 3)}};
    CHECK(kgrtest::thrown_code([&] { markov_measure(*g2, 1, st3, tr3); }) == "NotStationary");
}

TEST_CASE("perron-frobenius measure") {
    auto g2 = make_g2();
    auto mu = perron_frobenius_measure(*g2);
    CHECK(mu.mass(path_of(*g2, {"f1"})).to_double() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mu.mass(path_of(*g2, {"e"})).to_double() == doctest::Approx(1.0).epsilon(1e-12));
    auto rep = verify_consistency(mu, 3, 1e-12);
    CHECK(rep.pass);

    auto g3 = make_g3();
    auto mu3 = perron_frobenius_measure(*g3);
    for (const Path& lam : enumerate_paths(*g3, {1, 1, 1}))
        CHECK(mu3.mass(lam).to_double() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(kgrtest::thrown_code([&] { perron_frobenius_measure(*make_g1()); }) ==
          "NotStronglyConnected");
}

TEST_CASE("table measure splits uniformly beyond its resolution") {
    auto g2 = make_g2();
    std::map<Path, Scalar> vals;
    for (const Path& atom : enumerate_paths(*g2, {1, 1}))
        vals.emplace(atom, q(1, 2));
    auto mu = table_measure(*g2, 1, vals);
    CHECK(mu.total().rational_value() == Rational(1));
    CHECK(verify_consistency(mu, 3, 1e-12).pass);
    CHECK(mu.mass(path_of(*g2, {"f1", "f1"})).rational_value() == Rational(1, 4));
}

TEST_CASE("pushforward under prefixing") {
    auto g2 = make_g2();
    auto mu = markov_mu(*g2, Rational(1, 3));
    Path f1 = path_of(*g2, {"f1"});
    Path f2 = path_of(*g2, {"f2"});
    Path f1f2 = path_of(*g2, {"f1", "f2"});

    auto pre = pushforward_prefix(mu, f1, PushDirection::Preimage);
    CHECK(pre.mass(f1f2).rational_value() == Rational(1)); // = mu(Z(f2))
    auto img = pushforward_prefix(mu, f1, PushDirection::Image);
    CHECK(img.mass(f2).rational_value() == Rational(2, 3)); // = mu(Z(f1f2))

    CHECK(verify_consistency(pre, 3, 1e-12).pass);
    CHECK(verify_consistency(img, 3, 1e-12).pass);

    // restriction via a vertex prefix
    Path v(*g2, 0);
    auto restr = pushforward_prefix(mu, v, PushDirection::Preimage);
    CHECK(restr.mass(f1).identical(mu.mass(f1)));

    // round trips: (mu o sigma_lambda^{-1})(Z(lambda eta)) = mu(Z(eta)) on
    // Z(s(lambda)), and pushing the preimage measure forward again restores
    // mu there
    for (const Path& lam : enumerate_paths(*g2, {1, 0})) {
        auto mpre = pushforward_prefix(mu, lam, PushDirection::Preimage);
        auto back = pushforward_prefix(mpre, lam, PushDirection::Image);
        for (const Path& eta : enumerate_paths(*g2, {1, 1})) {
            if (eta.range() != lam.source()) continue;
            CHECK((mpre.mass(compose(lam, eta)) - mu.mass(eta)).is_zero());
            CHECK((back.mass(eta) - mu.mass(eta)).is_zero());
        }
    }
}

TEST_CASE("radon-nikodym") {
    auto g2 = make_g2();
    auto mu = markov_mu(*g2, Rational(1, 3));

    auto same = radon_nikodym(mu, mu, 2);
    CHECK(same.singular_atoms.empty());
    for (const auto& [atom, v] : same.density.values()) CHECK(v.rational_value() == Rational(1));

    // d(mu o sigma_f1^{-1})/d mu at depth 2
    auto pre = pushforward_prefix(mu, path_of(*g2, {"f1"}), PushDirection::Preimage);
    auto rn = radon_nikodym(pre, mu, 2);
    CHECK(rn.singular_atoms.empty());
    CHECK(rn.density.value(path_of(*g2, {"f1", "f2", "e", "e"})).rational_value() ==
          Rational(3, 2));
    CHECK(rn.density.value(path_of(*g2, {"f1", "f1", "e", "e"})).rational_value() == Rational(3));
    CHECK(rn.density.value(path_of(*g2, {"f2", "f1", "e", "e"})).rational_value() == Rational(0));
    CHECK(rn.density.value(path_of(*g2, {"f2", "f2", "e", "e"})).rational_value() == Rational(0));

    // disjoint supports: every mu'-positive atom is singular
    std::map<Path, Scalar> on_f1, on_f2;
    for (const Path& atom : enumerate_paths(*g2, {1, 1})) {
        bool is_f1 = atom.blocks()[0][0] == *g2->edge_id("f1");
        on_f1.emplace(atom, is_f1 ? q(1) : q(0));
        on_f2.emplace(atom, is_f1 ? q(0) : q(1));
    }
    auto rnx = radon_nikodym(table_measure(*g2, 1, on_f1), table_measure(*g2, 1, on_f2), 1);
    CHECK(rnx.singular_atoms.size() == 1);
    CHECK(rnx.singular_atoms[0].str() == "f1.e");
}

TEST_CASE("radon-nikodym chain rule where all three are positive") {
    auto g2 = make_g2();
    auto mu = markov_mu(*g2, Rational(1, 3));
    auto mu2 = markov_mu(*g2, Rational(1, 4));
    auto mu3 = kgrtest::bernoulli_half(*g2);
    auto ab = radon_nikodym(mu3, mu2, 2).density;
    auto bc = radon_nikodym(mu2, mu, 2).density;
    auto ac = radon_nikodym(mu3, mu, 2).density;
    CHECK((ab * bc - ac).is_identically_zero());
}

TEST_CASE("lebesgue decomposition") {
    auto g2 = make_g2();
    auto mu13 = markov_mu(*g2, Rational(1, 3));

    // equivalent measures: B empty, nu = 0
    auto dec = lebesgue_decompose(markov_mu(*g2, Rational(1, 4)), mu13, 3);
    CHECK(dec.B.empty());
    CHECK(dec.nu.total().is_zero());

    // mu degenerate bernoulli concentrated on f2; mu' fully supported:
    // B = all atoms containing an f1 edge
    auto mu_deg = bernoulli_measure(*g2, {{0, q(1)}},
                                    {{*g2->edge_id("f1"), q(0)}, {*g2->edge_id("f2"), q(1)},
                                     {*g2->edge_id("e"), q(1)}});
    auto dec2 = lebesgue_decompose(mu13, mu_deg, 4);
    CHECK(dec2.A.size() == 1);
    CHECK(dec2.B.size() == 15);
    for (const Path& atom : dec2.B) {
        bool has_f1 = false;
        for (EdgeId e : atom.blocks()[0])
            if (e == *g2->edge_id("f1")) has_f1 = true;
        CHECK(has_f1);
    }
    // d mu' = h^2 d mu + d nu atomwise
    for (const Path& atom : enumerate_paths(*g2, {4, 4})) {
        Scalar lhs = mu13.mass(atom);
        Scalar rhs = dec2.h2.value(atom) * mu_deg.mass(atom) + dec2.nu.mass(atom);
        CHECK((lhs - rhs).is_zero());
    }

    // disjoint table supports: A carries zero density, nu = mu'
    std::map<Path, Scalar> on_f1, on_f2;
    for (const Path& atom : enumerate_paths(*g2, {1, 1})) {
        bool is_f1 = atom.blocks()[0][0] == *g2->edge_id("f1");
        on_f1.emplace(atom, is_f1 ? q(1) : q(0));
        on_f2.emplace(atom, is_f1 ? q(0) : q(1));
    }
    auto dec3 = lebesgue_decompose(table_measure(*g2, 1, on_f1), table_measure(*g2, 1, on_f2), 1);
    CHECK(dec3.h2.is_identically_zero());
    CHECK(dec3.nu.mass(path_of(*g2, {"f1"})).rational_value() == Rational(1));
}

TEST_CASE("hellinger affinity") {
    auto g2 = make_g2();
    auto mu = markov_mu(*g2, Rational(1, 4));
    auto nu = markov_mu(*g2, Rational(3, 4));

    SUBCASE("identical measures") {
        auto rep = hellinger_affinity(mu, mu, 6);
        for (const Scalar& h : rep.affinity)
            CHECK(h.to_double() == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(rep.verdict == "equivalent-likely");
    }

    SUBCASE("mu_1/4 vs mu_3/4 decays like 2*(sqrt(3)/2)^{N-1}") {
        auto rep = hellinger_affinity(mu, nu, 8);
        for (int n = 1; n <= 8; ++n) {
            double expected = 2.0 * std::pow(std::sqrt(3.0) / 2.0, n - 1);
            CHECK(rep.affinity[n - 1].to_double() == doctest::Approx(expected).epsilon(1e-12));
        }
        CHECK(rep.affinity[1].to_double() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
        CHECK(rep.affinity[2].to_double() == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(rep.verdict == "singular-likely");
    }

    SUBCASE("scaling gives a constant affinity") {
        auto half = scale_measure(mu, q(1, 2));
        auto rep = hellinger_affinity(mu, half, 6);
        for (const Scalar& h : rep.affinity)
            CHECK(h.to_double() == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(rep.verdict == "equivalent-likely");
    }

    SUBCASE("affinity is nonincreasing") {
        auto rep = hellinger_affinity(kgrtest::bernoulli_half(*g2), mu, 8);
        for (size_t i = 1; i < rep.affinity.size(); ++i)
            CHECK(rep.affinity[i].to_double() <= rep.affinity[i - 1].to_double() + 1e-12);
    }
}

TEST_CASE("density measure behaves as d mu' = g1 d mu") {
    auto g2 = make_g2();
    auto mu = markov_mu(*g2, Rational(1, 3));
    std::map<Path, Scalar> g1_vals;
    for (const Path& atom : enumerate_paths(*g2, {1, 1})) {
        bool is_f1 = atom.blocks()[0][0] == *g2->edge_id("f1");
        g1_vals.emplace(atom, is_f1 ? q(3, 2) : q(1, 2));
    }
    CylinderFunction g1(*g2, 1, g1_vals);
    auto mu2 = density_measure(mu, g1);
    CHECK(verify_consistency(mu2, 3, 1e-12).pass);
    CHECK(mu2.mass(path_of(*g2, {"f1"})).rational_value() == Rational(3, 2));
    CHECK(mu2.mass(Path(*g2, 0)).rational_value() == Rational(2)); // 3/2 + 1/2
    auto rn = radon_nikodym(mu2, mu, 2);
    CHECK((rn.density - g1.refine_to(2)).is_identically_zero());
}

TEST_CASE("table measure below the needed resolution escapes the closure") {
    auto g2 = make_g2();
    std::map<Path, Scalar> on_f2;
    for (const Path& atom : enumerate_paths(*g2, {1, 1})) {
        bool is_f1 = atom.blocks()[0][0] == *g2->edge_id("f1");
        on_f2.emplace(atom, is_f1 ? q(0) : q(1));
    }
    auto mu = table_measure(*g2, 1, on_f2); // uniform beyond depth 1
    auto mu_prime = markov_mu(*g2, Rational(1, 3));
    // singular mass flows into Z(f2 f1 ...) where the uniform extension of mu
    // is positive: not resolvable at depth 1
    CHECK(kgrtest::thrown_code([&] { lebesgue_decompose(mu_prime, mu, 1); }) ==
          "DepthTooSmallForClosure");
}

TEST_CASE("weights must be square-compatible") {
    // flip 2-graph: f1*e = e*f2, so w(f1) = w(f2) is forced
    KGraph flip(2, {"v"}, {{"f1", 1, 0, 0}, {"f2", 1, 0, 0}, {"e", 2, 0, 0}},
                kgrtest::Squares{{{"f1", "e"}, {"e", "f2"}}, {{"f2", "e"}, {"e", "f1"}}});
    CHECK(kgrtest::thrown_code([&] {
              bernoulli_measure(flip, {{0, q(1)}},
                                {{*flip.edge_id("f1"), q(1, 3)},
                                 {*flip.edge_id("f2"), q(2, 3)},
                                 {*flip.edge_id("e"), q(1)}});
          }) == "SquareIncompatibleWeights");
    // equal weights pass
    auto mu = bernoulli_measure(flip, {{0, q(1)}},
                                {{*flip.edge_id("f1"), q(1, 2)},
                                 {*flip.edge_id("f2"), q(1, 2)},
                                 {*flip.edge_id("e"), q(1)}});
    CHECK(verify_consistency(mu, 3, 1e-12).pass);
}

TEST_CASE("markov rejects rows not summing to one") {
    auto g2 = make_g2();
    std::vector<Scalar> st{q(1), q(1)};
    std::vector<std::vector<Scalar>> tr{{q(1, 3), q(1, 3)}, {q(1, 3), q(1, 3)}};
    CHECK(kgrtest::thrown_code([&] { markov_measure(*g2, 1, st, tr); }) == "NotStochastic");
}
