#include "kgr/universal.hpp"

#include <algorithm>
#include <functional>

namespace kgr {

UniversalVector::UniversalVector(const KGraph& g, int depth, std::vector<Term> terms)
    : g_(&g), depth_(depth), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (&t.mu.graph() != &g) throw malformed_spec("universal term on a different graph");
        if (t.f.depth() > depth_) depth_ = t.f.depth();
    }
}

UniversalVector UniversalVector::unit(const CylinderMeasure& mu, int depth) {
    return UniversalVector(mu.graph(), depth,
                           {{CylinderFunction::constant(mu.graph(), depth, Scalar::one()), mu}});
}

UniversalVector UniversalVector::term(const CylinderFunction& f, const CylinderMeasure& mu,
                                      int depth) {
    return UniversalVector(mu.graph(), std::max(depth, f.depth()), {{f, mu}});
}

CylinderMeasure UniversalVector::reference_measure() const {
    if (terms_.empty()) throw malformed_spec("empty universal vector has no reference measure");
    CylinderMeasure m = terms_[0].mu;
    for (size_t i = 1; i < terms_.size(); ++i) m = sum_measure(m, terms_[i].mu);
    return m;
}

CylinderFunction UniversalVector::canonical_coefficient() const {
    CylinderMeasure m = reference_measure();
    std::map<Path, Scalar> vals;
    for (const Path& atom : enumerate_paths(*g_, degree_uniform(g_->k(), depth_))) {
        Scalar total = m.mass(atom);
        Scalar v = Scalar::zero();
        if (!total.is_zero()) {
            for (const auto& t : terms_)
                v += t.f.value(atom) * (t.mu.mass(atom) / total).sqrt();
        }
        vals.emplace(atom, v);
    }
    return CylinderFunction(*g_, depth_, std::move(vals));
}

UniversalVector UniversalVector::operator+(const UniversalVector& o) const {
    if (g_ != o.g_) throw malformed_spec("universal vectors on different graphs");
    std::vector<Term> terms = terms_;
    terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
    return UniversalVector(*g_, std::max(depth_, o.depth_), std::move(terms));
}

UniversalVector UniversalVector::scale(const Scalar& c) const {
    std::vector<Term> terms;
    for (const auto& t : terms_) terms.push_back({t.f.scale(c), t.mu});
    return UniversalVector(*g_, depth_, terms);
}

Scalar universal_inner(const UniversalVector& x, const UniversalVector& y) {
    if (&x.graph() != &y.graph()) throw malformed_spec("inner product across graphs");
    const KGraph& g = x.graph();
    int depth = std::max(x.depth(), y.depth());
    Scalar out = Scalar::zero();
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth))) {
        for (const auto& tx : x.terms()) {
            Scalar fx = tx.f.value(atom);
            if (fx.is_zero()) continue;
            Scalar mx = tx.mu.mass(atom);
            if (mx.is_zero()) continue;
            for (const auto& ty : y.terms()) {
                Scalar fy = ty.f.value(atom);
                if (fy.is_zero()) continue;
                out += fx * fy * (mx * ty.mu.mass(atom)).sqrt();
            }
        }
    }
    return out;
}

bool universal_equal(const UniversalVector& x, const UniversalVector& y, double tol) {
    Scalar n2 = universal_inner(x, x) - universal_inner(x, y) - universal_inner(y, x) +
                universal_inner(y, y);
    return n2.is_exact() ? n2.is_zero() : n2.abs_double() <= tol;
}

UniversalVector apply_s_univ(const Path& lambda, const UniversalVector& x, bool adjoint) {
    const KGraph& g = x.graph();
    Degree n = lambda.degree();
    std::vector<UniversalVector::Term> terms;
    if (!adjoint) {
        for (const auto& t : x.terms())
            terms.push_back({t.f.shift_compose(n),
                             pushforward_prefix(t.mu, lambda, PushDirection::Preimage)});
        return UniversalVector(g, x.depth() + degree_max(n), std::move(terms));
    }
    for (const auto& t : x.terms()) {
        // (f o sigma_lambda)(x) = f(lambda x) on Z(s(lambda)), 0 elsewhere
        std::map<Path, Scalar> vals;
        for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), x.depth()))) {
            if (atom.range() == lambda.source())
                vals.emplace(atom, t.f.value(compose(lambda, atom)));
            else
                vals.emplace(atom, Scalar::zero());
        }
        terms.push_back({CylinderFunction(g, x.depth(), std::move(vals)),
                         pushforward_prefix(t.mu, lambda, PushDirection::Image)});
    }
    return UniversalVector(g, x.depth(), std::move(terms));
}

CylinderMeasure nu_measure(const UniversalVector& y) {
    const KGraph& g = y.graph();
    std::map<Path, Scalar> values;
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), y.depth()))) {
        Scalar v = Scalar::zero();
        for (const auto& ti : y.terms()) {
            Scalar fi = ti.f.value(atom);
            if (fi.is_zero()) continue;
            Scalar mi = ti.mu.mass(atom);
            if (mi.is_zero()) continue;
            for (const auto& tj : y.terms()) {
                Scalar fj = tj.f.value(atom);
                if (fj.is_zero()) continue;
                v += fi * fj * (mi * tj.mu.mass(atom)).sqrt();
            }
        }
        values.emplace(atom, v);
    }
    return table_measure(g, y.depth(), values);
}

VerifyReport embed_and_intertwine(const ProjectiveSystem& s,
                                  const std::vector<CylinderFunction>& trials, double tol) {
    for (const Path& lam : s.family()) {
        if (!s.cocycle(lam).nonnegative())
            throw non_negative_required("system cocycle f_" + lam.str() +
                                        " takes negative values");
    }
    const CylinderMeasure& mu = s.measure();
    const KGraph& g = s.graph();
    VerifyReport out;

    CheckRecord isometry{"isometry", 0};
    for (size_t i = 0; i < trials.size(); ++i) {
        for (size_t j = i; j < trials.size(); ++j) {
            int d = std::max(trials[i].depth(), trials[j].depth());
            isometry.subspace_depth = std::max(isometry.subspace_depth, d);
            UniversalVector wi = UniversalVector::term(trials[i], mu, d);
            UniversalVector wj = UniversalVector::term(trials[j], mu, d);
            Scalar lhs = universal_inner(wi, wj);
            Scalar rhs = Scalar::zero();
            for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), d)))
                rhs += trials[i].value(atom) * trials[j].value(atom) * mu.mass(atom);
            Scalar dev = lhs - rhs;
            if (!dev.is_zero()) {
                isometry.exact = false;
                isometry.max_deviation = std::max(isometry.max_deviation, dev.abs_double());
                if (isometry.witnesses.size() < 8)
                    isometry.witnesses.push_back("trial pair (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ")");
            }
        }
    }
    isometry.pass = isometry.exact || isometry.max_deviation <= tol;
    if (isometry.pass) isometry.witnesses.clear();

    CheckRecord intertwine{"intertwine", 0};
    for (const CylinderFunction& f : trials) {
        for (const Path& lam : s.family()) {
            // W(T_lambda f) as a single term over mu
            CylinderFunction tf = s.cocycle(lam) * f.shift_compose(lam.degree());
            int d = tf.depth();
            intertwine.subspace_depth = std::max(intertwine.subspace_depth, d);
            UniversalVector lhs = UniversalVector::term(tf, mu, d);
            UniversalVector rhs = apply_s_univ(lam, UniversalVector::term(f, mu, f.depth()),
                                               false);
            Scalar n2 = universal_inner(lhs, lhs) - universal_inner(lhs, rhs) -
                        universal_inner(rhs, lhs) + universal_inner(rhs, rhs);
            if (!n2.is_zero()) {
                intertwine.exact = false;
                intertwine.max_deviation = std::max(intertwine.max_deviation, n2.abs_double());
                if (intertwine.witnesses.size() < 8)
                    intertwine.witnesses.push_back("lambda = " + lam.str());
            }
        }
    }
    intertwine.pass = intertwine.exact || intertwine.max_deviation <= tol;
    if (intertwine.pass) intertwine.witnesses.clear();

    out.checks = {isometry, intertwine};
    out.pass = isometry.pass && intertwine.pass;
    return out;
}

CommutantRelationReport commutant_relation_check(
    const std::vector<CylinderMeasure>& family,
    const std::vector<CylinderFunction>& multipliers, const Degree& cap, int depth) {
    if (family.empty() || family.size() != multipliers.size())
        throw malformed_spec("commutant check needs one multiplier per registered measure");
    const KGraph& g = family[0].graph();
    CommutantRelationReport rep;

    std::vector<Path> lambdas;
    {
        Degree d(g.k(), 0);
        std::function<void(int)> rec = [&](int c) {
            if (c == g.k()) {
                if (!degree_is_zero(d)) {
                    auto part = enumerate_paths(g, d);
                    lambdas.insert(lambdas.end(), part.begin(), part.end());
                }
                return;
            }
            for (int t = 0; t <= cap[c]; ++t) {
                d[c] = t;
                rec(c + 1);
            }
            d[c] = 0;
        };
        rec(0);
    }

    // (1) the relation F_mu = F_{mu o sigma_lambda^{-1}} o sigma_lambda, with
    // F on the dominated pushforward identified with F_mu
    for (size_t j = 0; j < family.size(); ++j) {
        const CylinderFunction& f = multipliers[j];
        for (const Path& lam : lambdas) {
            for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth))) {
                if (atom.range() != lam.source()) continue;
                if (family[j].mass(atom).is_zero()) continue;
                Scalar dev = f.value(atom) - f.value(compose(lam, atom));
                if (!dev.is_zero()) {
                    rep.relation_holds = false;
                    rep.max_deviation = std::max(rep.max_deviation, dev.abs_double());
                    if (rep.witnesses.size() < 8)
                        rep.witnesses.push_back("relation fails for measure " +
                                                std::to_string(j) + " at (" + lam.str() + "," +
                                                atom.str() + ")");
                }
            }
        }
    }

    // (2) commutation T S^univ = S^univ T on the registered span
    for (size_t j = 0; j < family.size(); ++j) {
        const CylinderMeasure& mu = family[j];
        const CylinderFunction& f = multipliers[j];
        for (const Path& lam : lambdas) {
            auto pushed = pushforward_prefix(mu, lam, PushDirection::Preimage);
            auto rn = radon_nikodym(pushed, mu, depth + degree_max(lam.degree()));
            if (!rn.singular_atoms.empty()) {
                if (rep.witnesses.size() < 8)
                    rep.witnesses.push_back("pushforward of measure " + std::to_string(j) +
                                            " by " + lam.str() + " is not dominated; skipped");
                continue;
            }
            for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth))) {
                if (mu.mass(atom).is_zero()) continue;
                CylinderFunction chi = CylinderFunction::indicator(atom, depth);
                UniversalVector v = UniversalVector::term(chi, mu, depth);
                // S_lambda v, then T via the dominated rewrite onto mu
                UniversalVector sv = apply_s_univ(lam, v, false);
                CylinderFunction coeff = sv.terms()[0].f.refine_to(rn.density.depth()) *
                                         rn.density.sqrt();
                UniversalVector t_sv =
                    UniversalVector::term(coeff * f.refine_to(coeff.depth()), mu,
                                          coeff.depth());
                UniversalVector s_tv = apply_s_univ(
                    lam, UniversalVector::term(chi * f.refine_to(depth), mu, depth), false);
                if (!universal_equal(t_sv, s_tv)) {
                    rep.commutes = false;
                    if (rep.witnesses.size() < 8)
                        rep.witnesses.push_back("T S != S T for measure " + std::to_string(j) +
                                                " at (" + lam.str() + "," + atom.str() + ")");
                }
            }
        }
    }
    rep.equivalent = (rep.relation_holds == rep.commutes);
    return rep;
}

} // namespace kgr
