#include "kgr/projsys.hpp"

#include <algorithm>
#include <functional>

namespace kgr {

namespace {

std::vector<Degree> degrees_upto(int k, const Degree& cap) {
    std::vector<Degree> out;
    Degree d(k, 0);
    std::function<void(int)> rec = [&](int c) {
        if (c == k) {
            out.push_back(d);
            return;
        }
        for (int t = 0; t <= cap[c]; ++t) {
            d[c] = t;
            rec(c + 1);
        }
        d[c] = 0;
    };
    rec(0);
    return out;
}

void record_deviation(CheckRecord& rec, const Scalar& dev, const std::string& witness) {
    if (!dev.is_zero()) {
        rec.exact = false;
        rec.max_deviation = std::max(rec.max_deviation, dev.abs_double());
        if (rec.witnesses.size() < 8) rec.witnesses.push_back(witness);
    }
}

void finalize(CheckRecord& rec, double tol) {
    rec.pass = rec.exact || rec.max_deviation <= tol;
    if (rec.pass) rec.witnesses.clear();
}

} // namespace

ProjectiveSystem::ProjectiveSystem(CylinderMeasure mu, int depth, Degree cap,
                                   std::map<Path, CylinderFunction> cocycles,
                                   std::vector<Path> dropped_null_atoms)
    : mu_(std::move(mu)),
      depth_(depth),
      cap_(std::move(cap)),
      cocycles_(std::move(cocycles)),
      dropped_(std::move(dropped_null_atoms)) {}

const CylinderFunction& ProjectiveSystem::cocycle(const Path& lambda) const {
    auto it = cocycles_.find(lambda);
    if (it == cocycles_.end())
        throw degree_out_of_range("path " + lambda.str() + " is outside the system cap");
    return it->second;
}

std::vector<Path> ProjectiveSystem::family() const {
    std::vector<Path> out;
    out.reserve(cocycles_.size());
    for (const auto& [lam, f] : cocycles_) out.push_back(lam);
    return out;
}

ProjectiveSystem ProjectiveSystem::with_cocycle(const Path& lambda, CylinderFunction f) const {
    auto copy = cocycles_;
    copy.erase(lambda);
    copy.emplace(lambda, std::move(f));
    return ProjectiveSystem(mu_, depth_, cap_, std::move(copy), dropped_);
}

ProjectiveSystem standard_system(const CylinderMeasure& mu, int depth, const Degree& cap) {
    const KGraph& g = mu.graph();
    if (static_cast<int>(cap.size()) != g.k())
        throw degree_out_of_range("cap has wrong number of colors");
    if (degree_max(cap) > depth)
        throw depth_budget_exceeded("system depth " + std::to_string(depth) +
                                    " is below the cap " + degree_str(cap));
    std::map<Path, CylinderFunction> cocycles;
    std::vector<Path> dropped;
    for (const Degree& n : degrees_upto(g.k(), cap)) {
        for (const Path& lam : enumerate_paths(g, n)) {
            auto rn = radon_nikodym(pushforward_prefix(mu, lam, PushDirection::Preimage), mu,
                                    depth);
            cocycles.emplace(lam, rn.density.sqrt());
            // mu-null atoms inside Z(lambda) leave f_lambda undefined there
            for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth))) {
                if (mu.mass(atom).is_zero() &&
                    cylinder_subset(Cylinder(atom), Cylinder(lam)) &&
                    std::find(dropped.begin(), dropped.end(), atom) == dropped.end())
                    dropped.push_back(atom);
            }
        }
    }
    return ProjectiveSystem(mu, depth, cap, std::move(cocycles), std::move(dropped));
}

ProjectiveSystem character_signs(const ProjectiveSystem& s, const std::vector<EdgeId>& marked) {
    const KGraph& g = s.graph();
    std::vector<int> sign(g.edge_count(), 1);
    for (EdgeId e : marked) sign[e] = -1;
    // square compatibility: chi(f)chi(g) = chi(g')chi(f')
    for (int i = 1; i <= g.k(); ++i) {
        for (int j = i + 1; j <= g.k(); ++j) {
            for (EdgeId f : g.edges_of_color(i)) {
                for (EdgeId gg : g.edges_of_color(j)) {
                    if (g.edge(f).source != g.edge(gg).range) continue;
                    auto [gp, fp] = g.square_forward(f, gg);
                    if (sign[f] * sign[gg] != sign[gp] * sign[fp])
                        throw malformed_spec("edge marking is not square-compatible at (" +
                                             g.edge(f).name + "," + g.edge(gg).name + ")");
                }
            }
        }
    }
    std::map<Path, CylinderFunction> cocycles;
    for (const Path& lam : s.family()) {
        int chi = 1;
        for (EdgeId e : lam.edges()) chi *= sign[e];
        cocycles.emplace(lam, chi == 1 ? s.cocycle(lam) : s.cocycle(lam).scale(Scalar(Rational(-1))));
    }
    return ProjectiveSystem(s.measure(), s.depth(), s.cap(), std::move(cocycles),
                            s.dropped_null_atoms());
}

ProjectiveSystem rescale_system(const ProjectiveSystem& s, const CylinderFunction& g1) {
    const KGraph& g = s.graph();
    if (g1.depth() + degree_max(s.cap()) > s.depth())
        throw depth_budget_exceeded("rescale density depth " + std::to_string(g1.depth()) +
                                    " plus cap exceeds system depth");
    // positivity on supported atoms
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), g1.depth()))) {
        if (!s.measure().mass(atom).is_zero() && g1.value(atom).to_double() <= 0)
            throw inconsistent_density("density is not positive on supported atom " + atom.str());
        if (g1.value(atom).to_double() < 0)
            throw inconsistent_density("density is negative on " + atom.str());
    }
    CylinderMeasure mu2 = density_measure(s.measure(), g1);
    CylinderFunction root = g1.sqrt();
    std::map<Path, CylinderFunction> cocycles;
    for (const Path& lam : s.family()) {
        CylinderFunction shifted = root.shift_compose(lam.degree());
        // sqrt(g1 o sigma^n)/sqrt(g1) * f_lambda, with 0 where f_lambda is 0
        int d = std::max({shifted.depth(), root.depth(), s.depth()});
        CylinderFunction f = s.cocycle(lam).refine_to(d);
        CylinderFunction num = shifted.refine_to(d);
        CylinderFunction den = root.refine_to(d);
        std::map<Path, Scalar> vals;
        for (const auto& [atom, fv] : f.values()) {
            if (fv.is_zero() || num.values().at(atom).is_zero()) {
                vals.emplace(atom, Scalar::zero());
            } else {
                vals.emplace(atom, num.values().at(atom) / den.values().at(atom) * fv);
            }
        }
        cocycles.emplace(lam, CylinderFunction(g, d, std::move(vals)));
    }
    return ProjectiveSystem(mu2, s.depth(), s.cap(), std::move(cocycles),
                            s.dropped_null_atoms());
}

VerifyReport verify_projective(const ProjectiveSystem& s, double tol) {
    VerifyReport rep;
    const KGraph& g = s.graph();
    const CylinderMeasure& mu = s.measure();

    CheckRecord support{"support", s.depth()};
    CheckRecord modulus{"modulus", s.depth()};
    CheckRecord cocycle{"cocycle", s.depth()};

    // all identities are mu-a.e. statements: mu-null atoms carry arbitrary
    // finite-depth representatives and are skipped
    for (const Path& lam : s.family()) {
        const CylinderFunction& f = s.cocycle(lam);
        auto rn = radon_nikodym(pushforward_prefix(mu, lam, PushDirection::Preimage), mu,
                                f.depth());
        for (const auto& [atom, fv] : f.values()) {
            if (mu.mass(atom).is_zero()) continue;
            if (!cylinder_subset(Cylinder(atom), Cylinder(lam)))
                record_deviation(support, fv, "f_" + lam.str() + " nonzero on " + atom.str());
            record_deviation(modulus, fv * fv - rn.density.value(atom),
                             "|f_" + lam.str() + "|^2 on " + atom.str());
        }
    }

    for (const Path& lam : s.family()) {
        for (const Path& nu : s.family()) {
            if (lam.source() != nu.range()) continue;
            Degree total = degree_add(lam.degree(), nu.degree());
            if (!degree_leq(total, s.cap())) continue;
            Path lam_nu = compose(lam, nu);
            CylinderFunction lhs = s.cocycle(lam) * s.cocycle(nu).shift_compose(lam.degree());
            CylinderFunction diff = lhs - s.cocycle(lam_nu).refine_to(lhs.depth());
            for (const auto& [atom, v] : diff.values()) {
                if (mu.mass(atom).is_zero()) continue;
                record_deviation(cocycle, v,
                                 "(" + lam.str() + "," + nu.str() + ") at " + atom.str());
            }
        }
    }

    finalize(support, tol);
    finalize(modulus, tol);
    finalize(cocycle, tol);
    rep.checks = {support, modulus, cocycle};
    rep.pass = support.pass && modulus.pass && cocycle.pass;
    return rep;
}

MonicReport monic_sigma_check_pathspace(const CylinderMeasure& mu, int n_max) {
    const KGraph& g = mu.graph();
    MonicReport rep;
    bool obstructed = false;
    for (int n = 1; n <= n_max; ++n) {
        // generators Z(lambda) with |d(lambda)| <= n
        std::vector<Path> generators;
        std::function<void(Degree&, int, int)> gen = [&](Degree& d, int c, int left) {
            if (c == g.k()) {
                auto part = enumerate_paths(g, d);
                generators.insert(generators.end(), part.begin(), part.end());
                return;
            }
            for (int t = 0; t <= left; ++t) {
                d[c] = t;
                gen(d, c + 1, left - t);
            }
            d[c] = 0;
        };
        Degree d(g.k(), 0);
        for (int total = 1; total <= n; ++total) gen(d, 0, total);

        // partition the positive-mass depth-(n,...,n) atoms by membership
        std::map<std::vector<bool>, std::vector<Path>> classes;
        double mesh = 0.0;
        for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), n))) {
            Scalar m = mu.mass(atom);
            if (m.is_zero()) continue;
            std::vector<bool> sig;
            sig.reserve(generators.size());
            for (const Path& lam : generators)
                sig.push_back(cylinder_subset(Cylinder(atom), Cylinder(lam)));
            classes[sig].push_back(atom);
        }
        MonicLevel lvl;
        lvl.level = n;
        lvl.groups = static_cast<int>(classes.size());
        for (const auto& [sig, members] : classes) {
            Scalar m = Scalar::zero();
            for (const Path& atom : members) m += mu.mass(atom);
            mesh = std::max(mesh, m.to_double());
            if (members.size() > 1) {
                lvl.unseparated_atoms += static_cast<int>(members.size());
                obstructed = true;
                if (rep.obstructions.size() < 8)
                    rep.obstructions.push_back("level " + std::to_string(n) + ": " +
                                               members[0].str() + " and " + members[1].str() +
                                               " are not separated");
            }
        }
        lvl.mesh = mesh;
        rep.levels.push_back(lvl);
    }
    rep.verdict = obstructed ? "obstructed-at-depth" : "monic-likely";
    return rep;
}

} // namespace kgr
