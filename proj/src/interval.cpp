#include "kgr/interval.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace kgr {

IntervalSet::IntervalSet(const Rational& lo, const Rational& hi) {
    if (lo < hi) pieces_.push_back({lo, hi});
}

IntervalSet IntervalSet::from_pieces(std::vector<std::pair<Rational, Rational>> pieces) {
    IntervalSet s;
    for (auto& [lo, hi] : pieces) {
        if (hi < lo) throw malformed_spec("interval with hi < lo");
        if (lo < hi) s.pieces_.push_back({lo, hi});
    }
    s.normalize();
    return s;
}

void IntervalSet::normalize() {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Rational, Rational>> merged;
    for (const auto& p : pieces_) {
        if (!merged.empty() && p.first <= merged.back().second) {
            if (merged.back().second < p.second) merged.back().second = p.second;
        } else {
            merged.push_back(p);
        }
    }
    pieces_ = std::move(merged);
}

Rational IntervalSet::length() const {
    Rational t(0);
    for (const auto& [lo, hi] : pieces_) t += hi - lo;
    return t;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
    IntervalSet s;
    s.pieces_ = pieces_;
    s.pieces_.insert(s.pieces_.end(), o.pieces_.begin(), o.pieces_.end());
    s.normalize();
    return s;
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
    IntervalSet s;
    for (const auto& [a, b] : pieces_) {
        for (const auto& [c, d] : o.pieces_) {
            Rational lo = std::max(a, c), hi = std::min(b, d);
            if (lo < hi) s.pieces_.push_back({lo, hi});
        }
    }
    s.normalize();
    return s;
}

IntervalSet IntervalSet::subtract(const IntervalSet& o) const {
    IntervalSet s;
    for (auto [a, b] : pieces_) {
        std::vector<std::pair<Rational, Rational>> remains{{a, b}};
        for (const auto& [c, d] : o.pieces_) {
            std::vector<std::pair<Rational, Rational>> next;
            for (auto [x, y] : remains) {
                if (d <= x || y <= c) {
                    next.push_back({x, y});
                    continue;
                }
                if (x < c) next.push_back({x, c});
                if (d < y) next.push_back({d, y});
            }
            remains = std::move(next);
        }
        for (const auto& p : remains) s.pieces_.push_back(p);
    }
    s.normalize();
    return s;
}

bool IntervalSet::equals_mod_null(const IntervalSet& o) const {
    return subtract(o).length().is_zero() && o.subtract(*this).length().is_zero();
}

bool IntervalSet::contains_mod_null(const IntervalSet& o) const {
    return o.subtract(*this).length().is_zero();
}

std::string IntervalSet::str() const {
    if (pieces_.empty()) return "{}";
    std::string out;
    for (const auto& [lo, hi] : pieces_) {
        if (!out.empty()) out += " u ";
        out += "[" + lo.str() + "," + hi.str() + "]";
    }
    return out;
}

IntervalSet AffineMap::apply(const IntervalSet& s) const {
    std::vector<std::pair<Rational, Rational>> out;
    for (const auto& [lo, hi] : s.pieces()) {
        Rational a = apply(lo), b = apply(hi);
        out.push_back(slope.sign() >= 0 ? std::make_pair(a, b) : std::make_pair(b, a));
    }
    return IntervalSet::from_pieces(std::move(out));
}

AffineMap AffineMap::after(const AffineMap& inner) const {
    return {slope * inner.slope, slope * inner.offset + offset};
}

IntervalSystem::IntervalSystem(const KGraph& g, std::map<VertexId, IntervalSet> domains,
                               std::map<EdgeId, AffineMap> maps, int check_cap)
    : g_(&g), domains_(std::move(domains)), maps_(std::move(maps)) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto it = domains_.find(v);
        if (it == domains_.end() || it->second.empty())
            throw malformed_spec("vertex '" + g.vertex_name(v) + "' has no domain");
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        auto it = maps_.find(e);
        if (it == maps_.end()) throw malformed_spec("edge '" + g.edge(e).name + "' has no map");
        if (it->second.slope.is_zero())
            throw malformed_spec("edge '" + g.edge(e).name + "' has slope 0");
    }
    verify(check_cap);
}

IntervalSet IntervalSystem::space() const {
    IntervalSet x;
    for (const auto& [v, dom] : domains_) x = x.unite(dom);
    return x;
}

AffineMap IntervalSystem::path_map(const Path& lambda) const {
    AffineMap m{Rational(1), Rational(0)};
    for (EdgeId e : lambda.edges()) m = m.after(maps_.at(e));
    return m;
}

IntervalSet IntervalSystem::range_of(const Path& lambda) const {
    return path_map(lambda).apply(domains_.at(lambda.source()));
}

Rational IntervalSystem::phi(EdgeId e) const { return maps_.at(e).slope.abs(); }

void IntervalSystem::verify(int check_cap) const {
    const KGraph& g = *g_;
    // vertex domains pairwise disjoint mod null (D_v = R_v)
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (VertexId w = v + 1; w < g.vertex_count(); ++w) {
            if (!domains_.at(v).intersect(domains_.at(w)).length().is_zero())
                throw ranges_overlap("domains of '" + g.vertex_name(v) + "' and '" +
                                     g.vertex_name(w) + "' overlap");
        }
    }
    // R_nu sits inside the domain of its range vertex
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        IntervalSet r = maps_.at(e).apply(domains_.at(g.edge(e).source));
        if (!domains_.at(g.edge(e).range).contains_mod_null(r))
            throw cover_failure("range of edge '" + g.edge(e).name +
                                "' leaves the domain of its range vertex");
    }
    // squares must commute as affine maps
    for (int i = 1; i <= g.k(); ++i) {
        for (int j = i + 1; j <= g.k(); ++j) {
            for (EdgeId f : g.edges_of_color(i)) {
                for (EdgeId gg : g.edges_of_color(j)) {
                    if (g.edge(f).source != g.edge(gg).range) continue;
                    auto [gp, fp] = g.square_forward(f, gg);
                    AffineMap lhs = maps_.at(f).after(maps_.at(gg));
                    AffineMap rhs = maps_.at(gp).after(maps_.at(fp));
                    if (!(lhs == rhs))
                        throw composition_mismatch("square (" + g.edge(f).name + "," +
                                                   g.edge(gg).name + ") maps disagree");
                }
            }
        }
    }
    // per degree: essentially disjoint ranges partitioning each D_v
    std::vector<Degree> degrees;
    Degree d(g.k(), 0);
    std::function<void(int, int)> gen = [&](int c, int left) {
        if (c == g.k()) {
            if (!degree_is_zero(d)) degrees.push_back(d);
            return;
        }
        for (int t = 0; t <= left; ++t) {
            d[c] = t;
            gen(c + 1, left - t);
        }
        d[c] = 0;
    };
    for (int total = 1; total <= check_cap; ++total) gen(0, total);

    for (const Degree& n : degrees) {
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            IntervalSet covered;
            Rational total_len(0);
            std::vector<std::pair<Path, IntervalSet>> ranges;
            for (const Path& lam : paths_from(g, v, n)) ranges.push_back({lam, range_of(lam)});
            for (size_t a = 0; a < ranges.size(); ++a) {
                for (size_t b = a + 1; b < ranges.size(); ++b) {
                    if (!ranges[a].second.intersect(ranges[b].second).length().is_zero())
                        throw ranges_overlap("R_" + ranges[a].first.str() + " and R_" +
                                             ranges[b].first.str() + " overlap");
                }
            }
            for (const auto& [lam, r] : ranges) {
                covered = covered.unite(r);
                total_len += r.length();
            }
            if (!covered.equals_mod_null(domains_.at(v)) || total_len != domains_.at(v).length())
                throw cover_failure("ranges of degree " + degree_str(n) +
                                    " do not partition the domain of '" + g.vertex_name(v) + "'");
        }
    }
}

namespace {

// Atoms of the partition of X generated by the given interval sets:
// cut X at every endpoint.
std::vector<IntervalSet> partition_atoms(const IntervalSet& x,
                                         const std::vector<IntervalSet>& gens) {
    std::set<Rational> cuts;
    for (const auto& [lo, hi] : x.pieces()) {
        cuts.insert(lo);
        cuts.insert(hi);
    }
    for (const auto& s : gens) {
        for (const auto& [lo, hi] : s.pieces()) {
            cuts.insert(lo);
            cuts.insert(hi);
        }
    }
    std::vector<Rational> sorted(cuts.begin(), cuts.end());
    std::vector<IntervalSet> atoms;
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        IntervalSet seg = IntervalSet(sorted[i], sorted[i + 1]).intersect(x);
        if (!seg.length().is_zero()) atoms.push_back(seg);
    }
    return atoms;
}

} // namespace

IntervalMonicReport monic_sigma_check_interval(const IntervalSystem& sys, int n_max) {
    const KGraph& g = sys.graph();
    IntervalMonicReport rep;
    IntervalSet x = sys.space();

    std::vector<std::pair<Path, IntervalSet>> all_ranges; // |d(lambda)| in 1..n
    // level-0 partition: the vertex domains
    std::vector<IntervalSet> domain_gens;
    for (VertexId v = 0; v < g.vertex_count(); ++v) domain_gens.push_back(sys.domain(v));
    std::vector<IntervalSet> prev_atoms = partition_atoms(x, domain_gens);
    std::vector<std::pair<Rational, std::string>> certified_sorted;
    std::set<std::string> certified;

    for (int n = 1; n <= n_max; ++n) {
        std::vector<Degree> degrees;
        Degree d(g.k(), 0);
        std::function<void(int, int)> gen = [&](int c, int left) {
            if (c == g.k()) {
                if (degree_total(d) == n) degrees.push_back(d);
                return;
            }
            for (int t = 0; t <= left; ++t) {
                d[c] = t;
                gen(c + 1, left - t);
            }
            d[c] = 0;
        };
        gen(0, n);
        for (const Degree& deg : degrees)
            for (const Path& lam : enumerate_paths(g, deg))
                all_ranges.push_back({lam, sys.range_of(lam)});

        std::vector<IntervalSet> gens;
        for (VertexId v = 0; v < g.vertex_count(); ++v) gens.push_back(sys.domain(v));
        for (const auto& [lam, r] : all_ranges) gens.push_back(r);
        auto atoms = partition_atoms(x, gens);

        IntervalMonicLevel lvl;
        lvl.level = n;
        lvl.atoms = static_cast<int>(atoms.size());
        for (const auto& atom : atoms) {
            lvl.mesh = std::max(lvl.mesh, atom.length().to_double());
            bool stable = false;
            for (const auto& prev : prev_atoms)
                if (atom.equals_mod_null(prev)) stable = true;
            if (!stable) continue;
            lvl.stable_atoms.push_back(atom.str());

            // Certification: every current range set must have a trivial trace
            // on the atom, and the paths whose ranges contain it must extend
            // only to ranges with trivial traces. States (source vertex,
            // affine map) make the extension closure finite.
            bool trivial = true;
            std::set<std::pair<VertexId, std::pair<std::string, std::string>>> states, done;
            for (const auto& [lam, r] : all_ranges) {
                IntervalSet trace = r.intersect(atom);
                if (!(trace.length().is_zero() || trace.equals_mod_null(atom))) {
                    trivial = false;
                    break;
                }
                if (trace.equals_mod_null(atom)) {
                    AffineMap m = sys.path_map(lam);
                    states.insert({lam.source(), {m.slope.str(), m.offset.str()}});
                }
            }
            if (!trivial) continue;
            // include the vertex identity state covering the atom
            for (VertexId v = 0; v < g.vertex_count(); ++v)
                if (sys.domain(v).contains_mod_null(atom))
                    states.insert({v, {"1", "0"}});
            bool closed = true;
            std::vector<std::pair<VertexId, AffineMap>> frontier;
            for (const auto& [v, ms] : states)
                frontier.push_back({v, {Rational::parse(ms.first), Rational::parse(ms.second)}});
            size_t guard = 0;
            while (!frontier.empty() && closed) {
                if (++guard > 512) {
                    closed = false;
                    break;
                }
                auto [v, m] = frontier.back();
                frontier.pop_back();
                auto key = std::make_pair(v, std::make_pair(m.slope.str(), m.offset.str()));
                if (done.count(key)) continue;
                done.insert(key);
                for (int c = 1; c <= g.k(); ++c) {
                    for (EdgeId e : g.edges_from(v, c)) {
                        AffineMap ext = m.after(sys.edge_map(e));
                        IntervalSet r = ext.apply(sys.domain(g.edge(e).source));
                        IntervalSet trace = r.intersect(atom);
                        if (trace.length().is_zero()) continue;
                        if (!trace.equals_mod_null(atom)) {
                            closed = false;
                            break;
                        }
                        frontier.push_back({g.edge(e).source, ext});
                    }
                    if (!closed) break;
                }
            }
            if (closed) {
                std::string desc = atom.str() + " (measure " + atom.length().str() + ")";
                if (!certified.count(desc)) {
                    certified.insert(desc);
                    certified_sorted.push_back({atom.length(), desc});
                }
            }
        }
        rep.levels.push_back(lvl);
        prev_atoms = std::move(atoms);
    }

    std::sort(certified_sorted.begin(), certified_sorted.end(),
              [](const auto& a, const auto& b) { return b.first < a.first; });
    for (const auto& [len, desc] : certified_sorted) rep.obstructions.push_back(desc);

    if (!rep.obstructions.empty()) {
        rep.verdict = "not-monic";
    } else {
        double first = rep.levels.front().mesh, last = rep.levels.back().mesh;
        rep.verdict = (last < first || last < 1e-9) ? "monic-likely" : "inconclusive";
    }
    return rep;
}

} // namespace kgr
