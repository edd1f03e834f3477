#ifndef KGR_INTERVAL_HPP
#define KGR_INTERVAL_HPP

#include <map>
#include <string>
#include <vector>

#include "kgr/kgraph.hpp"
#include "kgr/projsys.hpp"
#include "kgr/rational.hpp"

namespace kgr {

// Finite unions of closed rational intervals in [0,1]; shared endpoints are
// Lebesgue-null and treated as overlap-free.
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(const Rational& lo, const Rational& hi);
    static IntervalSet from_pieces(std::vector<std::pair<Rational, Rational>> pieces);

    bool empty() const { return pieces_.empty(); }
    Rational length() const;
    const std::vector<std::pair<Rational, Rational>>& pieces() const { return pieces_; }

    IntervalSet unite(const IntervalSet& o) const;
    IntervalSet intersect(const IntervalSet& o) const;
    IntervalSet subtract(const IntervalSet& o) const;
    // equal up to Lebesgue-null sets
    bool equals_mod_null(const IntervalSet& o) const;
    bool contains_mod_null(const IntervalSet& o) const;

    std::string str() const;

private:
    void normalize();
    std::vector<std::pair<Rational, Rational>> pieces_; // sorted, merged, positive length
};

struct AffineMap {
    Rational slope;
    Rational offset;

    Rational apply(const Rational& x) const { return slope * x + offset; }
    IntervalSet apply(const IntervalSet& s) const;
    AffineMap after(const AffineMap& inner) const; // this o inner
    bool operator==(const AffineMap& o) const { return slope == o.slope && offset == o.offset; }
};

// Lambda-semibranching function system on the unit interval with affine
// prefixing maps and exact rational data. All defining conditions are
// verified on construction up to the given degree cap.
class IntervalSystem {
public:
    IntervalSystem(const KGraph& g, std::map<VertexId, IntervalSet> domains,
                   std::map<EdgeId, AffineMap> maps, int check_cap = 4);

    const KGraph& graph() const { return *g_; }
    const IntervalSet& domain(VertexId v) const { return domains_.at(v); }
    const AffineMap& edge_map(EdgeId e) const { return maps_.at(e); }

    IntervalSet space() const; // X = union of the vertex domains

    AffineMap path_map(const Path& lambda) const; // tau_lambda
    IntervalSet range_of(const Path& lambda) const; // R_lambda = tau_lambda(D_{s(lambda)})
    Rational phi(EdgeId e) const; // Radon-Nikodym constant |slope|

private:
    void verify(int check_cap) const;

    const KGraph* g_;
    std::map<VertexId, IntervalSet> domains_;
    std::map<EdgeId, AffineMap> maps_;
};

// Levelwise partition of X generated by { R_lambda : |d(lambda)| <= n }.
// An atom that stabilizes with every range-set trace trivial, closed under
// one-edge extensions, is a certified obstruction: sigma(R) can never split
// it, so the representation is not monic.
struct IntervalMonicLevel {
    int level = 0;
    double mesh = 0.0; // max atom length
    int atoms = 0;
    std::vector<std::string> stable_atoms; // atoms unchanged since the previous level
};

struct IntervalMonicReport {
    std::string verdict; // monic-likely | not-monic | inconclusive
    std::vector<IntervalMonicLevel> levels;
    std::vector<std::string> obstructions; // certified obstruction atoms with measure
};

IntervalMonicReport monic_sigma_check_interval(const IntervalSystem& sys, int n_max);

} // namespace kgr

#endif
