#ifndef KGR_PATHSPACE_HPP
#define KGR_PATHSPACE_HPP

#include <vector>

#include "kgr/kgraph.hpp"

namespace kgr {

// Cylinder set Z(lambda) = { x in Lambda^infinity : x(0, d(lambda)) = lambda },
// identified with its base path. Every set this library manipulates is a
// finite disjoint union of cylinders of equal degree.
struct Cylinder {
    Path base;

    explicit Cylinder(Path p) : base(std::move(p)) {}
    Degree degree() const { return base.degree(); }
    bool operator==(const Cylinder& o) const { return base == o.base; }
    bool operator<(const Cylinder& o) const { return base < o.base; }
};

// Z(lambda) = disjoint union of Z(lambda*eta) over eta in s(lambda)Lambda^m.
std::vector<Cylinder> refine(const Cylinder& c, const Degree& m);

// (sigma^n)^{-1}(Z(eta)) = disjoint union of Z(lambda*eta), lambda in Lambda^n r(eta).
std::vector<Cylinder> shift_preimage(const Degree& n, const Cylinder& c);

// sigma^n(Z(zeta)) = Z(zeta(n, d(zeta))) for n <= d(zeta): the coarser
// cylinder based at the tail.
Cylinder shift_image(const Degree& n, const Cylinder& c);

// sigma_lambda^{-1}(Z(eta)) = disjoint union of Z(alpha) over
// (alpha, beta) in Lambda^min(lambda, eta); subsets of Z(s(lambda)).
std::vector<Cylinder> prefix_preimage(const Path& lambda, const Cylinder& c);

// The depth-n partition of Lambda^infinity: atoms are the cylinders over
// enumerate_paths(g, n).
struct DepthPartition {
    Degree depth;
    std::vector<Cylinder> atoms;
};

DepthPartition depth_partition(const KGraph& g, const Degree& n);

// True iff Z(inner) is contained in Z(outer), i.e. d(outer) <= d(inner) and
// inner(0, d(outer)) = outer.
bool cylinder_subset(const Cylinder& inner, const Cylinder& outer);

} // namespace kgr

#endif
