#include "kgr/pathspace.hpp"

namespace kgr {

std::vector<Cylinder> refine(const Cylinder& c, const Degree& m) {
    const KGraph& g = c.base.graph();
    std::vector<Cylinder> out;
    for (const Path& eta : paths_from(g, c.base.source(), m))
        out.emplace_back(compose(c.base, eta));
    return out;
}

std::vector<Cylinder> shift_preimage(const Degree& n, const Cylinder& c) {
    const KGraph& g = c.base.graph();
    std::vector<Cylinder> out;
    for (const Path& lambda : paths_into(g, c.base.range(), n))
        out.emplace_back(compose(lambda, c.base));
    return out;
}

Cylinder shift_image(const Degree& n, const Cylinder& c) {
    if (!degree_leq(n, c.degree()))
        throw degree_out_of_range("shift by " + degree_str(n) + " exceeds cylinder depth " +
                                  degree_str(c.degree()));
    return Cylinder(factorize(c.base, n).second);
}

std::vector<Cylinder> prefix_preimage(const Path& lambda, const Cylinder& c) {
    std::vector<Cylinder> out;
    for (const auto& [alpha, beta] : lambda_min(lambda, c.base)) out.emplace_back(alpha);
    return out;
}

DepthPartition depth_partition(const KGraph& g, const Degree& n) {
    DepthPartition p;
    p.depth = n;
    for (const Path& lam : enumerate_paths(g, n)) p.atoms.emplace_back(lam);
    return p;
}

bool cylinder_subset(const Cylinder& inner, const Cylinder& outer) {
    if (&inner.base.graph() != &outer.base.graph()) return false;
    if (!degree_leq(outer.degree(), inner.degree())) return false;
    return factorize(inner.base, outer.degree()).first == outer.base;
}

} // namespace kgr
