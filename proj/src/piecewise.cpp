#include "kgr/piecewise.hpp"

#include <algorithm>

namespace kgr {

CylinderFunction::CylinderFunction(const KGraph& g, int depth, std::map<Path, Scalar> values)
    : g_(&g), depth_(depth), values_(std::move(values)) {
    // complete the table so every depth-D atom has a value
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth)))
        values_.try_emplace(atom, Scalar::zero());
}

CylinderFunction CylinderFunction::constant(const KGraph& g, int depth, const Scalar& c) {
    std::map<Path, Scalar> vals;
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth))) vals.emplace(atom, c);
    return CylinderFunction(g, depth, std::move(vals));
}

CylinderFunction CylinderFunction::indicator(const Path& lambda, int depth) {
    const KGraph& g = lambda.graph();
    if (degree_max(lambda.degree()) > depth)
        throw degree_out_of_range("indicator depth " + std::to_string(depth) +
                                  " too shallow for " + lambda.str());
    std::map<Path, Scalar> vals;
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth)))
        vals.emplace(atom, cylinder_subset(Cylinder(atom), Cylinder(lambda)) ? Scalar::one()
                                                                             : Scalar::zero());
    return CylinderFunction(g, depth, std::move(vals));
}

Scalar CylinderFunction::value(const Path& p) const {
    Degree d = p.degree();
    Degree mine = degree_uniform(g_->k(), depth_);
    if (!degree_leq(mine, d))
        throw degree_out_of_range("function at depth " + std::to_string(depth_) +
                                  " is not constant on Z(" + p.str() + ")");
    Path atom = factorize(p, mine).first;
    auto it = values_.find(atom);
    return it == values_.end() ? Scalar::zero() : it->second;
}

CylinderFunction CylinderFunction::refine_to(int depth2) const {
    if (depth2 < depth_) throw degree_out_of_range("cannot coarsen a cylinder function");
    if (depth2 == depth_) return *this;
    std::map<Path, Scalar> vals;
    for (const Path& atom : enumerate_paths(*g_, degree_uniform(g_->k(), depth2)))
        vals.emplace(atom, value(atom));
    return CylinderFunction(*g_, depth2, std::move(vals));
}

CylinderFunction CylinderFunction::shift_compose(const Degree& n) const {
    int depth2 = depth_ + degree_max(n);
    std::map<Path, Scalar> vals;
    for (const Path& atom : enumerate_paths(*g_, degree_uniform(g_->k(), depth2)))
        vals.emplace(atom, value(factorize(atom, n).second));
    return CylinderFunction(*g_, depth2, std::move(vals));
}

CylinderFunction align_apply(const CylinderFunction& a, const CylinderFunction& b,
                             Scalar (*op)(const Scalar&, const Scalar&)) {
    int d = std::max(a.depth(), b.depth());
    CylinderFunction aa = a.refine_to(d), bb = b.refine_to(d);
    std::map<Path, Scalar> vals;
    for (const auto& [atom, v] : aa.values()) vals.emplace(atom, op(v, bb.values().at(atom)));
    return CylinderFunction(a.graph(), d, std::move(vals));
}

CylinderFunction CylinderFunction::operator+(const CylinderFunction& o) const {
    return align_apply(*this, o, +[](const Scalar& x, const Scalar& y) { return x + y; });
}

CylinderFunction CylinderFunction::operator-(const CylinderFunction& o) const {
    return align_apply(*this, o, +[](const Scalar& x, const Scalar& y) { return x - y; });
}

CylinderFunction CylinderFunction::operator*(const CylinderFunction& o) const {
    return align_apply(*this, o, +[](const Scalar& x, const Scalar& y) { return x * y; });
}

CylinderFunction CylinderFunction::scale(const Scalar& c) const {
    std::map<Path, Scalar> vals;
    for (const auto& [atom, v] : values_) vals.emplace(atom, v * c);
    return CylinderFunction(*g_, depth_, std::move(vals));
}

CylinderFunction CylinderFunction::sqrt() const {
    std::map<Path, Scalar> vals;
    for (const auto& [atom, v] : values_) vals.emplace(atom, v.sqrt());
    return CylinderFunction(*g_, depth_, std::move(vals));
}

bool CylinderFunction::strictly_positive() const {
    for (const auto& [atom, v] : values_)
        if (v.is_zero() || v.to_double() < 0) return false;
    return true;
}

bool CylinderFunction::nonnegative() const {
    for (const auto& [atom, v] : values_)
        if (v.to_double() < 0) return false;
    return true;
}

double CylinderFunction::max_abs() const {
    double m = 0;
    for (const auto& [atom, v] : values_) m = std::max(m, v.abs_double());
    return m;
}

bool CylinderFunction::is_identically_zero() const {
    for (const auto& [atom, v] : values_)
        if (!v.is_zero()) return false;
    return true;
}

} // namespace kgr
