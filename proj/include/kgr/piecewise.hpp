#ifndef KGR_PIECEWISE_HPP
#define KGR_PIECEWISE_HPP

#include <map>

#include "kgr/pathspace.hpp"
#include "kgr/scalar.hpp"

namespace kgr {

// Function on Lambda^infinity constant on cylinders of degree (D,...,D):
// a value table over the depth-D atoms. Refining to a larger depth
// replicates values; composing with a coding map sigma^n raises the depth
// by max(n). Immutable value semantics.
class CylinderFunction {
public:
    CylinderFunction(const KGraph& g, int depth, std::map<Path, Scalar> values);

    static CylinderFunction constant(const KGraph& g, int depth, const Scalar& c);
    // Indicator of Z(lambda) at the given depth (depth >= max d(lambda)).
    static CylinderFunction indicator(const Path& lambda, int depth);

    const KGraph& graph() const { return *g_; }
    int depth() const { return depth_; }
    const std::map<Path, Scalar>& values() const { return values_; }

    // Value on Z(p); requires d(p) >= (depth,...,depth) coordinatewise so the
    // function is constant there.
    Scalar value(const Path& p) const;

    CylinderFunction refine_to(int depth2) const;
    // f composed with sigma^n: (f o sigma^n)(x) = f(sigma^n x), at depth
    // depth + max(n).
    CylinderFunction shift_compose(const Degree& n) const;

    CylinderFunction operator+(const CylinderFunction& o) const;
    CylinderFunction operator-(const CylinderFunction& o) const;
    CylinderFunction operator*(const CylinderFunction& o) const;
    CylinderFunction scale(const Scalar& c) const;
    CylinderFunction sqrt() const;           // atomwise nonnegative root
    bool strictly_positive() const;
    bool nonnegative() const;

    double max_abs() const;
    bool is_identically_zero() const;

private:
    const KGraph* g_;
    int depth_;
    std::map<Path, Scalar> values_; // complete table over depth-D atoms
};

// Pointwise binary op helper aligning depths.
CylinderFunction align_apply(const CylinderFunction& a, const CylinderFunction& b,
                             Scalar (*op)(const Scalar&, const Scalar&));

} // namespace kgr

#endif
