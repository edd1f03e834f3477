#ifndef KGR_UNIVERSAL_HPP
#define KGR_UNIVERSAL_HPP

#include <vector>

#include "kgr/projsys.hpp"
#include "kgr/repn.hpp"

namespace kgr {

// Finite-depth model of the universal Hilbert space H(Lambda^infinity):
// vectors are finite sums of terms f sqrt(d mu) evaluated on the depth-D
// cylinder algebra. Value semantics; canonicalization produces new vectors.
class UniversalVector {
public:
    struct Term {
        CylinderFunction f;
        CylinderMeasure mu;
    };

    UniversalVector(const KGraph& g, int depth, std::vector<Term> terms);

    static UniversalVector unit(const CylinderMeasure& mu, int depth); // 1 sqrt(d mu)
    static UniversalVector term(const CylinderFunction& f, const CylinderMeasure& mu, int depth);

    const KGraph& graph() const { return *g_; }
    int depth() const { return depth_; }
    const std::vector<Term>& terms() const { return terms_; }

    // Reference measure m = sum of the term measures, and the canonical
    // single-term coefficient F = sum_i f_i sqrt(d mu_i / d m) on the
    // depth-D atoms.
    CylinderMeasure reference_measure() const;
    CylinderFunction canonical_coefficient() const;

    UniversalVector operator+(const UniversalVector& o) const;
    UniversalVector scale(const Scalar& c) const;

private:
    const KGraph* g_;
    int depth_;
    std::vector<Term> terms_;
};

// <f sqrt(d mu), g sqrt(d nu)> = sum over depth-D atoms of
// f g sqrt(mu(Z) nu(Z)), extended bilinearly over terms.
Scalar universal_inner(const UniversalVector& x, const UniversalVector& y);

// Whether x and y represent the same vector: ||x - y||^2 = 0.
bool universal_equal(const UniversalVector& x, const UniversalVector& y, double tol = 1e-9);

// S^univ_lambda (f sqrt(d mu)) = (f o sigma^n) sqrt(d (mu o sigma_lambda^{-1})),
// adjoint: (f o sigma_lambda) sqrt(d (mu o sigma_lambda)). The usable depth
// drops by max(d(lambda)) in the non-adjoint direction.
UniversalVector apply_s_univ(const Path& lambda, const UniversalVector& x, bool adjoint);

// nu_y(Z(lambda)) = <P(Z(lambda)) y, y> as a depth-D table measure.
CylinderMeasure nu_measure(const UniversalVector& y);

// W_mu f = f sqrt(d mu): isometry of L^2(mu) into H(Lambda^infinity), and the
// intertwining W(T_lambda f) = S^univ_lambda(W f) for the nonnegative system s.
// Trials are depth-compatible cylinder functions.
VerifyReport embed_and_intertwine(const ProjectiveSystem& s,
                                  const std::vector<CylinderFunction>& trials,
                                  double tol = 1e-9);

// Commutant relation on a registered family of measures: multiplication by
// the family {F_mu} commutes with every S^univ_lambda on the span iff
// F_mu = F_{mu o sigma_lambda^{-1}} o sigma_lambda for each mu; both sides
// are compared through exact inner products.
struct CommutantRelationReport {
    bool relation_holds = true;  // F_mu = F_{mu o sigma^{-1}} o sigma_lambda
    bool commutes = true;        // T S = S T on the registered span
    bool equivalent = true;      // the two verdicts agree
    double max_deviation = 0.0;
    std::vector<std::string> witnesses;
};
CommutantRelationReport commutant_relation_check(
    const std::vector<CylinderMeasure>& family,
    const std::vector<CylinderFunction>& multipliers, const Degree& cap, int depth);

} // namespace kgr

#endif
