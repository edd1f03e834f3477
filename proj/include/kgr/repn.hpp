#ifndef KGR_REPN_HPP
#define KGR_REPN_HPP

#include <map>
#include <optional>
#include <vector>

#include "kgr/projsys.hpp"

namespace kgr {

// Sparse matrix over Scalar values, sized rows x cols.
class SparseMatrix {
public:
    SparseMatrix(int rows = 0, int cols = 0) : rows_(rows), cols_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::map<std::pair<int, int>, Scalar>& entries() const { return entries_; }

    void set(int r, int c, const Scalar& v);
    Scalar get(int r, int c) const;

    SparseMatrix operator*(const SparseMatrix& o) const;
    SparseMatrix operator+(const SparseMatrix& o) const;
    SparseMatrix operator-(const SparseMatrix& o) const;
    std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

    // Adjoint against the weighted inner product <x, y> = sum w_i conj(x_i) y_i
    // (all scalars here are real).
    SparseMatrix weighted_adjoint(const std::vector<Scalar>& weights) const;

    static SparseMatrix identity(int n);

private:
    int rows_, cols_;
    std::map<std::pair<int, int>, Scalar> entries_;
};

// Depth-M cylinder model of L^2(Lambda^infinity, mu): the basis is the set of
// positive-mass atoms of degree (M,...,M) with <chi_z, chi_z> = mu(Z(z)).
// H_D (D <= M) is the subspace of functions constant on depth-D atoms.
class TruncatedSpace {
public:
    TruncatedSpace(CylinderMeasure mu, int ambient_depth);

    const CylinderMeasure& measure() const { return mu_; }
    const KGraph& graph() const { return mu_.graph(); }
    int ambient_depth() const { return depth_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Path>& basis() const { return basis_; }
    int index_of(const Path& atom) const;
    const std::vector<Scalar>& weights() const { return weights_; }

    // Coefficient vector of the indicator of Z(lambda) (constant 1 there).
    std::vector<Scalar> embed_indicator(const Path& lambda) const;
    std::vector<Scalar> embed_function(const CylinderFunction& f) const;
    std::vector<Scalar> constant_one() const;

    Scalar inner(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const;

    // Basis of H_D as embedded indicator vectors.
    std::vector<std::vector<Scalar>> subspace_basis(int d) const;

private:
    CylinderMeasure mu_;
    int depth_;
    std::vector<Path> basis_;
    std::map<Path, int> index_;
    std::vector<Scalar> weights_;
};

// Finite-depth Cuntz-Krieger family: compressions P_M T_lambda P_M of the
// operators T_lambda f = f_lambda * (f o sigma^{d(lambda)}) to the depth-M
// atom basis. Each identity is exact on the subspace H_{M - delta} named in
// the report.
class TruncatedRepresentation {
public:
    TruncatedRepresentation(const ProjectiveSystem& sys, int ambient_depth, Degree cap);

    const TruncatedSpace& space() const { return space_; }
    const ProjectiveSystem& system() const { return sys_; }
    const Degree& cap() const { return cap_; }

    const SparseMatrix& op(const Path& lambda) const;
    SparseMatrix op_adjoint(const Path& lambda) const;
    std::vector<Path> family() const;

    // P(Z(lambda)) = T_lambda T_lambda^*.
    SparseMatrix pvm(const Path& lambda) const;

private:
    ProjectiveSystem sys_;
    TruncatedSpace space_;
    Degree cap_;
    std::map<Path, SparseMatrix> ops_;
};

TruncatedRepresentation build_truncation(const ProjectiveSystem& sys, int ambient_depth,
                                         const Degree& cap);

// CK1-CK4 and the Lambda^min relation, each on its valid subspace.
VerifyReport verify_ck(const TruncatedRepresentation& rep, double tol = 1e-9);

// PVM additivity and the transport identities (a)-(d); (b) is read with
// r(eta) as the summation range.
VerifyReport pvm_checks(const TruncatedRepresentation& rep, double tol = 1e-9);

// mu_pi(Z(lambda)) = <xi, P(Z(lambda)) xi> as a depth-M table measure.
CylinderMeasure measure_from_state(const TruncatedRepresentation& rep,
                                   const std::vector<Scalar>& xi);

// Rank of { P(Z(lambda)) xi : d(lambda) <= (M,...,M) } against dim H_M.
struct MonicSpanReport {
    int rank = 0;
    int dim = 0;
    bool monic_at_depth = false;
};
MonicSpanReport monic_span_check(const TruncatedRepresentation& rep,
                                 const std::vector<Scalar>& xi);

// Basis of the shift-invariant functions h o sigma^{e_i} = h at depth D over
// the positive atoms, together with the shift-communication classes.
struct CommutantReport {
    int dimension = 0;
    std::vector<std::vector<Path>> classes;          // positive atoms per class
    std::vector<std::vector<Scalar>> basis_vectors;  // class indicators over atoms
    std::vector<Path> atoms;                         // the positive depth-D atoms
};
CommutantReport commutant_invariants(const CylinderMeasure& mu, int depth);

// Measure-equivalence and cocycle matching of two systems on the same graph:
// h = +-sqrt(d mu_S / d mu_T) with per-atom signs solved by propagation.
struct EquivalenceReport {
    std::string verdict; // equivalent | cocycle-obstructed | measure-obstructed
    std::optional<CylinderFunction> h;
    std::vector<std::string> witnesses;
    double max_deviation = 0.0;
    bool exact = true;
};
EquivalenceReport equivalence_check(const ProjectiveSystem& sys_s,
                                    const ProjectiveSystem& sys_t, int depth,
                                    double tol = 1e-9);

// Deviation of W T^S = T^T W for W(f) = h f between the representations of
// two systems over equivalent measures; used by the disjointness invariant.
CheckRecord intertwiner_check(const TruncatedRepresentation& rep_s,
                              const TruncatedRepresentation& rep_t,
                              const CylinderFunction& h, double tol = 1e-9);

} // namespace kgr

#endif
