#include "kgr/repn.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace kgr {

void SparseMatrix::set(int r, int c, const Scalar& v) {
    if (v.is_zero())
        entries_.erase({r, c});
    else
        entries_[{r, c}] = v;
}

Scalar SparseMatrix::get(int r, int c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Scalar::zero() : it->second;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
    SparseMatrix out(rows_, o.cols_);
    // group o's entries by row for the join
    std::map<int, std::vector<std::pair<int, Scalar>>> by_row;
    for (const auto& [rc, v] : o.entries_) by_row[rc.first].push_back({rc.second, v});
    for (const auto& [rc, v] : entries_) {
        auto it = by_row.find(rc.second);
        if (it == by_row.end()) continue;
        for (const auto& [c2, v2] : it->second) {
            Scalar cur = out.get(rc.first, c2) + v * v2;
            out.set(rc.first, c2, cur);
        }
    }
    return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
    SparseMatrix out = *this;
    for (const auto& [rc, v] : o.entries_) out.set(rc.first, rc.second, out.get(rc.first, rc.second) + v);
    return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const {
    SparseMatrix out = *this;
    for (const auto& [rc, v] : o.entries_) out.set(rc.first, rc.second, out.get(rc.first, rc.second) - v);
    return out;
}

std::vector<Scalar> SparseMatrix::apply(const std::vector<Scalar>& v) const {
    std::vector<Scalar> out(rows_, Scalar::zero());
    for (const auto& [rc, val] : entries_) {
        if (!v[rc.second].is_zero()) out[rc.first] += val * v[rc.second];
    }
    return out;
}

SparseMatrix SparseMatrix::weighted_adjoint(const std::vector<Scalar>& weights) const {
    SparseMatrix out(cols_, rows_);
    for (const auto& [rc, v] : entries_)
        out.set(rc.second, rc.first, v * weights[rc.first] / weights[rc.second]);
    return out;
}

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix out(n, n);
    for (int i = 0; i < n; ++i) out.set(i, i, Scalar::one());
    return out;
}

TruncatedSpace::TruncatedSpace(CylinderMeasure mu, int ambient_depth)
    : mu_(std::move(mu)), depth_(ambient_depth) {
    const KGraph& g = mu_.graph();
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth_))) {
        Scalar m = mu_.mass(atom);
        if (m.is_zero()) continue;
        index_[atom] = static_cast<int>(basis_.size());
        basis_.push_back(atom);
        weights_.push_back(m);
    }
}

int TruncatedSpace::index_of(const Path& atom) const {
    auto it = index_.find(atom);
    return it == index_.end() ? -1 : it->second;
}

std::vector<Scalar> TruncatedSpace::embed_indicator(const Path& lambda) const {
    std::vector<Scalar> v(dim(), Scalar::zero());
    for (int i = 0; i < dim(); ++i)
        if (cylinder_subset(Cylinder(basis_[i]), Cylinder(lambda))) v[i] = Scalar::one();
    return v;
}

std::vector<Scalar> TruncatedSpace::embed_function(const CylinderFunction& f) const {
    if (f.depth() > depth_)
        throw depth_budget_exceeded("function depth exceeds the ambient depth");
    std::vector<Scalar> v(dim(), Scalar::zero());
    for (int i = 0; i < dim(); ++i) v[i] = f.value(basis_[i]);
    return v;
}

std::vector<Scalar> TruncatedSpace::constant_one() const {
    return std::vector<Scalar>(dim(), Scalar::one());
}

Scalar TruncatedSpace::inner(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
    Scalar s = Scalar::zero();
    for (int i = 0; i < dim(); ++i) s += x[i] * y[i] * weights_[i];
    return s;
}

std::vector<std::vector<Scalar>> TruncatedSpace::subspace_basis(int d) const {
    if (d < 0) throw depth_budget_exceeded("subspace depth below zero; raise the ambient depth");
    const KGraph& g = mu_.graph();
    std::vector<std::vector<Scalar>> out;
    for (const Path& eta : enumerate_paths(g, degree_uniform(g.k(), d))) {
        auto v = embed_indicator(eta);
        bool nonzero = false;
        for (const auto& x : v)
            if (!x.is_zero()) nonzero = true;
        if (nonzero) out.push_back(std::move(v));
    }
    return out;
}

TruncatedRepresentation::TruncatedRepresentation(const ProjectiveSystem& sys, int ambient_depth,
                                                 Degree cap)
    : sys_(sys), space_(sys.measure(), ambient_depth), cap_(std::move(cap)) {
    const KGraph& g = sys.graph();
    if (ambient_depth < sys.depth() + degree_max(cap_))
        throw depth_budget_exceeded("ambient depth " + std::to_string(ambient_depth) +
                                    " < system resolution + cap");
    if (!degree_leq(cap_, sys.cap()))
        throw depth_budget_exceeded("representation cap exceeds the system cap");

    const CylinderMeasure& mu = sys.measure();
    Degree res = degree_uniform(g.k(), ambient_depth);
    for (const Path& lam : sys.family()) {
        if (!degree_leq(lam.degree(), cap_)) continue;
        SparseMatrix t(space_.dim(), space_.dim());
        const CylinderFunction& f = sys.cocycle(lam);
        for (int col = 0; col < space_.dim(); ++col) {
            const Path& xi = space_.basis()[col];
            if (lam.source() != xi.range()) continue;
            Path fine = compose(lam, xi);
            Scalar m_fine = mu.mass(fine);
            if (m_fine.is_zero()) continue;
            Path row_atom = factorize(fine, res).first;
            int row = space_.index_of(row_atom);
            if (row < 0) continue;
            // <chi_row, T_lambda chi_xi> / mu(row) = f_lambda * mu(fine) / mu(row)
            t.set(row, col, f.value(fine) * m_fine / mu.mass(row_atom));
        }
        ops_.emplace(lam, std::move(t));
    }
}

const SparseMatrix& TruncatedRepresentation::op(const Path& lambda) const {
    auto it = ops_.find(lambda);
    if (it == ops_.end())
        throw degree_out_of_range("no operator for " + lambda.str() + " under the cap");
    return it->second;
}

SparseMatrix TruncatedRepresentation::op_adjoint(const Path& lambda) const {
    return op(lambda).weighted_adjoint(space_.weights());
}

std::vector<Path> TruncatedRepresentation::family() const {
    std::vector<Path> out;
    for (const auto& [lam, t] : ops_) out.push_back(lam);
    return out;
}

SparseMatrix TruncatedRepresentation::pvm(const Path& lambda) const {
    auto it = ops_.find(lambda);
    if (it != ops_.end()) return it->second * it->second.weighted_adjoint(space_.weights());
    // beyond the cap: the multiplication operator by chi_{Z(lambda)}
    SparseMatrix p(space_.dim(), space_.dim());
    for (int i = 0; i < space_.dim(); ++i)
        if (cylinder_subset(Cylinder(space_.basis()[i]), Cylinder(lambda)))
            p.set(i, i, Scalar::one());
    return p;
}

TruncatedRepresentation build_truncation(const ProjectiveSystem& sys, int ambient_depth,
                                         const Degree& cap) {
    return TruncatedRepresentation(sys, ambient_depth, cap);
}

namespace {

void record_matrix_deviation(CheckRecord& rec, const TruncatedSpace& space,
                             const SparseMatrix& lhs, const SparseMatrix& rhs,
                             int subspace_depth, const std::string& witness) {
    SparseMatrix diff = lhs - rhs;
    if (diff.entries().empty()) return;
    for (const auto& v : space.subspace_basis(subspace_depth)) {
        auto dv = diff.apply(v);
        for (const auto& x : dv) {
            if (x.is_zero()) continue;
            rec.exact = false;
            rec.max_deviation = std::max(rec.max_deviation, x.abs_double());
            if (rec.witnesses.size() < 8) rec.witnesses.push_back(witness);
            break;
        }
    }
}

void finalize_record(CheckRecord& rec, double tol) {
    rec.pass = rec.exact || rec.max_deviation <= tol;
    if (rec.pass) rec.witnesses.clear();
}

std::vector<Degree> degrees_upto_cap(int k, const Degree& cap) {
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

} // namespace

VerifyReport verify_ck(const TruncatedRepresentation& rep, double tol) {
    VerifyReport out;
    const TruncatedSpace& space = rep.space();
    const KGraph& g = space.graph();
    int m = space.ambient_depth();
    auto family = rep.family();

    CheckRecord ck1{"CK1", m};
    {
        SparseMatrix total(space.dim(), space.dim());
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            Path pv(g, v);
            const SparseMatrix& tv = rep.op(pv);
            record_matrix_deviation(ck1, space, tv * tv, tv, m, "T_v idempotent at " + g.vertex_name(v));
            for (VertexId w = 0; w < g.vertex_count(); ++w) {
                if (v == w) continue;
                record_matrix_deviation(ck1, space, rep.op(pv) * rep.op(Path(g, w)),
                                        SparseMatrix(space.dim(), space.dim()),
                                        m, "T_v T_w orthogonality");
            }
            total = total + tv;
        }
        record_matrix_deviation(ck1, space, total, SparseMatrix::identity(space.dim()), m,
                                "sum of vertex projections");
    }
    finalize_record(ck1, tol);

    CheckRecord ck2{"CK2", m};
    for (const Path& lam : family) {
        for (const Path& nu : family) {
            if (lam.source() != nu.range()) continue;
            Degree total = degree_add(lam.degree(), nu.degree());
            if (!degree_leq(total, rep.cap())) continue;
            int sub = m - degree_max(nu.degree());
            ck2.subspace_depth = std::min(ck2.subspace_depth == 0 ? sub : ck2.subspace_depth, sub);
            record_matrix_deviation(ck2, space, rep.op(lam) * rep.op(nu),
                                    rep.op(compose(lam, nu)), sub,
                                    "CK2 at (" + lam.str() + "," + nu.str() + ")");
        }
    }
    if (ck2.subspace_depth == 0) ck2.subspace_depth = m;
    finalize_record(ck2, tol);

    CheckRecord ck3{"CK3", m};
    for (const Path& lam : family) {
        int sub = m - degree_max(lam.degree());
        ck3.subspace_depth = std::min(ck3.subspace_depth, sub);
        record_matrix_deviation(ck3, space, rep.op_adjoint(lam) * rep.op(lam),
                                rep.op(Path(g, lam.source())), sub, "CK3 at " + lam.str());
    }
    finalize_record(ck3, tol);

    CheckRecord ck4{"CK4", m};
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (const Degree& n : degrees_upto_cap(g.k(), rep.cap())) {
            if (degree_is_zero(n)) continue;
            SparseMatrix sum(space.dim(), space.dim());
            for (const Path& lam : paths_from(g, v, n))
                sum = sum + rep.op(lam) * rep.op_adjoint(lam);
            record_matrix_deviation(ck4, space, rep.op(Path(g, v)), sum, m,
                                    "CK4 at " + g.vertex_name(v) + " degree " + degree_str(n));
        }
    }
    finalize_record(ck4, tol);

    // range projections: T_lambda T_lambda^* is multiplication by chi_{Z(lambda)}
    CheckRecord range{"range-projection", m};
    for (const Path& lam : family) {
        SparseMatrix mask(space.dim(), space.dim());
        for (int i = 0; i < space.dim(); ++i)
            if (cylinder_subset(Cylinder(space.basis()[i]), Cylinder(lam)))
                mask.set(i, i, Scalar::one());
        record_matrix_deviation(range, space, rep.op(lam) * rep.op_adjoint(lam), mask, m,
                                "range of " + lam.str());
    }
    finalize_record(range, tol);

    // partial isometries: T T* T = T
    CheckRecord pi{"partial-isometry", m};
    for (const Path& lam : family) {
        int sub = m - degree_max(lam.degree());
        pi.subspace_depth = std::min(pi.subspace_depth, sub);
        const SparseMatrix& t = rep.op(lam);
        record_matrix_deviation(pi, space, t * rep.op_adjoint(lam) * t, t, sub,
                                "T T* T at " + lam.str());
    }
    finalize_record(pi, tol);

    CheckRecord lmin{"lambda-min", m};
    for (const Path& lam : family) {
        for (const Path& eta : family) {
            int sub = m - degree_max(lam.degree()) - degree_max(eta.degree());
            if (sub < 0) continue;
            lmin.subspace_depth = std::min(lmin.subspace_depth == 0 ? sub : lmin.subspace_depth, sub);
            SparseMatrix lhs = rep.op_adjoint(lam) * rep.op(eta);
            SparseMatrix rhs(space.dim(), space.dim());
            bool representable = true;
            for (const auto& [alpha, beta] : lambda_min(lam, eta)) {
                if (!degree_leq(alpha.degree(), rep.cap()) ||
                    !degree_leq(beta.degree(), rep.cap())) {
                    representable = false;
                    break;
                }
                rhs = rhs + rep.op(alpha) * rep.op_adjoint(beta);
            }
            if (!representable) continue;
            record_matrix_deviation(lmin, space, lhs, rhs, sub,
                                    "T_" + lam.str() + "^* T_" + eta.str());
        }
    }
    if (lmin.subspace_depth == 0) lmin.subspace_depth = m;
    finalize_record(lmin, tol);

    out.checks = {ck1, ck2, ck3, ck4, range, pi, lmin};
    out.pass = true;
    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

VerifyReport pvm_checks(const TruncatedRepresentation& rep, double tol) {
    VerifyReport out;
    const TruncatedSpace& space = rep.space();
    const KGraph& g = space.graph();
    int m = space.ambient_depth();
    auto family = rep.family();
    Degree ones = degree_uniform(g.k(), 1);

    CheckRecord additivity{"pvm-additivity", m};
    for (const Path& lam : family) {
        if (!degree_leq(degree_add(lam.degree(), ones), rep.cap())) continue;
        SparseMatrix sum(space.dim(), space.dim());
        for (const Path& eta : paths_from(g, lam.source(), ones))
            sum = sum + rep.pvm(compose(lam, eta));
        record_matrix_deviation(additivity, space, rep.pvm(lam), sum, m,
                                "P(Z(" + lam.str() + "))");
    }
    finalize_record(additivity, tol);

    // (a) t_lambda P(Z(eta)) t_lambda^* = P(Z(lambda eta))
    CheckRecord pa{"pvm-a", m};
    for (const Path& lam : family) {
        for (const Path& eta : family) {
            if (lam.source() != eta.range()) continue;
            if (!degree_leq(degree_add(lam.degree(), eta.degree()), rep.cap())) continue;
            int sub = m - degree_max(lam.degree()) - degree_max(eta.degree());
            if (sub < 0) continue;
            pa.subspace_depth = std::min(pa.subspace_depth == 0 ? sub : pa.subspace_depth, sub);
            record_matrix_deviation(pa, space,
                                    rep.op(lam) * rep.pvm(eta) * rep.op_adjoint(lam),
                                    rep.pvm(compose(lam, eta)), sub,
                                    "(a) at (" + lam.str() + "," + eta.str() + ")");
        }
    }
    if (pa.subspace_depth == 0) pa.subspace_depth = m;
    finalize_record(pa, tol);

    // (b) with r(eta): sum over lambda in r(eta)Lambda^n of
    // t_lambda P(sigma_lambda^{-1} Z(eta)) t_lambda^* = P(Z(eta))
    CheckRecord pb{"pvm-b(r-of-eta)", m};
    for (const Path& eta : family) {
        for (const Degree& n : degrees_upto_cap(g.k(), rep.cap())) {
            if (degree_is_zero(n)) continue;
            if (!degree_leq(degree_join(n, eta.degree()), rep.cap())) continue;
            int sub = m - degree_max(n) - degree_max(eta.degree());
            if (sub < 0) continue;
            pb.subspace_depth = std::min(pb.subspace_depth == 0 ? sub : pb.subspace_depth, sub);
            SparseMatrix sum(space.dim(), space.dim());
            for (const Path& lam : paths_from(g, eta.range(), n)) {
                SparseMatrix inner(space.dim(), space.dim());
                for (const Cylinder& c : prefix_preimage(lam, Cylinder(eta)))
                    inner = inner + rep.pvm(c.base);
                sum = sum + rep.op(lam) * inner * rep.op_adjoint(lam);
            }
            record_matrix_deviation(pb, space, sum, rep.pvm(eta), sub,
                                    "(b) at " + eta.str() + " n=" + degree_str(n));
        }
    }
    if (pb.subspace_depth == 0) pb.subspace_depth = m;
    finalize_record(pb, tol);

    // (c) t_lambda P(sigma_lambda^{-1}(Z(eta))) = P(Z(eta)) t_lambda for r(lambda)=r(eta)
    CheckRecord pc{"pvm-c", m};
    for (const Path& lam : family) {
        for (const Path& eta : family) {
            if (lam.range() != eta.range()) continue;
            int sub = m - degree_max(lam.degree()) - degree_max(eta.degree());
            if (sub < 0) continue;
            bool representable = true;
            SparseMatrix inner(space.dim(), space.dim());
            for (const Cylinder& c : prefix_preimage(lam, Cylinder(eta))) {
                if (degree_max(c.base.degree()) > m) representable = false;
                else inner = inner + rep.pvm(c.base);
            }
            if (!representable) continue;
            pc.subspace_depth = std::min(pc.subspace_depth == 0 ? sub : pc.subspace_depth, sub);
            record_matrix_deviation(pc, space, rep.op(lam) * inner, rep.pvm(eta) * rep.op(lam),
                                    sub, "(c) at (" + lam.str() + "," + eta.str() + ")");
        }
    }
    if (pc.subspace_depth == 0) pc.subspace_depth = m;
    finalize_record(pc, tol);

    // (d) t_lambda P(Z(eta)) = P((sigma^n)^{-1} Z(eta)) t_lambda
    CheckRecord pd{"pvm-d", m};
    for (const Path& lam : family) {
        for (const Path& eta : family) {
            int sub = m - degree_max(lam.degree()) - degree_max(eta.degree());
            if (sub < 0) continue;
            bool representable = true;
            SparseMatrix pre(space.dim(), space.dim());
            for (const Cylinder& c : shift_preimage(lam.degree(), Cylinder(eta))) {
                if (degree_max(c.base.degree()) > m) representable = false;
                else pre = pre + rep.pvm(c.base);
            }
            if (!representable) continue;
            pd.subspace_depth = std::min(pd.subspace_depth == 0 ? sub : pd.subspace_depth, sub);
            record_matrix_deviation(pd, space, rep.op(lam) * rep.pvm(eta), pre * rep.op(lam),
                                    sub, "(d) at (" + lam.str() + "," + eta.str() + ")");
        }
    }
    if (pd.subspace_depth == 0) pd.subspace_depth = m;
    finalize_record(pd, tol);

    out.checks = {additivity, pa, pb, pc, pd};
    out.pass = true;
    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

CylinderMeasure measure_from_state(const TruncatedRepresentation& rep,
                                   const std::vector<Scalar>& xi) {
    const TruncatedSpace& space = rep.space();
    std::map<Path, Scalar> values;
    for (int i = 0; i < space.dim(); ++i)
        values.emplace(space.basis()[i], xi[i] * xi[i] * space.weights()[i]);
    return table_measure(space.graph(), space.ambient_depth(), values);
}

MonicSpanReport monic_span_check(const TruncatedRepresentation& rep,
                                 const std::vector<Scalar>& xi) {
    const TruncatedSpace& space = rep.space();
    const KGraph& g = space.graph();
    int m = space.ambient_depth();
    // P(Z(lambda)) xi for every lambda with d(lambda) <= (M,...,M): masked
    // copies of xi (double precision suffices for a rank count)
    std::vector<std::vector<double>> rows;
    for (const Degree& n : degrees_upto_cap(g.k(), degree_uniform(g.k(), m))) {
        for (const Path& lam : enumerate_paths(g, n)) {
            std::vector<double> v(space.dim(), 0.0);
            bool nonzero = false;
            for (int i = 0; i < space.dim(); ++i) {
                if (cylinder_subset(Cylinder(space.basis()[i]), Cylinder(lam))) {
                    v[i] = xi[i].to_double();
                    if (v[i] != 0.0) nonzero = true;
                }
            }
            if (nonzero) rows.push_back(std::move(v));
        }
    }
    // gaussian elimination
    int rank = 0;
    size_t cols = space.dim();
    for (size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        int pivot = -1;
        double best = 1e-9;
        for (size_t r = rank; r < rows.size(); ++r) {
            if (std::abs(rows[r][c]) > best) {
                best = std::abs(rows[r][c]);
                pivot = static_cast<int>(r);
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == rank || rows[r][c] == 0.0) continue;
            double factor = rows[r][c] / rows[rank][c];
            for (size_t cc = c; cc < cols; ++cc) rows[r][cc] -= factor * rows[rank][cc];
        }
        ++rank;
    }
    MonicSpanReport rep_out;
    rep_out.rank = rank;
    rep_out.dim = space.dim();
    rep_out.monic_at_depth = (rank == space.dim());
    return rep_out;
}

CommutantReport commutant_invariants(const CylinderMeasure& mu, int depth) {
    const KGraph& g = mu.graph();
    CommutantReport rep;
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth)))
        if (!mu.mass(atom).is_zero()) rep.atoms.push_back(atom);
    std::map<Path, int> idx;
    for (size_t i = 0; i < rep.atoms.size(); ++i) idx[rep.atoms[i]] = static_cast<int>(i);

    std::vector<int> parent(rep.atoms.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    Degree res = degree_uniform(g.k(), depth);
    for (int c = 1; c <= g.k(); ++c) {
        Degree fine = degree_add(res, degree_e(g.k(), c));
        for (const Path& zeta : enumerate_paths(g, fine)) {
            if (mu.mass(zeta).is_zero()) continue;
            // h(zeta truncated) = h(zeta shifted): merge the two atoms
            Path trunc = factorize(zeta, res).first;
            Path tail = factorize(zeta, degree_e(g.k(), c)).second;
            auto it1 = idx.find(trunc), it2 = idx.find(tail);
            if (it1 == idx.end() || it2 == idx.end()) continue;
            parent[find(it1->second)] = find(it2->second);
        }
    }
    std::map<int, std::vector<int>> classes;
    for (size_t i = 0; i < rep.atoms.size(); ++i) classes[find(static_cast<int>(i))].push_back(static_cast<int>(i));
    for (const auto& [root, members] : classes) {
        std::vector<Path> cls;
        std::vector<Scalar> ind(rep.atoms.size(), Scalar::zero());
        for (int i : members) {
            cls.push_back(rep.atoms[i]);
            ind[i] = Scalar::one();
        }
        rep.classes.push_back(std::move(cls));
        rep.basis_vectors.push_back(std::move(ind));
    }
    rep.dimension = static_cast<int>(rep.classes.size());
    return rep;
}

EquivalenceReport equivalence_check(const ProjectiveSystem& sys_s,
                                    const ProjectiveSystem& sys_t, int depth, double tol) {
    EquivalenceReport rep;
    const KGraph& g = sys_t.graph();
    if (&sys_s.graph() != &g) throw malformed_spec("systems on different graphs");
    const CylinderMeasure& mu_s = sys_s.measure();
    const CylinderMeasure& mu_t = sys_t.measure();

    auto rn = radon_nikodym(mu_s, mu_t, depth);
    if (!rn.singular_atoms.empty()) {
        rep.verdict = "measure-obstructed";
        for (const Path& a : rn.singular_atoms)
            if (rep.witnesses.size() < 8)
                rep.witnesses.push_back("singular atom " + a.str());
        return rep;
    }
    auto hel = hellinger_affinity(mu_s, mu_t, std::max(depth + 2, 6));
    if (hel.verdict == "singular-likely") {
        rep.verdict = "measure-obstructed";
        rep.witnesses.push_back("Hellinger trend singular-likely");
        return rep;
    }

    CylinderFunction habs = rn.density.sqrt();

    // per-atom signs solved by propagation along the cocycle constraints
    auto atoms = enumerate_paths(g, degree_uniform(g.k(), depth));
    std::map<Path, int> idx;
    for (size_t i = 0; i < atoms.size(); ++i) idx[atoms[i]] = static_cast<int>(i);
    std::vector<int> parent(atoms.size()), rel(atoms.size(), 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::pair<int, int>(int)> find = [&](int x) -> std::pair<int, int> {
        if (parent[x] == x) return {x, 1};
        auto [root, sign] = find(parent[x]);
        parent[x] = root;
        rel[x] *= sign;
        return {root, rel[x]};
    };
    auto unite = [&](int a, int b, int sign) -> bool {
        auto [ra, sa] = find(a);
        auto [rb, sb] = find(b);
        if (ra == rb) return sa * sign == sb;
        parent[ra] = rb;
        rel[ra] = sa * sign * sb;
        return true;
    };

    Degree cap = sys_t.cap();
    if (!degree_leq(cap, sys_s.cap())) cap = sys_s.cap();
    for (const Path& lam : sys_t.family()) {
        if (!degree_leq(lam.degree(), cap)) continue;
        int d2 = depth + degree_max(lam.degree());
        if (sys_t.cocycle(lam).depth() > d2 || sys_s.cocycle(lam).depth() > d2)
            d2 = std::max(sys_t.cocycle(lam).depth(), sys_s.cocycle(lam).depth());
        for (const Path& fine : enumerate_paths(g, degree_uniform(g.k(), d2))) {
            Scalar ft = sys_t.cocycle(lam).value(fine);
            Scalar fs = sys_s.cocycle(lam).value(fine);
            if (mu_t.mass(fine).is_zero()) continue;
            if (ft.is_zero() != fs.is_zero()) {
                rep.verdict = "cocycle-obstructed";
                rep.witnesses.push_back("support mismatch of f_" + lam.str() + " at " +
                                        fine.str());
                return rep;
            }
            if (ft.is_zero()) continue;
            Path trunc = factorize(fine, degree_uniform(g.k(), depth)).first;
            Path tail = factorize(fine, lam.degree()).second;
            Path tail_atom = factorize(tail, degree_uniform(g.k(), depth)).first;
            Scalar h_trunc = habs.value(trunc);
            Scalar h_tail = habs.value(tail_atom);
            if (h_trunc.is_zero() || h_tail.is_zero()) continue;
            // f^S = s(tail)/s(trunc) * (h_tail/h_trunc) * f^T: the ratio must be +-1
            Scalar ratio = fs * h_trunc / (h_tail * ft);
            Scalar dev_plus = ratio - Scalar::one();
            Scalar dev_minus = ratio + Scalar::one();
            int sign;
            if (dev_plus.is_exact() ? dev_plus.is_zero() : dev_plus.abs_double() <= tol) {
                sign = 1;
            } else if (dev_minus.is_exact() ? dev_minus.is_zero()
                                            : dev_minus.abs_double() <= tol) {
                sign = -1;
            } else {
                rep.verdict = "cocycle-obstructed";
                rep.max_deviation = std::max(rep.max_deviation,
                                             std::min(dev_plus.abs_double(),
                                                      dev_minus.abs_double()));
                rep.witnesses.push_back("modulus mismatch of f_" + lam.str() + " at " +
                                        fine.str());
                return rep;
            }
            if (!unite(idx.at(tail_atom), idx.at(trunc), sign)) {
                rep.verdict = "cocycle-obstructed";
                rep.witnesses.push_back("sign conflict at " + fine.str() + " for f_" +
                                        lam.str());
                return rep;
            }
        }
    }

    std::map<Path, Scalar> h_vals;
    for (size_t i = 0; i < atoms.size(); ++i) {
        auto [root, sign] = find(static_cast<int>(i));
        (void)root;
        Scalar v = habs.value(atoms[i]);
        h_vals.emplace(atoms[i], sign > 0 ? v : -v);
    }
    rep.h = CylinderFunction(g, depth, std::move(h_vals));
    rep.verdict = "equivalent";

    // report the residual deviation of the cocycle relation under the solved h
    for (const Path& lam : sys_t.family()) {
        if (!degree_leq(lam.degree(), cap)) continue;
        CylinderFunction transported =
            rep.h->shift_compose(lam.degree()) * sys_t.cocycle(lam).refine_to(
                std::max(sys_t.cocycle(lam).depth(), depth + degree_max(lam.degree())));
        CylinderFunction lhs = sys_s.cocycle(lam).refine_to(transported.depth()) *
                               rep.h->refine_to(transported.depth());
        CylinderFunction diff = lhs - transported;
        for (const auto& [atom, v] : diff.values()) {
            if (mu_t.mass(atom).is_zero()) continue;
            if (!v.is_zero()) {
                rep.exact = false;
                rep.max_deviation = std::max(rep.max_deviation, v.abs_double());
            }
        }
    }
    return rep;
}

CheckRecord intertwiner_check(const TruncatedRepresentation& rep_s,
                              const TruncatedRepresentation& rep_t,
                              const CylinderFunction& h, double tol) {
    const TruncatedSpace& ss = rep_s.space();
    const TruncatedSpace& st = rep_t.space();
    CheckRecord rec{"intertwiner", ss.ambient_depth()};
    if (ss.dim() != st.dim()) {
        rec.pass = false;
        rec.witnesses.push_back("spaces have different dimensions");
        return rec;
    }
    SparseMatrix w(st.dim(), ss.dim());
    for (int i = 0; i < ss.dim(); ++i) w.set(i, i, h.value(ss.basis()[i]));
    for (const Path& lam : rep_s.family()) {
        // W T^S f and T^T W f are both exact when f and h f stay below the
        // ambient depth after the shift
        int sub = ss.ambient_depth() - degree_max(lam.degree());
        if (sub < 0 || h.depth() > sub) continue;
        rec.subspace_depth = std::min(rec.subspace_depth, sub);
        SparseMatrix lhs = w * rep_s.op(lam);
        SparseMatrix rhs = rep_t.op(lam) * w;
        SparseMatrix diff = lhs - rhs;
        for (const auto& v : ss.subspace_basis(sub)) {
            auto dv = diff.apply(v);
            for (const auto& x : dv) {
                if (x.is_zero()) continue;
                rec.exact = false;
                rec.max_deviation = std::max(rec.max_deviation, x.abs_double());
                if (rec.witnesses.size() < 4)
                    rec.witnesses.push_back("W T^S != T^T W at " + lam.str());
                break;
            }
        }
    }
    rec.pass = rec.exact || rec.max_deviation <= tol;
    if (rec.pass) rec.witnesses.clear();
    return rec;
}

} // namespace kgr
