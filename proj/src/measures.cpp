#include "kgr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace kgr {

namespace detail {

class MeasureImpl {
public:
    MeasureImpl(const KGraph& g, std::string kind, bool degenerate = false)
        : g_(&g), kind_(std::move(kind)), degenerate_(degenerate) {}
    virtual ~MeasureImpl() = default;

    const KGraph& graph() const { return *g_; }
    const std::string& kind() const { return kind_; }
    bool degenerate() const { return degenerate_; }

    virtual Scalar mass(const Path& lambda) const = 0;

protected:
    const KGraph* g_;
    std::string kind_;
    bool degenerate_;
};

namespace {

class BernoulliImpl : public MeasureImpl {
public:
    BernoulliImpl(const KGraph& g, std::map<VertexId, Scalar> mass, std::map<EdgeId, Scalar> w,
                  bool degenerate)
        : MeasureImpl(g, "bernoulli", degenerate), mass_(std::move(mass)), w_(std::move(w)) {}

    Scalar mass(const Path& lambda) const override {
        Scalar v = mass_.at(lambda.range());
        for (EdgeId e : lambda.edges()) v *= w_.at(e);
        return v;
    }

private:
    std::map<VertexId, Scalar> mass_;
    std::map<EdgeId, Scalar> w_;
};

class MarkovImpl : public MeasureImpl {
public:
    MarkovImpl(const KGraph& g, int color, std::vector<Scalar> st,
               std::vector<std::vector<Scalar>> tr, std::vector<EdgeId> alphabet,
               std::map<EdgeId, int> letter_of)
        : MeasureImpl(g, "markov"),
          color_(color),
          stationary_(std::move(st)),
          transition_(std::move(tr)),
          alphabet_(std::move(alphabet)),
          letter_of_(std::move(letter_of)) {}

    Scalar mass(const Path& lambda) const override {
        const auto& block = lambda.blocks()[color_ - 1];
        if (block.empty()) {
            // Cylinders with no alphabet letter are determined by the forced
            // edges: the measure is the total stationary mass.
            Scalar v = Scalar::zero();
            for (const Scalar& s : stationary_) v += s;
            return v;
        }
        Scalar v = stationary_[letter_of_.at(block[0])];
        for (size_t t = 0; t + 1 < block.size(); ++t)
            v *= transition_[letter_of_.at(block[t])][letter_of_.at(block[t + 1])];
        return v;
    }

private:
    int color_;
    std::vector<Scalar> stationary_;
    std::vector<std::vector<Scalar>> transition_;
    std::vector<EdgeId> alphabet_;
    std::map<EdgeId, int> letter_of_;
};

class PerronFrobeniusImpl : public MeasureImpl {
public:
    PerronFrobeniusImpl(const KGraph& g, std::vector<double> rho, std::vector<double> kappa)
        : MeasureImpl(g, "perron-frobenius"), rho_(std::move(rho)), kappa_(std::move(kappa)) {}

    Scalar mass(const Path& lambda) const override {
        Degree d = lambda.degree();
        double v = kappa_[lambda.source()];
        for (int c = 0; c < graph().k(); ++c) v *= std::pow(rho_[c], -d[c]);
        return Scalar::approx(v);
    }

private:
    std::vector<double> rho_;
    std::vector<double> kappa_;
};

class TableImpl : public MeasureImpl {
public:
    TableImpl(const KGraph& g, int depth, std::map<Path, Scalar> values)
        : MeasureImpl(g, "table"), depth_(depth), values_(std::move(values)) {}

    Scalar mass(const Path& lambda) const override {
        Degree d = lambda.degree();
        Degree res = degree_uniform(graph().k(), depth_);
        if (degree_leq(d, res)) {
            Scalar v = Scalar::zero();
            for (const Path& atom : paths_from(graph(), lambda.source(), degree_sub(res, d))) {
                auto it = values_.find(compose(lambda, atom));
                if (it != values_.end()) v += it->second;
            }
            return v;
        }
        // beyond resolution: split uniformly one edge at a time
        for (int c = 1; c <= graph().k(); ++c) {
            if (d[c - 1] > depth_) {
                auto [init, last] = factorize(lambda, degree_sub(d, degree_e(graph().k(), c)));
                long long siblings =
                    static_cast<long long>(graph().edges_from(init.source(), c).size());
                return mass(init) * (Scalar(Rational(1, siblings)));
            }
        }
        throw numeric_error("unreachable table measure case");
    }

    int resolution() const { return depth_; }

private:
    int depth_;
    std::map<Path, Scalar> values_;
};

class DensityImpl : public MeasureImpl {
public:
    DensityImpl(const KGraph& g, CylinderMeasure base, CylinderFunction g1)
        : MeasureImpl(g, "density"), base_(std::move(base)), g1_(std::move(g1)) {}

    Scalar mass(const Path& lambda) const override {
        Degree d = lambda.degree();
        Degree res = degree_uniform(graph().k(), g1_.depth());
        if (degree_leq(res, d)) return g1_.value(lambda) * base_.mass(lambda);
        Scalar v = Scalar::zero();
        Degree ext(graph().k(), 0);
        for (int c = 0; c < graph().k(); ++c) ext[c] = std::max(0, g1_.depth() - d[c]);
        for (const Path& tail : paths_from(graph(), lambda.source(), ext)) {
            Path fine = compose(lambda, tail);
            v += g1_.value(fine) * base_.mass(fine);
        }
        return v;
    }

private:
    CylinderMeasure base_;
    CylinderFunction g1_;
};

class ScaledImpl : public MeasureImpl {
public:
    ScaledImpl(const KGraph& g, CylinderMeasure base, Scalar c)
        : MeasureImpl(g, base.kind(), base.degenerate()), base_(std::move(base)), c_(std::move(c)) {}
    Scalar mass(const Path& lambda) const override { return c_ * base_.mass(lambda); }

private:
    CylinderMeasure base_;
    Scalar c_;
};

class SumImpl : public MeasureImpl {
public:
    SumImpl(const KGraph& g, CylinderMeasure a, CylinderMeasure b)
        : MeasureImpl(g, "sum"), a_(std::move(a)), b_(std::move(b)) {}
    Scalar mass(const Path& lambda) const override { return a_.mass(lambda) + b_.mass(lambda); }

private:
    CylinderMeasure a_, b_;
};

class PushPreimageImpl : public MeasureImpl {
public:
    PushPreimageImpl(const KGraph& g, CylinderMeasure base, Path lambda)
        : MeasureImpl(g, "pushforward-preimage"), base_(std::move(base)), lambda_(std::move(lambda)) {}

    Scalar mass(const Path& eta) const override {
        Scalar v = Scalar::zero();
        for (const auto& [alpha, beta] : lambda_min(lambda_, eta)) v += base_.mass(alpha);
        return v;
    }

private:
    CylinderMeasure base_;
    Path lambda_;
};

class PushImageImpl : public MeasureImpl {
public:
    PushImageImpl(const KGraph& g, CylinderMeasure base, Path lambda)
        : MeasureImpl(g, "pushforward-image"), base_(std::move(base)), lambda_(std::move(lambda)) {}

    Scalar mass(const Path& eta) const override {
        if (lambda_.source() != eta.range()) return Scalar::zero();
        return base_.mass(compose(lambda_, eta));
    }

private:
    CylinderMeasure base_;
    Path lambda_;
};

} // namespace

} // namespace detail

const KGraph& CylinderMeasure::graph() const { return impl_->graph(); }
const std::string& CylinderMeasure::kind() const { return impl_->kind(); }
bool CylinderMeasure::degenerate() const { return impl_->degenerate(); }
Scalar CylinderMeasure::mass(const Path& lambda) const { return impl_->mass(lambda); }

Scalar CylinderMeasure::total() const {
    Scalar v = Scalar::zero();
    for (VertexId u = 0; u < graph().vertex_count(); ++u) v += mass(Path(graph(), u));
    return v;
}

CylinderMeasure bernoulli_measure(const KGraph& g,
                                  const std::map<VertexId, Scalar>& vertex_mass,
                                  const std::map<EdgeId, Scalar>& edge_weight) {
    bool degenerate = false;
    std::map<VertexId, Scalar> mass = vertex_mass;
    std::map<EdgeId, Scalar> w = edge_weight;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto it = mass.find(v);
        if (it == mass.end()) throw malformed_spec("missing vertex mass for '" + g.vertex_name(v) + "'");
        if (it->second.to_double() < 0)
            throw malformed_spec("negative vertex mass at '" + g.vertex_name(v) + "'");
        if (it->second.is_zero()) degenerate = true;
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        auto it = w.find(e);
        if (it == w.end()) throw malformed_spec("missing edge weight for '" + g.edge(e).name + "'");
        if (it->second.to_double() < 0)
            throw weight_row_not_stochastic("negative weight on edge '" + g.edge(e).name + "'");
        if (it->second.is_zero()) degenerate = true;
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (int c = 1; c <= g.k(); ++c) {
            Scalar row = Scalar::zero();
            for (EdgeId e : g.edges_from(v, c)) row += w.at(e);
            Scalar dev = row - Scalar::one();
            if (!(dev.is_exact() ? dev.is_zero() : dev.abs_double() <= 1e-12))
                throw weight_row_not_stochastic("weights on vertex '" + g.vertex_name(v) +
                                                "' color " + std::to_string(c) + " sum to " +
                                                row.str());
        }
    }
    // square compatibility keeps the edge-weight product rewrite-invariant
    for (int i = 1; i <= g.k(); ++i) {
        for (int j = i + 1; j <= g.k(); ++j) {
            for (EdgeId f : g.edges_of_color(i)) {
                for (EdgeId gg : g.edges_of_color(j)) {
                    if (g.edge(f).source != g.edge(gg).range) continue;
                    auto [gp, fp] = g.square_forward(f, gg);
                    Scalar dev = w.at(f) * w.at(gg) - w.at(gp) * w.at(fp);
                    if (!(dev.is_exact() ? dev.is_zero() : dev.abs_double() <= 1e-12))
                        throw square_incompatible_weights(
                            "w(" + g.edge(f).name + ")w(" + g.edge(gg).name + ") != w(" +
                            g.edge(gp).name + ")w(" + g.edge(fp).name + ")");
                }
            }
        }
    }
    return CylinderMeasure(std::make_shared<detail::BernoulliImpl>(g, std::move(mass), std::move(w),
                                                                   degenerate));
}

CylinderMeasure markov_measure(const KGraph& g, int alphabet_color,
                               const std::vector<Scalar>& stationary,
                               const std::vector<std::vector<Scalar>>& transition,
                               const std::vector<EdgeId>& alphabet_in) {
    if (alphabet_color < 1 || alphabet_color > g.k())
        throw malformed_spec("alphabet color out of range");
    // sequentializable: every vertex has exactly one edge of each color != i
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (int c = 1; c <= g.k(); ++c) {
            if (c == alphabet_color) continue;
            if (g.edges_from(v, c).size() != 1)
                throw not_sequentializable("vertex '" + g.vertex_name(v) + "' has " +
                                           std::to_string(g.edges_from(v, c).size()) +
                                           " color-" + std::to_string(c) + " edges");
        }
    }
    std::vector<EdgeId> alphabet =
        alphabet_in.empty() ? g.edges_of_color(alphabet_color) : alphabet_in;
    size_t n = alphabet.size();
    if (stationary.size() != n || transition.size() != n)
        throw malformed_spec("Markov data size does not match the alphabet");
    for (const auto& row : transition)
        if (row.size() != n) throw malformed_spec("Markov transition matrix is not square");

    for (size_t j = 0; j < n; ++j) {
        if (stationary[j].to_double() <= 0)
            throw not_stochastic("stationary vector entry " + std::to_string(j) + " is not > 0");
        Scalar row = Scalar::zero();
        for (size_t l = 0; l < n; ++l) {
            if (transition[j][l].to_double() <= 0)
                throw not_stochastic("transition entry (" + std::to_string(j) + "," +
                                     std::to_string(l) + ") is not > 0");
            row += transition[j][l];
        }
        Scalar dev = row - Scalar::one();
        if (!(dev.is_exact() ? dev.is_zero() : dev.abs_double() <= 1e-12))
            throw not_stochastic("transition row " + std::to_string(j) + " sums to " + row.str());
    }
    for (size_t l = 0; l < n; ++l) {
        Scalar col = Scalar::zero();
        for (size_t j = 0; j < n; ++j) col += stationary[j] * transition[j][l];
        Scalar dev = col - stationary[l];
        if (!(dev.is_exact() ? dev.is_zero() : dev.abs_double() <= 1e-12))
            throw not_stationary("stationary vector fails lambda*T = lambda at letter " +
                                 std::to_string(l));
    }

    // With T fully positive, every letter must be able to follow every letter:
    // the forced walk from s(letter) through one full round of the other
    // colors must land on the common range of all letters.
    std::map<EdgeId, int> letter_of;
    for (size_t j = 0; j < n; ++j) letter_of[alphabet[j]] = static_cast<int>(j);
    VertexId common_range = g.edge(alphabet[0]).range;
    for (EdgeId e : alphabet)
        if (g.edge(e).range != common_range)
            throw not_sequentializable("alphabet letters do not share a range vertex, so the "
                                       "fully positive transition matrix cannot be realized");
    auto forced_walk = [&](VertexId v, int c_from, int c_to) {
        for (int c = c_from; c <= c_to; ++c) {
            if (c == alphabet_color) continue;
            v = g.edge(g.edges_from(v, c)[0]).source;
        }
        return v;
    };
    for (EdgeId e : alphabet) {
        VertexId u = forced_walk(g.edge(e).source, alphabet_color + 1, g.k());
        u = forced_walk(u, 1, alphabet_color - 1);
        if (u != common_range)
            throw not_sequentializable("letter '" + g.edge(e).name +
                                       "' cannot be followed by every letter");
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (forced_walk(v, 1, alphabet_color - 1) != common_range)
            throw not_sequentializable("vertex '" + g.vertex_name(v) +
                                       "' does not reach the alphabet range");
    }

    auto impl = std::make_shared<detail::MarkovImpl>(g, alphabet_color, stationary, transition,
                                                     alphabet, std::move(letter_of));
    CylinderMeasure mu(impl);
    auto rep = verify_consistency(mu, 3, 1e-12);
    if (!rep.pass)
        throw inconsistent_measure("Markov data is not Kolmogorov-consistent: " +
                                   (rep.witnesses.empty() ? std::string("?") : rep.witnesses[0]));
    return mu;
}

CylinderMeasure perron_frobenius_measure(const KGraph& g) {
    if (!g.strongly_connected())
        throw not_strongly_connected("graph is not strongly connected");
    int n = g.vertex_count();
    // power iteration on the sum of the vertex matrices; the PF eigenvector
    // of the sum is the common eigenvector of the commuting family
    std::vector<std::vector<long long>> s(n, std::vector<long long>(n, 0));
    for (int c = 1; c <= g.k(); ++c) {
        auto a = g.vertex_matrix(c);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s[i][j] += a[i][j];
    }
    std::vector<double> kappa(n, 1.0 / n);
    for (int it = 0; it < 20000; ++it) {
        std::vector<double> next(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) next[i] += static_cast<double>(s[i][j]) * kappa[j];
        double sum = 0;
        for (double x : next) sum += x;
        for (double& x : next) x /= sum;
        double delta = 0;
        for (int i = 0; i < n; ++i) delta = std::max(delta, std::abs(next[i] - kappa[i]));
        kappa = next;
        if (delta < 1e-15) break;
    }
    std::vector<double> rho(g.k());
    for (int c = 1; c <= g.k(); ++c) {
        auto a = g.vertex_matrix(c);
        double r = 0;
        for (int i = 0; i < n; ++i) {
            double av = 0;
            for (int j = 0; j < n; ++j) av += static_cast<double>(a[i][j]) * kappa[j];
            double ratio = av / kappa[i];
            if (i == 0) r = ratio;
            else if (std::abs(ratio - r) > 1e-9 * std::max(1.0, r))
                throw numeric_error("vertex matrices do not share the Perron eigenvector");
        }
        rho[c - 1] = r;
    }
    return CylinderMeasure(std::make_shared<detail::PerronFrobeniusImpl>(g, std::move(rho),
                                                                         std::move(kappa)));
}

CylinderMeasure table_measure(const KGraph& g, int depth, const std::map<Path, Scalar>& values) {
    Degree res = degree_uniform(g.k(), depth);
    for (const auto& [p, v] : values) {
        if (p.degree() != res)
            throw malformed_spec("table key " + p.str() + " does not have depth " +
                                 std::to_string(depth));
        if (v.to_double() < 0) throw malformed_spec("negative table value at " + p.str());
    }
    return CylinderMeasure(std::make_shared<detail::TableImpl>(g, depth, values));
}

CylinderMeasure density_measure(const CylinderMeasure& mu, const CylinderFunction& g1) {
    if (!g1.nonnegative()) throw inconsistent_density("density must be nonnegative");
    return CylinderMeasure(std::make_shared<detail::DensityImpl>(mu.graph(), mu, g1));
}

CylinderMeasure scale_measure(const CylinderMeasure& mu, const Scalar& c) {
    if (c.to_double() < 0) throw malformed_spec("measure scale must be nonnegative");
    return CylinderMeasure(std::make_shared<detail::ScaledImpl>(mu.graph(), mu, c));
}

CylinderMeasure sum_measure(const CylinderMeasure& a, const CylinderMeasure& b) {
    if (&a.graph() != &b.graph()) throw malformed_spec("sum of measures on different graphs");
    return CylinderMeasure(std::make_shared<detail::SumImpl>(a.graph(), a, b));
}

CylinderMeasure pushforward_prefix(const CylinderMeasure& mu, const Path& lambda,
                                   PushDirection dir) {
    if (dir == PushDirection::Preimage)
        return CylinderMeasure(std::make_shared<detail::PushPreimageImpl>(mu.graph(), mu, lambda));
    return CylinderMeasure(std::make_shared<detail::PushImageImpl>(mu.graph(), mu, lambda));
}

ConsistencyReport verify_consistency(const CylinderMeasure& mu, int max_total_degree, double tol) {
    ConsistencyReport rep;
    const KGraph& g = mu.graph();
    std::vector<Degree> degrees;
    std::function<void(Degree&, int, int)> gen = [&](Degree& d, int c, int left) {
        if (c == g.k()) {
            degrees.push_back(d);
            return;
        }
        for (int t = 0; t <= left; ++t) {
            d[c] = t;
            gen(d, c + 1, left - t);
        }
        d[c] = 0;
    };
    Degree d(g.k(), 0);
    for (int total = 0; total <= max_total_degree; ++total) gen(d, 0, total);

    for (const Degree& n : degrees) {
        for (const Path& lam : enumerate_paths(g, n)) {
            Scalar m = mu.mass(lam);
            for (int c = 1; c <= g.k(); ++c) {
                Scalar sum = Scalar::zero();
                for (EdgeId e : g.edges_from(lam.source(), c))
                    sum += mu.mass(compose(lam, Path::from_edge_sequence(g, {e})));
                Scalar dev = m - sum;
                bool ok = dev.is_exact() ? dev.is_zero() : dev.abs_double() <= tol;
                if (!dev.is_zero()) rep.exact = false;
                rep.max_deviation = std::max(rep.max_deviation, dev.abs_double());
                if (!ok) {
                    rep.pass = false;
                    if (rep.witnesses.size() < 8)
                        rep.witnesses.push_back("Z(" + lam.str() + ") color " + std::to_string(c));
                }
            }
        }
    }
    return rep;
}

RadonNikodym radon_nikodym(const CylinderMeasure& mu_prime, const CylinderMeasure& mu, int depth) {
    if (&mu_prime.graph() != &mu.graph())
        throw malformed_spec("Radon-Nikodym of measures on different graphs");
    const KGraph& g = mu.graph();
    RadonNikodym out{CylinderFunction::constant(g, depth, Scalar::zero()), {}};
    std::map<Path, Scalar> vals;
    for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), depth))) {
        Scalar denom = mu.mass(atom);
        Scalar numer = mu_prime.mass(atom);
        if (!denom.is_zero()) {
            vals.emplace(atom, numer / denom);
        } else if (!numer.is_zero()) {
            out.singular_atoms.push_back(atom);
            vals.emplace(atom, Scalar::zero());
        } else {
            vals.emplace(atom, Scalar::zero());
        }
    }
    out.density = CylinderFunction(g, depth, std::move(vals));
    return out;
}

LebesgueDecomposition lebesgue_decompose(const CylinderMeasure& mu_prime,
                                         const CylinderMeasure& mu, int depth) {
    if (depth < 1) throw depth_too_small_for_closure("depth must be >= 1");
    const KGraph& g = mu.graph();
    auto atoms = enumerate_paths(g, degree_uniform(g.k(), depth));
    std::set<Path> null_atoms, b_set;
    for (const Path& atom : atoms) {
        if (mu.mass(atom).is_zero()) {
            null_atoms.insert(atom);
            if (!mu_prime.mass(atom).is_zero()) b_set.insert(atom);
        }
    }

    // Atom-granular orbit closure of the singular atoms inside the mu-null
    // region, under shift images, shift preimages and prefix images. A
    // one-step object with positive mu-mass under a null atom means the
    // orbit needs depth > D to resolve.
    Degree res = degree_uniform(g.k(), depth);
    std::vector<Path> frontier(b_set.begin(), b_set.end());
    while (!frontier.empty()) {
        Path zeta = frontier.back();
        frontier.pop_back();
        auto visit = [&](const Path& candidate) {
            if (!degree_leq(res, candidate.degree())) {
                // coarser cylinder (a shift image): spread over its atoms,
                // closing only within the mu-null region
                for (const Cylinder& cc :
                     refine(Cylinder(candidate), degree_sub(res, candidate.degree()))) {
                    if (null_atoms.count(cc.base) && !b_set.count(cc.base)) {
                        b_set.insert(cc.base);
                        frontier.push_back(cc.base);
                    }
                }
                return;
            }
            if (!mu.mass(candidate).is_zero()) {
                // The orbit leaves the mu-null region. That only obstructs the
                // decomposition when singular mu'-mass actually flows there
                // below the atom resolution.
                if (!mu_prime.mass(candidate).is_zero())
                    throw depth_too_small_for_closure(
                        "singular mass flows into " + candidate.str() +
                        " where mu > 0, below resolution " + std::to_string(depth));
                return;
            }
            Path atom = factorize(candidate, res).first;
            if (null_atoms.count(atom) && !b_set.count(atom)) {
                b_set.insert(atom);
                frontier.push_back(atom);
            }
        };
        for (int c = 1; c <= g.k(); ++c) {
            Degree ec = degree_e(g.k(), c);
            // shift image: exactly a coarser cylinder
            visit(factorize(zeta, ec).second);
            // shift preimage pieces
            for (const Path& lam : paths_into(g, zeta.range(), ec)) visit(compose(lam, zeta));
            // prefix images by single edges
            for (EdgeId e : g.edges_into(zeta.range(), c))
                visit(compose(Path::from_edge_sequence(g, {e}), zeta));
        }
    }

    LebesgueDecomposition out{CylinderFunction::constant(g, depth, Scalar::zero()),
                              CylinderMeasure(), {}, {}};
    std::map<Path, Scalar> h2_vals, nu_vals;
    for (const Path& atom : atoms) {
        if (b_set.count(atom)) {
            out.B.push_back(atom);
            nu_vals.emplace(atom, mu_prime.mass(atom));
        } else {
            out.A.push_back(atom);
            Scalar denom = mu.mass(atom);
            h2_vals.emplace(atom, denom.is_zero() ? Scalar::zero() : mu_prime.mass(atom) / denom);
        }
    }
    out.h2 = CylinderFunction(g, depth, std::move(h2_vals));
    out.nu = table_measure(g, depth, nu_vals);
    return out;
}

HellingerReport hellinger_affinity(const CylinderMeasure& mu, const CylinderMeasure& nu,
                                   int n_max, double theta, double theta_prime) {
    if (&mu.graph() != &nu.graph())
        throw malformed_spec("Hellinger affinity of measures on different graphs");
    const KGraph& g = mu.graph();
    HellingerReport rep;
    for (int n = 1; n <= n_max; ++n) {
        Scalar h = Scalar::zero();
        for (const Path& atom : enumerate_paths(g, degree_uniform(g.k(), n)))
            h += (mu.mass(atom) * nu.mass(atom)).sqrt();
        rep.affinity.push_back(h);
    }
    // trend verdict over the trailing ratios
    int window = std::min(3, n_max - 1);
    bool decaying = window > 0, stable = window > 0;
    for (int t = 0; t < window; ++t) {
        double prev = rep.affinity[n_max - 2 - t].to_double();
        double curr = rep.affinity[n_max - 1 - t].to_double();
        if (prev <= 0) {
            stable = false;
            continue;
        }
        double ratio = curr / prev;
        if (ratio > 1.0 - theta) decaying = false;
        if (ratio < 1.0 - theta) stable = false;
    }
    double last = rep.affinity.back().to_double();
    if (window == 0)
        rep.verdict = "inconclusive";
    else if (decaying || last == 0.0)
        rep.verdict = "singular-likely";
    else if (stable && last >= theta_prime)
        rep.verdict = "equivalent-likely";
    else
        rep.verdict = "inconclusive";
    return rep;
}

} // namespace kgr
