#ifndef KGR_MEASURES_HPP
#define KGR_MEASURES_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kgr/piecewise.hpp"

namespace kgr {

namespace detail {
class MeasureImpl;
}

// Kolmogorov-consistent cylinder measure on Lambda^infinity: an immutable
// evaluator lambda -> mu(Z(lambda)) >= 0. Exact rational when built from
// rational data, double otherwise. Evaluation is pure and thread-safe.
class CylinderMeasure {
public:
    CylinderMeasure() = default;
    explicit CylinderMeasure(std::shared_ptr<const detail::MeasureImpl> impl)
        : impl_(std::move(impl)) {}

    const KGraph& graph() const;
    const std::string& kind() const;
    bool degenerate() const; // some weight or mass vanished at construction

    Scalar mass(const Path& lambda) const; // mu(Z(lambda))
    Scalar total() const;                  // mu(Lambda^infinity)

    bool valid() const { return impl_ != nullptr; }

private:
    std::shared_ptr<const detail::MeasureImpl> impl_;
};

// Product measure mu(Z(lambda)) = vertex_mass(r(lambda)) * prod w(edge).
// Requires per-vertex per-color weight rows summing to 1 and square-compatible
// weights w(f)w(g) = w(g')w(f'). Zero weights/masses are allowed but flag the
// measure degenerate.
CylinderMeasure bernoulli_measure(const KGraph& g,
                                  const std::map<VertexId, Scalar>& vertex_mass,
                                  const std::map<EdgeId, Scalar>& edge_weight);

// Markov measure over the color-i edge alphabet: mu(Z(lambda)) =
// lambda_{j1} T_{j1 j2} ... T_{j_{m-1} jm} on the color-i edge string of
// lambda. The graph must be sequentializable for color i.
CylinderMeasure markov_measure(const KGraph& g, int alphabet_color,
                               const std::vector<Scalar>& stationary,
                               const std::vector<std::vector<Scalar>>& transition,
                               const std::vector<EdgeId>& alphabet = {});

// mu(Z(lambda)) = rho_1^{-d1} ... rho_k^{-dk} * kappa_{s(lambda)} with rho_i
// the spectral radius of A_i and kappa the common positive eigenvector,
// normalized to total mass 1. Requires strong connectivity.
CylinderMeasure perron_frobenius_measure(const KGraph& g);

// Explicit values on the depth-R atoms; deeper cylinders split uniformly.
CylinderMeasure table_measure(const KGraph& g, int depth,
                              const std::map<Path, Scalar>& values);

// mu'(Z(eta)) = g1-weighted measure d mu' = g1 d mu; g1 must be nonnegative.
CylinderMeasure density_measure(const CylinderMeasure& mu, const CylinderFunction& g1);

CylinderMeasure scale_measure(const CylinderMeasure& mu, const Scalar& c);
CylinderMeasure sum_measure(const CylinderMeasure& a, const CylinderMeasure& b);

// Pushforwards under the prefixing map sigma_lambda.
// preimage: (mu o sigma_lambda^{-1})(Z(eta)) = sum over Lambda^min(lambda,eta) of mu(Z(alpha))
// image:    (mu o sigma_lambda)(Z(eta)) = mu(Z(lambda*eta)) when s(lambda) = r(eta), else 0
enum class PushDirection { Preimage, Image };
CylinderMeasure pushforward_prefix(const CylinderMeasure& mu, const Path& lambda,
                                   PushDirection dir);

struct ConsistencyReport {
    bool pass = true;
    bool exact = true;          // every deviation was exactly zero
    double max_deviation = 0.0;
    std::vector<std::string> witnesses;
};

// Kolmogorov identity mu(Z(lambda)) = sum over one-edge extensions, checked
// for every lambda with |d(lambda)| <= max_total_degree and every color.
ConsistencyReport verify_consistency(const CylinderMeasure& mu, int max_total_degree,
                                     double tol);

// Finite-depth Radon-Nikodym data: value mu'(Z)/mu(Z) on depth-D atoms where
// mu > 0; atoms with mu = 0 < mu' are singular; mu = mu' = 0 gets 0.
struct RadonNikodym {
    CylinderFunction density;
    std::vector<Path> singular_atoms;
};
RadonNikodym radon_nikodym(const CylinderMeasure& mu_prime, const CylinderMeasure& mu,
                           int depth);

// d mu' = h^2 d mu + d nu at depth D, with B the orbit closure of the
// mu-null mu'-positive atoms and A its complement.
struct LebesgueDecomposition {
    CylinderFunction h2;   // supported on A
    CylinderMeasure nu;    // mu' restricted to B
    std::vector<Path> A;
    std::vector<Path> B;
};
LebesgueDecomposition lebesgue_decompose(const CylinderMeasure& mu_prime,
                                         const CylinderMeasure& mu, int depth);

// Hellinger affinity H_N = sum over depth-(N,...,N) atoms of sqrt(mu * nu),
// with a trend verdict: nonincreasing decay => singular-likely, stabilization
// above theta_prime => equivalent-likely, else inconclusive.
struct HellingerReport {
    std::vector<Scalar> affinity; // H_1 .. H_{N_max}
    std::string verdict;          // singular-likely | equivalent-likely | inconclusive
};
HellingerReport hellinger_affinity(const CylinderMeasure& mu, const CylinderMeasure& nu,
                                   int n_max, double theta = 0.02, double theta_prime = 0.5);

} // namespace kgr

#endif
