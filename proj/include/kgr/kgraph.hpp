#ifndef KGR_KGRAPH_HPP
#define KGR_KGRAPH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgr/errors.hpp"

namespace kgr {

// Degree vector in N^k.
using Degree = std::vector<int>;

Degree degree_zero(int k);
Degree degree_e(int k, int color); // basis vector for color (1-based)
Degree degree_uniform(int k, int n);
Degree degree_add(const Degree& a, const Degree& b);
Degree degree_sub(const Degree& a, const Degree& b);
Degree degree_join(const Degree& a, const Degree& b); // coordinatewise max
bool degree_leq(const Degree& a, const Degree& b);
int degree_total(const Degree& d);
int degree_max(const Degree& d);
bool degree_is_zero(const Degree& d);
std::string degree_str(const Degree& d);

using VertexId = int;
using EdgeId = int;

struct EdgeData {
    std::string name;
    int color = 1; // 1-based
    VertexId source = 0;
    VertexId range = 0;
};

class Path;

// Finite k-colored graph with factorization squares: the category Lambda.
// Composition convention: lambda*nu is defined iff s(lambda) = r(nu), with
// r(lambda*nu) = r(lambda). A square entry (f, g) -> (g', f') with
// color(f) = i < j = color(g) and s(f) = r(g) encodes f*g = g'*f'.
//
// Immutable after construction; all queries are const and thread-safe.
class KGraph {
public:
    // Construct and validate: square completeness and bijectivity, the
    // hexagon/confluence condition for k >= 3, no sources, and commuting
    // vertex matrices. Violations throw the named errors.
    KGraph(int k,
           std::vector<std::string> vertex_names,
           std::vector<EdgeData> edges,
           const std::vector<std::pair<std::pair<std::string, std::string>,
                                       std::pair<std::string, std::string>>>& squares);

    int k() const { return k_; }
    int vertex_count() const { return static_cast<int>(vertex_names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }
    VertexId vertex_id(const std::string& name) const;
    const EdgeData& edge(EdgeId e) const { return edges_[e]; }
    std::optional<EdgeId> edge_id(const std::string& name) const;

    // Edges of the given color with range v (i.e. the set vLambda^{e_color}).
    const std::vector<EdgeId>& edges_from(VertexId v, int color) const;
    // Edges of the given color with source v.
    const std::vector<EdgeId>& edges_into(VertexId v, int color) const;
    const std::vector<EdgeId>& edges_of_color(int color) const;

    // Square lookups. forward: (f, g) with color(f) < color(g), s(f) = r(g),
    // returns (g', f'). backward: (g', f') with color(g') > color(f'),
    // s(g') = r(f'), returns (f, g).
    std::pair<EdgeId, EdgeId> square_forward(EdgeId f, EdgeId g) const;
    std::pair<EdgeId, EdgeId> square_backward(EdgeId gp, EdgeId fp) const;

    // Vertex matrix A_i(v, w) = |vLambda^{e_i} w| as a dense row-major matrix.
    std::vector<std::vector<long long>> vertex_matrix(int color) const;

    bool strongly_connected() const;

    std::string describe_edge(EdgeId e) const;

private:
    void validate_squares(
        const std::vector<std::pair<std::pair<std::string, std::string>,
                                    std::pair<std::string, std::string>>>& squares);
    void check_no_sources() const;
    void check_hexagon() const;
    void check_vertex_matrices_commute() const;

    int k_;
    std::vector<std::string> vertex_names_;
    std::map<std::string, VertexId> vertex_index_;
    std::vector<EdgeData> edges_;
    std::map<std::string, EdgeId> edge_index_;
    std::vector<std::vector<std::vector<EdgeId>>> out_edges_; // [v][color-1]
    std::vector<std::vector<std::vector<EdgeId>>> in_edges_;  // [v][color-1]
    std::vector<std::vector<EdgeId>> color_edges_;            // [color-1]
    // key (f, g) colors ascending -> (g', f'); and the inverse table
    std::map<std::pair<EdgeId, EdgeId>, std::pair<EdgeId, EdgeId>> squares_;
    std::map<std::pair<EdgeId, EdgeId>, std::pair<EdgeId, EdgeId>> squares_inv_;
};

// Morphism of the category in color-sorted normal form: all color-1 edges
// first, then color-2, etc., each block a composable chain. Vertex paths
// have empty blocks. Equality of normal forms is path equality.
class Path {
public:
    // Identity morphism at a vertex.
    Path(const KGraph& g, VertexId v);
    // From sorted blocks (validated).
    Path(const KGraph& g, VertexId range, std::vector<std::vector<EdgeId>> blocks);

    // Normal form of an arbitrary composable edge sequence, resolved with
    // square rewrites (range end first).
    static Path from_edge_sequence(const KGraph& g, const std::vector<EdgeId>& seq);

    const KGraph& graph() const { return *g_; }
    Degree degree() const;
    VertexId range() const { return range_; }
    VertexId source() const;
    bool is_vertex() const;
    const std::vector<std::vector<EdgeId>>& blocks() const { return blocks_; }

    // Edge sequence in normal-form order (colors ascending).
    std::vector<EdgeId> edges() const;

    std::string str() const; // vertex name, or edge names joined with '.'

    bool operator==(const Path& o) const { return range_ == o.range_ && blocks_ == o.blocks_; }
    bool operator!=(const Path& o) const { return !(*this == o); }
    bool operator<(const Path& o) const; // lexicographic, for ordered containers

private:
    const KGraph* g_;
    VertexId range_;
    std::vector<std::vector<EdgeId>> blocks_;
};

// Category operations.

// Normal form of lambda*nu; throws NotComposable unless s(lambda) = r(nu).
Path compose(const Path& lambda, const Path& nu);

// Unique (mu, nu) with lambda = mu*nu and d(mu) = m; throws DegreeOutOfRange
// unless 0 <= m <= d(lambda).
std::pair<Path, Path> factorize(const Path& lambda, const Degree& m);

// All paths of degree n with range v.
std::vector<Path> paths_from(const KGraph& g, VertexId v, const Degree& n);
// All paths of degree n (Lambda^n), ordered deterministically.
std::vector<Path> enumerate_paths(const KGraph& g, const Degree& n);
// All paths of degree n with source v (Lambda^n v).
std::vector<Path> paths_into(const KGraph& g, VertexId v, const Degree& n);

// Lambda^min(lambda, eta): all (alpha, beta) with lambda*alpha = eta*beta of
// degree d(lambda) v d(eta).
std::vector<std::pair<Path, Path>> lambda_min(const Path& lambda, const Path& eta);

// Rainbow form of a path of cubic degree (n,...,n): the unique sequence
// f_1^1 ... f_k^1 f_1^2 ... f_k^n of single edges with d(f_i^j) = e_i.
// Throws NotCubicDegree otherwise.
std::vector<EdgeId> rainbow_form(const Path& lambda);

} // namespace kgr

#endif
