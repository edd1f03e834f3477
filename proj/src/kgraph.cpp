#include "kgr/kgraph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace kgr {

Degree degree_zero(int k) { return Degree(k, 0); }

Degree degree_e(int k, int color) {
    Degree d(k, 0);
    d[color - 1] = 1;
    return d;
}

Degree degree_uniform(int k, int n) { return Degree(k, n); }

Degree degree_add(const Degree& a, const Degree& b) {
    Degree d(a);
    for (size_t i = 0; i < d.size(); ++i) d[i] += b[i];
    return d;
}

Degree degree_sub(const Degree& a, const Degree& b) {
    Degree d(a);
    for (size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
    return d;
}

Degree degree_join(const Degree& a, const Degree& b) {
    Degree d(a);
    for (size_t i = 0; i < d.size(); ++i) d[i] = std::max(d[i], b[i]);
    return d;
}

bool degree_leq(const Degree& a, const Degree& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

int degree_total(const Degree& d) {
    int t = 0;
    for (int x : d) t += x;
    return t;
}

int degree_max(const Degree& d) {
    int m = 0;
    for (int x : d) m = std::max(m, x);
    return m;
}

bool degree_is_zero(const Degree& d) {
    for (int x : d)
        if (x != 0) return false;
    return true;
}

std::string degree_str(const Degree& d) {
    std::string s = "(";
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(d[i]);
    }
    return s + ")";
}

KGraph::KGraph(int k,
               std::vector<std::string> vertex_names,
               std::vector<EdgeData> edges,
               const std::vector<std::pair<std::pair<std::string, std::string>,
                                           std::pair<std::string, std::string>>>& squares)
    : k_(k), vertex_names_(std::move(vertex_names)), edges_(std::move(edges)) {
    if (k_ < 1) throw malformed_spec("k must be >= 1, got " + std::to_string(k_));
    if (vertex_names_.empty()) throw malformed_spec("graph has no vertices");

    for (VertexId v = 0; v < vertex_count(); ++v) {
        if (!vertex_index_.emplace(vertex_names_[v], v).second)
            throw malformed_spec("duplicate vertex name '" + vertex_names_[v] + "'");
    }
    out_edges_.assign(vertex_count(), std::vector<std::vector<EdgeId>>(k_));
    in_edges_.assign(vertex_count(), std::vector<std::vector<EdgeId>>(k_));
    color_edges_.assign(k_, {});
    for (EdgeId e = 0; e < edge_count(); ++e) {
        const EdgeData& ed = edges_[e];
        if (!edge_index_.emplace(ed.name, e).second)
            throw malformed_spec("duplicate edge name '" + ed.name + "'");
        if (ed.color < 1 || ed.color > k_)
            throw malformed_spec("edge '" + ed.name + "' has color " + std::to_string(ed.color) +
                                 " outside 1.." + std::to_string(k_));
        if (ed.source < 0 || ed.source >= vertex_count() || ed.range < 0 || ed.range >= vertex_count())
            throw malformed_spec("edge '" + ed.name + "' references an unknown vertex");
        out_edges_[ed.range][ed.color - 1].push_back(e);
        in_edges_[ed.source][ed.color - 1].push_back(e);
        color_edges_[ed.color - 1].push_back(e);
    }

    validate_squares(squares);
    check_no_sources();
    if (k_ >= 3) check_hexagon();
    check_vertex_matrices_commute();
}

VertexId KGraph::vertex_id(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) throw malformed_spec("unknown vertex '" + name + "'");
    return it->second;
}

std::optional<EdgeId> KGraph::edge_id(const std::string& name) const {
    auto it = edge_index_.find(name);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

const std::vector<EdgeId>& KGraph::edges_from(VertexId v, int color) const {
    return out_edges_[v][color - 1];
}

const std::vector<EdgeId>& KGraph::edges_into(VertexId v, int color) const {
    return in_edges_[v][color - 1];
}

const std::vector<EdgeId>& KGraph::edges_of_color(int color) const {
    return color_edges_[color - 1];
}

std::string KGraph::describe_edge(EdgeId e) const {
    const EdgeData& ed = edges_[e];
    return ed.name + "[c" + std::to_string(ed.color) + ":" + vertex_names_[ed.source] + "->" +
           vertex_names_[ed.range] + "]";
}

void KGraph::validate_squares(
    const std::vector<std::pair<std::pair<std::string, std::string>,
                                std::pair<std::string, std::string>>>& squares) {
    auto need_edge = [&](const std::string& name) -> EdgeId {
        auto id = edge_id(name);
        if (!id) throw malformed_spec("square references unknown edge '" + name + "'");
        return *id;
    };

    for (const auto& [left, right] : squares) {
        EdgeId f = need_edge(left.first);
        EdgeId g = need_edge(left.second);
        EdgeId gp = need_edge(right.first);
        EdgeId fp = need_edge(right.second);
        if (edges_[f].color >= edges_[g].color)
            throw malformed_spec("square left pair (" + left.first + "," + left.second +
                                 ") must have strictly ascending colors");
        if (edges_[f].source != edges_[g].range)
            throw malformed_spec("square left pair (" + left.first + "," + left.second +
                                 ") is not composable");
        if (edges_[gp].color != edges_[g].color || edges_[fp].color != edges_[f].color)
            throw malformed_spec("square right pair (" + right.first + "," + right.second +
                                 ") has wrong colors");
        // f*g = g'*f' forces r(g') = r(f), s(g') = r(f'), s(f') = s(g)
        if (edges_[gp].range != edges_[f].range || edges_[gp].source != edges_[fp].range ||
            edges_[fp].source != edges_[g].source)
            throw malformed_spec("square (" + left.first + "," + left.second + ") -> (" +
                                 right.first + "," + right.second + ") endpoints do not match");
        if (!squares_.emplace(std::make_pair(f, g), std::make_pair(gp, fp)).second)
            throw malformed_spec("duplicate square entry for (" + left.first + "," + left.second + ")");
        if (!squares_inv_.emplace(std::make_pair(gp, fp), std::make_pair(f, g)).second)
            throw non_bijective_squares("two squares share the right pair (" + right.first + "," +
                                        right.second + ")");
    }

    // Completeness and counting per ordered color pair.
    for (int i = 1; i <= k_; ++i) {
        for (int j = i + 1; j <= k_; ++j) {
            long long domain = 0, codomain = 0;
            for (EdgeId f : color_edges_[i - 1]) {
                for (EdgeId g : color_edges_[j - 1]) {
                    if (edges_[f].source == edges_[g].range) {
                        ++domain;
                        if (!squares_.count({f, g}))
                            throw missing_square("no square for composable pair (" +
                                                 edges_[f].name + "," + edges_[g].name + ")");
                    }
                    if (edges_[g].source == edges_[f].range) ++codomain; // pair (g, f)
                }
            }
            if (domain != codomain)
                throw non_bijective_squares("color pair (" + std::to_string(i) + "," +
                                            std::to_string(j) + "): " + std::to_string(domain) +
                                            " pairs but " + std::to_string(codomain) +
                                            " opposite-order pairs");
            // squares_inv_ built without collision + equal counts => bijection
        }
    }
}

std::pair<EdgeId, EdgeId> KGraph::square_forward(EdgeId f, EdgeId g) const {
    auto it = squares_.find({f, g});
    if (it == squares_.end())
        throw missing_square("no square for (" + edges_[f].name + "," + edges_[g].name + ")");
    return it->second;
}

std::pair<EdgeId, EdgeId> KGraph::square_backward(EdgeId gp, EdgeId fp) const {
    auto it = squares_inv_.find({gp, fp});
    if (it == squares_inv_.end())
        throw missing_square("no square with right pair (" + edges_[gp].name + "," +
                             edges_[fp].name + ")");
    return it->second;
}

void KGraph::check_no_sources() const {
    for (VertexId v = 0; v < vertex_count(); ++v) {
        for (int i = 1; i <= k_; ++i) {
            if (out_edges_[v][i - 1].empty())
                throw has_source("vertex '" + vertex_names_[v] + "' has no color-" +
                                 std::to_string(i) + " edge into it (vLambda^{e_i} empty)");
        }
    }
}

namespace {

// Sort an edge sequence (range end first) by ascending color using square
// rewrites. 'leftmost' selects which inversion is resolved first; with a
// valid square table both strategies agree.
std::vector<EdgeId> sort_by_squares(const KGraph& g, std::vector<EdgeId> seq, bool leftmost) {
    auto color = [&](EdgeId e) { return g.edge(e).color; };
    for (;;) {
        int pos = -1;
        if (leftmost) {
            for (size_t q = 0; q + 1 < seq.size(); ++q)
                if (color(seq[q]) > color(seq[q + 1])) { pos = static_cast<int>(q); break; }
        } else {
            for (int q = static_cast<int>(seq.size()) - 2; q >= 0; --q)
                if (color(seq[q]) > color(seq[q + 1])) { pos = q; break; }
        }
        if (pos < 0) return seq;
        auto [f, gg] = g.square_backward(seq[pos], seq[pos + 1]);
        seq[pos] = f;
        seq[pos + 1] = gg;
    }
}

} // namespace

void KGraph::check_hexagon() const {
    // Every composable triple of edges with three distinct colors must reach
    // the same sorted form under both rewrite strategies.
    for (EdgeId e1 = 0; e1 < edge_count(); ++e1) {
        for (int c2 = 1; c2 <= k_; ++c2) {
            if (c2 == edges_[e1].color) continue;
            for (EdgeId e2 : out_edges_[edges_[e1].source][c2 - 1]) {
                for (int c3 = 1; c3 <= k_; ++c3) {
                    if (c3 == edges_[e1].color || c3 == c2) continue;
                    for (EdgeId e3 : out_edges_[edges_[e2].source][c3 - 1]) {
                        std::vector<EdgeId> seq = {e1, e2, e3};
                        auto l = sort_by_squares(*this, seq, true);
                        auto r = sort_by_squares(*this, seq, false);
                        if (l != r)
                            throw hexagon_failure("triple (" + edges_[e1].name + "," +
                                                  edges_[e2].name + "," + edges_[e3].name +
                                                  ") rewrites to two distinct normal forms");
                    }
                }
            }
        }
    }
}

std::vector<std::vector<long long>> KGraph::vertex_matrix(int color) const {
    std::vector<std::vector<long long>> a(vertex_count(), std::vector<long long>(vertex_count(), 0));
    for (EdgeId e : color_edges_[color - 1]) a[edges_[e].range][edges_[e].source] += 1;
    return a;
}

void KGraph::check_vertex_matrices_commute() const {
    auto mul = [&](const std::vector<std::vector<long long>>& x,
                   const std::vector<std::vector<long long>>& y) {
        int n = vertex_count();
        std::vector<std::vector<long long>> z(n, std::vector<long long>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                if (x[i][l] != 0)
                    for (int j = 0; j < n; ++j) z[i][j] += x[i][l] * y[l][j];
        return z;
    };
    for (int i = 1; i <= k_; ++i) {
        for (int j = i + 1; j <= k_; ++j) {
            auto ai = vertex_matrix(i), aj = vertex_matrix(j);
            if (mul(ai, aj) != mul(aj, ai))
                throw non_bijective_squares("vertex matrices A_" + std::to_string(i) + ", A_" +
                                            std::to_string(j) + " do not commute");
        }
    }
}

bool KGraph::strongly_connected() const {
    auto reach = [&](bool forward) {
        std::vector<bool> seen(vertex_count(), false);
        std::vector<VertexId> stack = {0};
        seen[0] = true;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (int c = 1; c <= k_; ++c) {
                const auto& es = forward ? out_edges_[v][c - 1] : in_edges_[v][c - 1];
                for (EdgeId e : es) {
                    VertexId w = forward ? edges_[e].source : edges_[e].range;
                    if (!seen[w]) {
                        seen[w] = true;
                        stack.push_back(w);
                    }
                }
            }
        }
        return seen;
    };
    auto fwd = reach(true), bwd = reach(false);
    for (VertexId v = 0; v < vertex_count(); ++v)
        if (!fwd[v] || !bwd[v]) return false;
    return true;
}

Path::Path(const KGraph& g, VertexId v) : g_(&g), range_(v), blocks_(g.k()) {}

Path::Path(const KGraph& g, VertexId range, std::vector<std::vector<EdgeId>> blocks)
    : g_(&g), range_(range), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != g.k())
        throw malformed_spec("path blocks must have one entry per color");
    VertexId at = range_;
    for (int c = 1; c <= g.k(); ++c) {
        for (EdgeId e : blocks_[c - 1]) {
            if (g.edge(e).color != c) throw malformed_spec("edge in wrong color block");
            if (g.edge(e).range != at)
                throw not_composable("edge chain breaks at " + g.describe_edge(e));
            at = g.edge(e).source;
        }
    }
}

Path Path::from_edge_sequence(const KGraph& g, const std::vector<EdgeId>& seq) {
    if (seq.empty()) throw malformed_spec("empty edge sequence has no range vertex");
    for (size_t t = 0; t + 1 < seq.size(); ++t) {
        if (g.edge(seq[t]).source != g.edge(seq[t + 1]).range)
            throw not_composable("edges " + g.describe_edge(seq[t]) + " and " +
                                 g.describe_edge(seq[t + 1]) + " are not composable");
    }
    auto sorted = sort_by_squares(g, seq, true);
    std::vector<std::vector<EdgeId>> blocks(g.k());
    for (EdgeId e : sorted) blocks[g.edge(e).color - 1].push_back(e);
    return Path(g, g.edge(sorted.front()).range, std::move(blocks));
}

Degree Path::degree() const {
    Degree d(g_->k(), 0);
    for (int c = 0; c < g_->k(); ++c) d[c] = static_cast<int>(blocks_[c].size());
    return d;
}

VertexId Path::source() const {
    for (int c = g_->k() - 1; c >= 0; --c)
        if (!blocks_[c].empty()) return g_->edge(blocks_[c].back()).source;
    return range_;
}

bool Path::is_vertex() const {
    for (const auto& b : blocks_)
        if (!b.empty()) return false;
    return true;
}

std::vector<EdgeId> Path::edges() const {
    std::vector<EdgeId> seq;
    for (const auto& b : blocks_) seq.insert(seq.end(), b.begin(), b.end());
    return seq;
}

std::string Path::str() const {
    if (is_vertex()) return g_->vertex_name(range_);
    std::string s;
    for (EdgeId e : edges()) {
        if (!s.empty()) s += ".";
        s += g_->edge(e).name;
    }
    return s;
}

bool Path::operator<(const Path& o) const {
    if (range_ != o.range_) return range_ < o.range_;
    return blocks_ < o.blocks_;
}

Path compose(const Path& lambda, const Path& nu) {
    if (&lambda.graph() != &nu.graph()) throw not_composable("paths from different graphs");
    if (lambda.source() != nu.range())
        throw not_composable("s(" + lambda.str() + ") != r(" + nu.str() + ")");
    if (lambda.is_vertex()) return nu;
    if (nu.is_vertex()) return lambda;
    auto seq = lambda.edges();
    auto tail = nu.edges();
    seq.insert(seq.end(), tail.begin(), tail.end());
    return Path::from_edge_sequence(lambda.graph(), seq);
}

namespace {

// Rewrite so an edge of the wanted color is at the front, returning the
// resulting sequence. Requires the sequence to contain such an edge and be
// in sorted (normal-form) order.
std::vector<EdgeId> pull_color_to_front(const KGraph& g, std::vector<EdgeId> seq, int color) {
    int p = -1;
    for (size_t q = 0; q < seq.size(); ++q) {
        if (g.edge(seq[q]).color == color) {
            p = static_cast<int>(q);
            break;
        }
    }
    if (p < 0) throw degree_out_of_range("no color-" + std::to_string(color) + " edge to factor out");
    for (int q = p; q > 0; --q) {
        // pair (seq[q-1], seq[q]) has colors (lower, color): apply the square forward
        auto [gp, fp] = g.square_forward(seq[q - 1], seq[q]);
        seq[q - 1] = gp;
        seq[q] = fp;
    }
    return seq;
}

} // namespace

std::pair<Path, Path> factorize(const Path& lambda, const Degree& m) {
    const KGraph& g = lambda.graph();
    Degree d = lambda.degree();
    if (static_cast<int>(m.size()) != g.k())
        throw degree_out_of_range("degree vector has wrong length");
    for (int c = 0; c < g.k(); ++c)
        if (m[c] < 0 || m[c] > d[c])
            throw degree_out_of_range("m = " + degree_str(m) + " not within d(lambda) = " +
                                      degree_str(d));
    std::vector<std::vector<EdgeId>> mu_blocks(g.k());
    auto rest = lambda.edges();
    for (int c = 1; c <= g.k(); ++c) {
        for (int t = 0; t < m[c - 1]; ++t) {
            rest = pull_color_to_front(g, std::move(rest), c);
            mu_blocks[c - 1].push_back(rest.front());
            rest.erase(rest.begin());
        }
    }
    Path mu = Path(g, lambda.range(), std::move(mu_blocks));
    Path nu = rest.empty() ? Path(g, mu.source())
                           : Path::from_edge_sequence(g, rest);
    return {mu, nu};
}

std::vector<Path> paths_from(const KGraph& g, VertexId v, const Degree& n) {
    std::vector<Path> out;
    std::vector<std::vector<EdgeId>> blocks(g.k());
    // extend block by block, colors ascending
    std::function<void(int, VertexId)> rec = [&](int color, VertexId at) {
        if (color > g.k()) {
            out.emplace_back(g, v, blocks);
            return;
        }
        std::function<void(int, VertexId)> chain = [&](int left, VertexId w) {
            if (left == 0) {
                rec(color + 1, w);
                return;
            }
            for (EdgeId e : g.edges_from(w, color)) {
                blocks[color - 1].push_back(e);
                chain(left - 1, g.edge(e).source);
                blocks[color - 1].pop_back();
            }
        };
        chain(n[color - 1], at);
    };
    rec(1, v);
    return out;
}

std::vector<Path> enumerate_paths(const KGraph& g, const Degree& n) {
    std::vector<Path> out;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto part = paths_from(g, v, n);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::vector<Path> paths_into(const KGraph& g, VertexId v, const Degree& n) {
    std::vector<Path> out;
    for (const Path& p : enumerate_paths(g, n))
        if (p.source() == v) out.push_back(p);
    return out;
}

std::vector<std::pair<Path, Path>> lambda_min(const Path& lambda, const Path& eta) {
    std::vector<std::pair<Path, Path>> out;
    if (lambda.range() != eta.range()) return out;
    const KGraph& g = lambda.graph();
    Degree m = degree_join(lambda.degree(), eta.degree());
    std::map<Path, Path> by_extension; // lambda*alpha -> alpha
    for (const Path& alpha : paths_from(g, lambda.source(), degree_sub(m, lambda.degree())))
        by_extension.emplace(compose(lambda, alpha), alpha);
    for (const Path& beta : paths_from(g, eta.source(), degree_sub(m, eta.degree()))) {
        auto it = by_extension.find(compose(eta, beta));
        if (it != by_extension.end()) out.emplace_back(it->second, beta);
    }
    return out;
}

std::vector<EdgeId> rainbow_form(const Path& lambda) {
    const KGraph& g = lambda.graph();
    Degree d = lambda.degree();
    int n = d.empty() ? 0 : d[0];
    for (int x : d)
        if (x != n) throw not_cubic_degree("d(lambda) = " + degree_str(d) + " is not (n,...,n)");
    std::vector<EdgeId> out;
    Path rest = lambda;
    for (int round = 0; round < n; ++round) {
        for (int c = 1; c <= g.k(); ++c) {
            auto [head, tail] = factorize(rest, degree_e(g.k(), c));
            out.push_back(head.edges().front());
            rest = tail;
        }
    }
    return out;
}

} // namespace kgr
