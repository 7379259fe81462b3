#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace sghom {

using Bitset = boost::dynamic_bitset<>;

/// Vertex map between two graphs, one target index per source vertex.
using VertexMap = std::vector<int>;

/// Raised when an input is outside the hypotheses a construction needs (as
/// opposed to being malformed); the CLI maps it to its own exit code.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite graph with loops allowed.  Adjacency is kept symmetric by
/// construction; rows are bitsets so edge scans are word-parallel.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) : adj_(n, Bitset(n)) {}

    std::size_t vertex_count() const { return adj_.size(); }

    bool adjacent(std::size_t u, std::size_t v) const { return adj_[u].test(v); }

    void add_edge(std::size_t u, std::size_t v) {
        adj_[u].set(v);
        adj_[v].set(u);
    }

    const Bitset& neighbours(std::size_t u) const { return adj_[u]; }

    std::size_t degree(std::size_t u) const { return adj_[u].count(); }

    bool has_loop(std::size_t u) const { return adj_[u].test(u); }

    bool loopless() const {
        for (std::size_t u = 0; u < vertex_count(); ++u)
            if (has_loop(u)) return false;
        return true;
    }

    bool reflexive() const {
        for (std::size_t u = 0; u < vertex_count(); ++u)
            if (!has_loop(u)) return false;
        return true;
    }

    /// Undirected edge count; a loop counts once.
    std::size_t edge_count() const {
        std::size_t twice = 0, loops = 0;
        for (std::size_t u = 0; u < vertex_count(); ++u) {
            twice += adj_[u].count();
            if (has_loop(u)) ++loops;
        }
        return (twice - loops) / 2 + loops;
    }

    /// Visits every ordered adjacent pair (u,v), loops once as (u,u).
    template <typename Fn>
    void for_each_ordered_edge(Fn&& fn) const {
        for (std::size_t u = 0; u < vertex_count(); ++u)
            for (std::size_t v = adj_[u].find_first(); v != Bitset::npos;
                 v = adj_[u].find_next(v))
                fn(u, v);
    }

    bool has_labels() const { return !labels_.empty(); }

    const std::string& label(std::size_t u) const { return labels_[u]; }

    const std::vector<std::string>& labels() const { return labels_; }

    void set_labels(std::vector<std::string> labels) {
        if (!labels.empty() && labels.size() != vertex_count())
            throw std::invalid_argument("label count does not match vertex count");
        labels_ = std::move(labels);
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.adj_ == b.adj_;
    }

private:
    std::vector<Bitset> adj_;
    std::vector<std::string> labels_;  // empty or one per vertex
};

inline Graph make_complete(int r) {
    if (r < 1) throw std::invalid_argument("complete graph needs r >= 1");
    Graph g(static_cast<std::size_t>(r));
    for (std::size_t u = 0; u < g.vertex_count(); ++u)
        for (std::size_t v = u + 1; v < g.vertex_count(); ++v) g.add_edge(u, v);
    return g;
}

inline Graph make_cycle(int r) {
    if (r < 3) throw std::invalid_argument("cycle needs r >= 3");
    Graph g(static_cast<std::size_t>(r));
    for (int u = 0; u < r; ++u) g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>((u + 1) % r));
    return g;
}

/// Reflexive path I_n: vertices 0..n, i~j iff |i-j| <= 1.
inline Graph make_reflexive_path(int n) {
    if (n < 0) throw std::invalid_argument("reflexive path needs n >= 0");
    Graph g(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        g.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
        if (i < n) g.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(i) + 1);
    }
    return g;
}

/// Row-major index of (a,b) in the product G x H: a * |H| + b.
inline std::size_t product_index(std::size_t a, std::size_t b, const Graph& h) {
    return a * h.vertex_count() + b;
}

/// Categorical product: (a,b) ~ (a',b') iff a~a' and b~b'.
inline Graph product(const Graph& g, const Graph& h) {
    Graph p(g.vertex_count() * h.vertex_count());
    g.for_each_ordered_edge([&](std::size_t a, std::size_t a2) {
        h.for_each_ordered_edge([&](std::size_t b, std::size_t b2) {
            p.add_edge(product_index(a, b, h), product_index(a2, b2, h));
        });
    });
    if (g.has_labels() && h.has_labels()) {
        std::vector<std::string> labels(p.vertex_count());
        for (std::size_t a = 0; a < g.vertex_count(); ++a)
            for (std::size_t b = 0; b < h.vertex_count(); ++b)
                labels[product_index(a, b, h)] = g.label(a) + "|" + h.label(b);
        p.set_labels(std::move(labels));
    }
    return p;
}

inline bool valid_mapping(const Graph& source, const Graph& target, const VertexMap& f) {
    if (f.size() != source.vertex_count()) return false;
    for (int v : f)
        if (v < 0 || static_cast<std::size_t>(v) >= target.vertex_count()) return false;
    return true;
}

inline void require_mapping(const Graph& source, const Graph& target, const VertexMap& f,
                            const char* what) {
    if (!valid_mapping(source, target, f))
        throw std::invalid_argument(std::string(what) + ": not a mapping into the target");
}

/// Adjacency of f and g in the exponential graph [source, target]:
/// (f(u), g(v)) must be a target edge for every source edge (u,v).
inline bool exp_adjacent(const Graph& source, const Graph& target, const VertexMap& f,
                         const VertexMap& g) {
    require_mapping(source, target, f, "exp_adjacent f");
    require_mapping(source, target, g, "exp_adjacent g");
    bool ok = true;
    for (std::size_t u = 0; u < source.vertex_count() && ok; ++u) {
        const Bitset& nb = source.neighbours(u);
        for (std::size_t v = nb.find_first(); v != Bitset::npos; v = nb.find_next(v))
            if (!target.adjacent(static_cast<std::size_t>(f[u]), static_cast<std::size_t>(g[v]))) {
                ok = false;
                break;
            }
    }
    return ok;
}

/// f is a homomorphism iff f ~ f in [source, target].
inline bool is_homomorphism(const Graph& source, const Graph& target, const VertexMap& f) {
    return exp_adjacent(source, target, f, f);
}

/// Edge-local form of the mixture criterion: every h with
/// h(u) in {f(u), g(u)} is a homomorphism iff all four value pairs work
/// across each source edge.  Requires a loopless source.
inline bool mixtures_all_homomorphisms(const Graph& source, const Graph& target,
                                       const VertexMap& f, const VertexMap& g) {
    if (!source.loopless())
        throw std::invalid_argument("mixture criterion requires a loopless source");
    require_mapping(source, target, f, "mixtures f");
    require_mapping(source, target, g, "mixtures g");
    if (!is_homomorphism(source, target, f) || !is_homomorphism(source, target, g))
        throw std::invalid_argument("mixture criterion requires homomorphism arguments");
    bool ok = true;
    source.for_each_ordered_edge([&](std::size_t u, std::size_t v) {
        if (!ok) return;
        const auto fu = static_cast<std::size_t>(f[u]), gu = static_cast<std::size_t>(g[u]);
        const auto fv = static_cast<std::size_t>(f[v]), gv = static_cast<std::size_t>(g[v]);
        ok = target.adjacent(fu, fv) && target.adjacent(fu, gv) && target.adjacent(gu, fv) &&
             target.adjacent(gu, gv);
    });
    return ok;
}

/// Partition of the vertices of a graph into equivalence classes.
struct VertexPartition {
    std::vector<int> class_of;               // vertex -> class index
    std::vector<std::vector<int>> members;   // class index -> sorted member list

    static VertexPartition from_class_map(std::vector<int> class_of) {
        VertexPartition p;
        int classes = 0;
        for (int c : class_of) {
            if (c < 0) throw std::invalid_argument("negative class index");
            classes = std::max(classes, c + 1);
        }
        p.members.resize(static_cast<std::size_t>(classes));
        for (std::size_t v = 0; v < class_of.size(); ++v)
            p.members[static_cast<std::size_t>(class_of[v])].push_back(static_cast<int>(v));
        for (const auto& cls : p.members)
            if (cls.empty()) throw std::invalid_argument("partition has an empty class");
        p.class_of = std::move(class_of);
        return p;
    }

    static VertexPartition discrete(std::size_t n) {
        std::vector<int> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        return from_class_map(std::move(ids));
    }

    std::size_t class_count() const { return members.size(); }
};

struct QuotientResult {
    Graph graph;
    VertexMap projection;  // the quotient map q
};

/// Quotient graph: one vertex per class, classes adjacent iff some members
/// are; a class containing an edge yields a loop.
inline QuotientResult quotient(const Graph& g, const VertexPartition& p) {
    if (p.class_of.size() != g.vertex_count())
        throw std::invalid_argument("partition does not cover the graph");
    Graph q(p.class_count());
    g.for_each_ordered_edge([&](std::size_t u, std::size_t v) {
        q.add_edge(static_cast<std::size_t>(p.class_of[u]), static_cast<std::size_t>(p.class_of[v]));
    });
    return {std::move(q), p.class_of};
}

/// Curry a homomorphism F: Z x G -> target into its Z-indexed family of
/// mappings G -> target (adjunction between product and exponential).
inline std::vector<VertexMap> curry(const Graph& z, const Graph& g, const Graph& target,
                                    const VertexMap& big) {
    Graph prod = product(z, g);
    require_mapping(prod, target, big, "curry");
    if (!is_homomorphism(prod, target, big))
        throw std::invalid_argument("curry: input is not a homomorphism");
    std::vector<VertexMap> family(z.vertex_count(), VertexMap(g.vertex_count()));
    for (std::size_t a = 0; a < z.vertex_count(); ++a)
        for (std::size_t b = 0; b < g.vertex_count(); ++b)
            family[a][b] = big[product_index(a, b, g)];
    return family;
}

/// Inverse of curry; the family needs one mapping per vertex of Z.
inline VertexMap uncurry(const Graph& z, const Graph& g, const std::vector<VertexMap>& family) {
    if (family.size() != z.vertex_count())
        throw std::invalid_argument("uncurry: family size does not match Z");
    VertexMap big(z.vertex_count() * g.vertex_count());
    for (std::size_t a = 0; a < z.vertex_count(); ++a) {
        if (family[a].size() != g.vertex_count())
            throw std::invalid_argument("uncurry: family entry of wrong length");
        for (std::size_t b = 0; b < g.vertex_count(); ++b)
            big[product_index(a, b, g)] = family[a][b];
    }
    return big;
}

/// Bijective and adjacency-preserving in both directions.
inline bool is_graph_automorphism(const Graph& g, const VertexMap& perm) {
    if (perm.size() != g.vertex_count()) return false;
    std::vector<bool> seen(perm.size(), false);
    for (int v : perm) {
        if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[static_cast<std::size_t>(v)])
            return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t u = 0; u < g.vertex_count(); ++u)
        for (std::size_t v = u; v < g.vertex_count(); ++v)
            if (g.adjacent(u, v) !=
                g.adjacent(static_cast<std::size_t>(perm[u]), static_cast<std::size_t>(perm[v])))
                return false;
    return true;
}

inline VertexMap inverse_permutation(const VertexMap& perm) {
    VertexMap inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    return inv;
}

inline VertexMap compose(const VertexMap& outer, const VertexMap& inner) {
    VertexMap r(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i)
        r[i] = outer[static_cast<std::size_t>(inner[i])];
    return r;
}

}  // namespace sghom
