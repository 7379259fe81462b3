#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sghom/graph.hpp"
#include "sghom/homotopy.hpp"
#include "sghom/io.hpp"
#include "sghom/kneser.hpp"
#include "sghom/oracles.hpp"

namespace sghom {

/// Reflexive star of paths: a hub plus one length-L branch per automorphism.
struct StarGraph {
    Graph graph;
    int branch_length = 0;  // L, edges per branch
    std::size_t branches = 0;

    static constexpr std::size_t hub = 0;

    std::size_t vertex(std::size_t branch, int i) const {  // i in 1..L
        return 1 + branch * static_cast<std::size_t>(branch_length) + static_cast<std::size_t>(i - 1);
    }
    std::size_t terminal(std::size_t branch) const { return vertex(branch, branch_length); }
};

inline StarGraph make_star(std::size_t branches, int length,
                           const std::vector<std::string>& branch_names) {
    if (length < 1 || branches == 0 || branch_names.size() != branches)
        throw std::invalid_argument("make_star: bad branch structure");
    StarGraph x;
    x.branch_length = length;
    x.branches = branches;
    x.graph = Graph(1 + branches * static_cast<std::size_t>(length));
    std::vector<std::string> labels(x.graph.vertex_count());
    labels[StarGraph::hub] = "u";
    for (std::size_t v = 0; v < x.graph.vertex_count(); ++v) x.graph.add_edge(v, v);
    for (std::size_t b = 0; b < branches; ++b) {
        x.graph.add_edge(StarGraph::hub, x.vertex(b, 1));
        for (int i = 1; i < length; ++i) x.graph.add_edge(x.vertex(b, i), x.vertex(b, i + 1));
        for (int i = 1; i <= length; ++i)
            labels[x.vertex(b, i)] = branch_names[b] + ":" + std::to_string(i);
    }
    x.graph.set_labels(std::move(labels));
    return x;
}

/// One automorphism of T together with a certificate path base ~> base o gamma.
struct WitnessTwist {
    std::string name;
    VertexMap gamma;
    HomPath path;
};

/// The full witness construction: the star X, the assembled colouring F
/// of X x T, the quotient witness graph G and its structure maps, plus one
/// j ~> j o gamma certificate per automorphism.
struct WitnessBundle {
    Graph T;
    int palette = 0;
    VertexMap base;
    StarGraph X;
    std::vector<std::string> gamma_names;
    std::vector<VertexMap> gammas;
    VertexMap big_f;          // F over product(X.graph, T), row-major
    VertexPartition classes;  // the relation (v_gamma, t) ~ (u, gamma(t))
    Graph G;
    VertexMap q;     // X x T -> G
    VertexMap j;     // T -> G, inclusion at the hub
    VertexMap fbar;  // G -> palette
    std::vector<HomPath> certs;  // per gamma; palette field holds |V(G)|
};

struct VerifyReport {
    bool ok = true;
    std::string failure;
    std::vector<std::string> notes;

    void check(bool cond, const std::string& what) {
        if (cond) {
            notes.push_back("ok: " + what);
        } else {
            notes.push_back("FAIL: " + what);
            if (ok) {
                ok = false;
                failure = what;
            }
        }
    }
};

namespace detail {

inline std::size_t pidx(const WitnessBundle& b, std::size_t x, std::size_t t) {
    return x * b.T.vertex_count() + t;
}

/// Quotient of X collapsing every terminal into the hub: the bouquet of circles.
inline QuotientResult star_bouquet(const StarGraph& x) {
    std::vector<int> cls(x.graph.vertex_count());
    int next = 1;
    for (std::size_t v = 0; v < x.graph.vertex_count(); ++v) {
        bool terminal = false;
        for (std::size_t b = 0; b < x.branches; ++b)
            if (v == x.terminal(b)) terminal = true;
        cls[v] = (v == StarGraph::hub || terminal) ? 0 : next++;
    }
    return quotient(x.graph, VertexPartition::from_class_map(std::move(cls)));
}

}  // namespace detail

/// Path j ~> j o gamma in Hom(T, G): slide the constant first coordinate
/// along the gamma branch of X.  The identity automorphism gets the
/// one-entry path.
inline HomPath certify_j_gamma(const WitnessBundle& b, std::size_t gamma_index) {
    if (gamma_index >= b.gammas.size()) throw std::invalid_argument("unknown automorphism index");
    HomPath out{static_cast<int>(b.G.vertex_count()), {b.j}};
    if (b.gammas[gamma_index] == identity_permutation(static_cast<int>(b.T.vertex_count())))
        return out;
    const std::size_t tn = b.T.vertex_count();
    for (int i = 1; i <= b.X.branch_length; ++i) {
        VertexMap entry(tn);
        for (std::size_t t = 0; t < tn; ++t)
            entry[t] = b.q[detail::pidx(b, b.X.vertex(gamma_index, i), t)];
        out.entries.push_back(std::move(entry));
    }
    return out;
}

/// Builds the witness bundle from a base colouring and one twist certificate
/// per automorphism of T.
inline WitnessBundle build_witness(const Graph& T, int palette, const VertexMap& base,
                                   const std::vector<WitnessTwist>& twists,
                                   bool check_cover = true) {
    if (!T.loopless()) throw std::invalid_argument("build_witness: T must be loopless");
    if (twists.empty()) throw std::invalid_argument("build_witness: no twists supplied");
    Graph pal = make_complete(palette);
    if (!is_homomorphism(T, pal, base))
        throw std::invalid_argument("build_witness: base colouring is not proper");

    for (const WitnessTwist& tw : twists) {
        if (!is_graph_automorphism(T, tw.gamma))
            throw std::invalid_argument("build_witness: twist " + tw.name +
                                        " is not an automorphism of T");
        if (tw.path.palette != palette)
            throw std::invalid_argument("build_witness: twist " + tw.name + " palette mismatch");
        PathVerdict v = validate_path(T, pal, tw.path.entries);
        if (!v.ok)
            throw std::invalid_argument("build_witness: invalid twist " + tw.name + ": " +
                                        v.message());
        if (tw.path.front() != base || tw.path.back() != compose(base, tw.gamma))
            throw std::invalid_argument("build_witness: twist " + tw.name +
                                        " endpoint mismatch");
    }
    for (std::size_t a = 0; a < twists.size(); ++a)
        for (std::size_t b2 = a + 1; b2 < twists.size(); ++b2)
            if (twists[a].gamma == twists[b2].gamma)
                throw std::invalid_argument("build_witness: duplicate automorphism in twists");
    if (check_cover) {
        if (T.vertex_count() > kOracleGuard)
            throw std::invalid_argument(
                "build_witness: T too large to verify automorphism cover (disable check_cover)");
        std::vector<VertexMap> all = automorphisms_exact(T);
        if (all.size() != twists.size())
            throw std::invalid_argument("build_witness: twists do not cover Aut(T): expected " +
                                        std::to_string(all.size()) + ", got " +
                                        std::to_string(twists.size()));
        for (const VertexMap& g : all) {
            bool found = false;
            for (const WitnessTwist& tw : twists) found = found || tw.gamma == g;
            if (!found) throw std::invalid_argument("build_witness: missing automorphism twist");
        }
    }

    WitnessBundle b;
    b.T = T;
    b.palette = palette;
    b.base = base;

    // Branch length: strictly more than any homomorphic image of T so every
    // circle of the bouquet keeps a missed vertex, and long enough for the
    // longest twist.
    int length = static_cast<int>(T.vertex_count()) + 2;
    for (const WitnessTwist& tw : twists)
        length = std::max(length, static_cast<int>(tw.path.entries.size()) - 1);

    std::vector<std::string> names;
    for (const WitnessTwist& tw : twists) {
        names.push_back(tw.name);
        b.gamma_names.push_back(tw.name);
        b.gammas.push_back(tw.gamma);
    }
    b.X = make_star(twists.size(), length, names);

    // Assemble X -> [T, K]: the hub carries the base colouring, branch i the
    // i-th twist entry, padded by repeating the endpoint.
    std::vector<VertexMap> family(b.X.graph.vertex_count());
    family[StarGraph::hub] = base;
    for (std::size_t br = 0; br < twists.size(); ++br) {
        const auto& entries = twists[br].path.entries;
        for (int i = 1; i <= length; ++i)
            family[b.X.vertex(br, i)] =
                entries[std::min<std::size_t>(static_cast<std::size_t>(i), entries.size() - 1)];
    }
    b.big_f = uncurry(b.X.graph, T, family);

    {
        Graph xt = product(b.X.graph, T);
        if (!is_homomorphism(xt, pal, b.big_f))
            throw std::logic_error("build_witness: assembled map is not a homomorphism");

        // (v_gamma, t) ~ (u, gamma(t)) via union-find, classes numbered in
        // vertex order.
        std::vector<int> parent(xt.vertex_count());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int v) {
            while (parent[static_cast<std::size_t>(v)] != v) {
                parent[static_cast<std::size_t>(v)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
                v = parent[static_cast<std::size_t>(v)];
            }
            return v;
        };
        for (std::size_t br = 0; br < twists.size(); ++br)
            for (std::size_t t = 0; t < T.vertex_count(); ++t) {
                int a = find(static_cast<int>(detail::pidx(b, b.X.terminal(br), t)));
                int c = find(static_cast<int>(
                    detail::pidx(b, StarGraph::hub, static_cast<std::size_t>(twists[br].gamma[t]))));
                if (a != c) parent[static_cast<std::size_t>(a)] = c;
            }
        std::vector<int> cls(xt.vertex_count(), -1);
        int next = 0;
        for (std::size_t v = 0; v < xt.vertex_count(); ++v) {
            int root = find(static_cast<int>(v));
            if (cls[static_cast<std::size_t>(root)] < 0) cls[static_cast<std::size_t>(root)] = next++;
            cls[v] = cls[static_cast<std::size_t>(root)];
        }
        b.classes = VertexPartition::from_class_map(std::move(cls));
        QuotientResult qr = quotient(xt, b.classes);
        b.G = std::move(qr.graph);
        b.q = std::move(qr.projection);
    }

    b.j.resize(T.vertex_count());
    for (std::size_t t = 0; t < T.vertex_count(); ++t)
        b.j[t] = b.q[detail::pidx(b, StarGraph::hub, t)];

    // fbar is F pushed through q; the identification makes it well defined.
    b.fbar.assign(b.G.vertex_count(), -1);
    for (std::size_t v = 0; v < b.big_f.size(); ++v) {
        int& slot = b.fbar[static_cast<std::size_t>(b.q[v])];
        if (slot < 0) slot = b.big_f[v];
        else if (slot != b.big_f[v])
            throw std::logic_error("build_witness: fbar ill-defined (identified pair coloured differently)");
    }

    if (!b.G.loopless()) throw std::logic_error("build_witness: witness graph has a loop");
    if (!is_homomorphism(b.G, pal, b.fbar))
        throw std::logic_error("build_witness: fbar is not a proper colouring");
    if (!is_homomorphism(T, b.G, b.j)) throw std::logic_error("build_witness: j is not a homomorphism");

    for (std::size_t br = 0; br < twists.size(); ++br) {
        HomPath cert = certify_j_gamma(b, br);
        PathVerdict v = validate_path(T, b.G, cert.entries);
        if (!v.ok || cert.back() != compose(b.j, twists[br].gamma))
            throw std::logic_error("build_witness: j-gamma certificate failed for " + twists[br].name);
        b.certs.push_back(std::move(cert));
    }
    return b;
}

/// Convenience map T -> G with a constant first coordinate: t -> q(x, sigma(t)).
/// Any looped x and automorphism sigma of T give a homomorphism.
inline VertexMap witness_point_map(const WitnessBundle& b, std::size_t x_vertex,
                                   const VertexMap& sigma) {
    VertexMap g(b.T.vertex_count());
    for (std::size_t t = 0; t < b.T.vertex_count(); ++t)
        g[t] = b.q[detail::pidx(b, x_vertex, static_cast<std::size_t>(sigma[t]))];
    return g;
}

/// Certificate g ~> j in Hom(T, G) for an arbitrary homomorphism g:
/// project to the bouquet, delete a missed vertex per circle, lift through
/// the tree chart, retract the tree coordinate to the hub, then run the
/// j-gamma certificate backwards.
inline HomPath certify_connectivity(const WitnessBundle& b, const VertexMap& g) {
    const std::size_t tn = b.T.vertex_count();
    if (!valid_mapping(b.T, b.G, g) || !is_homomorphism(b.T, b.G, g))
        throw std::invalid_argument("certify_connectivity: g is not a homomorphism into G");

    const int L = b.X.branch_length;
    // Representative X-coordinate of each class; merged classes list the hub
    // member first because its product index is smallest.
    std::vector<std::size_t> rep_x(b.G.vertex_count());
    for (std::size_t c = 0; c < b.classes.class_count(); ++c)
        rep_x[c] = static_cast<std::size_t>(b.classes.members[c][0]) / tn;

    // Vertices of each circle hit by the bouquet image of g; pick the lowest
    // missed interior vertex.
    std::vector<std::vector<bool>> hit(b.X.branches, std::vector<bool>(static_cast<std::size_t>(L), false));
    for (std::size_t t = 0; t < tn; ++t) {
        std::size_t x = rep_x[static_cast<std::size_t>(g[t])];
        if (x == StarGraph::hub) continue;
        std::size_t br = (x - 1) / static_cast<std::size_t>(L);
        int i = static_cast<int>((x - 1) % static_cast<std::size_t>(L)) + 1;
        // terminals never represent a class: their classes contain a hub pair
        if (i >= L) throw std::logic_error("certify_connectivity: terminal class representative");
        hit[br][static_cast<std::size_t>(i)] = true;
    }
    std::vector<int> missed(b.X.branches, -1);
    for (std::size_t br = 0; br < b.X.branches; ++br) {
        for (int i = 1; i < L; ++i)
            if (!hit[br][static_cast<std::size_t>(i)]) {
                missed[br] = i;
                break;
            }
        if (missed[br] < 0)
            throw std::logic_error("certify_connectivity: no missed vertex on a circle (L sizing bug)");
    }

    // The reflexive tree X': the hub plus, per branch, the near arm below the
    // missed vertex and the far arm above it.  Far-arm charts untwist by
    // gamma^{-1} so the embedding into G respects the identification.
    struct TreeVertex {
        std::size_t x;      // X vertex
        int alpha_branch;   // -1: identity chart, else branch whose gamma^{-1} applies
        std::size_t parent;
        int depth;
    };
    std::vector<TreeVertex> tree;
    tree.push_back({StarGraph::hub, -1, 0, 0});
    std::vector<VertexMap> inv_gamma(b.X.branches);
    for (std::size_t br = 0; br < b.X.branches; ++br) inv_gamma[br] = inverse_permutation(b.gammas[br]);
    for (std::size_t br = 0; br < b.X.branches; ++br) {
        std::size_t prev = 0;
        for (int i = 1; i < missed[br]; ++i) {
            tree.push_back({b.X.vertex(br, i), -1, prev, i});
            prev = tree.size() - 1;
        }
        prev = 0;
        for (int i = L - 1; i > missed[br]; --i) {
            tree.push_back({b.X.vertex(br, i), static_cast<int>(br), prev, L - i});
            prev = tree.size() - 1;
        }
    }

    auto chart = [&](std::size_t w, std::size_t t) {
        const TreeVertex& tv = tree[w];
        std::size_t tt = tv.alpha_branch < 0
                             ? t
                             : static_cast<std::size_t>(inv_gamma[static_cast<std::size_t>(tv.alpha_branch)][t]);
        return static_cast<std::size_t>(b.q[detail::pidx(b, tv.x, tt)]);
    };

    // Invert the embedding h(w,t) = q(x_w, alpha_w(t)).
    std::vector<int> inv_w(b.G.vertex_count(), -1), inv_t(b.G.vertex_count(), -1);
    for (std::size_t w = 0; w < tree.size(); ++w)
        for (std::size_t t = 0; t < tn; ++t) {
            std::size_t gv = chart(w, t);
            if (inv_w[gv] >= 0) throw std::logic_error("certify_connectivity: tree chart not injective");
            inv_w[gv] = static_cast<int>(w);
            inv_t[gv] = static_cast<int>(t);
        }

    // Lift g = h o (g1, g2).
    std::vector<std::size_t> g1(tn);
    VertexMap g2(tn);
    for (std::size_t t = 0; t < tn; ++t) {
        int w = inv_w[static_cast<std::size_t>(g[t])];
        if (w < 0) throw std::logic_error("certify_connectivity: image escapes the tree preimage");
        g1[t] = static_cast<std::size_t>(w);
        g2[t] = inv_t[static_cast<std::size_t>(g[t])];
    }
    {
        std::vector<bool> seen(tn, false);
        for (int v : g2) {
            if (seen[static_cast<std::size_t>(v)])
                throw HypothesisError(
                    "certify_connectivity: lifted endomorphism is not bijective (End(T) != Aut(T))");
            seen[static_cast<std::size_t>(v)] = true;
        }
    }
    std::size_t alpha_idx = b.gammas.size();
    for (std::size_t a = 0; a < b.gammas.size(); ++a)
        if (b.gammas[a] == g2) {
            alpha_idx = a;
            break;
        }
    if (alpha_idx == b.gammas.size())
        throw HypothesisError("certify_connectivity: lifted automorphism is not covered by the bundle");

    // Retract the tree coordinate to the hub, deepest vertices first; one
    // graph-level step per path entry.
    HomPath out{static_cast<int>(b.G.vertex_count()), {}};
    auto emit = [&](const std::vector<std::size_t>& m) {
        VertexMap entry(tn);
        for (std::size_t t = 0; t < tn; ++t)
            entry[t] = static_cast<int>(chart(m[t], static_cast<std::size_t>(g2[t])));
        append_path(out, {entry});
    };
    std::vector<std::size_t> m = g1;
    emit(m);
    if (out.entries.front() != g)
        throw std::logic_error("certify_connectivity: lift does not reproduce g");
    std::vector<std::size_t> order;
    for (std::size_t w = 1; w < tree.size(); ++w) order.push_back(w);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
        if (tree[a].depth != tree[c].depth) return tree[a].depth > tree[c].depth;
        return a < c;
    });
    for (std::size_t w : order) {
        bool used = false;
        for (std::size_t t = 0; t < tn; ++t) used = used || m[t] == w;
        if (!used) continue;
        for (std::size_t t = 0; t < tn; ++t)
            if (m[t] == w) m[t] = tree[w].parent;
        emit(m);
    }
    for (std::size_t t = 0; t < tn; ++t)
        if (m[t] != 0) throw std::logic_error("certify_connectivity: retraction did not reach the hub");

    // Now at j o gamma; append the reversed j-gamma certificate.
    const HomPath& cert = b.certs[alpha_idx];
    std::vector<VertexMap> reversed(cert.entries.rbegin(), cert.entries.rend());
    append_path(out, reversed);

    if (out.back() != b.j) throw std::logic_error("certify_connectivity: endpoint is not j");
    PathVerdict v = validate_path(b.T, b.G, out.entries);
    if (!v.ok) throw std::logic_error("certify_connectivity: produced an invalid path: " + v.message());
    return out;
}

/// Re-derives every bundle invariant with the stateless checkers.
inline VerifyReport verify_bundle(const WitnessBundle& b) {
    VerifyReport r;
    const std::size_t tn = b.T.vertex_count();
    const std::size_t xn = b.X.graph.vertex_count();
    Graph pal = make_complete(b.palette);

    r.check(tn > 0 && b.palette > 0, "bundle is non-trivial");
    if (!r.ok) return r;
    r.check(b.X.graph == make_star(b.X.branches, b.X.branch_length, b.gamma_names).graph,
            "X is the reflexive star of paths");
    r.check(b.X.branch_length >= static_cast<int>(tn) + 2,
            "branch length exceeds |V(T)| + 1");
    r.check(b.gammas.size() == b.X.branches && b.gamma_names.size() == b.X.branches,
            "one automorphism per branch");
    bool autos = true;
    for (const VertexMap& g : b.gammas) autos = autos && is_graph_automorphism(b.T, g);
    r.check(autos, "branch permutations are automorphisms of T");
    r.check(is_homomorphism(b.T, pal, b.base), "base colouring is proper");

    r.check(b.q.size() == xn * tn && b.big_f.size() == xn * tn, "q and F cover X x T");
    if (!r.ok) return r;
    bool q_range = true;
    for (int v : b.q) q_range = q_range && v >= 0 && static_cast<std::size_t>(v) < b.G.vertex_count();
    r.check(q_range, "q maps into G");
    if (!r.ok) return r;

    // Identification structure of q.
    bool ident = true;
    for (std::size_t br = 0; br < b.X.branches; ++br)
        for (std::size_t t = 0; t < tn; ++t)
            ident = ident && b.q[detail::pidx(b, b.X.terminal(br), t)] ==
                                 b.q[detail::pidx(b, StarGraph::hub,
                                                  static_cast<std::size_t>(b.gammas[br][t]))];
    r.check(ident, "q identifies (v_gamma, t) with (u, gamma(t))");
    r.check(b.G.vertex_count() == xn * tn - b.X.branches * tn,
            "class count matches the identification");
    std::vector<char> seen_class(b.G.vertex_count(), 0);
    for (int v : b.q) seen_class[static_cast<std::size_t>(v)] = 1;
    bool onto = true;
    for (char c : seen_class) onto = onto && c;
    r.check(onto, "q is surjective");

    // q realizes exactly the quotient adjacency.
    {
        bool edges_ok = true;
        std::vector<std::uint64_t> image;
        b.X.graph.for_each_ordered_edge([&](std::size_t x, std::size_t x2) {
            b.T.for_each_ordered_edge([&](std::size_t t, std::size_t t2) {
                auto a = static_cast<std::size_t>(b.q[detail::pidx(b, x, t)]);
                auto c = static_cast<std::size_t>(b.q[detail::pidx(b, x2, t2)]);
                if (!b.G.adjacent(a, c)) edges_ok = false;
                image.push_back(static_cast<std::uint64_t>(a) * b.G.vertex_count() + c);
            });
        });
        r.check(edges_ok, "q maps product edges to edges");
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        std::size_t g_ordered = 0;
        for (std::size_t v = 0; v < b.G.vertex_count(); ++v) g_ordered += b.G.degree(v);
        r.check(image.size() == g_ordered, "G has no adjacency beyond the quotient image");
    }

    bool fq = b.fbar.size() == b.G.vertex_count();
    for (std::size_t v = 0; fq && v < b.big_f.size(); ++v)
        fq = b.fbar[static_cast<std::size_t>(b.q[v])] == b.big_f[v];
    r.check(fq, "fbar o q equals F");
    r.check(b.G.loopless(), "G is loopless");
    r.check(valid_mapping(b.G, pal, b.fbar) && is_homomorphism(b.G, pal, b.fbar),
            "fbar is a proper colouring of G");

    bool j_ok = b.j.size() == tn;
    for (std::size_t t = 0; j_ok && t < tn; ++t)
        j_ok = b.j[t] == b.q[detail::pidx(b, StarGraph::hub, t)];
    r.check(j_ok, "j is the inclusion at the hub");
    r.check(is_homomorphism(b.T, b.G, b.j), "j is a homomorphism");
    {
        std::vector<char> seen(b.G.vertex_count(), 0);
        bool inj = true;
        for (int v : b.j) {
            inj = inj && !seen[static_cast<std::size_t>(v)];
            seen[static_cast<std::size_t>(v)] = 1;
        }
        r.check(inj, "j is injective");
    }
    r.notes.push_back("ok: chi(G) = " + std::to_string(b.palette) +
                      " certified by the fbar upper bound and the j lower bound");

    {
        QuotientResult bq = detail::star_bouquet(b.X);
        std::size_t expect =
            1 + b.X.branches * (static_cast<std::size_t>(b.X.branch_length) - 1);
        bool shape = bq.graph.vertex_count() == expect;
        std::size_t wedge = static_cast<std::size_t>(bq.projection[StarGraph::hub]);
        shape = shape && bq.graph.degree(wedge) == 2 * b.X.branches + 1;  // loop included
        for (std::size_t v = 0; shape && v < bq.graph.vertex_count(); ++v)
            if (v != wedge) shape = shape && bq.graph.degree(v) == 3;
        r.check(shape, "X collapses to a bouquet of " + std::to_string(b.X.branches) + " circles");
    }

    r.check(b.certs.size() == b.gammas.size(), "one certificate per automorphism");
    for (std::size_t a = 0; a < b.certs.size() && r.ok; ++a) {
        PathVerdict v = validate_path(b.T, b.G, b.certs[a].entries);
        r.check(v.ok && b.certs[a].front() == b.j &&
                    b.certs[a].back() == compose(b.j, b.gammas[a]),
                "certificate " + b.gamma_names[a] + " validates with endpoints j, j o gamma" +
                    (v.ok ? "" : " (" + v.message() + ")"));
    }
    return r;
}

// ---- bundle serialization ----
//
// A bundle directory holds meta.txt, T.graph, X.graph, G.graph, q.map,
// j.map, fbar.map and one cert_<gamma>.hompath per automorphism.

inline void save_bundle(const WitnessBundle& b, const std::filesystem::path& dir, int n, int k) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ostringstream meta;
    meta << "witness " << n << " " << k << " " << b.palette << " " << b.X.branch_length << " "
         << b.X.branches << "\n";
    for (std::size_t a = 0; a < b.gammas.size(); ++a) {
        meta << "gamma " << b.gamma_names[a];
        for (int v : b.gammas[a]) meta << " " << v;
        meta << "\n";
    }
    atomic_write(dir / "meta.txt", meta.str());
    atomic_write(dir / "T.graph", format_graph(b.T));
    atomic_write(dir / "X.graph", format_graph(b.X.graph));
    atomic_write(dir / "G.graph", format_graph(b.G));
    atomic_write(dir / "q.map", format_mapping(b.q));
    atomic_write(dir / "j.map", format_mapping(b.j));
    atomic_write(dir / "fbar.map", format_mapping(b.fbar));
    for (std::size_t a = 0; a < b.certs.size(); ++a)
        atomic_write(dir / ("cert_" + b.gamma_names[a] + ".hompath"),
                     format_hompath({n, k, "homg", b.certs[a]}));
}

struct LoadedBundle {
    WitnessBundle bundle;
    int n = 0;
    int k = 0;
};

inline LoadedBundle load_bundle(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    LoadedBundle out;
    WitnessBundle& b = out.bundle;

    std::istringstream meta(read_file(dir / "meta.txt"));
    std::string tag;
    std::size_t branches = 0;
    int length = 0;
    if (!(meta >> tag >> out.n >> out.k >> b.palette >> length >> branches) || tag != "witness")
        throw ParseError("meta.txt: bad header");
    std::string line;
    std::getline(meta, line);
    while (std::getline(meta, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> tag >> name) || tag != "gamma") throw ParseError("meta.txt: bad gamma line");
        VertexMap gamma;
        int v = 0;
        while (ls >> v) gamma.push_back(v);
        b.gamma_names.push_back(name);
        b.gammas.push_back(std::move(gamma));
    }
    if (b.gammas.size() != branches) throw ParseError("meta.txt: gamma count mismatch");

    b.T = parse_graph(read_file(dir / "T.graph"));
    Graph x_file = parse_graph(read_file(dir / "X.graph"));
    b.X = make_star(branches, length, b.gamma_names);
    if (!(b.X.graph == x_file)) throw ParseError("X.graph does not match the star layout in meta.txt");
    b.G = parse_graph(read_file(dir / "G.graph"));
    b.q = parse_mapping(read_file(dir / "q.map"));
    b.j = parse_mapping(read_file(dir / "j.map"));
    b.fbar = parse_mapping(read_file(dir / "fbar.map"));

    if (b.q.size() != b.X.graph.vertex_count() * b.T.vertex_count())
        throw ParseError("q.map has the wrong length");
    for (int v : b.q)
        if (v < 0 || static_cast<std::size_t>(v) >= b.G.vertex_count())
            throw ParseError("q.map value out of range");
    b.big_f = compose(b.fbar, b.q);
    b.base = compose(b.fbar, b.j);  // base = F(u, .) = fbar o j
    std::vector<int> cls(b.q.begin(), b.q.end());
    b.classes = VertexPartition::from_class_map(std::move(cls));

    for (const std::string& name : b.gamma_names) {
        HomPathFile f = parse_hompath(read_file(dir / ("cert_" + name + ".hompath")));
        if (f.kind != "homg" || f.path.palette != static_cast<int>(b.G.vertex_count()))
            throw ParseError("certificate " + name + " has a bad header");
        b.certs.push_back(std::move(f.path));
    }
    return out;
}

inline VerifyReport verify_bundle_dir(const std::filesystem::path& dir) {
    LoadedBundle loaded = load_bundle(dir);
    return verify_bundle(loaded.bundle);
}

}  // namespace sghom
