#pragma once

#include <array>
#include <cassert>
#include <string>
#include <vector>

#include "sghom/graph.hpp"
#include "sghom/kneser.hpp"

namespace sghom {

/// Permutation of a palette, stored as its image array.
using Permutation = std::vector<int>;

inline Permutation identity_permutation(int size) {
    Permutation p(static_cast<std::size_t>(size));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

inline bool is_permutation(const Permutation& p) {
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[static_cast<std::size_t>(v)])
            return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

/// Parity via cycle decomposition: (-1)^(n - #cycles).
inline int sign(const Permutation& p) {
    if (!is_permutation(p)) throw std::invalid_argument("sign: not a permutation");
    std::vector<bool> seen(p.size(), false);
    std::size_t cycles = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) seen[j] = true;
    }
    return ((p.size() - cycles) % 2 == 0) ? 1 : -1;
}

/// The 3-cycle (i i+1 i+2) on a palette of the given size.
inline Permutation consecutive_3cycle(int i, int size) {
    if (i < 0 || i + 2 >= size) throw std::invalid_argument("3-cycle window out of range");
    Permutation p = identity_permutation(size);
    p[static_cast<std::size_t>(i)] = i + 1;
    p[static_cast<std::size_t>(i) + 1] = i + 2;
    p[static_cast<std::size_t>(i) + 2] = i;
    return p;
}

/// tau_bar: x -> x+1 mod palette.
inline Permutation palette_rotation(int palette) {
    Permutation p(static_cast<std::size_t>(palette));
    for (int x = 0; x < palette; ++x) p[static_cast<std::size_t>(x)] = (x + 1) % palette;
    return p;
}

/// rho_bar: x -> k-x mod k+2.
inline Permutation palette_reflection(int k) {
    int palette = k + 2;
    Permutation p(static_cast<std::size_t>(palette));
    for (int x = 0; x < palette; ++x)
        p[static_cast<std::size_t>(x)] = ((k - x) % palette + palette) % palette;
    return p;
}

/// Writes an even permutation as a product of consecutive 3-cycles.  The
/// returned indices [i1..ir] satisfy pi = g_{i1} o g_{i2} o ... o g_{ir}
/// (rightmost factor applied first).  Emitted length is at most
/// p*p/4 + 2*p for palette size p.
inline std::vector<int> decompose_even(const Permutation& pi) {
    const int p = static_cast<int>(pi.size());
    if (!is_permutation(pi)) throw std::invalid_argument("decompose_even: not a permutation");
    if (p < 3) throw std::invalid_argument("decompose_even needs palette >= 3");
    if (sign(pi) != 1)
        throw HypothesisError("decompose_even: permutation is odd (sign -1)");

    // Sort the image array of pi^{-1} to the identity by right-multiplying
    // position rotations g_w; from pi^{-1} g_{w1} ... g_{ws} = id the
    // recorded windows compose to pi in list order.
    Permutation a(pi.size());
    for (std::size_t x = 0; x < pi.size(); ++x) a[static_cast<std::size_t>(pi[x])] = static_cast<int>(x);
    std::vector<int> recorded;
    auto rotate_window = [&](int w) {
        int t0 = a[static_cast<std::size_t>(w)];
        a[static_cast<std::size_t>(w)] = a[static_cast<std::size_t>(w) + 1];
        a[static_cast<std::size_t>(w) + 1] = a[static_cast<std::size_t>(w) + 2];
        a[static_cast<std::size_t>(w) + 2] = t0;
        recorded.push_back(w);
    };
    for (int t = p - 1; t >= 2; --t) {
        int q = 0;
        while (a[static_cast<std::size_t>(q)] != t) ++q;
        while (t - q >= 2) {
            rotate_window(q);
            q += 2;
        }
        if (t - q == 1) {
            rotate_window(q - 1);
            rotate_window(q - 1);
        }
    }
    if (a != identity_permutation(p))
        throw std::logic_error("decompose_even failed to sort an even permutation");
    assert(static_cast<int>(recorded.size()) <= p * p / 4 + 2 * p);
    return recorded;
}

/// Composes a 3-cycle list back into a permutation (for round-trip checks).
inline Permutation compose_3cycles(const std::vector<int>& windows, int palette) {
    Permutation acc = identity_permutation(palette);
    for (int w : windows) acc = compose(acc, consecutive_3cycle(w, palette));
    return acc;
}

/// A certificate path: colourings of a fixed source, consecutive entries
/// adjacent in the exponential graph.
struct HomPath {
    int palette = 0;
    std::vector<VertexMap> entries;

    const VertexMap& front() const { return entries.front(); }
    const VertexMap& back() const { return entries.back(); }
    std::size_t length() const { return entries.size(); }
};

struct PathVerdict {
    enum class Failure { None, BadEntry, EntryNotHomomorphism, JunctionNotExpAdjacent };

    bool ok = true;
    Failure failure = Failure::None;
    std::size_t index = 0;   // entry index; junction i means between entries i and i+1
    std::size_t edge_u = 0;  // witness source edge for adjacency failures
    std::size_t edge_v = 0;

    std::string message() const {
        switch (failure) {
            case Failure::None: return "valid";
            case Failure::BadEntry:
                return "entry " + std::to_string(index) + " is not a mapping into the target";
            case Failure::EntryNotHomomorphism:
                return "entry " + std::to_string(index) + " is not a homomorphism (source edge " +
                       std::to_string(edge_u) + "," + std::to_string(edge_v) + ")";
            case Failure::JunctionNotExpAdjacent:
                return "junction " + std::to_string(index) + "->" + std::to_string(index + 1) +
                       " is not exp-adjacent (source edge " + std::to_string(edge_u) + "," +
                       std::to_string(edge_v) + ")";
        }
        return "unknown";
    }
};

namespace detail {

inline bool find_exp_failure(const Graph& source, const Graph& target, const VertexMap& f,
                             const VertexMap& g, std::size_t& u_out, std::size_t& v_out) {
    for (std::size_t u = 0; u < source.vertex_count(); ++u) {
        const Bitset& nb = source.neighbours(u);
        for (std::size_t v = nb.find_first(); v != Bitset::npos; v = nb.find_next(v))
            if (!target.adjacent(static_cast<std::size_t>(f[u]), static_cast<std::size_t>(g[v]))) {
                u_out = u;
                v_out = v;
                return true;
            }
    }
    return false;
}

}  // namespace detail

/// Stateless certificate checker: every entry a homomorphism, every
/// consecutive pair exp-adjacent.  Reports the first failure.
inline PathVerdict validate_path(const Graph& source, const Graph& target,
                                 const std::vector<VertexMap>& entries) {
    PathVerdict v;
    if (entries.empty()) {
        v.ok = false;
        v.failure = PathVerdict::Failure::BadEntry;
        return v;
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!valid_mapping(source, target, entries[i])) {
            v.ok = false;
            v.failure = PathVerdict::Failure::BadEntry;
            v.index = i;
            return v;
        }
        std::size_t u = 0, w = 0;
        if (detail::find_exp_failure(source, target, entries[i], entries[i], u, w)) {
            v.ok = false;
            v.failure = PathVerdict::Failure::EntryNotHomomorphism;
            v.index = i;
            v.edge_u = u;
            v.edge_v = w;
            return v;
        }
    }
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
        std::size_t u = 0, w = 0;
        // one ordered scan covers both directions: the edge set is symmetric
        if (detail::find_exp_failure(source, target, entries[i], entries[i + 1], u, w)) {
            v.ok = false;
            v.failure = PathVerdict::Failure::JunctionNotExpAdjacent;
            v.index = i;
            v.edge_u = u;
            v.edge_v = w;
            return v;
        }
    }
    return v;
}

inline PathVerdict validate_path(const Graph& source, const HomPath& path) {
    return validate_path(source, make_complete(path.palette), path.entries);
}

/// Appends `tail` to `path`, merging equal junction entries.
inline void append_path(HomPath& path, const std::vector<VertexMap>& tail) {
    for (const auto& e : tail)
        if (path.entries.empty() || path.entries.back() != e) path.entries.push_back(e);
}

inline HomPath postcompose(const Permutation& sigma, const HomPath& path) {
    HomPath out{path.palette, {}};
    out.entries.reserve(path.entries.size());
    for (const auto& e : path.entries) out.entries.push_back(compose(sigma, e));
    return out;
}

inline HomPath precompose(const HomPath& path, const VertexMap& alpha) {
    HomPath out{path.palette, {}};
    out.entries.reserve(path.entries.size());
    for (const auto& e : path.entries) out.entries.push_back(compose(e, alpha));
    return out;
}

namespace detail {

/// Base path on the semi-stable graph of (n,k) = (2,1), lex vertex order
/// {0,2},{0,3},{0,4},{1,3},{1,4},{2,4}: the six stable columns realize the
/// classic c -> (0 1 2)c walk on the 5-cycle; the {0,4} column is the unique
/// lazy extension to the semi-stable graph.
inline const std::array<std::array<int, 6>, 6>& base_table_2_1() {
    static const std::array<std::array<int, 6>, 6> t = {{
        {0, 0, 0, 1, 1, 2},
        {0, 0, 0, 1, 2, 2},
        {0, 1, 0, 1, 2, 2},
        {0, 1, 0, 1, 2, 0},
        {0, 1, 0, 2, 2, 0},
        {1, 1, 1, 2, 2, 0},
    }};
    return t;
}

/// The unique semi-stable 2-subset of Z_5 with the same intersection with
/// {0,1,2,3} as S; total on semi-stable sets because patterns {3} and {}
/// cannot occur there.
inline StableSet k1_lift_image(const StableSet& s) {
    StableSet pattern;
    for (int x : s)
        if (x <= 3) pattern.push_back(x);
    if (pattern == StableSet{0, 2} || pattern == StableSet{0, 3} || pattern == StableSet{1, 3})
        return pattern;
    if (pattern == StableSet{0}) return {0, 4};
    if (pattern == StableSet{1}) return {1, 4};
    if (pattern == StableSet{2}) return {2, 4};
    throw std::logic_error("k=1 lift: impossible intersection pattern");
}

inline bool subset_of(const StableSet& a, const StableSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

/// Path on the semi-stable graph of (n,k) from the canonical colouring c to
/// (i i+1 i+2) o c, by induction on k: shift down for i > 0, detour through
/// the auxiliary colouring c' for i = 0, and the explicit base walk at k = 1.
inline HomPath path_for_3cycle(int n, int k, int i) {
    if (n < 2 || k < 1 || i < 0 || i >= k)
        throw std::invalid_argument("path_for_3cycle needs n >= 2, k >= 1, 0 <= i < k");
    KneserParams params{n, k};
    const int m = params.m();
    KneserGraph ssg = make_kneser_graph(params, SetKind::SemiStable);
    const std::size_t vn = ssg.sets.size();
    HomPath path{params.palette(), {}};

    if (k == 1) {
        // Pull the base walk back along the intersection-pattern lift.
        KneserGraph base = make_kneser_graph({2, 1}, SetKind::SemiStable);
        std::vector<int> lift(vn);
        for (std::size_t s = 0; s < vn; ++s) {
            StableSet img = detail::k1_lift_image(ssg.sets[s]);
            if (!detail::subset_of(img, ssg.sets[s]))
                throw std::logic_error("k=1 lift image is not a subset");
            lift[s] = base.index_of(img);
        }
        for (const auto& row : detail::base_table_2_1()) {
            VertexMap entry(vn);
            for (std::size_t s = 0; s < vn; ++s)
                entry[s] = row[static_cast<std::size_t>(lift[s])];
            append_path(path, {entry});
        }
    } else if (i > 0) {
        // Colours below i are frozen; the rest is the (n, k-i) instance
        // shifted up by i along S -> S - i.
        HomPath sub = path_for_3cycle(n, k - i, 0);
        KneserGraph subg = make_kneser_graph({n, k - i}, SetKind::SemiStable);
        std::vector<int> sub_index(vn, -1);
        for (std::size_t s = 0; s < vn; ++s) {
            if (ssg.sets[s].front() < i) continue;
            StableSet shifted;
            for (int x : ssg.sets[s]) shifted.push_back(x - i);
            sub_index[s] = subg.index_of(shifted);
            if (sub_index[s] < 0) throw std::logic_error("shifted set missing from sub-instance");
        }
        for (const auto& sub_entry : sub.entries) {
            VertexMap entry(vn);
            for (std::size_t s = 0; s < vn; ++s)
                entry[s] = sub_index[s] < 0 ? ssg.sets[s].front()
                                            : sub_entry[static_cast<std::size_t>(sub_index[s])] + i;
            append_path(path, {entry});
        }
    } else {
        // i = 0, k > 1: c ~ c' ~> pi o c' ~ pi o c, where c' recolours the
        // sets containing m-1 to k+1 and the rest follows the (n, k-1)
        // instance on the ground set {0..m-2}; pi fixes k+1 since k > 1.
        HomPath sub = path_for_3cycle(n, k - 1, 0);
        KneserGraph subg = make_kneser_graph({n, k - 1}, SetKind::SemiStable);
        std::vector<int> sub_index(vn, -1);
        for (std::size_t s = 0; s < vn; ++s) {
            if (ssg.sets[s].back() == m - 1) continue;
            sub_index[s] = subg.index_of(ssg.sets[s]);
            if (sub_index[s] < 0) throw std::logic_error("set missing from the k-1 sub-instance");
        }
        Permutation pi = consecutive_3cycle(0, params.palette());
        if (pi[static_cast<std::size_t>(k) + 1] != k + 1)
            throw std::logic_error("pi must fix colour k+1 in the detour case");
        VertexMap canonical = canonical_colouring(ssg);
        append_path(path, {canonical});
        for (const auto& sub_entry : sub.entries) {
            VertexMap entry(vn);
            for (std::size_t s = 0; s < vn; ++s)
                entry[s] = sub_index[s] < 0 ? k + 1
                                            : sub_entry[static_cast<std::size_t>(sub_index[s])];
            append_path(path, {entry});
        }
        append_path(path, {compose(pi, canonical)});
    }

    VertexMap canonical = canonical_colouring(ssg);
    if (path.front() != canonical ||
        path.back() != compose(consecutive_3cycle(i, params.palette()), canonical))
        throw std::logic_error("path_for_3cycle produced wrong endpoints");
    return path;
}

/// Path on the semi-stable graph from c to pi o c for an even palette
/// permutation pi, concatenating 3-cycle segments under the running prefix.
inline HomPath path_for_even(int n, int k, const Permutation& pi) {
    KneserParams params{n, k};
    if (n < 2 || k < 1) throw std::invalid_argument("path_for_even needs n >= 2, k >= 1");
    if (static_cast<int>(pi.size()) != params.palette())
        throw std::invalid_argument("path_for_even: permutation size must be k+2");
    std::vector<int> windows = decompose_even(pi);

    KneserGraph ssg = make_kneser_graph(params, SetKind::SemiStable);
    VertexMap canonical = canonical_colouring(ssg);
    HomPath path{params.palette(), {canonical}};
    Permutation prefix = identity_permutation(params.palette());
    for (int w : windows) {
        HomPath seg = postcompose(prefix, path_for_3cycle(n, k, w));
        append_path(path, seg.entries);
        prefix = compose(prefix, consecutive_3cycle(w, params.palette()));
    }
    if (prefix != pi) throw std::logic_error("3-cycle decomposition did not recompose");
    if (path.back() != compose(pi, canonical))
        throw std::logic_error("path_for_even produced a wrong endpoint");
    return path;
}

/// Restricts a semi-stable-graph path to the stable induced subgraph.
inline HomPath restrict_to_stable(int n, int k, const HomPath& ssg_path) {
    KneserGraph ssg = make_kneser_graph({n, k}, SetKind::SemiStable);
    KneserGraph sg = make_kneser_graph({n, k}, SetKind::Stable);
    std::vector<std::size_t> where(sg.sets.size());
    for (std::size_t s = 0; s < sg.sets.size(); ++s) {
        int idx = ssg.index_of(sg.sets[s]);
        if (idx < 0) throw std::logic_error("stable set missing from the semi-stable enumeration");
        where[s] = static_cast<std::size_t>(idx);
    }
    HomPath out{ssg_path.palette, {}};
    for (const auto& e : ssg_path.entries) {
        if (e.size() != ssg.sets.size())
            throw std::invalid_argument("restrict_to_stable: entry length mismatch");
        VertexMap entry(sg.sets.size());
        for (std::size_t s = 0; s < sg.sets.size(); ++s) entry[s] = e[where[s]];
        append_path(out, {entry});
    }
    return out;
}

/// Single-step certificate: the exp-adjacent pair (c o tau, tau_bar o c)
/// on the stable graph.
inline HomPath step_tau(const KneserGraph& sg) {
    if (sg.kind != SetKind::Stable || sg.params.n < 2 || sg.params.k < 1)
        throw std::invalid_argument("step_tau needs a stable Kneser graph with n >= 2, k >= 1");
    VertexMap c = canonical_colouring(sg);
    VertexMap tau = dihedral_vertex_permutation(sg, {1, false});
    return {sg.params.palette(), {compose(c, tau), compose(palette_rotation(sg.params.palette()), c)}};
}

/// Single-step certificate: the exp-adjacent pair (c o rho, rho_bar o c).
inline HomPath step_rho(const KneserGraph& sg) {
    if (sg.kind != SetKind::Stable || sg.params.n < 2 || sg.params.k < 1)
        throw std::invalid_argument("step_rho needs a stable Kneser graph with n >= 2, k >= 1");
    VertexMap c = canonical_colouring(sg);
    VertexMap rho = dihedral_vertex_permutation(sg, {0, true});
    return {sg.params.palette(), {compose(c, rho), compose(palette_reflection(sg.params.k), c)}};
}

namespace detail {

/// Generator path c ~> c o tau (or c o rho) on the stable graph: the even
/// palette twist followed by the single-edge step.
inline HomPath generator_path(const KneserGraph& sg, bool reflection) {
    const int n = sg.params.n, k = sg.params.k;
    Permutation bar = reflection ? palette_reflection(k) : palette_rotation(k + 2);
    HomPath path = restrict_to_stable(n, k, path_for_even(n, k, bar));
    DihedralElement d = reflection ? DihedralElement{0, true} : DihedralElement{1, false};
    VertexMap perm = dihedral_vertex_permutation(sg, d);
    append_path(path, {compose(canonical_colouring(sg), perm)});
    return path;
}

}  // namespace detail

/// Path on the stable graph from c to c o gamma for a dihedral automorphism,
/// composing tau/rho generator paths along the word.  Requires k = 3 (mod 4)
/// so that both palette twists are even.
inline HomPath path_to_automorphism(const KneserGraph& sg, const DihedralElement& gamma) {
    if (sg.kind != SetKind::Stable)
        throw std::invalid_argument("path_to_automorphism expects a stable Kneser graph");
    const int n = sg.params.n, k = sg.params.k;
    if (n < 2) throw std::invalid_argument("path_to_automorphism needs n >= 2");
    if (k % 4 != 3) {
        int s_tau = sign(palette_rotation(k + 2));
        int s_rho = sign(palette_reflection(k));
        throw HypothesisError("k = " + std::to_string(k) +
                              " is not 3 mod 4: sign(tau_bar) = " + std::to_string(s_tau) +
                              ", sign(rho_bar) = " + std::to_string(s_rho));
    }

    VertexMap canonical = canonical_colouring(sg);
    HomPath path{sg.params.palette(), {canonical}};
    // gamma = tau^shift o rho^eps; rho is applied first, so its generator
    // path comes first and each later segment is precomposed with the part
    // of the word already applied.
    VertexMap suffix = identity_permutation(static_cast<int>(sg.sets.size()));
    if (gamma.reflected) {
        append_path(path, detail::generator_path(sg, true).entries);
        suffix = dihedral_vertex_permutation(sg, {0, true});
    }
    HomPath tau_path = detail::generator_path(sg, false);
    VertexMap tau_perm = dihedral_vertex_permutation(sg, {1, false});
    for (int step = 0; step < gamma.shift; ++step) {
        append_path(path, precompose(tau_path, suffix).entries);
        suffix = compose(tau_perm, suffix);
    }
    if (path.back() != compose(canonical, dihedral_vertex_permutation(sg, gamma)))
        throw std::logic_error("path_to_automorphism produced a wrong endpoint");
    return path;
}

/// Refines a path so consecutive entries differ at exactly one vertex,
/// flipping disagreeing vertices in increasing order.
inline HomPath expand_to_flips(const Graph& source, const HomPath& path) {
    if (!source.loopless())
        throw std::invalid_argument("expand_to_flips needs a loopless source");
    PathVerdict v = validate_path(source, path);
    if (!v.ok) throw std::invalid_argument("expand_to_flips: invalid path: " + v.message());
    HomPath out{path.palette, {path.entries.front()}};
    for (std::size_t i = 0; i + 1 < path.entries.size(); ++i) {
        VertexMap cur = path.entries[i];
        const VertexMap& next = path.entries[i + 1];
        for (std::size_t u = 0; u < cur.size(); ++u) {
            if (cur[u] == next[u]) continue;
            cur[u] = next[u];
            append_path(out, {cur});
        }
    }
    if (out.back() != path.back()) throw std::logic_error("flip expansion lost the endpoint");
    return out;
}

}  // namespace sghom
