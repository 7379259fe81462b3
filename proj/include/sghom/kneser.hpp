#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sghom/graph.hpp"

namespace sghom {

/// Parameters of the Kneser family: n-subsets of {0..m-1} with m = 2n+k.
struct KneserParams {
    int n = 0;
    int k = 0;

    int m() const { return 2 * n + k; }
    int palette() const { return k + 2; }

    void validate() const {
        if (n < 1 || k < 0) throw std::invalid_argument("Kneser parameters need n >= 1, k >= 0");
    }
};

enum class SetKind { Kneser, SemiStable, Stable };

/// Strictly increasing element list of an n-subset of {0..m-1}.
using StableSet = std::vector<int>;

/// No two linearly consecutive elements.
inline bool is_semi_stable(const StableSet& s) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] == s[i - 1] + 1) return false;
    return true;
}

/// Semi-stable and not containing 0 and m-1 together.
inline bool is_stable(const StableSet& s, int m) {
    if (!is_semi_stable(s)) return false;
    return !(s.size() >= 2 && s.front() == 0 && s.back() == m - 1);
}

inline bool set_qualifies(const StableSet& s, int m, SetKind kind) {
    switch (kind) {
        case SetKind::Kneser: return true;
        case SetKind::SemiStable: return is_semi_stable(s);
        case SetKind::Stable: return is_stable(s, m);
    }
    return false;
}

/// Qualifying n-subsets in lexicographic order; this order defines the vertex
/// indexing used by every certificate.
inline std::vector<StableSet> enumerate_sets(KneserParams params, SetKind kind) {
    params.validate();
    const int n = params.n, m = params.m();
    {
        double binom = 1.0;  // C(m,n) upper-bounds all three kinds
        for (int i = 1; i <= n; ++i) binom *= static_cast<double>(m - n + i) / i;
        if (binom > 2e6)
            throw std::invalid_argument("enumerate_sets: C(" + std::to_string(m) + "," +
                                        std::to_string(n) + ") exceeds the desk-scale limit");
    }
    std::vector<StableSet> out;
    StableSet cur;
    std::function<void(int)> rec = [&](int next) {
        if (static_cast<int>(cur.size()) == n) {
            if (set_qualifies(cur, m, kind)) out.push_back(cur);
            return;
        }
        int room = n - static_cast<int>(cur.size());
        for (int v = next; v <= m - room; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

inline std::string set_label(const StableSet& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i]);
    }
    return out;
}

/// A Kneser-family graph together with its vertex enumeration.
struct KneserGraph {
    KneserParams params;
    SetKind kind = SetKind::Stable;
    std::vector<StableSet> sets;
    Graph graph;

    /// Index in the lex enumeration, or -1 when absent.
    int index_of(const StableSet& s) const {
        auto it = std::lower_bound(sets.begin(), sets.end(), s);
        if (it == sets.end() || *it != s) return -1;
        return static_cast<int>(it - sets.begin());
    }
};

inline bool disjoint(const StableSet& a, const StableSet& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) ++i;
        else ++j;
    }
    return true;
}

/// Vertices are the enumerated sets, adjacency is disjointness.
inline KneserGraph make_kneser_graph(KneserParams params, SetKind kind) {
    KneserGraph kg;
    kg.params = params;
    kg.kind = kind;
    kg.sets = enumerate_sets(params, kind);
    kg.graph = Graph(kg.sets.size());
    for (std::size_t i = 0; i < kg.sets.size(); ++i)
        for (std::size_t j = i + 1; j < kg.sets.size(); ++j)
            if (disjoint(kg.sets[i], kg.sets[j])) kg.graph.add_edge(i, j);
    std::vector<std::string> labels(kg.sets.size());
    for (std::size_t i = 0; i < kg.sets.size(); ++i) labels[i] = set_label(kg.sets[i]);
    kg.graph.set_labels(std::move(labels));
    return kg;
}

/// Canonical colouring S -> min S into K_{k+2}.
inline VertexMap canonical_colouring(const KneserGraph& kg) {
    VertexMap c(kg.sets.size());
    for (std::size_t i = 0; i < kg.sets.size(); ++i) c[i] = kg.sets[i].front();
    return c;
}

/// Element of the dihedral group acting on Z_m: tau^shift, optionally
/// precomposed with the reflection rho(x) = k - x.
struct DihedralElement {
    int shift = 0;
    bool reflected = false;

    int apply(int x, const KneserParams& p) const {
        int m = p.m();
        int y = reflected ? p.k - x : x;
        return ((y + shift) % m + m) % m;
    }

    DihedralElement compose(const DihedralElement& inner, const KneserParams& p) const {
        // this(inner(x)); arithmetic mod m.
        int m = p.m();
        int s = reflected ? shift - inner.shift : shift + inner.shift;
        return {(s % m + m) % m, reflected != inner.reflected};
    }

    friend bool operator==(const DihedralElement& a, const DihedralElement& b) = default;
};

inline std::string dihedral_name(const DihedralElement& d) {
    return (d.reflected ? "r" : "t") + std::to_string(d.shift);
}

inline std::optional<DihedralElement> parse_dihedral_name(const std::string& name, int m) {
    if (name.size() < 2 || (name[0] != 't' && name[0] != 'r')) return std::nullopt;
    int shift = 0;
    try {
        std::size_t used = 0;
        shift = std::stoi(name.substr(1), &used);
        if (used + 1 != name.size()) return std::nullopt;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (shift < 0 || shift >= m) return std::nullopt;
    return DihedralElement{shift, name[0] == 'r'};
}

/// Rotations t0..t(m-1) then reflections r0..r(m-1).
inline std::vector<DihedralElement> all_dihedral_elements(const KneserParams& p) {
    std::vector<DihedralElement> out;
    out.reserve(2 * static_cast<std::size_t>(p.m()));
    for (int a = 0; a < p.m(); ++a) out.push_back({a, false});
    for (int a = 0; a < p.m(); ++a) out.push_back({a, true});
    return out;
}

/// Elementwise image of a set, re-sorted.
inline StableSet apply_dihedral(const DihedralElement& d, const StableSet& s,
                                const KneserParams& p) {
    StableSet out;
    out.reserve(s.size());
    for (int x : s) out.push_back(d.apply(x, p));
    std::sort(out.begin(), out.end());
    return out;
}

/// The vertex permutation a dihedral element induces on the enumerated sets.
inline VertexMap dihedral_vertex_permutation(const KneserGraph& kg, const DihedralElement& d) {
    VertexMap perm(kg.sets.size());
    for (std::size_t i = 0; i < kg.sets.size(); ++i) {
        int j = kg.index_of(apply_dihedral(d, kg.sets[i], kg.params));
        if (j < 0)
            throw std::logic_error("dihedral image left the vertex set (stability not preserved)");
        perm[i] = j;
    }
    return perm;
}

/// Recovers the dihedral element inducing a given automorphism of SG_{n,k}.
/// Requires n >= 2, k >= 1 (the range where the automorphism group is
/// known to be dihedral); a permutation matched by no element contradicts
/// that description and is reported as such.
inline DihedralElement dihedral_word(const KneserGraph& kg, const VertexMap& perm) {
    if (kg.kind != SetKind::Stable)
        throw std::invalid_argument("dihedral_word expects a stable Kneser graph");
    if (kg.params.n < 2 || kg.params.k < 1)
        throw std::invalid_argument("dihedral_word needs n >= 2, k >= 1");
    if (perm.size() != kg.sets.size())
        throw std::invalid_argument("dihedral_word: permutation size mismatch");
    for (const DihedralElement& d : all_dihedral_elements(kg.params))
        if (dihedral_vertex_permutation(kg, d) == perm) return d;
    throw HypothesisError(
        "permutation is induced by no dihedral element (contradicts the known automorphism group)");
}

}  // namespace sghom
