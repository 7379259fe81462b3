#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <stdexcept>
#include <vector>

#include "sghom/graph.hpp"

namespace sghom {

inline constexpr std::size_t kOracleGuard = 64;

inline void check_guard(const Graph& g, bool force, const char* what) {
    if (!force && g.vertex_count() > kOracleGuard)
        throw std::invalid_argument(std::string(what) +
                                    ": vertex count exceeds the search guard (pass force to override)");
}

namespace detail {

inline bool colourable_with(const Graph& g, int colours, const std::vector<std::size_t>& order) {
    const std::size_t n = g.vertex_count();
    VertexMap col(n, -1);
    std::size_t pos = 0;
    std::vector<int> tried(n, -1);
    // Backtracking over the given vertex order; lowest colour first, and a new
    // colour is introduced only one beyond the largest used so far.
    std::vector<int> max_stack(n + 1, -1);
    max_stack[0] = -1;
    while (true) {
        std::size_t v = order[pos];
        int limit = std::min(colours - 1, max_stack[pos] + 1);
        int c = tried[pos] + 1;
        for (; c <= limit; ++c) {
            bool free = true;
            const Bitset& nb = g.neighbours(v);
            for (std::size_t u = nb.find_first(); u != Bitset::npos; u = nb.find_next(u))
                if (col[u] == c) {
                    free = false;
                    break;
                }
            if (free) break;
        }
        if (c > limit) {
            if (pos == 0) return false;
            tried[pos] = -1;
            --pos;
            col[order[pos]] = -1;
            continue;
        }
        tried[pos] = c;
        col[v] = c;
        max_stack[pos + 1] = std::max(max_stack[pos], c);
        if (++pos == g.vertex_count()) return true;
    }
}

}  // namespace detail

/// Least r admitting a proper r-colouring, by backtracking with vertices
/// ordered by decreasing degree (lowest index breaks ties).
inline int chromatic_number_exact(const Graph& g, bool force = false) {
    if (!g.loopless()) throw std::invalid_argument("chromatic number undefined with loops");
    check_guard(g, force, "chromatic_number_exact");
    if (g.vertex_count() == 0) return 0;
    std::vector<std::size_t> order(g.vertex_count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
    for (int r = 1;; ++r)
        if (detail::colourable_with(g, r, order)) return r;
}

/// All adjacency-preserving vertex bijections, in lexicographic order.
inline std::vector<VertexMap> automorphisms_exact(const Graph& g, bool force = false) {
    check_guard(g, force, "automorphisms_exact");
    const std::size_t n = g.vertex_count();
    std::vector<VertexMap> found;
    VertexMap img(n, -1);
    std::vector<bool> used(n, false);
    std::vector<std::size_t> degree(n);
    for (std::size_t v = 0; v < n; ++v) degree[v] = g.degree(v);

    auto consistent = [&](std::size_t v, std::size_t w) {
        if (degree[v] != degree[w] || g.has_loop(v) != g.has_loop(w)) return false;
        for (std::size_t u = 0; u < v; ++u)
            if (g.adjacent(u, v) != g.adjacent(static_cast<std::size_t>(img[u]), w)) return false;
        return true;
    };
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
        if (v == n) {
            found.push_back(img);
            return;
        }
        for (std::size_t w = 0; w < n; ++w) {
            if (used[w] || !consistent(v, w)) continue;
            img[v] = static_cast<int>(w);
            used[w] = true;
            rec(v + 1);
            used[w] = false;
        }
        img[v] = -1;
    };
    rec(0);
    return found;
}

/// All proper colourings with the given palette, lexicographically ordered.
/// The count is capped by `limit` to keep brute force honest about blowups.
inline std::vector<VertexMap> enumerate_proper_colourings(const Graph& g, int palette,
                                                          std::size_t limit = 5'000'000) {
    if (!g.loopless()) throw std::invalid_argument("proper colourings need a loopless graph");
    if (palette < 1) throw std::invalid_argument("palette must be positive");
    std::vector<VertexMap> out;
    const std::size_t n = g.vertex_count();
    VertexMap col(n, -1);
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
        if (v == n) {
            if (out.size() >= limit) throw std::runtime_error("colouring enumeration limit hit");
            out.push_back(col);
            return;
        }
        for (int c = 0; c < palette; ++c) {
            bool free = true;
            const Bitset& nb = g.neighbours(v);
            for (std::size_t u = nb.find_first(); u != Bitset::npos && free; u = nb.find_next(u))
                if (col[u] == c) free = false;
            if (!free) continue;
            col[v] = c;
            rec(v + 1);
            col[v] = -1;
        }
    };
    rec(0);
    return out;
}

/// Exhaustive counterpart of the mixture criterion: walks all 2^d maps that
/// mix f and g (d = number of disagreeing vertices), stopping at the first
/// mixture that fails to be a homomorphism.
inline bool all_mixtures_homomorphisms_bruteforce(const Graph& source, const Graph& target,
                                                  const VertexMap& f, const VertexMap& g) {
    require_mapping(source, target, f, "mixture brute force f");
    require_mapping(source, target, g, "mixture brute force g");
    std::vector<std::size_t> diff;
    for (std::size_t v = 0; v < f.size(); ++v)
        if (f[v] != g[v]) diff.push_back(v);
    if (diff.size() > 25)
        throw std::invalid_argument("mixture brute force: too many disagreements");
    VertexMap h = f;
    const std::uint64_t total = std::uint64_t{1} << diff.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t i = 0; i < diff.size(); ++i)
            h[diff[i]] = (mask >> i & 1) ? g[diff[i]] : f[diff[i]];
        if (!is_homomorphism(source, target, h)) return false;
    }
    return true;
}

enum class FlipMove { SingleFlip, ExpAdjacent };

struct FlipReport {
    std::vector<VertexMap> visited;  // BFS discovery order
    bool truncated = false;
};

namespace detail {

inline bool proper(const Graph& g, const VertexMap& col) {
    bool ok = true;
    g.for_each_ordered_edge([&](std::size_t u, std::size_t v) {
        if (col[u] == col[v]) ok = false;
    });
    return ok;
}

template <typename Fn>
void for_each_flip_neighbour(const Graph& g, int palette, const VertexMap& col, FlipMove move,
                             Fn&& visit) {
    const std::size_t n = g.vertex_count();
    if (move == FlipMove::SingleFlip) {
        VertexMap next = col;
        for (std::size_t v = 0; v < n; ++v) {
            for (int c = 0; c < palette; ++c) {
                if (c == col[v]) continue;
                bool free = true;
                const Bitset& nb = g.neighbours(v);
                for (std::size_t u = nb.find_first(); u != Bitset::npos && free; u = nb.find_next(u))
                    if (col[u] == c) free = false;
                if (!free) continue;
                next[v] = c;
                visit(next);
            }
            next[v] = col[v];
        }
        return;
    }
    // Exp-adjacent move: per vertex v the new colour must avoid the current
    // colours of v's neighbours; enumerate the product of those choice sets,
    // keeping only proper results.
    std::vector<std::vector<int>> choices(n);
    for (std::size_t v = 0; v < n; ++v) {
        Bitset banned(static_cast<std::size_t>(palette));
        const Bitset& nb = g.neighbours(v);
        for (std::size_t u = nb.find_first(); u != Bitset::npos; u = nb.find_next(u))
            banned.set(static_cast<std::size_t>(col[u]));
        for (int c = 0; c < palette; ++c)
            if (!banned.test(static_cast<std::size_t>(c))) choices[v].push_back(c);
    }
    VertexMap next(n);
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
        if (v == n) {
            if (next != col) visit(next);
            return;
        }
        for (int c : choices[v]) {
            bool free = true;
            const Bitset& nb = g.neighbours(v);
            for (std::size_t u = nb.find_first(); u != Bitset::npos && free; u = nb.find_next(u))
                if (u < v && next[u] == c) free = false;
            if (!free) continue;
            next[v] = c;
            rec(v + 1);
        }
    };
    rec(0);
}

}  // namespace detail

/// BFS closure of `start` under the chosen move relation, truncated once the
/// visited count would exceed `budget`.
inline FlipReport flip_component(const Graph& g, int palette, const VertexMap& start,
                                 FlipMove move, std::size_t budget) {
    if (!g.loopless()) throw std::invalid_argument("flip exploration needs a loopless graph");
    Graph pal = make_complete(palette);
    require_mapping(g, pal, start, "flip start");
    if (!detail::proper(g, start)) throw std::invalid_argument("start colouring is not proper");

    FlipReport report;
    // TODO: pack colourings into uint64 keys when palette^vertices fits;
    // the tree set dominates large censuses.
    std::set<VertexMap> seen;
    std::deque<VertexMap> queue;
    seen.insert(start);
    queue.push_back(start);
    while (!queue.empty()) {
        VertexMap cur = std::move(queue.front());
        queue.pop_front();
        report.visited.push_back(cur);
        detail::for_each_flip_neighbour(g, palette, cur, move, [&](const VertexMap& next) {
            if (seen.count(next)) return;
            if (seen.size() >= budget) {
                report.truncated = true;
                return;
            }
            seen.insert(next);
            queue.push_back(next);
        });
        if (report.truncated) break;
    }
    return report;
}

struct CensusReport {
    std::vector<std::size_t> component_sizes;  // descending
    std::size_t total = 0;
    bool truncated = false;
};

/// Partition of all proper colourings into move-relation components.
inline CensusReport flip_component_census(const Graph& g, int palette, FlipMove move,
                                          std::size_t budget) {
    CensusReport census;
    auto all = enumerate_proper_colourings(g, palette, budget);
    census.total = all.size();
    std::set<VertexMap> remaining(all.begin(), all.end());
    while (!remaining.empty()) {
        FlipReport part = flip_component(g, palette, *remaining.begin(), move, budget);
        census.truncated = census.truncated || part.truncated;
        census.component_sizes.push_back(part.visited.size());
        for (const auto& col : part.visited) remaining.erase(col);
    }
    std::sort(census.component_sizes.rbegin(), census.component_sizes.rend());
    return census;
}

}  // namespace sghom
