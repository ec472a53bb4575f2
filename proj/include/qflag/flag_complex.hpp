#pragma once

#include "common.hpp"
#include "digraph.hpp"

#include <algorithm>
#include <optional>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qflag {

/// Directed simplex: vertex sequence in arc order (source to sink).
using simplex_t = std::vector<vertex_t>;

/// Position of a simplex inside a complex: dimension and index within level.
struct simplex_ref_t {
    int dim = -1;
    index_t idx = -1;
    friend bool operator==(const simplex_ref_t& a, const simplex_ref_t& b) {
        return a.dim == b.dim && a.idx == b.idx;
    }
    friend bool operator<(const simplex_ref_t& a, const simplex_ref_t& b) {
        return a.dim != b.dim ? a.dim < b.dim : a.idx < b.idx;
    }
};

/**
 * Modified face map: deletes the i-th vertex for i < dim, the last vertex
 * for i >= dim.
 */
inline simplex_t face(const simplex_t& s, index_t i) {
    const index_t n = static_cast<index_t>(s.size()) - 1;
    if (n < 1) throw domain_error("face: 0-simplex has no faces");
    if (i < 0) throw domain_error("face: negative index");
    const index_t drop = std::min(i, n);
    simplex_t out;
    out.reserve(s.size() - 1);
    for (index_t k = 0; k <= n; ++k)
        if (k != drop) out.push_back(s[static_cast<size_t>(k)]);
    return out;
}

/// True when a is a subsequence of b (inherited order).
inline bool is_subsequence(const simplex_t& a, const simplex_t& b) {
    size_t i = 0;
    for (size_t j = 0; j < b.size() && i < a.size(); ++j)
        if (a[i] == b[j]) ++i;
    return i == a.size();
}

/**
 * Directed flag complex: all directed cliques of a digraph, grouped by
 * dimension, lexicographic within each level. Immutable after build.
 *
 * Maximality is relative to the stored complex: with a dimension cap the
 * top-level simplices are flagged maximal even if larger cliques exist in
 * the digraph.
 */
class flag_complex_t {
public:
    struct cofacet_t {
        index_t coface;  // index within level dim+1
        int position;    // deleted vertex position
    };

    int dim() const { return static_cast<int>(levels_.size()) - 1; }

    index_t n_simplices() const { return total_; }

    index_t level_count(int k) const {
        return (k < 0 || k > dim()) ? 0 : static_cast<index_t>(levels_[static_cast<size_t>(k)].size());
    }

    const std::vector<simplex_t>& level(int k) const {
        if (k < 0 || k > dim()) throw domain_error("flag_complex: level out of range");
        return levels_[static_cast<size_t>(k)];
    }

    const simplex_t& simplex(simplex_ref_t r) const {
        return levels_[static_cast<size_t>(r.dim)][static_cast<size_t>(r.idx)];
    }

    bool is_maximal(simplex_ref_t r) const {
        return maximal_[static_cast<size_t>(r.dim)][static_cast<size_t>(r.idx)] != 0;
    }

    const std::vector<cofacet_t>& cofacets(simplex_ref_t r) const {
        return cofacets_[static_cast<size_t>(r.dim)][static_cast<size_t>(r.idx)];
    }

    /// Level-k simplices containing vertex v.
    const std::vector<index_t>& with_vertex(int k, vertex_t v) const {
        static const std::vector<index_t> empty;
        if (k < 0 || k > dim()) return empty;
        const auto& m = with_vertex_[static_cast<size_t>(k)];
        if (v < 0 || static_cast<size_t>(v) >= m.size()) return empty;
        return m[static_cast<size_t>(v)];
    }

    /// Index of s within its level, or none if not stored.
    std::optional<simplex_ref_t> find(const simplex_t& s) const {
        const int k = static_cast<int>(s.size()) - 1;
        if (k < 0 || k > dim()) return std::nullopt;
        const auto& lv = levels_[static_cast<size_t>(k)];
        auto it = std::lower_bound(lv.begin(), lv.end(), s);
        if (it == lv.end() || *it != s) return std::nullopt;
        return simplex_ref_t{k, static_cast<index_t>(it - lv.begin())};
    }

    bool contains(const simplex_t& s) const { return find(s).has_value(); }

    /// Per-dimension simplex counts.
    std::vector<index_t> str1() const {
        std::vector<index_t> v;
        v.reserve(levels_.size());
        for (const auto& lv : levels_) v.push_back(static_cast<index_t>(lv.size()));
        return v;
    }

    /**
     * Maximal simplices of dimension >= q, ordered lexicographically by
     * vertex sequence across dimensions. Out-of-range q yields an empty list.
     */
    std::vector<simplex_ref_t> maximal_simplices(int q) const {
        std::vector<simplex_ref_t> out;
        if (q < 0 || q > dim()) return out;
        for (int k = q; k <= dim(); ++k)
            for (index_t i = 0; i < level_count(k); ++i)
                if (maximal_[static_cast<size_t>(k)][static_cast<size_t>(i)])
                    out.push_back({k, i});
        std::sort(out.begin(), out.end(), [this](simplex_ref_t a, simplex_ref_t b) {
            return simplex(a) < simplex(b);
        });
        return out;
    }

    /// Flat id over all levels (level offset + index).
    index_t flat_id(simplex_ref_t r) const {
        return offsets_[static_cast<size_t>(r.dim)] + r.idx;
    }

    simplex_ref_t from_flat(index_t id) const {
        int k = 0;
        while (k + 1 <= dim() && offsets_[static_cast<size_t>(k + 1)] <= id) ++k;
        return {k, id - offsets_[static_cast<size_t>(k)]};
    }

    const digraph_t& graph() const { return graph_; }

    bool has_weights() const { return !node_weights_.empty(); }

    double node_weight_of(vertex_t v) const {
        if (node_weights_.empty()) throw domain_error("flag_complex: no weights stored");
        return node_weights_[static_cast<size_t>(v)];
    }

    friend flag_complex_t build_dfc(const digraph_t&, std::optional<int>);
    friend flag_complex_t build_dfc(const weighted_digraph_t&, std::optional<int>);

private:
    digraph_t graph_;
    std::vector<double> node_weights_;
    std::vector<std::vector<simplex_t>> levels_;
    std::vector<std::vector<char>> maximal_;
    std::vector<std::vector<std::vector<cofacet_t>>> cofacets_;
    std::vector<std::vector<std::vector<index_t>>> with_vertex_;
    std::vector<index_t> offsets_;
    index_t total_ = 0;

    void finalize() {
        const size_t nlev = levels_.size();
        maximal_.assign(nlev, {});
        cofacets_.assign(nlev, {});
        with_vertex_.assign(nlev, {});
        offsets_.assign(nlev, 0);
        total_ = 0;
        for (size_t k = 0; k < nlev; ++k) {
            offsets_[k] = total_;
            total_ += static_cast<index_t>(levels_[k].size());
            maximal_[k].assign(levels_[k].size(), 1);
            cofacets_[k].assign(levels_[k].size(), {});
            with_vertex_[k].assign(static_cast<size_t>(graph_.n_vertices()), {});
            for (size_t i = 0; i < levels_[k].size(); ++i)
                for (vertex_t v : levels_[k][i])
                    with_vertex_[k][static_cast<size_t>(v)].push_back(static_cast<index_t>(i));
        }
        for (size_t k = 1; k < nlev; ++k) {
            const auto& lv = levels_[k];
            for (size_t t = 0; t < lv.size(); ++t) {
                const simplex_t& theta = lv[t];
                simplex_t f(theta.size() - 1);
                for (int p = 0; p < static_cast<int>(theta.size()); ++p) {
                    size_t w = 0;
                    for (size_t u = 0; u < theta.size(); ++u)
                        if (u != static_cast<size_t>(p)) f[w++] = theta[u];
                    auto r = find(f);
                    if (!r) throw numeric_error("flag_complex: closure violated during indexing");
                    cofacets_[k - 1][static_cast<size_t>(r->idx)].push_back(
                        {static_cast<index_t>(t), p});
                    maximal_[k - 1][static_cast<size_t>(r->idx)] = 0;
                }
            }
        }
    }
};

namespace detail {

inline void enumerate_from_root(const digraph_t& g, vertex_t root, std::optional<int> d_max,
                                std::vector<std::vector<simplex_t>>& levels) {
    simplex_t seq = {root};
    std::vector<vertex_t> cand(g.out_neighbors(root).begin(), g.out_neighbors(root).end());
    // Depth-first extension; candidates stay sorted, so each level fills in
    // lexicographic order.
    struct frame_t {
        std::vector<vertex_t> cand;
        size_t next;
    };
    if (levels.empty()) levels.emplace_back();
    levels[0].push_back(seq);
    std::vector<frame_t> stack;
    stack.push_back({std::move(cand), 0});
    while (!stack.empty()) {
        frame_t& top = stack.back();
        if (top.next >= top.cand.size() ||
            (d_max && static_cast<int>(seq.size()) > *d_max)) {
            seq.pop_back();
            stack.pop_back();
            continue;
        }
        vertex_t w = top.cand[top.next++];
        seq.push_back(w);
        if (levels.size() < seq.size()) levels.emplace_back();
        levels[seq.size() - 1].push_back(seq);
        const auto& nw = g.out_neighbors(w);
        std::vector<vertex_t> inter;
        std::set_intersection(top.cand.begin(), top.cand.end(), nw.begin(), nw.end(),
                              std::back_inserter(inter));
        stack.push_back({std::move(inter), 0});
    }
}

} // namespace detail

/**
 * Build the directed flag complex of a digraph. Simplices are the directed
 * cliques in their unique source-to-sink order; d_max caps the dimension.
 * Double edges are accepted (each orientation spans its own clique chain).
 */
inline flag_complex_t build_dfc(const digraph_t& g, std::optional<int> d_max = std::nullopt) {
    if (d_max && *d_max < 0) throw domain_error("build_dfc: negative dimension cap");
    flag_complex_t fc;
    fc.graph_ = g;
    const vertex_t n = g.n_vertices();
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned nthreads = (n >= 128 && hw > 1) ? std::min<unsigned>(hw, 8) : 1;
    if (nthreads <= 1) {
        for (vertex_t v = 0; v < n; ++v)
            detail::enumerate_from_root(g, v, d_max, fc.levels_);
    } else {
        // Partition roots into contiguous chunks; concatenating per-chunk
        // buffers in chunk order preserves the lexicographic level order.
        std::vector<std::vector<std::vector<simplex_t>>> parts(nthreads);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t]() {
                const vertex_t lo = static_cast<vertex_t>(static_cast<int64_t>(n) * t / nthreads);
                const vertex_t hi = static_cast<vertex_t>(static_cast<int64_t>(n) * (t + 1) / nthreads);
                for (vertex_t v = lo; v < hi; ++v)
                    detail::enumerate_from_root(g, v, d_max, parts[t]);
            });
        for (auto& th : pool) th.join();
        for (const auto& part : parts) {
            if (fc.levels_.size() < part.size()) fc.levels_.resize(part.size());
            for (size_t k = 0; k < part.size(); ++k)
                fc.levels_[k].insert(fc.levels_[k].end(), part[k].begin(), part[k].end());
        }
    }
    while (!fc.levels_.empty() && fc.levels_.back().empty()) fc.levels_.pop_back();
    fc.finalize();
    return fc;
}

/// Build from a weighted digraph; node weights are stored for simplex_weight.
inline flag_complex_t build_dfc(const weighted_digraph_t& g, std::optional<int> d_max = std::nullopt) {
    flag_complex_t fc = build_dfc(g.base(), d_max);
    fc.node_weights_.resize(static_cast<size_t>(g.base().n_vertices()));
    for (vertex_t v = 0; v < g.base().n_vertices(); ++v)
        fc.node_weights_[static_cast<size_t>(v)] = node_weight(g, v);
    return fc;
}

/// Product weight of a simplex: product of its vertices' node weights.
inline double simplex_weight(const flag_complex_t& fc, const simplex_t& s) {
    if (!fc.contains(s)) throw domain_error("simplex_weight: simplex not in complex");
    if (!fc.has_weights()) throw domain_error("simplex_weight: complex has no weights");
    double w = 1.0;
    for (vertex_t v : s) w *= fc.node_weight_of(v);
    return w;
}

enum class double_edge_policy { clique_preserving, drop_both, keep_lower_source };

/**
 * Remove double edges. The clique-preserving policy drops, per symmetric
 * pair, the arc participating in fewer maximal directed cliques of the
 * original digraph (tie: drop the arc with the larger source id); decisions
 * are taken in one pass against the original counts.
 */
inline digraph_t remove_double_edges(const digraph_t& g, double_edge_policy policy,
                                     std::optional<int> d_max = std::nullopt) {
    auto pairs = g.double_edges();
    if (pairs.empty()) return g;
    std::unordered_map<uint64_t, int64_t> clique_count;
    if (policy == double_edge_policy::clique_preserving) {
        flag_complex_t fc = build_dfc(g, d_max);
        for (int k = 1; k <= fc.dim(); ++k)
            for (index_t i = 0; i < fc.level_count(k); ++i) {
                simplex_ref_t r{k, i};
                if (!fc.is_maximal(r)) continue;
                const simplex_t& s = fc.simplex(r);
                for (size_t a = 0; a < s.size(); ++a)
                    for (size_t b = a + 1; b < s.size(); ++b)
                        ++clique_count[arc_key(s[a], s[b])];
            }
    }
    std::unordered_set<uint64_t> drop;
    for (auto [u, v] : pairs) {
        switch (policy) {
            case double_edge_policy::drop_both:
                drop.insert(arc_key(u, v));
                drop.insert(arc_key(v, u));
                break;
            case double_edge_policy::keep_lower_source:
                drop.insert(arc_key(std::max(u, v), std::min(u, v)));
                break;
            case double_edge_policy::clique_preserving: {
                int64_t cuv = 0, cvu = 0;
                if (auto it = clique_count.find(arc_key(u, v)); it != clique_count.end()) cuv = it->second;
                if (auto it = clique_count.find(arc_key(v, u)); it != clique_count.end()) cvu = it->second;
                if (cuv < cvu) drop.insert(arc_key(u, v));
                else if (cvu < cuv) drop.insert(arc_key(v, u));
                else drop.insert(arc_key(std::max(u, v), std::min(u, v)));
                break;
            }
        }
    }
    digraph_t out(g.n_vertices());
    for (auto [u, v] : g.arc_list())
        if (!drop.count(arc_key(u, v))) out.add_arc(u, v);
    return out;
}

} // namespace qflag
