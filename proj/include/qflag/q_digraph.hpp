#pragma once

#include "common.hpp"
#include "adjacency.hpp"
#include "flag_complex.hpp"
#include "matrix.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace qflag {

enum class variant_t { maximal, lower };

inline const char* to_string(variant_t v) {
    return v == variant_t::maximal ? "maximal" : "lower";
}

/**
 * q-digraph: vertices are the maximal simplices of dimension >= q in
 * lexicographic order; an arc runs from s to t when s is plus-adjacent to t
 * under the variant's relation (strictly-lower for the maximal variant,
 * plain lower nearness for the lower variant).
 */
struct q_digraph_t {
    int q = 0;
    variant_t variant = variant_t::maximal;
    bool weighted = false;
    std::vector<simplex_ref_t> vertices;
    std::vector<simplex_t> sequences;
    std::vector<double> weights;  // product weights, filled when weighted
    std::vector<std::vector<index_t>> out;
    std::vector<std::vector<index_t>> in;
    std::unordered_set<uint64_t> arc_set;

    index_t n() const { return static_cast<index_t>(vertices.size()); }

    index_t n_arcs() const { return static_cast<index_t>(arc_set.size()); }

    bool has_arc(index_t i, index_t j) const {
        return arc_set.count(arc_key(static_cast<vertex_t>(i), static_cast<vertex_t>(j))) > 0;
    }

    std::vector<std::pair<index_t, index_t>> arc_list() const {
        std::vector<std::pair<index_t, index_t>> arcs;
        arcs.reserve(arc_set.size());
        for (index_t i = 0; i < n(); ++i)
            for (index_t j : out[static_cast<size_t>(i)]) arcs.emplace_back(i, j);
        return arcs;
    }
};

/// H_q as a dense matrix: 1 per arc, or the source's product weight.
inline dense_matrix_t adjacency_matrix(const q_digraph_t& qd) {
    dense_matrix_t m(qd.n(), qd.n());
    for (index_t i = 0; i < qd.n(); ++i)
        for (index_t j : qd.out[static_cast<size_t>(i)])
            m(i, j) = qd.weighted ? qd.weights[static_cast<size_t>(i)] : 1.0;
    return m;
}

namespace detail {

/// Buckets of q-digraph vertex indices sharing each q-face of the complex.
inline std::unordered_map<index_t, std::vector<index_t>> q_face_buckets(
    const flag_complex_t& fc, const std::vector<simplex_ref_t>& verts, int q) {
    std::unordered_map<index_t, std::vector<index_t>> buckets;
    std::vector<int> choose;
    for (index_t vi = 0; vi < static_cast<index_t>(verts.size()); ++vi) {
        const simplex_t& s = fc.simplex(verts[static_cast<size_t>(vi)]);
        const int d = static_cast<int>(s.size()) - 1;
        // enumerate (q+1)-subsequences; each is a stored q-face
        choose.assign(static_cast<size_t>(q + 1), 0);
        for (int k = 0; k <= q; ++k) choose[static_cast<size_t>(k)] = k;
        simplex_t f(static_cast<size_t>(q + 1));
        while (true) {
            for (int k = 0; k <= q; ++k)
                f[static_cast<size_t>(k)] = s[static_cast<size_t>(choose[static_cast<size_t>(k)])];
            auto r = fc.find(f);
            if (!r) throw numeric_error("q_face_buckets: face lookup failed");
            buckets[fc.flat_id(*r)].push_back(vi);
            int k = q;
            while (k >= 0 && choose[static_cast<size_t>(k)] == d - q + k) --k;
            if (k < 0) break;
            ++choose[static_cast<size_t>(k)];
            for (int t = k + 1; t <= q; ++t)
                choose[static_cast<size_t>(t)] = choose[static_cast<size_t>(t - 1)] + 1;
        }
    }
    return buckets;
}

} // namespace detail

/**
 * Build the q-digraph of a complex. Candidate pairs come from shared q-faces
 * (two simplices can only be q-near when they share q+1 vertices), so no
 * quadratic scan over vertex pairs is needed.
 */
inline q_digraph_t build_q_digraph(const flag_complex_t& fc, int q,
                                   variant_t variant = variant_t::maximal,
                                   bool weighted = false) {
    if (auto dbl = fc.graph().double_edges(); !dbl.empty())
        throw domain_error("build_q_digraph: source digraph has double edge (" +
                           std::to_string(dbl[0].first) + "," + std::to_string(dbl[0].second) +
                           ")");
    if (q < 0 || q > fc.dim()) throw domain_error("build_q_digraph: q out of range");
    if (weighted && !fc.has_weights())
        throw domain_error("build_q_digraph: weighted build needs a weighted complex");

    q_digraph_t qd;
    qd.q = q;
    qd.variant = variant;
    qd.weighted = weighted;
    qd.vertices = fc.maximal_simplices(q);
    const index_t n = qd.n();
    qd.sequences.reserve(static_cast<size_t>(n));
    for (auto r : qd.vertices) qd.sequences.push_back(fc.simplex(r));
    if (weighted) {
        qd.weights.reserve(static_cast<size_t>(n));
        for (auto r : qd.vertices) qd.weights.push_back(simplex_weight(fc, fc.simplex(r)));
    }
    qd.out.assign(static_cast<size_t>(n), {});
    qd.in.assign(static_cast<size_t>(n), {});

    auto buckets = detail::q_face_buckets(fc, qd.vertices, q);
    std::unordered_set<uint64_t> seen;
    auto add_arc = [&qd](index_t i, index_t j) {
        if (qd.arc_set.insert(arc_key(static_cast<vertex_t>(i), static_cast<vertex_t>(j))).second) {
            qd.out[static_cast<size_t>(i)].push_back(j);
            qd.in[static_cast<size_t>(j)].push_back(i);
        }
    };
    for (const auto& [face_id, members] : buckets) {
        for (size_t a = 0; a < members.size(); ++a)
            for (size_t b = a + 1; b < members.size(); ++b) {
                index_t i = std::min(members[a], members[b]);
                index_t j = std::max(members[a], members[b]);
                if (!seen.insert(arc_key(static_cast<vertex_t>(i), static_cast<vertex_t>(j))).second)
                    continue;
                const lower_profile_t pr =
                    lower_profile(qd.sequences[static_cast<size_t>(i)],
                                  qd.sequences[static_cast<size_t>(j)]);
                // distinct maximal simplices are never nested
                bool ij, ji;
                if (variant == variant_t::maximal) {
                    ij = pr.c_plus == q && pr.c_minus <= q;
                    ji = pr.c_minus == q && pr.c_plus <= q;
                } else {
                    ij = pr.c_plus >= q;
                    ji = pr.c_minus >= q;
                }
                if (ij) add_arc(i, j);
                if (ji) add_arc(j, i);
            }
    }
    for (auto& v : qd.out) std::sort(v.begin(), v.end());
    for (auto& v : qd.in) std::sort(v.begin(), v.end());
    return qd;
}

enum class distance_transform_t { reciprocal, identity };

/**
 * Shortest directed q-walk lengths: BFS hops, or Dijkstra over transformed
 * arc weights (arc weight is the source vertex's product weight). Diagonal
 * 0, infinity when unreachable.
 */
inline dense_matrix_t q_distance_matrix(const q_digraph_t& qd, bool weighted = false,
                                        distance_transform_t f = distance_transform_t::reciprocal) {
    const index_t n = qd.n();
    const double inf = std::numeric_limits<double>::infinity();
    dense_matrix_t d(n, n, inf);
    if (!weighted) {
        std::vector<index_t> queue_buf;
        for (index_t s = 0; s < n; ++s) {
            d(s, s) = 0.0;
            queue_buf.clear();
            queue_buf.push_back(s);
            for (size_t head = 0; head < queue_buf.size(); ++head) {
                index_t u = queue_buf[head];
                for (index_t v : qd.out[static_cast<size_t>(u)])
                    if (d(s, v) == inf) {
                        d(s, v) = d(s, u) + 1.0;
                        queue_buf.push_back(v);
                    }
            }
        }
        return d;
    }
    if (!qd.weighted) throw domain_error("q_distance_matrix: q-digraph built without weights");
    std::vector<double> len(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        const double w = qd.weights[static_cast<size_t>(i)];
        if (f == distance_transform_t::reciprocal) {
            if (!qd.out[static_cast<size_t>(i)].empty() && w <= 0.0)
                throw domain_error("q_distance_matrix: nonpositive weight under reciprocal transform");
            len[static_cast<size_t>(i)] = w > 0.0 ? 1.0 / w : inf;
        } else {
            len[static_cast<size_t>(i)] = w;
        }
    }
    using item_t = std::pair<double, index_t>;
    for (index_t s = 0; s < n; ++s) {
        d(s, s) = 0.0;
        std::priority_queue<item_t, std::vector<item_t>, std::greater<item_t>> pq;
        pq.push({0.0, s});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > d(s, u)) continue;
            const double step = len[static_cast<size_t>(u)];
            for (index_t v : qd.out[static_cast<size_t>(u)]) {
                const double cand = du + step;
                if (cand < d(s, v)) {
                    d(s, v) = cand;
                    pq.push({cand, v});
                }
            }
        }
    }
    return d;
}

struct components_t {
    std::vector<index_t> label;  // per vertex, 0-based, first-appearance order
    index_t count = 0;

    std::vector<index_t> sizes() const {
        std::vector<index_t> sz(static_cast<size_t>(count), 0);
        for (index_t c : label) ++sz[static_cast<size_t>(c)];
        return sz;
    }
};

namespace detail {

class union_find_t {
public:
    explicit union_find_t(index_t n) : parent_(static_cast<size_t>(n)) {
        for (index_t i = 0; i < n; ++i) parent_[static_cast<size_t>(i)] = i;
    }
    index_t find(index_t x) {
        while (parent_[static_cast<size_t>(x)] != x) {
            parent_[static_cast<size_t>(x)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(x)])];
            x = parent_[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(index_t a, index_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }

private:
    std::vector<index_t> parent_;
};

inline components_t relabel(const std::vector<index_t>& raw) {
    components_t out;
    out.label.assign(raw.size(), -1);
    std::unordered_map<index_t, index_t> remap;
    for (size_t i = 0; i < raw.size(); ++i) {
        auto [it, fresh] = remap.try_emplace(raw[i], out.count);
        if (fresh) ++out.count;
        out.label[i] = it->second;
    }
    return out;
}

/// Iterative Tarjan over an out-adjacency list.
inline components_t strong_components(const std::vector<std::vector<index_t>>& out_adj) {
    const index_t n = static_cast<index_t>(out_adj.size());
    std::vector<index_t> disc(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0),
        comp(static_cast<size_t>(n), -1);
    std::vector<char> on_stack(static_cast<size_t>(n), 0);
    std::vector<index_t> stack;
    index_t timer = 0, ncomp = 0;
    struct frame_t {
        index_t v;
        size_t edge;
    };
    std::vector<frame_t> call;
    for (index_t root = 0; root < n; ++root) {
        if (disc[static_cast<size_t>(root)] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge == 0) {
                disc[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = timer++;
                stack.push_back(v);
                on_stack[static_cast<size_t>(v)] = 1;
            }
            if (edge < out_adj[static_cast<size_t>(v)].size()) {
                index_t w = out_adj[static_cast<size_t>(v)][edge++];
                if (disc[static_cast<size_t>(w)] == -1) {
                    call.push_back({w, 0});
                } else if (on_stack[static_cast<size_t>(w)]) {
                    low[static_cast<size_t>(v)] =
                        std::min(low[static_cast<size_t>(v)], disc[static_cast<size_t>(w)]);
                }
                continue;
            }
            if (low[static_cast<size_t>(v)] == disc[static_cast<size_t>(v)]) {
                while (true) {
                    index_t w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<size_t>(w)] = 0;
                    comp[static_cast<size_t>(w)] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
            index_t child = v;
            call.pop_back();
            if (!call.empty()) {
                index_t parent = call.back().v;
                low[static_cast<size_t>(parent)] =
                    std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(child)]);
            }
        }
    }
    return relabel(comp);
}

} // namespace detail

/// Weak or strong components of a q-digraph (maximal-simplex scope).
inline components_t q_components(const q_digraph_t& qd, bool strong) {
    const index_t n = qd.n();
    if (!strong) {
        detail::union_find_t uf(n);
        for (index_t i = 0; i < n; ++i)
            for (index_t j : qd.out[static_cast<size_t>(i)]) uf.unite(i, j);
        std::vector<index_t> raw(static_cast<size_t>(n));
        for (index_t i = 0; i < n; ++i) raw[static_cast<size_t>(i)] = uf.find(i);
        return detail::relabel(raw);
    }
    return detail::strong_components(qd.out);
}

/**
 * Weak or strong q-connected components over all simplices of dimension
 * >= q (lower adjacency). Guarded against very large complexes; pass
 * allow_large to lift the cap.
 */
inline components_t q_components_all(const flag_complex_t& fc, int q, bool strong,
                                     bool allow_large = false) {
    if (q < 0) throw domain_error("q_components_all: negative q");
    std::vector<simplex_ref_t> verts;
    for (int k = q; k <= fc.dim(); ++k)
        for (index_t i = 0; i < fc.level_count(k); ++i) verts.push_back({k, i});
    const index_t n = static_cast<index_t>(verts.size());
    if (n == 0) return {};
    if (n > 200000 && !allow_large)
        throw domain_error("q_components_all: complex exceeds 200000 simplices; pass the override");

    auto buckets = detail::q_face_buckets(fc, verts, q);
    if (!strong) {
        detail::union_find_t uf(n);
        for (const auto& [face_id, members] : buckets)
            for (size_t a = 1; a < members.size(); ++a) uf.unite(members[0], members[a]);
        std::vector<index_t> raw(static_cast<size_t>(n));
        for (index_t i = 0; i < n; ++i) raw[static_cast<size_t>(i)] = uf.find(i);
        return detail::relabel(raw);
    }
    std::vector<std::vector<index_t>> out_adj(static_cast<size_t>(n));
    std::unordered_set<uint64_t> seen;
    for (const auto& [face_id, members] : buckets) {
        for (size_t a = 0; a < members.size(); ++a)
            for (size_t b = a + 1; b < members.size(); ++b) {
                index_t i = std::min(members[a], members[b]);
                index_t j = std::max(members[a], members[b]);
                if (!seen.insert(arc_key(static_cast<vertex_t>(i), static_cast<vertex_t>(j))).second)
                    continue;
                const lower_profile_t pr =
                    lower_profile(fc.simplex(verts[static_cast<size_t>(i)]),
                                  fc.simplex(verts[static_cast<size_t>(j)]));
                const dir_flags_t fl = detail::lower_flags(pr, q);
                if (fl.plus) out_adj[static_cast<size_t>(i)].push_back(j);
                if (fl.minus) out_adj[static_cast<size_t>(j)].push_back(i);
            }
    }
    return detail::strong_components(out_adj);
}

/// Vertex count of the largest weak component (0 for an empty q-digraph).
inline index_t giant_component_size(const q_digraph_t& qd) {
    if (qd.n() == 0) return 0;
    auto comps = q_components(qd, false);
    auto sz = comps.sizes();
    return *std::max_element(sz.begin(), sz.end());
}

struct structure_vectors_t {
    std::vector<index_t> str1;
    std::vector<index_t> str2;
    std::vector<index_t> str3;
    std::vector<double> str4;
    std::vector<double> str5;
    std::vector<int> zero_level_flags;  // q with str1_q = 0: ratios pinned to 0
};

/// The five structure vectors, indexed by level 0..dim.
inline structure_vectors_t structure_vectors(const flag_complex_t& fc, bool allow_large = false) {
    structure_vectors_t sv;
    sv.str1 = fc.str1();
    const int top = fc.dim();
    for (int q = 0; q <= top; ++q) {
        sv.str2.push_back(q_components_all(fc, q, false, allow_large).count);
        sv.str3.push_back(q_components_all(fc, q, true, allow_large).count);
        const double s1 = static_cast<double>(sv.str1[static_cast<size_t>(q)]);
        if (s1 > 0.0) {
            sv.str4.push_back(1.0 - static_cast<double>(sv.str2.back()) / s1);
            sv.str5.push_back(1.0 - static_cast<double>(sv.str3.back()) / s1);
        } else {
            sv.str4.push_back(0.0);
            sv.str5.push_back(0.0);
            sv.zero_level_flags.push_back(q);
        }
    }
    return sv;
}

} // namespace qflag
