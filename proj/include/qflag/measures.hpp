#pragma once

#include "common.hpp"
#include "matrix.hpp"
#include "q_digraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace qflag {

/// Subdigraph induced on the given (sorted) vertex indices, order preserved.
inline q_digraph_t induced_subdigraph(const q_digraph_t& qd, const std::vector<index_t>& keep) {
    q_digraph_t sub;
    sub.q = qd.q;
    sub.variant = qd.variant;
    sub.weighted = qd.weighted;
    std::vector<index_t> pos(static_cast<size_t>(qd.n()), -1);
    for (size_t i = 0; i < keep.size(); ++i) pos[static_cast<size_t>(keep[i])] = static_cast<index_t>(i);
    sub.vertices.reserve(keep.size());
    sub.sequences.reserve(keep.size());
    for (index_t v : keep) {
        sub.vertices.push_back(qd.vertices[static_cast<size_t>(v)]);
        sub.sequences.push_back(qd.sequences[static_cast<size_t>(v)]);
        if (qd.weighted) sub.weights.push_back(qd.weights[static_cast<size_t>(v)]);
    }
    sub.out.assign(keep.size(), {});
    sub.in.assign(keep.size(), {});
    for (size_t i = 0; i < keep.size(); ++i)
        for (index_t j : qd.out[static_cast<size_t>(keep[i])]) {
            index_t pj = pos[static_cast<size_t>(j)];
            if (pj < 0) continue;
            sub.out[i].push_back(pj);
            sub.in[static_cast<size_t>(pj)].push_back(static_cast<index_t>(i));
            sub.arc_set.insert(arc_key(static_cast<vertex_t>(i), static_cast<vertex_t>(pj)));
        }
    for (auto& v : sub.out) std::sort(v.begin(), v.end());
    for (auto& v : sub.in) std::sort(v.begin(), v.end());
    return sub;
}

/// Wrap a plain digraph as a one-vertex-per-node digraph-of-simplices, so
/// the same measures run on ordinary digraphs (protocol level q = -1).
inline q_digraph_t digraph_as_q_digraph(const digraph_t& g) {
    q_digraph_t qd;
    qd.q = -1;
    qd.variant = variant_t::maximal;
    qd.weighted = false;
    const vertex_t n = g.n_vertices();
    qd.vertices.reserve(static_cast<size_t>(n));
    qd.sequences.reserve(static_cast<size_t>(n));
    qd.out.assign(static_cast<size_t>(n), {});
    qd.in.assign(static_cast<size_t>(n), {});
    for (vertex_t v = 0; v < n; ++v) {
        qd.vertices.push_back({0, v});
        qd.sequences.push_back({v});
        for (vertex_t w : g.out_neighbors(v)) {
            qd.out[static_cast<size_t>(v)].push_back(w);
            qd.in[static_cast<size_t>(w)].push_back(v);
            qd.arc_set.insert(arc_key(v, w));
        }
    }
    for (auto& lst : qd.in) std::sort(lst.begin(), lst.end());
    return qd;
}

/// Mean q-distance over ordered pairs, with 0 substituted for unreachable.
inline std::optional<double> avg_q_walk_length(const dense_matrix_t& d) {
    const index_t n = d.rows();
    if (n < 2) return std::nullopt;
    double sum = 0.0;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = d(i, j);
            if (std::isfinite(v)) sum += v;
        }
    return sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

struct ecc_profile_t {
    std::vector<double> ecc;
    double diameter = 0.0;
    double radius = 0.0;
    bool flagged = false;  // no vertex reaches anything
};

/**
 * Per-vertex eccentricity over reachable targets (0 when nothing is
 * reachable); diameter and radius aggregate only vertices with at least one
 * reachable target.
 */
inline ecc_profile_t q_eccentricity_profile(const dense_matrix_t& d) {
    const index_t n = d.rows();
    ecc_profile_t out;
    out.ecc.assign(static_cast<size_t>(n), 0.0);
    bool any = false;
    double dia = 0.0, rad = std::numeric_limits<double>::infinity();
    for (index_t i = 0; i < n; ++i) {
        double e = 0.0;
        bool reaches = false;
        for (index_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = d(i, j);
            if (std::isfinite(v)) {
                reaches = true;
                e = std::max(e, v);
            }
        }
        out.ecc[static_cast<size_t>(i)] = reaches ? e : 0.0;
        if (reaches) {
            any = true;
            dia = std::max(dia, e);
            rad = std::min(rad, e);
        }
    }
    if (any) {
        out.diameter = dia;
        out.radius = rad;
    } else {
        out.flagged = true;
    }
    return out;
}

/// Mean of reciprocal q-distances over ordered pairs (1/inf = 0).
inline std::optional<double> global_q_efficiency(const dense_matrix_t& d) {
    const index_t n = d.rows();
    if (n < 2) return std::nullopt;
    double sum = 0.0;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = d(i, j);
            if (std::isfinite(v) && v > 0.0) sum += 1.0 / v;
        }
    return sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

/// expm(H_q); entry (i,j) is the q-communicability from vertex i to j.
inline dense_matrix_t q_communicability(const q_digraph_t& qd) {
    return expm(adjacency_matrix(qd));
}

/// Tr(expm(H_q)) - |V_q|.
inline double q_returnability(const q_digraph_t& qd) {
    if (qd.n() == 0) return 0.0;
    return q_communicability(qd).trace() - static_cast<double>(qd.n());
}

/**
 * Returnability relative to the symmetrized q-digraph (arc present in either
 * direction); null when the reference returnability is zero.
 */
inline std::optional<double> q_relative_returnability(const q_digraph_t& qd) {
    if (qd.n() == 0) return std::nullopt;
    dense_matrix_t sym(qd.n(), qd.n());
    for (index_t i = 0; i < qd.n(); ++i)
        for (index_t j = 0; j < qd.n(); ++j) {
            if (i == j) continue;
            if (qd.has_arc(i, j) || qd.has_arc(j, i))
                sym(i, j) = qd.weighted ? qd.weights[static_cast<size_t>(i)] : 1.0;
        }
    const double denom = expm(sym).trace() - static_cast<double>(qd.n());
    if (denom == 0.0) return std::nullopt;
    return q_returnability(qd) / denom;
}

/// Raw in/out q-degrees; weighted per the node-to-arc weight convention.
inline std::vector<double> q_degrees(const q_digraph_t& qd, bool in_side, bool weighted = false) {
    if (weighted && !qd.weighted) throw domain_error("q_degrees: q-digraph built without weights");
    std::vector<double> deg(static_cast<size_t>(qd.n()), 0.0);
    for (index_t i = 0; i < qd.n(); ++i) {
        const auto& nb = in_side ? qd.in[static_cast<size_t>(i)] : qd.out[static_cast<size_t>(i)];
        if (!weighted) {
            deg[static_cast<size_t>(i)] = static_cast<double>(nb.size());
        } else if (in_side) {
            deg[static_cast<size_t>(i)] =
                qd.weights[static_cast<size_t>(i)] * static_cast<double>(nb.size());
        } else {
            double s = 0.0;
            for (index_t j : nb) s += qd.weights[static_cast<size_t>(j)];
            deg[static_cast<size_t>(i)] = s;
        }
    }
    return deg;
}

/// Degrees scaled by 1/(|V_q|-1); null for fewer than two vertices.
inline std::optional<std::vector<double>> q_degree_centrality(const q_digraph_t& qd, bool in_side,
                                                              bool weighted = false) {
    if (qd.n() < 2) return std::nullopt;
    std::vector<double> c = q_degrees(qd, in_side, weighted);
    for (double& x : c) x /= static_cast<double>(qd.n() - 1);
    return c;
}

struct closeness_t {
    std::vector<double> values;
    bool weakly_connected = true;
    index_t giant = 0;          // largest weak component size, the N_q of Eq. (30)
    index_t unreachable_flags = 0;  // vertices with no outgoing reachability
};

/// Reciprocal of summed outgoing distances; normalization scales by N_q - 1.
inline closeness_t q_closeness(const q_digraph_t& qd, const dense_matrix_t& d,
                               bool normalized = false) {
    closeness_t out;
    const index_t n = qd.n();
    auto comps = q_components(qd, false);
    out.weakly_connected = comps.count <= 1;
    out.giant = giant_component_size(qd);
    out.values.assign(static_cast<size_t>(n), 0.0);
    for (index_t i = 0; i < n; ++i) {
        double sum = 0.0;
        bool reaches = false;
        for (index_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = d(i, j);
            if (std::isfinite(v)) {
                sum += v;
                reaches = true;
            }
        }
        if (!reaches || sum == 0.0) {
            ++out.unreachable_flags;
            continue;
        }
        double c = 1.0 / sum;
        if (normalized) c *= static_cast<double>(out.giant - 1);
        out.values[static_cast<size_t>(i)] = c;
    }
    return out;
}

/// Sum of reciprocal outgoing distances (1/inf = 0).
inline std::vector<double> q_harmonic(const dense_matrix_t& d) {
    const index_t n = d.rows();
    std::vector<double> h(static_cast<size_t>(n), 0.0);
    for (index_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (index_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = d(i, j);
            if (std::isfinite(v) && v > 0.0) sum += 1.0 / v;
        }
        h[static_cast<size_t>(i)] = sum;
    }
    return h;
}

struct betweenness_t {
    std::vector<double> values;
    bool normalized = false;
    bool weakly_connected = true;
    index_t giant = 0;
};

/**
 * Brandes accumulation of shortest-walk fractions over ordered pairs.
 * Normalization divides by (N_q-1)(N_q-2) with N_q the largest weak
 * component size; null when that needs fewer than three vertices.
 */
inline std::optional<betweenness_t> q_betweenness(
    const q_digraph_t& qd, bool normalized = false, bool weighted = false,
    distance_transform_t f = distance_transform_t::reciprocal) {
    const index_t n = qd.n();
    betweenness_t out;
    out.normalized = normalized;
    auto comps = q_components(qd, false);
    out.weakly_connected = comps.count <= 1;
    out.giant = giant_component_size(qd);
    if (normalized && out.giant < 3) return std::nullopt;
    out.values.assign(static_cast<size_t>(n), 0.0);

    std::vector<double> len;
    if (weighted) {
        if (!qd.weighted) throw domain_error("q_betweenness: q-digraph built without weights");
        len.resize(static_cast<size_t>(n));
        for (index_t i = 0; i < n; ++i) {
            const double w = qd.weights[static_cast<size_t>(i)];
            if (f == distance_transform_t::reciprocal) {
                if (!qd.out[static_cast<size_t>(i)].empty() && w <= 0.0)
                    throw domain_error("q_betweenness: nonpositive weight under reciprocal transform");
                len[static_cast<size_t>(i)] = w > 0.0 ? 1.0 / w : 0.0;
            } else {
                len[static_cast<size_t>(i)] = w;
            }
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<size_t>(n));
    std::vector<double> sigma(static_cast<size_t>(n));
    std::vector<double> delta(static_cast<size_t>(n));
    std::vector<std::vector<index_t>> pred(static_cast<size_t>(n));
    std::vector<index_t> order;
    for (index_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : pred) p.clear();
        order.clear();
        dist[static_cast<size_t>(s)] = 0.0;
        sigma[static_cast<size_t>(s)] = 1.0;
        if (!weighted) {
            order.push_back(s);
            for (size_t head = 0; head < order.size(); ++head) {
                index_t u = order[head];
                for (index_t v : qd.out[static_cast<size_t>(u)]) {
                    if (dist[static_cast<size_t>(v)] == inf) {
                        dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1.0;
                        order.push_back(v);
                    }
                    if (dist[static_cast<size_t>(v)] == dist[static_cast<size_t>(u)] + 1.0) {
                        sigma[static_cast<size_t>(v)] += sigma[static_cast<size_t>(u)];
                        pred[static_cast<size_t>(v)].push_back(u);
                    }
                }
            }
        } else {
            using item_t = std::pair<double, index_t>;
            std::priority_queue<item_t, std::vector<item_t>, std::greater<item_t>> pq;
            std::vector<char> settled(static_cast<size_t>(n), 0);
            pq.push({0.0, s});
            while (!pq.empty()) {
                auto [du, u] = pq.top();
                pq.pop();
                if (settled[static_cast<size_t>(u)]) continue;
                settled[static_cast<size_t>(u)] = 1;
                order.push_back(u);
                const double step = len[static_cast<size_t>(u)];
                for (index_t v : qd.out[static_cast<size_t>(u)]) {
                    const double cand = du + step;
                    if (cand < dist[static_cast<size_t>(v)]) {
                        dist[static_cast<size_t>(v)] = cand;
                        sigma[static_cast<size_t>(v)] = sigma[static_cast<size_t>(u)];
                        pred[static_cast<size_t>(v)].assign(1, u);
                        pq.push({cand, v});
                    } else if (cand == dist[static_cast<size_t>(v)] && !settled[static_cast<size_t>(v)]) {
                        sigma[static_cast<size_t>(v)] += sigma[static_cast<size_t>(u)];
                        pred[static_cast<size_t>(v)].push_back(u);
                    }
                }
            }
        }
        for (size_t k = order.size(); k-- > 0;) {
            index_t w = order[k];
            for (index_t v : pred[static_cast<size_t>(w)])
                delta[static_cast<size_t>(v)] += sigma[static_cast<size_t>(v)] /
                                                 sigma[static_cast<size_t>(w)] *
                                                 (1.0 + delta[static_cast<size_t>(w)]);
            if (w != s) out.values[static_cast<size_t>(w)] += delta[static_cast<size_t>(w)];
        }
    }
    if (normalized) {
        const double scale =
            static_cast<double>(out.giant - 1) * static_cast<double>(out.giant - 2);
        for (double& x : out.values) x /= scale;
    }
    return out;
}

struct reaching_t {
    std::vector<double> local;
    double global = 0.0;
};

/// Local reaching = reachable fraction; global per the max-gap formula.
inline std::optional<reaching_t> q_reaching(const dense_matrix_t& d) {
    const index_t n = d.rows();
    if (n < 2) return std::nullopt;
    reaching_t out;
    out.local.assign(static_cast<size_t>(n), 0.0);
    double cmax = 0.0;
    for (index_t i = 0; i < n; ++i) {
        index_t reach = 0;
        for (index_t j = 0; j < n; ++j)
            if (i != j && std::isfinite(d(i, j))) ++reach;
        out.local[static_cast<size_t>(i)] =
            static_cast<double>(reach) / static_cast<double>(n - 1);
        cmax = std::max(cmax, out.local[static_cast<size_t>(i)]);
    }
    double acc = 0.0;
    for (double c : out.local) acc += cmax - c;
    out.global = acc / static_cast<double>(n - 1);
    return out;
}

struct clustering_t {
    double value = 0.0;
    index_t skipped = 0;  // vertices with a zero denominator
};

/**
 * Average directed clustering over the arc support: triangles counted by
 * the symmetrized cubic form, denominator deg_tot(deg_tot - 1) - 2 deg_pm.
 */
inline clustering_t avg_q_clustering(const q_digraph_t& qd) {
    clustering_t out;
    const index_t n = qd.n();
    if (n == 0) return out;
    double acc = 0.0;
    for (index_t i = 0; i < n; ++i) {
        const auto& outs = qd.out[static_cast<size_t>(i)];
        const auto& ins = qd.in[static_cast<size_t>(i)];
        std::vector<index_t> nbrs;
        nbrs.reserve(outs.size() + ins.size());
        std::set_union(outs.begin(), outs.end(), ins.begin(), ins.end(),
                       std::back_inserter(nbrs));
        index_t bidir = 0;
        std::vector<index_t> inter;
        std::set_intersection(outs.begin(), outs.end(), ins.begin(), ins.end(),
                              std::back_inserter(inter));
        bidir = static_cast<index_t>(inter.size());
        const double dtot = static_cast<double>(outs.size() + ins.size());
        const double denom = dtot * (dtot - 1.0) - 2.0 * static_cast<double>(bidir);
        if (denom <= 0.0) {
            ++out.skipped;
            continue;
        }
        double tri = 0.0;
        for (index_t a : nbrs)
            for (index_t b : nbrs) {
                if (a == b) continue;
                const double sym_ia = (qd.has_arc(i, a) ? 1.0 : 0.0) + (qd.has_arc(a, i) ? 1.0 : 0.0);
                const double sym_ib = (qd.has_arc(i, b) ? 1.0 : 0.0) + (qd.has_arc(b, i) ? 1.0 : 0.0);
                const double sym_ab = (qd.has_arc(a, b) ? 1.0 : 0.0) + (qd.has_arc(b, a) ? 1.0 : 0.0);
                tri += sym_ia * sym_ib * sym_ab;
            }
        acc += 0.5 * tri / denom;
    }
    out.value = acc / static_cast<double>(n);
    return out;
}

/**
 * Maletic-style simplicial clustering per vertex: each neighbor contributes
 * (2^(1+f) - 1)/(2^n + 2^m - 1) with f the shared-face dimension. The
 * supplement-table denominator 2^(n+2m) - 1 is available for comparison.
 */
inline std::vector<double> simplicial_q_clustering(const q_digraph_t& qd, direction_t dir,
                                                   bool supplement_denominator = false) {
    const index_t n = qd.n();
    std::vector<double> c(static_cast<size_t>(n), 0.0);
    for (index_t i = 0; i < n; ++i) {
        const simplex_t& si = qd.sequences[static_cast<size_t>(i)];
        const int ni = static_cast<int>(si.size()) - 1;
        std::vector<index_t> star;
        const auto& outs = qd.out[static_cast<size_t>(i)];
        const auto& ins = qd.in[static_cast<size_t>(i)];
        switch (dir) {
            case direction_t::plus: star = outs; break;
            case direction_t::minus: star = ins; break;
            case direction_t::pm:
                std::set_intersection(outs.begin(), outs.end(), ins.begin(), ins.end(),
                                      std::back_inserter(star));
                break;
        }
        double acc = 0.0;
        for (index_t j : star) {
            const simplex_t& sj = qd.sequences[static_cast<size_t>(j)];
            const int mj = static_cast<int>(sj.size()) - 1;
            int shared = 0;
            for (vertex_t v : si)
                if (std::find(sj.begin(), sj.end(), v) != sj.end()) ++shared;
            const int fdim = shared - 1;
            const double numer = std::ldexp(1.0, 1 + fdim) - 1.0;
            const double denom = supplement_denominator
                                     ? std::ldexp(1.0, ni + 2 * mj) - 1.0
                                     : std::ldexp(1.0, ni) + std::ldexp(1.0, mj) - 1.0;
            acc += numer / denom;
        }
        c[static_cast<size_t>(i)] = acc;
    }
    return c;
}

/// Rich-club coefficient over vertices with directional degree above k.
inline std::optional<double> q_rich_club(const q_digraph_t& qd, index_t k, bool in_side) {
    if (k < 0) throw domain_error("q_rich_club: negative threshold");
    std::vector<char> member(static_cast<size_t>(qd.n()), 0);
    index_t f = 0;
    for (index_t i = 0; i < qd.n(); ++i) {
        const auto& nb = in_side ? qd.in[static_cast<size_t>(i)] : qd.out[static_cast<size_t>(i)];
        if (static_cast<index_t>(nb.size()) > k) {
            member[static_cast<size_t>(i)] = 1;
            ++f;
        }
    }
    if (f < 2) return std::nullopt;
    index_t e = 0;
    for (index_t i = 0; i < qd.n(); ++i) {
        if (!member[static_cast<size_t>(i)]) continue;
        for (index_t j : qd.out[static_cast<size_t>(i)])
            if (member[static_cast<size_t>(j)]) ++e;
    }
    return static_cast<double>(e) / (static_cast<double>(f) * static_cast<double>(f - 1));
}

/**
 * Mean over vertices of the global efficiency of the subdigraph induced on
 * the vertex's in/out neighborhood (the vertex itself excluded).
 */
inline double local_q_efficiency(const q_digraph_t& qd, bool weighted = false,
                                 distance_transform_t f = distance_transform_t::reciprocal) {
    const index_t n = qd.n();
    if (n == 0) return 0.0;
    double acc = 0.0;
    for (index_t i = 0; i < n; ++i) {
        const auto& outs = qd.out[static_cast<size_t>(i)];
        const auto& ins = qd.in[static_cast<size_t>(i)];
        std::vector<index_t> nbrs;
        std::set_union(outs.begin(), outs.end(), ins.begin(), ins.end(),
                       std::back_inserter(nbrs));
        if (nbrs.size() < 2) continue;
        q_digraph_t sub = induced_subdigraph(qd, nbrs);
        auto e = global_q_efficiency(q_distance_matrix(sub, weighted && qd.weighted, f));
        if (e) acc += *e;
    }
    return acc / static_cast<double>(n);
}

/// Sum of the singular values of H_q.
inline double q_energy(const q_digraph_t& qd) {
    if (qd.n() == 0) return 0.0;
    const auto sv = singular_values(adjacency_matrix(qd));
    double s = 0.0;
    for (double x : sv) s += x;
    return s;
}

struct katz_t {
    std::vector<double> values;
    double alpha = 0.0;
};

/**
 * In/out Katz centralities. Default attenuation: 0.9 over the dominant
 * eigenvalue when positive, else 0.1.
 */
inline katz_t q_katz(const q_digraph_t& qd, bool in_side,
                     std::optional<double> alpha = std::nullopt) {
    katz_t out;
    if (qd.n() == 0) return out;
    const dense_matrix_t h = adjacency_matrix(qd);
    double a;
    if (alpha) {
        a = *alpha;
    } else {
        const double lambda = dominant_eigenpair(h).value;
        a = lambda > 0.0 ? 0.9 / lambda : 0.1;
    }
    out.alpha = a;
    out.values = katz_solve(h, a, in_side);
    return out;
}

struct eigen_centrality_t {
    std::vector<double> values;
    double lambda = 0.0;
};

/// Right/left dominant eigenvector; null with a degenerate spectrum.
inline std::optional<eigen_centrality_t> q_eigenvector_centrality(const q_digraph_t& qd,
                                                                  bool left) {
    if (qd.n() == 0) return std::nullopt;
    eigenpair_t p = dominant_eigenpair(adjacency_matrix(qd), left);
    if (p.value <= 0.0) return std::nullopt;
    return eigen_centrality_t{std::move(p.vector), p.value};
}

} // namespace qflag
