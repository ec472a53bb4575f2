#pragma once

#include "common.hpp"
#include "flag_complex.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace qflag {

enum class direction_t { minus, plus, pm };

struct dir_flags_t {
    bool minus = false;
    bool plus = false;
    bool pm() const { return minus && plus; }
    bool any() const { return minus || plus; }
    bool has(direction_t d) const {
        switch (d) {
            case direction_t::minus: return minus;
            case direction_t::plus: return plus;
            default: return pm();
        }
    }
};

/**
 * Witness-ordered profile of two simplices: c_minus / c_plus are the largest
 * dimensions of a common face of deleted faces d_i(a), d_j(b) over witnesses
 * with i >= j / i <= j; -1 when no common face exists. Inflated indices
 * (clamped deletions past the end) never enlarge the maxima, so the nominal
 * index ranges are scanned.
 */
struct lower_profile_t {
    int c_minus = -1;
    int c_plus = -1;
    bool nested = false;
};

inline lower_profile_t lower_profile(const simplex_t& a, const simplex_t& b) {
    lower_profile_t pr;
    pr.nested = is_subsequence(a, b) || is_subsequence(b, a);
    const int n = static_cast<int>(a.size()) - 1;
    const int m = static_cast<int>(b.size()) - 1;
    std::vector<char> a_in(a.size(), 0), b_in(b.size(), 0);
    int shared = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        a_in[i] = std::find(b.begin(), b.end(), a[i]) != b.end() ? 1 : 0;
        shared += a_in[i];
    }
    if (shared == 0) return pr;
    for (size_t j = 0; j < b.size(); ++j)
        b_in[j] = std::find(a.begin(), a.end(), b[j]) != a.end() ? 1 : 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= m; ++j) {
            int loss = a_in[static_cast<size_t>(i)] + b_in[static_cast<size_t>(j)];
            if (a_in[static_cast<size_t>(i)] && b_in[static_cast<size_t>(j)] &&
                a[static_cast<size_t>(i)] == b[static_cast<size_t>(j)])
                loss = 1;
            const int d = shared - loss - 1;
            if (i >= j) pr.c_minus = std::max(pr.c_minus, d);
            if (i <= j) pr.c_plus = std::max(pr.c_plus, d);
        }
    return pr;
}

namespace detail {

inline dir_flags_t lower_flags(const lower_profile_t& pr, int q) {
    if (pr.nested) return {true, true};
    return {pr.c_minus >= q, pr.c_plus >= q};
}

/// Any-direction lower q-nearness, range-aware (false when q exceeds a dim).
inline bool lower_near_any(const lower_profile_t& pr, int q, int n, int m) {
    if (q > std::min(n, m)) return false;
    return pr.nested || std::max(pr.c_minus, pr.c_plus) >= q;
}

inline bool has_common_coface(const flag_complex_t& fc, const simplex_t& t1,
                              const simplex_t& t2, int p) {
    if (p > fc.dim()) return false;
    if (static_cast<int>(t1.size()) > p + 1 || static_cast<int>(t2.size()) > p + 1) return false;
    const std::vector<index_t>* best = nullptr;
    for (vertex_t v : t1) {
        const auto& lst = fc.with_vertex(p, v);
        if (!best || lst.size() < best->size()) best = &lst;
    }
    for (vertex_t v : t2) {
        const auto& lst = fc.with_vertex(p, v);
        if (!best || lst.size() < best->size()) best = &lst;
    }
    if (!best) return false;
    const auto& lv = fc.level(p);
    for (index_t idx : *best) {
        const simplex_t& theta = lv[static_cast<size_t>(idx)];
        if (is_subsequence(t1, theta) && is_subsequence(t2, theta)) return true;
    }
    return false;
}

/**
 * Upper nearness flags at level p. A witness is a pair of cofacets (one per
 * simplex) inside a common p-simplex; deletion indices compare with the
 * clamped face map in mind: a last-position deletion admits every index past
 * the end, so that side's index is effectively unbounded.
 */
inline dir_flags_t upper_flags(const flag_complex_t& fc, simplex_ref_t a, simplex_ref_t b, int p) {
    dir_flags_t f;
    const int n = a.dim, m = b.dim;
    if (p < std::max(n, m) + 1 || p > fc.dim()) return f;
    const auto& lvl_a = fc.level(n + 1);
    const auto& lvl_b = fc.level(m + 1);
    for (const auto& cf1 : fc.cofacets(a)) {
        const bool i_inf = cf1.position == n + 1;
        for (const auto& cf2 : fc.cofacets(b)) {
            const bool j_inf = cf2.position == m + 1;
            const bool plus_cand = i_inf || cf1.position >= cf2.position;
            const bool minus_cand = j_inf || cf1.position <= cf2.position;
            if ((!plus_cand || f.plus) && (!minus_cand || f.minus)) continue;
            const simplex_t& t1 = lvl_a[static_cast<size_t>(cf1.coface)];
            const simplex_t& t2 = lvl_b[static_cast<size_t>(cf2.coface)];
            if (has_common_coface(fc, t1, t2, p)) {
                f.plus = f.plus || plus_cand;
                f.minus = f.minus || minus_cand;
                if (f.plus && f.minus) return f;
            }
        }
    }
    return f;
}

inline simplex_ref_t resolve(const flag_complex_t& fc, const simplex_t& s, const char* who) {
    auto r = fc.find(s);
    if (!r) throw domain_error(std::string(who) + ": simplex not in complex");
    return *r;
}

} // namespace detail

/// Lower q-nearness (shared q-face of deleted faces, or nested inclusion).
inline dir_flags_t lower_q_near(const flag_complex_t& fc, simplex_ref_t a, simplex_ref_t b, int q) {
    if (q < 0 || q > std::min(a.dim, b.dim)) throw domain_error("lower_q_near: q out of range");
    return detail::lower_flags(lower_profile(fc.simplex(a), fc.simplex(b)), q);
}

/// Lower q-nearness with no (q+1)-nearness in any direction.
inline dir_flags_t strictly_lower_q_adjacent(const flag_complex_t& fc, simplex_ref_t a,
                                             simplex_ref_t b, int q) {
    if (q < 0 || q > std::min(a.dim, b.dim))
        throw domain_error("strictly_lower_q_adjacent: q out of range");
    const lower_profile_t pr = lower_profile(fc.simplex(a), fc.simplex(b));
    if (detail::lower_near_any(pr, q + 1, a.dim, b.dim)) return {};
    return detail::lower_flags(pr, q);
}

/// Upper p-adjacency through common cofaces.
inline dir_flags_t upper_p_adjacent(const flag_complex_t& fc, simplex_ref_t a, simplex_ref_t b,
                                    int p) {
    if (p <= std::max(a.dim, b.dim) || p > fc.dim())
        throw domain_error("upper_p_adjacent: p out of range");
    return detail::upper_flags(fc, a, b, p);
}

/// Upper p-adjacency with no (p+1) witness in any direction.
inline dir_flags_t strictly_upper_p_adjacent(const flag_complex_t& fc, simplex_ref_t a,
                                             simplex_ref_t b, int p) {
    if (p <= std::max(a.dim, b.dim) || p > fc.dim())
        throw domain_error("strictly_upper_p_adjacent: p out of range");
    if (detail::upper_flags(fc, a, b, p + 1).any()) return {};
    return detail::upper_flags(fc, a, b, p);
}

/**
 * General q-adjacency: strictly lower q-adjacent and not upper-adjacent in
 * any direction at level n+m-q (the smallest dimension a common containing
 * simplex could have).
 */
inline dir_flags_t general_q_adjacent(const flag_complex_t& fc, simplex_ref_t a, simplex_ref_t b,
                                      int q) {
    dir_flags_t f = strictly_lower_q_adjacent(fc, a, b, q);
    if (!f.any()) return f;
    if (detail::upper_flags(fc, a, b, a.dim + b.dim - q).any()) return {};
    return f;
}

/**
 * Maximal q-adjacency: general q-adjacency surviving the extension filter
 * (the left simplex is a face of no larger simplex that is general
 * q-adjacent to the right one, in any direction).
 */
inline dir_flags_t maximal_q_adjacent(const flag_complex_t& fc, simplex_ref_t a, simplex_ref_t b,
                                      int q) {
    dir_flags_t f = general_q_adjacent(fc, a, b, q);
    if (!f.any()) return f;
    const simplex_t& sa = fc.simplex(a);
    for (int r = a.dim + 1; r <= fc.dim(); ++r) {
        for (index_t idx : fc.with_vertex(r, sa[0])) {
            simplex_ref_t cand{r, idx};
            if (!is_subsequence(sa, fc.simplex(cand))) continue;
            if (general_q_adjacent(fc, cand, b, q).any()) return {};
        }
    }
    return f;
}

enum class star_kind_t { lower, strict_lower, upper, strict_upper, general, maximal };

/**
 * q-star of a simplex under the requested relation and direction. The lower
 * kind includes the simplex itself (a simplex is q-near itself for q up to
 * its dimension); every other kind excludes it. The maximal kind ranges over
 * the maximal simplices of dimension >= q, matching its use as the
 * neighborhood in the maximal q-digraph; the remaining kinds range over the
 * whole complex.
 */
inline std::vector<simplex_ref_t> q_star(const flag_complex_t& fc, simplex_ref_t s,
                                         star_kind_t kind, direction_t dir, int q) {
    const bool upper_kind = kind == star_kind_t::upper || kind == star_kind_t::strict_upper;
    if (upper_kind) {
        if (q <= s.dim) throw domain_error("q_star: upper kinds need q > dim of the simplex");
    } else {
        if (q < 0 || q > s.dim) throw domain_error("q_star: q out of range for lower kinds");
    }
    std::vector<simplex_ref_t> out;
    auto consider = [&](simplex_ref_t t) {
        dir_flags_t f;
        switch (kind) {
            case star_kind_t::lower: f = lower_q_near(fc, s, t, q); break;
            case star_kind_t::strict_lower: f = strictly_lower_q_adjacent(fc, s, t, q); break;
            case star_kind_t::upper: f = detail::upper_flags(fc, s, t, q); break;
            case star_kind_t::strict_upper:
                f = detail::upper_flags(fc, s, t, q + 1).any() ? dir_flags_t{}
                                                               : detail::upper_flags(fc, s, t, q);
                break;
            case star_kind_t::general: f = general_q_adjacent(fc, s, t, q); break;
            case star_kind_t::maximal: f = maximal_q_adjacent(fc, s, t, q); break;
        }
        if (f.has(dir)) out.push_back(t);
    };
    if (kind == star_kind_t::maximal) {
        for (simplex_ref_t t : fc.maximal_simplices(q))
            if (!(t == s)) consider(t);
        return out;
    }
    if (upper_kind) {
        for (int k = 0; k < q && k <= fc.dim(); ++k)
            for (index_t i = 0; i < fc.level_count(k); ++i) {
                simplex_ref_t t{k, i};
                if (!(t == s)) consider(t);
            }
        return out;
    }
    for (int k = q; k <= fc.dim(); ++k)
        for (index_t i = 0; i < fc.level_count(k); ++i) {
            simplex_ref_t t{k, i};
            if (kind != star_kind_t::lower && t == s) continue;
            consider(t);
        }
    return out;
}

/// Common vertices of a family of simplices.
inline std::vector<vertex_t> hub(const std::vector<simplex_t>& family) {
    if (family.empty()) throw domain_error("hub: empty family");
    std::vector<vertex_t> acc = family[0];
    std::sort(acc.begin(), acc.end());
    for (size_t k = 1; k < family.size(); ++k) {
        std::vector<vertex_t> s = family[k];
        std::sort(s.begin(), s.end());
        std::vector<vertex_t> inter;
        std::set_intersection(acc.begin(), acc.end(), s.begin(), s.end(),
                              std::back_inserter(inter));
        acc = std::move(inter);
    }
    return acc;
}

struct links_t {
    std::vector<simplex_ref_t> in_link;
    std::vector<simplex_ref_t> out_link;
};

/**
 * In/out links: vertex-disjoint simplices joined to s inside a common
 * simplex of dimension n+m+1 (the join of the two), split by direction.
 */
inline links_t links(const flag_complex_t& fc, simplex_ref_t s) {
    links_t out;
    const simplex_t& sa = fc.simplex(s);
    for (int k = 0; k <= fc.dim(); ++k)
        for (index_t i = 0; i < fc.level_count(k); ++i) {
            simplex_ref_t t{k, i};
            const simplex_t& sb = fc.simplex(t);
            bool disjoint = true;
            for (vertex_t v : sb)
                if (std::find(sa.begin(), sa.end(), v) != sa.end()) { disjoint = false; break; }
            if (!disjoint) continue;
            dir_flags_t f = detail::upper_flags(fc, s, t, s.dim + k + 1);
            if (f.minus) out.in_link.push_back(t);
            if (f.plus) out.out_link.push_back(t);
        }
    return out;
}

/**
 * q-degree: star cardinality; weighted form multiplies the product weight of
 * the simplex into each in-neighbor term and sums the product weights of the
 * out-neighbors (the node-to-arc weight keeps the source's weight).
 */
inline double q_degree(const flag_complex_t& fc, simplex_ref_t s, star_kind_t kind,
                       direction_t dir, int q, bool weighted = false) {
    const auto star = q_star(fc, s, kind, dir, q);
    if (!weighted) return static_cast<double>(star.size());
    if (!fc.has_weights()) throw domain_error("q_degree: complex has no weights");
    if (dir == direction_t::pm) throw domain_error("q_degree: weighted degree needs minus or plus");
    if (dir == direction_t::minus)
        return simplex_weight(fc, fc.simplex(s)) * static_cast<double>(star.size());
    double sum = 0.0;
    for (simplex_ref_t t : star) sum += simplex_weight(fc, fc.simplex(t));
    return sum;
}

} // namespace qflag
