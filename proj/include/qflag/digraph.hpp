#pragma once

#include "common.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace qflag {

inline std::uint64_t arc_key(vertex_t u, vertex_t v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

/**
 * Simple digraph: dense 0..n-1 vertex ids, no loops, double arcs allowed.
 * Keeps sorted out/in adjacency (for ordered clique extension) and a hash
 * set of arcs (O(1) membership).
 */
class digraph_t {
public:
    digraph_t() = default;
    explicit digraph_t(vertex_t n) : out_(n), in_(n) {}

    vertex_t n_vertices() const { return static_cast<vertex_t>(out_.size()); }
    index_t n_arcs() const { return static_cast<index_t>(arcs_.size()); }

    void add_arc(vertex_t u, vertex_t v) {
        if (u == v) throw domain_error("digraph: loop (" + std::to_string(u) + "," + std::to_string(u) + ") rejected");
        if (u < 0 || v < 0 || u >= n_vertices() || v >= n_vertices())
            throw domain_error("digraph: arc endpoint out of range");
        if (arcs_.insert(arc_key(u, v)).second) {
            out_[u].insert(std::lower_bound(out_[u].begin(), out_[u].end(), v), v);
            in_[v].insert(std::lower_bound(in_[v].begin(), in_[v].end(), u), u);
        }
    }

    bool has_arc(vertex_t u, vertex_t v) const { return arcs_.count(arc_key(u, v)) != 0; }

    const std::vector<vertex_t>& out_neighbors(vertex_t v) const { return out_.at(v); }
    const std::vector<vertex_t>& in_neighbors(vertex_t v) const { return in_.at(v); }

    /// Arc list in sorted (u,v) order; deterministic.
    std::vector<std::pair<vertex_t, vertex_t>> arc_list() const {
        std::vector<std::pair<vertex_t, vertex_t>> arcs;
        arcs.reserve(arcs_.size());
        for (vertex_t u = 0; u < n_vertices(); ++u)
            for (vertex_t v : out_[u]) arcs.emplace_back(u, v);
        return arcs;
    }

    /// Symmetric pairs u<v with both (u,v) and (v,u) present.
    std::vector<std::pair<vertex_t, vertex_t>> double_edges() const {
        std::vector<std::pair<vertex_t, vertex_t>> dbl;
        for (vertex_t u = 0; u < n_vertices(); ++u)
            for (vertex_t v : out_[u])
                if (u < v && has_arc(v, u)) dbl.emplace_back(u, v);
        return dbl;
    }

private:
    std::vector<std::vector<vertex_t>> out_, in_;
    std::unordered_set<std::uint64_t> arcs_;
};

/// Digraph plus one nonnegative weight per arc.
class weighted_digraph_t {
public:
    weighted_digraph_t() = default;
    explicit weighted_digraph_t(vertex_t n) : base_(n) {}

    void add_arc(vertex_t u, vertex_t v, double w) {
        if (w < 0.0) throw domain_error("weighted digraph: negative weight on arc (" + std::to_string(u) + "," + std::to_string(v) + ")");
        base_.add_arc(u, v);
        weight_[arc_key(u, v)] = w;
    }

    const digraph_t& base() const { return base_; }
    double weight(vertex_t u, vertex_t v) const {
        auto it = weight_.find(arc_key(u, v));
        if (it == weight_.end()) throw domain_error("weighted digraph: no such arc");
        return it->second;
    }

private:
    digraph_t base_;
    std::unordered_map<std::uint64_t, double> weight_;
};

struct degree_profile_t {
    index_t in_deg = 0, out_deg = 0;
    double in_w = 0.0, out_w = 0.0;
};

inline degree_profile_t degree_profile(const digraph_t& g, vertex_t v) {
    if (v < 0 || v >= g.n_vertices()) throw domain_error("degree_profile: vertex out of range");
    degree_profile_t d;
    d.in_deg = static_cast<index_t>(g.in_neighbors(v).size());
    d.out_deg = static_cast<index_t>(g.out_neighbors(v).size());
    d.in_w = static_cast<double>(d.in_deg);
    d.out_w = static_cast<double>(d.out_deg);
    return d;
}

inline degree_profile_t degree_profile(const weighted_digraph_t& g, vertex_t v) {
    const digraph_t& b = g.base();
    if (v < 0 || v >= b.n_vertices()) throw domain_error("degree_profile: vertex out of range");
    degree_profile_t d;
    d.in_deg = static_cast<index_t>(b.in_neighbors(v).size());
    d.out_deg = static_cast<index_t>(b.out_neighbors(v).size());
    for (vertex_t u : b.in_neighbors(v)) d.in_w += g.weight(u, v);
    for (vertex_t u : b.out_neighbors(v)) d.out_w += g.weight(v, u);
    return d;
}

/// Node-weight transform: max of the weighted in/out degrees.
inline double node_weight(const weighted_digraph_t& g, vertex_t v) {
    degree_profile_t d = degree_profile(g, v);
    return std::max(d.in_w, d.out_w);
}

/// Unweighted digraphs count arcs as weight 1.
inline double node_weight(const digraph_t& g, vertex_t v) {
    degree_profile_t d = degree_profile(g, v);
    return static_cast<double>(std::max(d.in_deg, d.out_deg));
}

struct parsed_digraph_t {
    digraph_t graph;
    weighted_digraph_t weighted_graph;        // populated only when weighted
    bool weighted = false;
    bool default_weights_used = false;        // weighted parse hit lines without a weight column
    std::vector<std::string> labels;          // dense id -> original token
};

/**
 * Edge-list parser. Lines "u v" or "u v w", '#' comments, blank lines skipped.
 * Vertex tokens are arbitrary and remapped to dense ids in first-appearance
 * order; the label map is kept for reports.
 */
inline parsed_digraph_t parse_edge_list(const std::string& text, bool weighted) {
    std::unordered_map<std::string, vertex_t> id_of;
    std::vector<std::string> labels;
    struct raw_arc_t { vertex_t u, v; double w; };
    std::vector<raw_arc_t> raw;
    bool defaulted = false;

    auto intern = [&](const std::string& tok) {
        auto it = id_of.find(tok);
        if (it != id_of.end()) return it->second;
        vertex_t id = static_cast<vertex_t>(labels.size());
        id_of.emplace(tok, id);
        labels.push_back(tok);
        return id;
    };

    std::istringstream in(text);
    std::string line;
    index_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv(line);
        size_t first = sv.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        if (sv[first] == '#') continue;

        std::istringstream ls(line);
        std::string tu, tv, tw, extra;
        if (!(ls >> tu >> tv)) throw parse_error("edge list line " + std::to_string(line_no) + ": expected \"u v [w]\"");
        double w = 1.0;
        bool have_w = static_cast<bool>(ls >> tw);
        if (have_w) {
            try {
                size_t pos = 0;
                w = std::stod(tw, &pos);
                if (pos != tw.size()) throw std::invalid_argument(tw);
            } catch (const std::exception&) {
                throw parse_error("edge list line " + std::to_string(line_no) + ": bad weight \"" + tw + "\"");
            }
        }
        if (ls >> extra) throw parse_error("edge list line " + std::to_string(line_no) + ": trailing token \"" + extra + "\"");
        if (weighted) {
            if (!have_w) defaulted = true;
            if (w < 0.0) throw domain_error("edge list line " + std::to_string(line_no) + ": negative weight");
        }
        vertex_t u = intern(tu), v = intern(tv);
        if (u == v) throw domain_error("edge list line " + std::to_string(line_no) + ": loop on vertex \"" + tu + "\"");
        raw.push_back({u, v, w});
    }

    parsed_digraph_t out;
    out.weighted = weighted;
    out.default_weights_used = weighted && defaulted;
    out.labels = std::move(labels);
    vertex_t n = static_cast<vertex_t>(out.labels.size());
    out.graph = digraph_t(n);
    for (const raw_arc_t& a : raw) out.graph.add_arc(a.u, a.v);
    if (weighted) {
        out.weighted_graph = weighted_digraph_t(n);
        std::unordered_set<std::uint64_t> seen;
        for (const raw_arc_t& a : raw)
            if (seen.insert(arc_key(a.u, a.v)).second) out.weighted_graph.add_arc(a.u, a.v, a.w);
    }
    return out;
}

inline std::string serialize_edge_list(const digraph_t& g) {
    std::ostringstream os;
    for (auto [u, v] : g.arc_list()) os << u << ' ' << v << '\n';
    return os.str();
}

/// Symmetric closure, used as the denominator graph of relative returnability.
inline digraph_t underlying_graph(const digraph_t& g) {
    digraph_t u(g.n_vertices());
    for (auto [a, b] : g.arc_list()) {
        u.add_arc(a, b);
        u.add_arc(b, a);
    }
    return u;
}

} // namespace qflag
