#pragma once
// Shared test machinery: a display-set oracle straight from the definition,
// exhaustive enumeration of normal networks by reticulation-edge closure, and
// small fixture builders.  Deliberately avoids the library's embedding code so
// the two can check each other.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "normalnet/newick.hpp"
#include "normalnet/phylo.hpp"

namespace testsupport {

using namespace normalnet;

struct OracleDisplay {
    std::uint64_t raw = 0;  // one per combination of kept in-edges
    std::vector<PhyloTree> trees;
};

// One displayed tree per way of keeping a single in-edge at every
// reticulation.  Handles in-degrees above two; assumes tree-child (so no
// embedding loses the root).
inline OracleDisplay oracle_display_set(const PhyloNetwork& net) {
    OracleDisplay out;
    if (net.vertex_count() == 1) {
        out.raw = 1;
        out.trees = {make_leaf(net.label(net.root))};
        return out;
    }
    auto par = net.parent_lists();
    std::vector<Vertex> rets = net.reticulations();
    out.raw = 1;
    for (Vertex r : rets) out.raw *= par[r].size();

    std::set<PhyloTree> acc;
    std::vector<std::size_t> idx(rets.size(), 0);
    for (;;) {
        std::map<Vertex, Vertex> keep;
        for (std::size_t i = 0; i < rets.size(); ++i) keep[rets[i]] = par[rets[i]][idx[i]];
        std::function<std::optional<PhyloTree>(Vertex)> build =
            [&](Vertex v) -> std::optional<PhyloTree> {
            if (net.is_leaf(v)) return make_leaf(net.label(v));
            std::vector<PhyloTree> kids;
            for (Vertex c : net.children(v)) {
                auto it = keep.find(c);
                if (it != keep.end() && it->second != v) continue;
                auto b = build(c);
                if (b) kids.push_back(std::move(*b));
            }
            if (kids.empty()) return std::nullopt;
            if (kids.size() == 1) return std::move(kids[0]);
            return make_internal(std::move(kids));
        };
        auto t = build(net.root);
        if (!t) throw internal_check_error("display oracle lost the root");
        acc.insert(std::move(*t));

        std::size_t i = 0;
        for (; i < rets.size(); ++i) {
            if (++idx[i] < par[rets[i]].size()) break;
            idx[i] = 0;
        }
        if (i == rets.size()) break;
    }
    out.trees.assign(acc.begin(), acc.end());
    return out;
}

inline bool oracle_displays(const PhyloNetwork& net, const PhyloTree& t) {
    std::set<std::string> Y = tree_leaves(t);
    for (const PhyloTree& d : oracle_display_set(net).trees)
        if (is_refinement(restrict_to(d, Y), t)) return true;
    return false;
}

inline void insert_leaf_everywhere(const PhyloTree& sh, const PhyloTree& leaf,
                                   std::vector<PhyloTree>& out) {
    out.push_back(make_internal({sh, leaf}));
    if (!sh.is_leaf()) {
        const PhyloTree& a = sh.kids[0];
        const PhyloTree& b = sh.kids[1];
        std::vector<PhyloTree> sub;
        insert_leaf_everywhere(a, leaf, sub);
        for (PhyloTree& x : sub) out.push_back(make_internal({std::move(x), b}));
        sub.clear();
        insert_leaf_everywhere(b, leaf, sub);
        for (PhyloTree& x : sub) out.push_back(make_internal({a, std::move(x)}));
    }
}

inline std::vector<PhyloTree> all_binary_trees(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    std::vector<PhyloTree> ts = {make_leaf(labels[0])};
    for (std::size_t i = 1; i < labels.size(); ++i) {
        std::set<PhyloTree> next;
        for (const PhyloTree& t : ts) {
            std::vector<PhyloTree> grown;
            insert_leaf_everywhere(t, make_leaf(labels[i]), grown);
            next.insert(grown.begin(), grown.end());
        }
        ts.assign(next.begin(), next.end());
    }
    return ts;
}

inline PhyloTree caterpillar(const std::vector<std::string>& order) {
    PhyloTree t = make_internal({make_leaf(order[0]), make_leaf(order[1])});
    for (std::size_t i = 2; i < order.size(); ++i)
        t = make_internal({std::move(t), make_leaf(order[i])});
    return t;
}

// subdivide two distinct edges and join the fresh vertices; the inverse of
// deleting a binary reticulation's in-edge
inline std::vector<PhyloNetwork> ret_edge_additions(const PhyloNetwork& n) {
    std::vector<PhyloNetwork> out;
    auto es = n.edges();
    for (const auto& e1 : es) {
        for (const auto& e2 : es) {
            if (e1 == e2) continue;
            PhyloNetwork m = n;
            Vertex a = m.subdivide(e1.first, e1.second);
            Vertex b = m.subdivide(e2.first, e2.second);
            m.add_edge(a, b);
            out.push_back(std::move(m));
        }
    }
    return out;
}

// subdivide an edge and run the fresh vertex into an existing reticulation;
// the inverse of deleting one in-edge of an in-degree >= 3 reticulation
inline std::vector<PhyloNetwork> indeg_increments(const PhyloNetwork& n) {
    std::vector<PhyloNetwork> out;
    for (Vertex r : n.reticulations()) {
        for (const auto& e : n.edges()) {
            if (e.second == r) continue;
            PhyloNetwork m = n;
            Vertex p = m.subdivide(e.first, e.second);
            m.add_edge(p, r);
            out.push_back(std::move(m));
        }
    }
    return out;
}

// Every normal network on exactly these labels with h <= hmax, keyed by
// canonical text.  Complete because deleting a reticulation in-edge of a
// normal network (with the attendant suppressions) leaves a normal network on
// the same leaves with smaller h, and the two moves above are the inverses of
// such deletions; so the closure of the binary trees reaches everything.
inline std::map<std::string, PhyloNetwork> enumerate_normal(
    const std::vector<std::string>& labels, int hmax, bool binary_only = false) {
    std::map<std::string, PhyloNetwork> all;
    std::map<std::string, PhyloNetwork> frontier;
    for (const PhyloTree& t : all_binary_trees(labels)) {
        PhyloNetwork m = PhyloNetwork::from_tree(t);
        std::string k = canonical_text(m);
        all.emplace(k, m);
        frontier.emplace(std::move(k), std::move(m));
    }
    if (labels.size() == 1) return all;
    while (!frontier.empty()) {
        std::map<std::string, PhyloNetwork> fresh;
        for (const auto& [key, m] : frontier) {
            std::vector<PhyloNetwork> cands = ret_edge_additions(m);
            if (!binary_only)
                for (PhyloNetwork& x : indeg_increments(m)) cands.push_back(std::move(x));
            for (PhyloNetwork& cand : cands) {
                if (invalid_reason(cand)) continue;
                NetworkClassification c = classify(cand);
                if (c.hybridisation_number > hmax || !c.is_normal) continue;
                if (binary_only && !c.is_binary) continue;
                std::string k = canonical_text(cand);
                if (!all.count(k) && !fresh.count(k)) fresh.emplace(std::move(k), std::move(cand));
            }
        }
        for (const auto& [k, m] : fresh) all.emplace(k, m);
        frontier = std::move(fresh);
    }
    return all;
}

inline std::map<int, int> h_layer_counts(const std::map<std::string, PhyloNetwork>& nets) {
    std::map<int, int> out;
    for (const auto& [k, m] : nets) ++out[classify(m).hybridisation_number];
    return out;
}

// the smallest normal network family needing an in-degree-three reticulation:
// root -> u1,u2; u1 -> u3,u4; u2 -> a,v; u3 -> b,v; u4 -> c,v; v -> d
inline PhyloNetwork pstar_network() {
    PhyloNetwork n;
    Vertex rho = n.add_vertex(), u1 = n.add_vertex(), u2 = n.add_vertex();
    Vertex u3 = n.add_vertex(), u4 = n.add_vertex(), v = n.add_vertex();
    Vertex a = n.add_vertex("a"), b = n.add_vertex("b"), c = n.add_vertex("c");
    Vertex d = n.add_vertex("d");
    n.root = rho;
    n.add_edge(rho, u1);
    n.add_edge(rho, u2);
    n.add_edge(u1, u3);
    n.add_edge(u1, u4);
    n.add_edge(u2, a);
    n.add_edge(u2, v);
    n.add_edge(u3, b);
    n.add_edge(u3, v);
    n.add_edge(u4, c);
    n.add_edge(u4, v);
    n.add_edge(v, d);
    return n;
}

inline std::vector<PhyloTree> pstar_trees() {
    return {parse_tree("((b,c),(a,d));"), parse_tree("(a,((b,d),c));"),
            parse_tree("(a,((c,d),b));")};
}

}  // namespace testsupport
