#include "normalnet/reconstruct.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace normalnet {

namespace {

// cluster of the parent vertex of leaf x, or nullopt when x is absent
std::optional<std::set<std::string>> parent_cluster_of_leaf(const PhyloTree& t,
                                                           const std::string& x) {
    if (t.is_leaf()) return std::nullopt;
    for (const PhyloTree& k : t.kids)
        if (k.is_leaf() && k.leaf == x) return tree_leaves(t);
    for (const PhyloTree& k : t.kids)
        if (auto r = parent_cluster_of_leaf(k, x)) return r;
    return std::nullopt;
}

}  // namespace

bool pair_normal_reticulated_cherry(const PhyloTree& t1, const PhyloTree& t2,
                                    const std::string& x, const std::string& y) {
    if (!isomorphic(delete_leaf(t1, x), delete_leaf(t2, x))) return false;
    auto pc = parent_cluster_of_leaf(t2, x);
    if (!pc) return false;
    return pc->count(y) == 0;
}

HalfCherryBijection find_half_cherry_bijection(const std::vector<PhyloTree>& P,
                                               const std::string& a, const std::string& b,
                                               const std::string& x) {
    if (x != a && x != b)
        throw validation_error("the chosen first leaf must be one of the pair");
    const std::string& y = (x == a) ? b : a;
    std::pair<std::string, std::string> key = (a < b) ? std::make_pair(a, b)
                                                      : std::make_pair(b, a);

    HalfCherryBijection out;
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (tree_cherries(P[i]).count(key))
            out.with_cherry.push_back(i);
        else
            out.without_cherry.push_back(i);
    }
    if (out.with_cherry.size() * 2 != P.size()) {
        out.status = BijectionStatus::wrong_half_count;
        return out;
    }

    const std::size_t n = out.with_cherry.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m)
            if (pair_normal_reticulated_cherry(P[out.with_cherry[k]],
                                               P[out.without_cherry[m]], x, y))
                adj[k].push_back(m);

    // augmenting-path matching, rows and columns in index order
    std::vector<int> match_col(n, -1);
    std::function<bool(std::size_t, std::vector<char>&)> augment =
        [&](std::size_t k, std::vector<char>& visited) {
            for (std::size_t m : adj[k]) {
                if (visited[m]) continue;
                visited[m] = 1;
                if (match_col[m] < 0 ||
                    augment(static_cast<std::size_t>(match_col[m]), visited)) {
                    match_col[m] = static_cast<int>(k);
                    return true;
                }
            }
            return false;
        };
    std::size_t matched = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<char> visited(n, 0);
        if (augment(k, visited)) ++matched;
    }
    if (matched != n) {
        out.status = BijectionStatus::no_bijection;
        return out;
    }
    out.partner.assign(n, 0);
    for (std::size_t m = 0; m < n; ++m)
        out.partner[static_cast<std::size_t>(match_col[m])] = out.without_cherry[m];
    out.status = BijectionStatus::found;
    return out;
}

std::string to_string(ReconstructionVerdict v) {
    switch (v) {
        case ReconstructionVerdict::ok: return "ok";
        case ReconstructionVerdict::bad_cardinality: return "bad-cardinality";
        case ReconstructionVerdict::no_step_applies: return "no-step-applies";
        case ReconstructionVerdict::subproblem_failed: return "subproblem-failed";
        case ReconstructionVerdict::constructed_network_not_normal:
            return "constructed-network-not-normal";
    }
    return "?";
}

namespace {

std::vector<PhyloTree> dedupe(const std::vector<PhyloTree>& in) {
    std::vector<PhyloTree> out;
    std::set<std::string> seen;
    for (const PhyloTree& t : in) {
        PhyloTree c = t;
        canonicalize(c);
        if (seen.insert(tree_text(c)).second) out.push_back(std::move(c));
    }
    return out;
}

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void attach_cherry_leaf(PhyloNetwork& net, const std::string& a, const std::string& b) {
    Vertex va = net.find_leaf(a);
    Vertex leafb = net.add_vertex(b);
    auto par = net.parent_lists();
    if (par[va].empty()) {  // the network is the single leaf a
        Vertex r = net.add_vertex();
        net.add_edge(r, va);
        net.add_edge(r, leafb);
        net.root = r;
    } else {
        Vertex u = net.subdivide(par[va][0], va);
        net.add_edge(u, leafb);
    }
}

void add_reticulated_cherry(PhyloNetwork& net, const std::string& x, const std::string& y) {
    Vertex vx = net.find_leaf(x);
    Vertex vy = net.find_leaf(y);
    auto par = net.parent_lists();
    Vertex px = net.subdivide(par[vx][0], vx);
    Vertex py = net.subdivide(par[vy][0], vy);
    net.add_edge(py, px);  // px becomes the reticulation
}

std::string describe(const ReconstructionOutcome& o) {
    std::string s = to_string(o.verdict);
    if (!o.detail.empty()) s += " (" + o.detail + ")";
    return s;
}

ReconstructionOutcome finish(PhyloNetwork net) {
    if (auto why = invalid_reason(net))
        throw internal_check_error("assembled network is broken: " + *why);
    NetworkClassification c = classify(net);
    if (!c.is_binary)
        throw internal_check_error("assembled network is not binary");
    if (!c.is_normal) {
        std::string d = c.is_tree_child ? "it contains a shortcut" : "it is not tree-child";
        return {ReconstructionVerdict::constructed_network_not_normal, std::nullopt,
                "assembly succeeded but " + d};
    }
    return {ReconstructionVerdict::ok, std::move(net), ""};
}

ReconstructionOutcome rebuild(const std::vector<PhyloTree>& P) {
    if (!power_of_two(P.size()))
        return {ReconstructionVerdict::bad_cardinality, std::nullopt,
                std::to_string(P.size()) +
                    " distinct trees; a display set always has a power of two"};

    std::set<std::string> X = tree_leaves(P[0]);
    if (X.size() == 1) return finish(PhyloNetwork::single_leaf(*X.begin()));

    // a cherry present in every tree can be peeled off directly
    std::set<std::pair<std::string, std::string>> common = tree_cherries(P[0]);
    for (std::size_t i = 1; i < P.size() && !common.empty(); ++i) {
        auto ci = tree_cherries(P[i]);
        std::set<std::pair<std::string, std::string>> keep;
        std::set_intersection(common.begin(), common.end(), ci.begin(), ci.end(),
                              std::inserter(keep, keep.begin()));
        common = std::move(keep);
    }
    if (!common.empty()) {
        const auto& [a, b] = *common.begin();
        std::vector<PhyloTree> sub;
        sub.reserve(P.size());
        for (const PhyloTree& t : P) sub.push_back(delete_leaf(t, b));
        ReconstructionOutcome inner = rebuild(dedupe(sub));
        if (inner.verdict != ReconstructionVerdict::ok)
            return {ReconstructionVerdict::subproblem_failed, std::nullopt,
                    "after removing '" + b + "' of the common cherry {" + a + "," + b +
                        "}: " + describe(inner)};
        PhyloNetwork net = std::move(*inner.network);
        attach_cherry_leaf(net, a, b);
        return finish(std::move(net));
    }

    // otherwise find a reticulated cherry to split off: the trees showing it
    // must be exactly half and pair up with the rest
    std::set<std::pair<std::string, std::string>> pairs;
    for (const PhyloTree& t : P) {
        auto c = tree_cherries(t);
        pairs.insert(c.begin(), c.end());
    }
    for (const auto& [a, b] : pairs) {
        for (const std::string& x : {a, b}) {
            HalfCherryBijection bij = find_half_cherry_bijection(P, a, b, x);
            if (bij.status != BijectionStatus::found) continue;
            const std::string& y = (x == a) ? b : a;

            std::vector<PhyloTree> rest;
            rest.reserve(bij.without_cherry.size());
            for (std::size_t idx : bij.without_cherry) rest.push_back(P[idx]);
            ReconstructionOutcome inner = rebuild(dedupe(rest));
            if (inner.verdict != ReconstructionVerdict::ok)
                return {ReconstructionVerdict::subproblem_failed, std::nullopt,
                        "after splitting off the reticulated cherry (" + x + "," + y +
                            "): " + describe(inner)};
            PhyloNetwork net = std::move(*inner.network);
            add_reticulated_cherry(net, x, y);
            return finish(std::move(net));
        }
    }
    return {ReconstructionVerdict::no_step_applies, std::nullopt,
            "no cherry is common to all trees and no reticulated-cherry split pairs up"};
}

}  // namespace

ReconstructionOutcome reconstruct(const std::vector<PhyloTree>& P) {
    if (P.empty()) throw validation_error("no trees given");
    std::set<std::string> X = tree_leaves(P[0]);
    for (const PhyloTree& t : P) {
        if (tree_leaves(t) != X)
            throw validation_error("trees do not share one leaf set");
        if (!tree_is_binary(t))
            throw validation_error("display sets contain binary trees only");
    }
    return rebuild(dedupe(P));
}

}  // namespace normalnet
