#include "normalnet/normalize.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <vector>

namespace normalnet {

ShortcutMeasure measure(const PhyloNetwork& net) {
    ShortcutMeasure m;
    NetworkClassification c = classify(net);
    m.shortcut_count = static_cast<int>(c.shortcuts.size());
    for (const Shortcut& s : c.shortcuts)
        if (!m.min_shortcut_length || s.length < *m.min_shortcut_length)
            m.min_shortcut_length = s.length;
    return m;
}

namespace {

// ---------------------------------------------------------------------------
// embedding upkeep

void remap_value(Embedding& e, Vertex from, Vertex to) {
    for (auto& [r, p] : e.chosen)
        if (p == from) p = to;
}

// suppress v and redirect embedding values that named it (to its parent, or
// to its child when v was the root)
void suppress_with_remap(PhyloNetwork& net, Vertex v, Embedding& e1, Embedding& e2) {
    auto par = net.parent_lists();
    Vertex target = par[v].empty() ? net.children(v)[0] : par[v][0];
    net.suppress(v);
    remap_value(e1, v, target);
    remap_value(e2, v, target);
}

void check_embeddings(const PhyloNetwork& net, const Embedding& e1, const Embedding& e2,
                      const char* where) {
    auto par = net.parent_lists();
    std::vector<Vertex> rets = net.reticulations();
    std::set<Vertex> retset(rets.begin(), rets.end());
    for (const Embedding* e : {&e1, &e2}) {
        if (e->chosen.size() != retset.size())
            throw internal_check_error(std::string(where) +
                                       ": embedding does not cover the reticulations");
        for (const auto& [r, p] : e->chosen) {
            if (!retset.count(r))
                throw internal_check_error(std::string(where) +
                                           ": embedding keeps a stale reticulation");
            if (std::find(par[r].begin(), par[r].end(), p) == par[r].end())
                throw internal_check_error(std::string(where) +
                                           ": embedding names a non-parent");
        }
    }
    for (const auto& [r, p] : e1.chosen)
        if (e2.chosen.at(r) == p)
            throw internal_check_error(std::string(where) +
                                       ": embeddings agree on a reticulation");
}

std::optional<Embedding> find_embedding(const PhyloNetwork& net, const PhyloTree& target) {
    for (const Embedding& e : enumerate_embeddings(net))
        if (isomorphic(embedding_to_tree(net, e), target)) return e;
    return std::nullopt;
}

// remove the reticulation edges neither tree needs: wherever both embeddings
// keep the same parent, the other edge is dead weight
void prune_agreements(PhyloNetwork& net, Embedding& e1, Embedding& e2) {
    for (;;) {
        std::optional<Vertex> hit;
        for (Vertex r : net.reticulations())
            if (e1.chosen.at(r) == e2.chosen.at(r)) {
                hit = r;
                break;
            }
        if (!hit) return;
        Vertex r = *hit;
        Vertex keep = e1.chosen.at(r);
        auto par = net.parent_lists();
        std::optional<Vertex> other;
        for (Vertex p : par[r])
            if (p != keep) other = p;
        if (!other)
            throw internal_check_error("agreeing reticulation with a single parent");
        e1.chosen.erase(r);
        e2.chosen.erase(r);
        net.remove_edge(*other, r);
        suppress_with_remap(net, r, e1, e2);
        if (net.children(*other).size() == 1)
            suppress_with_remap(net, *other, e1, e2);
    }
}

// deterministic walk from one shortcut endpoint to the other
std::vector<Vertex> path_between(const PhyloNetwork& net, Vertex from, Vertex to) {
    std::set<Vertex> dead;
    std::vector<Vertex> path;
    std::function<bool(Vertex)> dfs = [&](Vertex cur) {
        path.push_back(cur);
        if (cur == to) return true;
        std::vector<Vertex> kids = net.children(cur);
        std::sort(kids.begin(), kids.end(), [&](Vertex a, Vertex b) {
            return std::make_pair(verifier_leaf(net, a), a) <
                   std::make_pair(verifier_leaf(net, b), b);
        });
        for (Vertex c : kids) {
            if (dead.count(c)) continue;
            if (dfs(c)) return true;
        }
        dead.insert(cur);
        path.pop_back();
        return false;
    };
    if (!dfs(from))
        throw internal_check_error("no path between the shortcut endpoints");
    return path;
}

std::map<std::pair<Vertex, Vertex>, int> shortcut_map(const PhyloNetwork& net) {
    std::map<std::pair<Vertex, Vertex>, int> out;
    for (const Shortcut& s : classify(net).shortcuts) out[{s.u, s.v}] = s.length;
    return out;
}

}  // namespace

InitialPair initial_tree_child_pair(const PhyloTree& t1, const PhyloTree& t2) {
    if (tree_leaves(t1) != tree_leaves(t2))
        throw validation_error("trees do not share one leaf set");
    if (!tree_is_binary(t1) || !tree_is_binary(t2))
        throw validation_error("both trees must be binary");

    std::vector<PhyloTree> P = {t1, t2};
    MinSequenceResult ms = min_sequence(P, SequenceMode::tree_child);
    if (ms.status != MinSequenceStatus::found || !ms.sequence)
        throw internal_check_error("no tree-child sequence found for a pair of trees");
    PhyloNetwork net = sequence_to_network(P, *ms.sequence);

    auto e1 = find_embedding(net, t1);
    auto e2 = find_embedding(net, t2);
    if (!e1 || !e2)
        throw internal_check_error("optimal network misses an embedding of an input tree");

    InitialPair out{std::move(net), std::move(*e1), std::move(*e2)};
    prune_agreements(out.network, out.first, out.second);

    if (auto why = invalid_reason(out.network))
        throw internal_check_error("pruned network is broken: " + *why);
    NetworkClassification c = classify(out.network);
    if (!c.is_binary || !c.is_tree_child)
        throw internal_check_error("pruned network is not binary tree-child");
    check_embeddings(out.network, out.first, out.second, "after pruning");
    if (!isomorphic(embedding_to_tree(out.network, out.first), t1) ||
        !isomorphic(embedding_to_tree(out.network, out.second), t2))
        throw internal_check_error("pruning destroyed an embedding");
    return out;
}

EliminateStepResult eliminate_shortcut_step(const PhyloNetwork& net0, const Embedding& first0,
                                            const Embedding& second0) {
    EliminateStepResult R{net0, first0, second0, ""};
    PhyloNetwork& net = R.network;

    NetworkClassification cls = classify(net);
    if (!cls.is_binary || !cls.is_tree_child)
        throw unsupported_input_error("shortcut removal needs a binary tree-child network");
    if (cls.shortcuts.empty())
        throw validation_error("the network has no shortcut");
    check_embeddings(net, R.first, R.second, "before the step");

    const auto old_sc = shortcut_map(net);

    const Shortcut* pick = nullptr;
    std::tuple<int, std::string, std::string> best_key;
    for (const Shortcut& s : cls.shortcuts) {
        auto key = std::make_tuple(s.length, verifier_leaf(net, s.v), verifier_leaf(net, s.u));
        if (!pick || key < best_key) {
            pick = &s;
            best_key = key;
        }
    }
    const Vertex u = pick->u, v = pick->v;
    const int old_len = pick->length;

    auto par = net.parent_lists();
    Vertex uprime = u;
    for (Vertex p : par[v])
        if (p != u) uprime = p;

    Embedding* mE;
    Embedding* mEp;
    if (R.first.chosen.at(v) == u) {
        mE = &R.first;
        mEp = &R.second;
    } else if (R.second.chosen.at(v) == u) {
        mE = &R.second;
        mEp = &R.first;
    } else {
        throw internal_check_error("neither embedding uses the shortcut edge");
    }
    if (mEp->chosen.at(v) != uprime)
        throw internal_check_error("the other embedding avoids the upper parent");

    const Vertex t_child = net.children(v)[0];

    if (old_len == 2) {
        // the shortcut runs beside a single edge: drop it
        R.rule = "a";
        net.remove_edge(u, v);
        R.first.chosen.erase(v);
        R.second.chosen.erase(v);
        suppress_with_remap(net, v, R.first, R.second);
        if (net.children(u).size() == 1) suppress_with_remap(net, u, R.first, R.second);
    } else {
        const std::vector<Vertex> P = path_between(net, u, uprime);
        const std::size_t m = P.size();
        if (m < 3) throw internal_check_error("indirect shortcut over a short path");
        auto indeg = net.in_degrees();

        auto offchild = [&](std::size_t j) -> Vertex {
            for (Vertex c : net.children(P[j]))
                if (c != P[j + 1]) return c;
            throw internal_check_error("path vertex without an off-path child");
        };

        // deepest interior vertex that is a reticulation or carries an
        // off-path tree vertex; everything below it on the path is a tree
        // vertex with an off-path reticulation
        std::size_t i = 0;
        for (std::size_t j = 1; j + 1 < m; ++j)
            if (indeg[P[j]] >= 2 || indeg[offchild(j)] < 2) i = j;
        for (std::size_t j = i + 1; j + 1 < m; ++j)
            if (indeg[P[j]] >= 2 || indeg[offchild(j)] < 2)
                throw internal_check_error("path classification is inconsistent");

        // deepest off-path reticulation below i that this embedding enters
        // from the path
        std::optional<std::size_t> bj;
        for (std::size_t j = i + 1; j + 1 < m; ++j)
            if (indeg[offchild(j)] >= 2 && mE->chosen.at(offchild(j)) == P[j]) bj = j;

        Vertex q = v;
        for (Vertex c : net.children(P[m - 1]))
            if (c != v) q = c;

        if (bj) {
            // move that reticulation's path edge down beside the upper parent
            R.rule = "b";
            const Vertex pj = P[*bj];
            const Vertex w = offchild(*bj);
            net.remove_edge(pj, w);
            suppress_with_remap(net, pj, R.first, R.second);
            Vertex ujp = net.subdivide(P[m - 1], q);
            net.add_edge(ujp, w);
            mE->chosen.at(w) = ujp;
        } else if (i == 0) {
            // re-hang the topmost off-path reticulation above the lower endpoint
            const Vertex p1 = P[1];
            const Vertex w = offchild(1);
            if (indeg[w] < 2 || mEp->chosen.at(w) != p1)
                throw internal_check_error("top off-path vertex is wired unexpectedly");
            net.remove_edge(p1, w);
            suppress_with_remap(net, p1, R.first, R.second);
            auto par2 = net.parent_lists();
            if (par2[u].empty()) {
                R.rule = "c-root";
                Vertex r = net.add_vertex();
                net.add_edge(r, u);
                net.add_edge(r, w);
                net.root = r;
                mEp->chosen.at(w) = r;
            } else {
                R.rule = "c";
                Vertex u2p = net.subdivide(par2[u][0], u);
                net.add_edge(u2p, w);
                mEp->chosen.at(w) = u2p;
            }
        } else if (indeg[P[i]] == 1) {
            // rotate the path tail around the pivot tree vertex
            R.rule = "d";
            const Vertex ui = P[i], un = P[i + 1], um = P[m - 1];
            const Vertex ci = offchild(i);
            net.remove_edge(um, v);
            net.remove_edge(v, t_child);
            net.remove_edge(ui, un);
            Vertex p = net.subdivide(ui, ci);
            net.add_edge(ui, v);
            net.add_edge(v, un);
            net.add_edge(p, um);
            auto par2 = net.parent_lists();
            Vertex opp = p;
            for (Vertex x : par2[um])
                if (x != p) opp = x;
            Vertex pp = net.subdivide(opp, um);
            net.add_edge(pp, t_child);
            mE->chosen[um] = p;
            mEp->chosen[um] = pp;
            mEp->chosen.at(v) = ui;
        } else {
            // the pivot is a reticulation: dissolve it and rebuild the tail
            R.rule = "e";
            const Vertex ui = P[i], un = P[i + 1], um = P[m - 1];
            const Vertex g = mE->chosen.at(ui), gp = mEp->chosen.at(ui);
            net.remove_edge(um, v);
            net.remove_edge(v, t_child);
            net.remove_edge(g, ui);
            net.remove_edge(gp, ui);
            net.kill_vertex(ui);
            R.first.chosen.erase(ui);
            R.second.chosen.erase(ui);
            net.add_edge(gp, v);
            net.add_edge(g, um);
            net.add_edge(v, un);
            auto par2 = net.parent_lists();
            Vertex opp = g;
            for (Vertex x : par2[um])
                if (x != g) opp = x;
            Vertex pp = net.subdivide(opp, um);
            net.add_edge(pp, t_child);
            mE->chosen[um] = g;
            mEp->chosen[um] = pp;
            mEp->chosen.at(v) = gp;
        }
    }

    if (auto why = invalid_reason(net))
        throw internal_check_error("rewiring broke the network: " + *why);
    NetworkClassification after = classify(net);
    if (!after.is_binary || !after.is_tree_child)
        throw internal_check_error(std::string("rewiring left the network ") +
                                   (!after.is_binary ? "non-binary" : "non-tree-child"));
    check_embeddings(net, R.first, R.second, "after the step");

    auto new_sc = shortcut_map(net);
    auto it = new_sc.find({u, v});
    if (R.rule == "a") {
        if (new_sc.size() >= old_sc.size())
            throw internal_check_error("direct removal did not shrink the shortcut set");
        for (const auto& [k, len] : new_sc) {
            auto jt = old_sc.find(k);
            if (jt == old_sc.end() || len > jt->second)
                throw internal_check_error("direct removal created or grew a shortcut");
        }
    } else if (R.rule == "e") {
        if (it != new_sc.end() && it->second >= old_len)
            throw internal_check_error("pivot removal did not shorten the chosen shortcut");
    } else {
        if (it == new_sc.end() || it->second >= old_len)
            throw internal_check_error("rewiring did not shorten the chosen shortcut");
    }
    return R;
}

namespace {

// resolve multifurcations by repeatedly joining the two first children
PhyloTree binarize(const PhyloTree& t) {
    if (t.is_leaf()) return t;
    std::vector<PhyloTree> kids;
    kids.reserve(t.kids.size());
    for (const PhyloTree& k : t.kids) kids.push_back(binarize(k));
    PhyloTree cur = make_internal(std::move(kids));
    while (cur.kids.size() > 2) {
        std::vector<PhyloTree> next;
        next.push_back(make_internal({cur.kids[0], cur.kids[1]}));
        for (std::size_t i = 2; i < cur.kids.size(); ++i) next.push_back(cur.kids[i]);
        cur = make_internal(std::move(next));
    }
    return cur;
}

// the network with the first tree's reticulation edges marked, as a loop guard
std::string state_fingerprint(const PhyloNetwork& net, const Embedding& e1) {
    PhyloNetwork copy = net;
    for (const auto& [r, p] : e1.chosen) {
        Vertex s = copy.subdivide(p, r);
        Vertex marker = copy.add_vertex("!");
        copy.add_edge(s, marker);
    }
    return canonical_text(copy);
}

}  // namespace

PhyloNetwork normalize_pair(const PhyloTree& t1_in, const PhyloTree& t2_in) {
    if (tree_leaves(t1_in) != tree_leaves(t2_in))
        throw validation_error("trees do not share one leaf set");
    PhyloTree t1 = binarize(t1_in), t2 = binarize(t2_in);
    if (isomorphic(t1, t2)) return PhyloNetwork::from_tree(t1);

    InitialPair ip = initial_tree_child_pair(t1, t2);
    PhyloNetwork net = std::move(ip.network);
    Embedding e1 = std::move(ip.first), e2 = std::move(ip.second);

    std::set<std::string> seen_states;
    int iterations = 0;
    while (measure(net).shortcut_count > 0) {
        if (++iterations > 10000)
            throw internal_check_error("shortcut removal did not terminate");
        if (!seen_states.insert(state_fingerprint(net, e1)).second)
            throw internal_check_error("shortcut removal revisited a state");
        EliminateStepResult step = eliminate_shortcut_step(net, e1, e2);
        net = std::move(step.network);
        e1 = std::move(step.first);
        e2 = std::move(step.second);
        if (!isomorphic(embedding_to_tree(net, e1), t1) ||
            !isomorphic(embedding_to_tree(net, e2), t2))
            throw internal_check_error("rewiring lost an input tree");
    }

    NetworkClassification c = classify(net);
    if (!c.is_binary || !c.is_normal)
        throw internal_check_error("final network is not binary normal");
    if (!displays(net, t1) || !displays(net, t2))
        throw internal_check_error("final network fails to display an input tree");
    return net;
}

}  // namespace normalnet
