#include "normalnet/display.hpp"

#include <algorithm>

#include "normalnet/newick.hpp"

namespace normalnet {

std::vector<Embedding> enumerate_embeddings(const PhyloNetwork& net) {
    validate_network(net);
    auto par = net.parent_lists();

    std::vector<Vertex> rets = net.reticulations();
    std::sort(rets.begin(), rets.end(), [&](Vertex a, Vertex b) {
        auto ka = std::make_pair(verifier_leaf(net, a), a);
        auto kb = std::make_pair(verifier_leaf(net, b), b);
        return ka < kb;
    });
    for (Vertex r : rets) std::sort(par[r].begin(), par[r].end());

    std::vector<Embedding> out;
    std::vector<std::size_t> idx(rets.size(), 0);
    for (;;) {
        Embedding e;
        for (std::size_t i = 0; i < rets.size(); ++i)
            e.chosen[rets[i]] = par[rets[i]][idx[i]];
        out.push_back(std::move(e));
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == par[rets[i]].size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
    return out;
}

namespace {

// nullopt when every leaf below v is claimed by reticulation choices that
// bypass this branch
std::optional<PhyloTree> induced_subtree(const PhyloNetwork& net, const Embedding& emb,
                                         const std::vector<int>& indeg, Vertex v) {
    if (net.is_leaf(v)) return make_leaf(net.label(v));
    std::vector<PhyloTree> kept;
    for (Vertex c : net.children(v)) {
        if (indeg[c] >= 2 && emb.chosen.at(c) != v) continue;
        if (auto sub = induced_subtree(net, emb, indeg, c))
            kept.push_back(std::move(*sub));
    }
    if (kept.empty()) return std::nullopt;
    if (kept.size() == 1) return std::move(kept[0]);
    return make_internal(std::move(kept));
}

}  // namespace

PhyloTree embedding_to_tree(const PhyloNetwork& net, const Embedding& emb) {
    auto indeg = net.in_degrees();
    for (Vertex r : net.reticulations())
        if (!emb.chosen.count(r))
            throw validation_error("embedding misses reticulation " + std::to_string(r));
    auto t = induced_subtree(net, emb, indeg, net.root);
    if (!t) throw internal_check_error("embedding induced an empty tree");
    return *t;
}

DisplaySet display_set(const PhyloNetwork& net) {
    NetworkClassification c = classify(net);
    if (!c.is_binary)
        throw unsupported_input_error("display set requires a binary network");
    if (!c.is_tree_child)
        throw unsupported_input_error("display set requires a tree-child network");

    DisplaySet out;
    std::set<std::string> seen;
    for (const Embedding& e : enumerate_embeddings(net)) {
        ++out.embedding_count;
        PhyloTree t = embedding_to_tree(net, e);
        if (seen.insert(tree_text(t)).second) out.trees.push_back(std::move(t));
    }
    std::sort(out.trees.begin(), out.trees.end(),
              [](const PhyloTree& a, const PhyloTree& b) { return tree_text(a) < tree_text(b); });
    return out;
}

bool displays(const PhyloNetwork& net, const PhyloTree& t) {
    NetworkClassification c = classify(net);
    if (!c.is_binary || !c.is_tree_child)
        throw unsupported_input_error("display test requires a binary tree-child network");

    std::set<std::string> X;
    for (Vertex v : net.leaves()) X.insert(net.label(v));
    std::set<std::string> L = tree_leaves(t);
    for (const std::string& l : L)
        if (!X.count(l))
            throw validation_error("displayed-tree test: leaf '" + l +
                                   "' does not occur in the network");

    for (const Embedding& e : enumerate_embeddings(net)) {
        PhyloTree full = embedding_to_tree(net, e);
        PhyloTree cut = restrict_to(full, L);
        if (is_refinement(cut, t)) return true;
    }
    return false;
}

}  // namespace normalnet
