#include "normalnet/gen.hpp"

#include <set>
#include <utility>

namespace normalnet {

namespace {

// rng() % n instead of uniform_int_distribution: the stream of draws, and so
// every generated instance, is then identical across standard libraries
std::size_t draw(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

void check_labels(const std::vector<std::string>& labels) {
    if (labels.empty()) throw validation_error("need at least one leaf label");
    std::set<std::string> seen;
    for (const std::string& l : labels) {
        if (l.empty()) throw validation_error("leaf labels must be non-empty");
        if (!seen.insert(l).second)
            throw validation_error("duplicate leaf label '" + l + "'");
    }
}

// preorder position idx picks the subtree that gets the new leaf as a sibling
bool attach_at(PhyloTree& t, std::size_t& idx, const std::string& label) {
    if (idx == 0) {
        PhyloTree old = std::move(t);
        t = make_internal({std::move(old), make_leaf(label)});
        return true;
    }
    --idx;
    for (PhyloTree& k : t.kids)
        if (attach_at(k, idx, label)) return true;
    return false;
}

template <typename Keep>
PhyloNetwork grow_network(const std::vector<std::string>& labels, int reticulations,
                          std::mt19937_64& rng, Keep&& keep) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        PhyloNetwork net = PhyloNetwork::from_tree(random_binary_tree(labels, rng));
        bool ok = true;
        for (int r = 0; r < reticulations && ok; ++r) {
            ok = false;
            for (int tries = 0; tries < 400; ++tries) {
                auto es = net.edges();
                auto [a, b] = es[draw(rng, es.size())];
                auto [c, d] = es[draw(rng, es.size())];
                if (a == c && b == d) continue;
                PhyloNetwork cand = net;
                Vertex top = cand.subdivide(a, b);
                Vertex bottom = cand.subdivide(c, d);
                cand.add_edge(top, bottom);
                if (invalid_reason(cand)) continue;
                NetworkClassification cl = classify(cand);
                if (!cl.is_binary || !keep(cl)) continue;
                net = std::move(cand);
                ok = true;
                break;
            }
        }
        if (ok) return net;
    }
    throw internal_check_error("could not grow a network of the requested shape");
}

}  // namespace

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    if (n <= 26) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + i)));
    } else {
        for (std::size_t i = 0; i < n; ++i) out.push_back("l" + std::to_string(i + 1));
    }
    return out;
}

PhyloTree random_binary_tree(const std::vector<std::string>& labels, std::mt19937_64& rng) {
    check_labels(labels);
    PhyloTree t = make_leaf(labels[0]);
    std::size_t nodes = 1;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        std::size_t idx = draw(rng, nodes);
        if (!attach_at(t, idx, labels[i]))
            throw internal_check_error("attachment position out of range");
        nodes += 2;
    }
    canonicalize(t);
    return t;
}

PhyloNetwork random_binary_normal(const std::vector<std::string>& labels, int reticulations,
                                  std::mt19937_64& rng) {
    check_labels(labels);
    int cap = labels.size() >= 2 ? static_cast<int>(labels.size()) - 2 : 0;
    if (reticulations < 0 || reticulations > cap)
        throw validation_error("a binary normal network on " + std::to_string(labels.size()) +
                               " leaves has at most " + std::to_string(cap) + " reticulations");
    return grow_network(labels, reticulations, rng,
                        [](const NetworkClassification& cl) { return cl.is_normal; });
}

PhyloNetwork random_binary_tree_child(const std::vector<std::string>& labels, int reticulations,
                                      std::mt19937_64& rng) {
    check_labels(labels);
    int cap = labels.size() >= 2 ? static_cast<int>(labels.size()) - 1 : 0;
    if (reticulations < 0 || reticulations > cap)
        throw validation_error("a binary tree-child network on " + std::to_string(labels.size()) +
                               " leaves has at most " + std::to_string(cap) + " reticulations");
    return grow_network(labels, reticulations, rng,
                        [](const NetworkClassification& cl) { return cl.is_tree_child; });
}

}  // namespace normalnet
