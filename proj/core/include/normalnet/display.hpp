#ifndef NORMALNET_DISPLAY_HPP
#define NORMALNET_DISPLAY_HPP

// Embedded trees of a network: choosing one incoming edge per reticulation
// picks out a spanning tree; suppressing what is left yields a displayed tree.

#include <cstdint>
#include <map>
#include <vector>

#include "normalnet/phylo.hpp"

namespace normalnet {

// One incoming edge kept per reticulation.
struct Embedding {
    std::map<Vertex, Vertex> chosen;  // reticulation -> kept parent
    bool operator==(const Embedding&) const = default;
};

// All choice combinations, in a fixed order: reticulations ordered by
// (verifier leaf, id), parents ascending, odometer over the product.
std::vector<Embedding> enumerate_embeddings(const PhyloNetwork& net);

// The tree the embedding induces on the full leaf set.
PhyloTree embedding_to_tree(const PhyloNetwork& net, const Embedding& emb);

struct DisplaySet {
    std::uint64_t embedding_count = 0;  // before deduplication
    std::vector<PhyloTree> trees;       // distinct, sorted by canonical text
};

// Every tree the network displays.  Requires a binary tree-child network
// (unsupported_input_error otherwise): that keeps the embedding count at 2^k
// and guarantees every embedding spans all leaves.
DisplaySet display_set(const PhyloNetwork& net);

// Does the network display this tree?  True when some embedded tree,
// restricted to the tree's leaves, refines it.  The tree's leaves must all
// occur in the network.
bool displays(const PhyloNetwork& net, const PhyloTree& t);

}  // namespace normalnet

#endif
