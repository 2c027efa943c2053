#ifndef NORMALNET_NORMALIZE_HPP
#define NORMALNET_NORMALIZE_HPP

// Turning a pair of trees into a normal network: start from an optimal
// tree-child network for the pair and rewire shortcuts one at a time, keeping
// one embedding per tree intact throughout.

#include <optional>
#include <string>

#include "normalnet/cherry_seq.hpp"
#include "normalnet/display.hpp"
#include "normalnet/phylo.hpp"

namespace normalnet {

struct ShortcutMeasure {
    int shortcut_count = 0;
    std::optional<int> min_shortcut_length;  // empty when there is none
};
ShortcutMeasure measure(const PhyloNetwork& net);

// An optimal binary tree-child network for {t1, t2} with one embedding per
// tree, reticulation choices the two embeddings agree on already removed.
// The trees must be binary and share a leaf set; equal trees give back the
// tree itself with two empty embeddings.
struct InitialPair {
    PhyloNetwork network;
    Embedding first, second;  // induce t1 and t2 respectively
};
InitialPair initial_tree_child_pair(const PhyloTree& t1, const PhyloTree& t2);

// One rewiring step on the smallest shortcut (ties by the designated leaves of
// its endpoints).  The embeddings must each use one of the two edges into
// every reticulation; the returned pair does so again, inducing the same two
// trees.  `rule` names the branch taken: "a" (direct shortcut), "b" (re-hang
// an off-path reticulation), "c"/"c-root" (re-hang above the lower endpoint),
// "d"/"e" (rotate the path tail).  The chosen shortcut never survives at its
// old length, though other shortcuts may temporarily appear or grow.
struct EliminateStepResult {
    PhyloNetwork network;
    Embedding first, second;
    std::string rule;
};
EliminateStepResult eliminate_shortcut_step(const PhyloNetwork& net, const Embedding& first,
                                            const Embedding& second);

// A binary normal network displaying both trees, built by repairing an
// optimal tree-child network one shortcut at a time.  The repairs can add
// reticulations, so the result may sit above the tree-child optimum (for some
// pairs every normal network does).  Non-binary input trees are first
// resolved deterministically.  Equal trees come back as the tree itself.
PhyloNetwork normalize_pair(const PhyloTree& t1, const PhyloTree& t2);

}  // namespace normalnet

#endif
