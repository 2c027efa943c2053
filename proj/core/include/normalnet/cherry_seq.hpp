#ifndef NORMALNET_CHERRY_SEQ_HPP
#define NORMALNET_CHERRY_SEQ_HPP

// Cherry-picking sequences: validity tests, the two sequence properties that
// characterise tree-child and normal reconstructions, optimal-sequence search,
// and the translations between sequences and networks.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normalnet/phylo.hpp"

namespace normalnet {

// One pick "(first, second)".  An empty second marks the terminal "(z, -)"
// entry that names the last surviving leaf.
struct CherryPick {
    std::string first;
    std::string second;

    bool is_end() const { return second.empty(); }
    bool operator==(const CherryPick&) const = default;
};

using PickSequence = std::vector<CherryPick>;

std::string to_string(const CherryPick& p);
std::string to_string(const PickSequence& seq);

// ---------------------------------------------------------------------------
// structural tests on sequences

// A witness that a (sub)sequence is a shortcut sequence: the chosen positions
// i_1 < ... < i_m, 0-based, relative to the sequence passed in.
struct ShortcutWitness {
    std::vector<std::size_t> indices;
};

// Whole-sequence test.  A sequence of picks x_1..x_s (s >= 2, no terminal
// entries) is a shortcut sequence when some selection i_1 < ... < i_m with
// i_1 = 1 and i_m = s satisfies either
//   - m = 2 and the first and last picks are identical, or
//   - m > 2 and (1) the firsts of pick i_1 and pick i_m agree, (2) that leaf
//     occurs in no interior chosen pick, (3) the interior chosen firsts are
//     pairwise distinct, and (4) consecutive chosen picks share a leaf.
bool is_shortcut_sequence(const PickSequence& seq, ShortcutWitness* witness = nullptr);

// Earliest violation of the tree-child property: positions i < j where the
// first of pick i reappears as the second of pick j.
struct TcViolation {
    std::size_t i, j;
};
std::optional<TcViolation> check_tc(const PickSequence& seq);

// Earliest (i, j) — i ascending, then j — such that the picks from i to j
// inclusive form a shortcut sequence.  The terminal entry never participates.
// Indices are 0-based; the witness holds absolute positions.
struct NormalViolation {
    std::size_t i, j;
    ShortcutWitness witness;
};
std::optional<NormalViolation> check_n(const PickSequence& seq);

// ---------------------------------------------------------------------------
// sequences against trees

struct ApplyResult {
    bool is_cps = false;            // every tree reduced to the terminal leaf
    std::vector<char> essential;    // per pick: did it reduce at least one tree?
                                    // (the terminal entry always counts)
    int weight = 0;                 // (number of non-terminal picks) + 1 - |X|
};

// Run the sequence against the trees: a pick (x, y) deletes x from every tree
// currently showing the cherry {x, y}.  The trees must share one leaf set and
// the sequence must mention only those leaves, use every leaf as a first, and
// end with its only terminal entry.
ApplyResult apply_sequence(const std::vector<PhyloTree>& P, const PickSequence& seq);

// ---------------------------------------------------------------------------
// sequences from and to networks

// The designated leaf at the end of a tree path, for the root and for every
// reticulation.  Requires a tree-child network; the designated leaves are
// pairwise distinct (checked).
struct VerifierMap {
    std::string root_leaf;
    std::map<Vertex, std::string> of_ret;
};
VerifierMap verifier_map(const PhyloNetwork& net);

// Reduce a binary normal network to a sequence by repeatedly picking cherries
// (preferring leaves whose reticulation is already resolved) and, when no
// cherry is available, resolving the smallest reticulated cherry.  The result
// satisfies both sequence properties and its weight is at most the network's
// hybridisation number.
PickSequence construct_sequence(const PhyloNetwork& net);

// Build a binary tree-child network realising the sequence, by replaying it
// backwards from the terminal leaf.  The sequence must pass check_tc and must
// be a cherry-picking sequence for P (validation_error otherwise); a leaf
// used as a first more than twice would force an in-degree-3 reticulation and
// is also rejected.  The result displays every tree of P and its
// hybridisation number is at most the sequence weight; if the sequence also
// passes check_n the result is normal.
PhyloNetwork sequence_to_network(const std::vector<PhyloTree>& P, const PickSequence& seq);

// The four structural properties tying a binary tree-child network to a
// sequence (terminal entry ignored throughout; TP(w) = tree-path leaves):
//   1. every tree vertex without a reticulation child has a pick pairing
//      tree-path leaves of its two children;
//   2. every tree vertex with a reticulation child has a pick whose first is
//      a tree-path leaf of the reticulation and whose second is one of its
//      own;
//   3. when both parents of a reticulation are joined by an edge, some pick
//      drawn from the lower parent's children occurs twice;
//   4. for adjacent tree vertices u above u' (directly or across one
//      reticulation, and not sharing a reticulation child), every pick drawn
//      from u''s children is followed by an intersecting pick, with a
//      different first, drawn from u's children.
struct PropertyCheck {
    bool pass = true;
    std::vector<std::string> failures;
};
struct SequencePropertyReport {
    PropertyCheck pairing, reticulation_pick, double_occurrence, ordering;
    bool all_pass() const {
        return pairing.pass && reticulation_pick.pass && double_occurrence.pass &&
               ordering.pass;
    }
};
SequencePropertyReport verify_network_sequence_properties(const PhyloNetwork& net,
                                                          const PickSequence& seq);

// ---------------------------------------------------------------------------
// optimal sequences

enum class SequenceMode {
    tree_child,  // require check_tc
    normal,      // require check_tc and check_n
};

enum class MinSequenceStatus {
    found,               // optimal sequence returned
    proven_nonexistent,  // search space exhausted, no sequence at all
    budget_exhausted,    // nothing within the weight budget; heavier ones may exist
};

struct MinSequenceResult {
    MinSequenceStatus status = MinSequenceStatus::proven_nonexistent;
    std::optional<PickSequence> sequence;
    int weight = 0;
    std::uint64_t nodes_visited = 0;
};

// Exhaustive branch-and-bound for a minimum-weight cherry-picking sequence of
// P under the chosen mode.  With a budget, only sequences of weight <= budget
// are considered; a result of `found` is still a global optimum (anything
// lighter would have been inside the budget too).
MinSequenceResult min_sequence(const std::vector<PhyloTree>& P, SequenceMode mode,
                               std::optional<int> budget = std::nullopt);

}  // namespace normalnet

#endif
