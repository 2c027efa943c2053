#ifndef NORMALNET_RECONSTRUCT_HPP
#define NORMALNET_RECONSTRUCT_HPP

// Rebuilding a normal network from the set of trees it displays.

#include <optional>
#include <string>
#include <vector>

#include "normalnet/phylo.hpp"

namespace normalnet {

// Gate for splitting off a reticulated cherry (x, y): t1 (showing the cherry)
// and t2 (not showing it) describe the same tree once x is removed, and in t2
// the leaf y must sit outside the cluster of x's parent.
bool pair_normal_reticulated_cherry(const PhyloTree& t1, const PhyloTree& t2,
                                    const std::string& x, const std::string& y);

enum class BijectionStatus {
    found,
    wrong_half_count,  // the trees showing the cherry are not exactly half
    no_bijection,      // halves are right but no perfect pairing exists
};

struct HalfCherryBijection {
    BijectionStatus status = BijectionStatus::no_bijection;
    std::vector<std::size_t> with_cherry;     // indices into P
    std::vector<std::size_t> without_cherry;  // indices into P
    // partner[k] = index into P of the tree paired with with_cherry[k]
    std::vector<std::size_t> partner;
};

// Split P by whether {a, b} is a cherry and look for a perfect pairing under
// pair_normal_reticulated_cherry with first leaf x (x must be a or b).
HalfCherryBijection find_half_cherry_bijection(const std::vector<PhyloTree>& P,
                                               const std::string& a, const std::string& b,
                                               const std::string& x);

enum class ReconstructionVerdict {
    ok,
    bad_cardinality,                  // tree count is not a power of two
    no_step_applies,                  // neither reduction step is available
    subproblem_failed,                // a committed split left unusable trees
    constructed_network_not_normal,   // assembly succeeded but the result is wrong
};

struct ReconstructionOutcome {
    ReconstructionVerdict verdict = ReconstructionVerdict::ok;
    std::optional<PhyloNetwork> network;  // present exactly when verdict == ok
    std::string detail;
};

std::string to_string(ReconstructionVerdict v);

// Try to rebuild the unique binary normal network displaying exactly these
// trees.  The input is deduplicated; all trees must be binary on one shared
// leaf set (validation_error otherwise).  Negative verdicts are returned, not
// thrown.  When the input really is the display set of a binary normal
// network, the result is that network; the converse checks (the output's
// display set) are left to the caller.
ReconstructionOutcome reconstruct(const std::vector<PhyloTree>& P);

}  // namespace normalnet

#endif
