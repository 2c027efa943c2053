#pragma once

#include <random>
#include <string>
#include <vector>

#include "normalnet/phylo.hpp"

namespace normalnet {

// "a".."z" for up to 26 leaves, "l1".."ln" beyond that
std::vector<std::string> default_labels(std::size_t n);

// grown by attaching each next leaf at a uniformly chosen subtree
PhyloTree random_binary_tree(const std::vector<std::string>& labels, std::mt19937_64& rng);

// a random binary tree plus `reticulations` random edge additions, each kept
// only if the network stays binary and normal; needs reticulations <= n-2
PhyloNetwork random_binary_normal(const std::vector<std::string>& labels, int reticulations,
                                  std::mt19937_64& rng);

// as above but only tree-child is required; needs reticulations <= n-1
PhyloNetwork random_binary_tree_child(const std::vector<std::string>& labels, int reticulations,
                                      std::mt19937_64& rng);

}  // namespace normalnet
