#ifndef NORMALNET_NEWICK_HPP
#define NORMALNET_NEWICK_HPP

// Newick text round-tripping.  Networks use the #H-tag convention: the first
// occurrence of a reticulation spells out its subtree, "(...)#H1", and every
// further occurrence is the bare reference "#H1".

#include <string>

#include "normalnet/phylo.hpp"

namespace normalnet {

// Parse one tree, e.g. "((a,b),c);".  Multifurcations are allowed, #H tags
// are not.  Throws parse_error (with the character offset) on bad syntax and
// validation_error on duplicate leaf labels.
PhyloTree parse_tree(const std::string& text);

// Parse one network, e.g. "((a,(b)#H1),(#H1,c));".  References may precede
// the tagged definition.  The result is validated as a phylogenetic network.
PhyloNetwork parse_network(const std::string& text);

// Canonical output, ';'-terminated: equal strings exactly for isomorphic
// inputs.  Children print smallest-cluster-leaf first; #H numbers follow
// first appearance in the text.
std::string serialize(const PhyloTree& t);
std::string serialize(const PhyloNetwork& net);

}  // namespace normalnet

#endif
