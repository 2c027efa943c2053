#ifndef NORMALNET_PHYLO_HPP
#define NORMALNET_PHYLO_HPP

// Rooted leaf-labeled trees and networks, with the structural predicates and
// surgeries everything else is built on.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace normalnet {

// ---------------------------------------------------------------------------
// errors

// Malformed text input (Newick, sequence files).  offset is a 0-based
// character position when known, std::string::npos otherwise.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t off = std::string::npos)
        : std::runtime_error(what), offset(off) {}
    std::size_t offset;
};

// Structurally well-formed input that violates a documented precondition
// (wrong leaf set, duplicate trees, non-network degree pattern, ...).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Input outside an algorithm's documented domain (e.g. a non-binary or
// non-tree-child network handed to a binary-only routine).
class unsupported_input_error : public std::runtime_error {
public:
    explicit unsupported_input_error(const std::string& what) : std::runtime_error(what) {}
};

// A verified internal postcondition failed.  This always signals a bug in the
// library, never bad user input; it is kept distinct so callers can tell the
// two apart.
class internal_check_error : public std::logic_error {
public:
    explicit internal_check_error(const std::string& what) : std::logic_error(what) {}
};

// ---------------------------------------------------------------------------
// trees

// Value-type rooted tree.  A node is a leaf iff `kids` is empty, and then
// `leaf` holds its label.  All construction helpers keep children in canonical
// order (sorted by smallest leaf label in their cluster), so operator== is
// exactly leaf-labeled isomorphism.
struct PhyloTree {
    std::string leaf;
    std::vector<PhyloTree> kids;

    bool is_leaf() const { return kids.empty(); }
    bool operator==(const PhyloTree&) const = default;
    bool operator<(const PhyloTree& o) const;  // canonical-text order
};

PhyloTree make_leaf(std::string label);
PhyloTree make_internal(std::vector<PhyloTree> kids);  // sorts into canonical order

// Re-establish canonical child order after manual surgery on `kids`.
void canonicalize(PhyloTree& t);

// Canonical Newick text without the trailing ';' — used as a sort/equality key.
std::string tree_text(const PhyloTree& t);

std::set<std::string> tree_leaves(const PhyloTree& t);
bool tree_is_binary(const PhyloTree& t);

// Remove leaf x and suppress the resulting degree-two vertex (a root left with
// one child is deleted).  Throws validation_error if x is absent or the tree
// is a single vertex.
PhyloTree delete_leaf(const PhyloTree& t, const std::string& x);

// Minimal subtree connecting Y, degree-two vertices suppressed.  Y must be a
// non-empty subset of the leaf set.
PhyloTree restrict_to(const PhyloTree& t, const std::set<std::string>& Y);

// Unordered leaf pairs sharing a parent, as (min,max) pairs.
std::set<std::pair<std::string, std::string>> tree_cherries(const PhyloTree& t);

// All clusters (leaf sets of subtrees), the full leaf set included.
std::set<std::set<std::string>> tree_clusters(const PhyloTree& t);

// Does `refined` (binary) arise from `tree` by resolving multifurcations?
// Equivalent test: every cluster of `tree` is a cluster of `refined`.
// Throws validation_error on a leaf-set mismatch.
bool is_refinement(const PhyloTree& refined, const PhyloTree& tree);

bool isomorphic(const PhyloTree& a, const PhyloTree& b);

// Visit every binary refinement (deduplicated); stop early when the callback
// returns false.  The count is a double factorial in the largest out-degree,
// so callers bound consumption.
template <class Fn>
void for_each_binary_refinement(const PhyloTree& t, Fn&& fn);

std::vector<PhyloTree> binary_refinements(const PhyloTree& t);

// ---------------------------------------------------------------------------
// networks

using Vertex = std::uint32_t;

// Rooted DAG with children adjacency.  Vertex ids are stable for the lifetime
// of the object and never reused; removed vertices leave dead slots behind.
// Leaves carry labels; everything structural (degrees, acyclicity, the degree
// pattern that makes this a phylogenetic network) is checked by validate() /
// classify(), not enforced during surgery.
class PhyloNetwork {
public:
    Vertex root = 0;

    Vertex add_vertex(std::string label = "");
    void kill_vertex(Vertex v);  // mark dead; caller has already detached it

    bool alive(Vertex v) const { return v < alive_.size() && alive_[v]; }
    std::size_t vertex_count() const;
    std::vector<Vertex> vertices() const;  // alive ids, ascending

    const std::vector<Vertex>& children(Vertex v) const { return kids_[v]; }
    std::vector<Vertex>& children(Vertex v) { return kids_[v]; }
    const std::string& label(Vertex v) const { return label_[v]; }
    void set_label(Vertex v, std::string l) { label_[v] = std::move(l); }

    bool is_leaf(Vertex v) const { return kids_[v].empty(); }
    std::vector<Vertex> leaves() const;
    std::vector<std::pair<Vertex, Vertex>> edges() const;

    // in-degree per vertex id (dead slots 0)
    std::vector<int> in_degrees() const;
    // parent lists per vertex id
    std::vector<std::vector<Vertex>> parent_lists() const;
    // reticulations = alive vertices of in-degree >= 2, ascending
    std::vector<Vertex> reticulations() const;

    Vertex find_leaf(const std::string& label) const;  // validation_error if absent

    void add_edge(Vertex u, Vertex v);
    void remove_edge(Vertex u, Vertex v);

    // Split edge (u,v) with a fresh vertex; returns it.
    Vertex subdivide(Vertex u, Vertex v);

    // Remove a vertex with out-degree one and in-degree at most one, splicing
    // its parent to its child (a root is simply deleted and the child takes
    // over).  internal_check_error if the splice would create a parallel edge.
    void suppress(Vertex v);

    // Remove reticulation edge (u,v) and suppress either endpoint that drops
    // to plain degree two.
    void delete_reticulation_edge(Vertex u, Vertex v);

    // Remove the leaf labelled x and tidy its parent.
    void delete_leaf(const std::string& x);

    static PhyloNetwork from_tree(const PhyloTree& t);
    static PhyloNetwork single_leaf(const std::string& label);

private:
    std::vector<std::vector<Vertex>> kids_;
    std::vector<std::string> label_;
    std::vector<char> alive_;
};

// nullopt when net satisfies all network invariants, else a message naming the
// offending vertex or edge.
std::optional<std::string> invalid_reason(const PhyloNetwork& net);
// Same check, throwing validation_error on failure.
void validate_network(const PhyloNetwork& net);

struct Shortcut {
    Vertex u, v;   // the reticulation edge
    int length;    // vertices on the u -> (other parents of v) paths, unioned
    bool operator==(const Shortcut&) const = default;
};

struct NetworkClassification {
    bool is_binary = false;
    bool is_tree_child = false;
    bool is_normal = false;
    std::vector<Shortcut> shortcuts;
    int hybridisation_number = 0;
    int reticulation_count = 0;
};

// Full structural classification.  Throws validation_error when the input is
// not a phylogenetic network at all.
NetworkClassification classify(const PhyloNetwork& net);

// Labels of leaf descendants of v (v included when itself a leaf).
std::set<std::string> cluster(const PhyloNetwork& net, Vertex v);

// Number of vertices on the union of all u -> p paths over parents p != u of v
// that u reaches.  (u,v) should be a reticulation edge; returns 0 when no such
// path exists (i.e. (u,v) is not a shortcut).
int shortcut_length(const PhyloNetwork& net, Vertex u, Vertex v);

struct Cherries {
    std::set<std::pair<std::string, std::string>> plain;         // unordered, (min,max)
    std::set<std::pair<std::string, std::string>> reticulated;   // (reticulation leaf, partner)
};
Cherries find_cherries(const PhyloNetwork& net);

// Leaves at the end of tree paths starting at v (every vertex after v on the
// path is a tree vertex or leaf).
std::set<std::string> tree_path_leaves(const PhyloNetwork& net, Vertex v);
// Smallest such leaf label, empty string when none exists.
std::string verifier_leaf(const PhyloNetwork& net, Vertex v);

// Canonical serialisation; two networks get equal text iff they are
// leaf-labeled isomorphic.  Children are emitted smallest-cluster-leaf first;
// reticulations are tagged #H1, #H2, ... by first appearance.
std::string canonical_text(const PhyloNetwork& net);

bool isomorphic(const PhyloNetwork& a, const PhyloNetwork& b);

// ---------------------------------------------------------------------------
// template bodies

namespace detail {
void binary_refinements_impl(const PhyloTree& t, std::vector<PhyloTree>& out);
}

template <class Fn>
void for_each_binary_refinement(const PhyloTree& t, Fn&& fn) {
    // Refinement sets stay tiny at the scales this library targets, so the
    // streaming interface just walks a materialised list.
    std::vector<PhyloTree> all;
    detail::binary_refinements_impl(t, all);
    for (const PhyloTree& r : all)
        if (!fn(r)) return;
}

}  // namespace normalnet

#endif
