#include "normalnet/phylo.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace normalnet {

// ===========================================================================
// trees

namespace {

std::string min_leaf_of(const PhyloTree& t) {
    if (t.is_leaf()) return t.leaf;
    std::string best;
    bool first = true;
    for (const PhyloTree& k : t.kids) {
        std::string m = min_leaf_of(k);
        if (first || m < best) { best = std::move(m); first = false; }
    }
    return best;
}

void sort_kids(std::vector<PhyloTree>& kids) {
    std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> keys;
    keys.reserve(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i)
        keys.push_back({{min_leaf_of(kids[i]), tree_text(kids[i])}, i});
    std::sort(keys.begin(), keys.end());
    std::vector<PhyloTree> out;
    out.reserve(kids.size());
    for (auto& k : keys) out.push_back(std::move(kids[k.second]));
    kids = std::move(out);
}

}  // namespace

bool PhyloTree::operator<(const PhyloTree& o) const {
    return tree_text(*this) < tree_text(o);
}

PhyloTree make_leaf(std::string label) {
    PhyloTree t;
    t.leaf = std::move(label);
    return t;
}

PhyloTree make_internal(std::vector<PhyloTree> kids) {
    PhyloTree t;
    t.kids = std::move(kids);
    sort_kids(t.kids);
    return t;
}

void canonicalize(PhyloTree& t) {
    for (PhyloTree& k : t.kids) canonicalize(k);
    sort_kids(t.kids);
}

std::string tree_text(const PhyloTree& t) {
    if (t.is_leaf()) return t.leaf;
    std::string s = "(";
    for (std::size_t i = 0; i < t.kids.size(); ++i) {
        if (i) s += ',';
        s += tree_text(t.kids[i]);
    }
    s += ')';
    return s;
}

std::set<std::string> tree_leaves(const PhyloTree& t) {
    std::set<std::string> out;
    std::function<void(const PhyloTree&)> rec = [&](const PhyloTree& n) {
        if (n.is_leaf()) out.insert(n.leaf);
        for (const PhyloTree& k : n.kids) rec(k);
    };
    rec(t);
    return out;
}

bool tree_is_binary(const PhyloTree& t) {
    if (t.is_leaf()) return true;
    if (t.kids.size() != 2) return false;
    return tree_is_binary(t.kids[0]) && tree_is_binary(t.kids[1]);
}

namespace {

// nullopt = subtree vanished entirely
std::optional<PhyloTree> drop_leaf_rec(const PhyloTree& t, const std::string& x) {
    if (t.is_leaf()) {
        if (t.leaf == x) return std::nullopt;
        return t;
    }
    std::vector<PhyloTree> kept;
    for (const PhyloTree& k : t.kids) {
        auto r = drop_leaf_rec(k, x);
        if (r) kept.push_back(std::move(*r));
    }
    if (kept.empty()) return std::nullopt;
    if (kept.size() == 1) return std::move(kept[0]);
    return make_internal(std::move(kept));
}

}  // namespace

PhyloTree delete_leaf(const PhyloTree& t, const std::string& x) {
    if (!tree_leaves(t).count(x))
        throw validation_error("delete_leaf: no leaf labelled '" + x + "'");
    if (t.is_leaf())
        throw validation_error("delete_leaf: cannot delete the only leaf");
    auto r = drop_leaf_rec(t, x);
    if (!r) throw internal_check_error("delete_leaf: tree vanished");
    return *r;
}

namespace {

std::optional<PhyloTree> restrict_rec(const PhyloTree& t, const std::set<std::string>& Y) {
    if (t.is_leaf()) {
        if (Y.count(t.leaf)) return t;
        return std::nullopt;
    }
    std::vector<PhyloTree> kept;
    for (const PhyloTree& k : t.kids) {
        auto r = restrict_rec(k, Y);
        if (r) kept.push_back(std::move(*r));
    }
    if (kept.empty()) return std::nullopt;
    if (kept.size() == 1) return std::move(kept[0]);
    return make_internal(std::move(kept));
}

}  // namespace

PhyloTree restrict_to(const PhyloTree& t, const std::set<std::string>& Y) {
    if (Y.empty()) throw validation_error("restrict: empty leaf subset");
    std::set<std::string> L = tree_leaves(t);
    for (const std::string& y : Y)
        if (!L.count(y))
            throw validation_error("restrict: '" + y + "' is not a leaf of the tree");
    auto r = restrict_rec(t, Y);
    if (!r) throw internal_check_error("restrict: tree vanished");
    return *r;
}

std::set<std::pair<std::string, std::string>> tree_cherries(const PhyloTree& t) {
    std::set<std::pair<std::string, std::string>> out;
    std::function<void(const PhyloTree&)> rec = [&](const PhyloTree& n) {
        if (n.is_leaf()) return;
        for (std::size_t i = 0; i < n.kids.size(); ++i)
            for (std::size_t j = i + 1; j < n.kids.size(); ++j)
                if (n.kids[i].is_leaf() && n.kids[j].is_leaf()) {
                    std::string a = n.kids[i].leaf, b = n.kids[j].leaf;
                    if (b < a) std::swap(a, b);
                    out.insert({a, b});
                }
        for (const PhyloTree& k : n.kids) rec(k);
    };
    rec(t);
    return out;
}

std::set<std::set<std::string>> tree_clusters(const PhyloTree& t) {
    std::set<std::set<std::string>> out;
    std::function<std::set<std::string>(const PhyloTree&)> rec = [&](const PhyloTree& n) {
        std::set<std::string> c;
        if (n.is_leaf()) {
            c.insert(n.leaf);
        } else {
            for (const PhyloTree& k : n.kids) {
                auto kc = rec(k);
                c.insert(kc.begin(), kc.end());
            }
        }
        out.insert(c);
        return c;
    };
    rec(t);
    return out;
}

bool is_refinement(const PhyloTree& refined, const PhyloTree& tree) {
    if (tree_leaves(refined) != tree_leaves(tree))
        throw validation_error("is_refinement: leaf sets differ");
    auto need = tree_clusters(tree);
    auto have = tree_clusters(refined);
    for (const auto& c : need)
        if (!have.count(c)) return false;
    return true;
}

bool isomorphic(const PhyloTree& a, const PhyloTree& b) {
    PhyloTree ca = a, cb = b;
    canonicalize(ca);
    canonicalize(cb);
    return ca == cb;
}

namespace detail {

namespace {

// all ways to hang `extra` off one node of `t` (every subtree position,
// root included)
void attach_everywhere(const PhyloTree& t, const PhyloTree& extra,
                       std::vector<PhyloTree>& out) {
    out.push_back(make_internal({t, extra}));
    if (t.is_leaf()) return;
    for (std::size_t i = 0; i < t.kids.size(); ++i) {
        std::vector<PhyloTree> sub;
        attach_everywhere(t.kids[i], extra, sub);
        for (PhyloTree& s : sub) {
            PhyloTree copy = t;
            copy.kids[i] = std::move(s);
            sort_kids(copy.kids);
            out.push_back(std::move(copy));
        }
    }
}

PhyloTree substitute_blocks(const PhyloTree& shape, const std::vector<PhyloTree>& blocks) {
    if (shape.is_leaf()) return blocks[std::stoul(shape.leaf)];
    std::vector<PhyloTree> kids;
    kids.reserve(shape.kids.size());
    for (const PhyloTree& k : shape.kids) kids.push_back(substitute_blocks(k, blocks));
    return make_internal(std::move(kids));
}

// every binary tree shape over the given block subtrees, each block kept
// intact as a unit (so its cluster survives): enumerate shapes on placeholder
// leaves, then substitute
std::vector<PhyloTree> binary_topologies(const std::vector<PhyloTree>& blocks) {
    std::vector<PhyloTree> shapes = {make_leaf("0")};
    for (std::size_t k = 1; k < blocks.size(); ++k) {
        std::vector<PhyloTree> next;
        PhyloTree mark = make_leaf(std::to_string(k));
        for (const PhyloTree& t : shapes) attach_everywhere(t, mark, next);
        shapes = std::move(next);
    }
    std::vector<PhyloTree> out;
    out.reserve(shapes.size());
    for (const PhyloTree& s : shapes) out.push_back(substitute_blocks(s, blocks));
    return out;
}

}  // namespace

void binary_refinements_impl(const PhyloTree& t, std::vector<PhyloTree>& out) {
    if (t.is_leaf()) {
        out.push_back(t);
        return;
    }
    std::vector<std::vector<PhyloTree>> per_kid(t.kids.size());
    for (std::size_t i = 0; i < t.kids.size(); ++i)
        binary_refinements_impl(t.kids[i], per_kid[i]);

    std::set<std::string> seen;
    std::vector<std::size_t> idx(t.kids.size(), 0);
    for (;;) {
        std::vector<PhyloTree> blocks;
        blocks.reserve(t.kids.size());
        for (std::size_t i = 0; i < t.kids.size(); ++i)
            blocks.push_back(per_kid[i][idx[i]]);
        for (PhyloTree& topo : binary_topologies(blocks)) {
            std::string key = tree_text(topo);
            if (seen.insert(key).second) out.push_back(std::move(topo));
        }
        // odometer
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == per_kid[i].size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
    std::sort(out.begin(), out.end(),
              [](const PhyloTree& a, const PhyloTree& b) { return tree_text(a) < tree_text(b); });
}

}  // namespace detail

std::vector<PhyloTree> binary_refinements(const PhyloTree& t) {
    std::vector<PhyloTree> out;
    detail::binary_refinements_impl(t, out);
    return out;
}

// ===========================================================================
// networks

Vertex PhyloNetwork::add_vertex(std::string label) {
    kids_.emplace_back();
    label_.push_back(std::move(label));
    alive_.push_back(1);
    return static_cast<Vertex>(kids_.size() - 1);
}

void PhyloNetwork::kill_vertex(Vertex v) {
    alive_[v] = 0;
    kids_[v].clear();
    label_[v].clear();
}

std::size_t PhyloNetwork::vertex_count() const {
    std::size_t n = 0;
    for (char a : alive_) n += a != 0;
    return n;
}

std::vector<Vertex> PhyloNetwork::vertices() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < alive_.size(); ++v)
        if (alive_[v]) out.push_back(v);
    return out;
}

std::vector<Vertex> PhyloNetwork::leaves() const {
    std::vector<Vertex> out;
    for (Vertex v : vertices())
        if (kids_[v].empty()) out.push_back(v);
    return out;
}

std::vector<std::pair<Vertex, Vertex>> PhyloNetwork::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex v : vertices())
        for (Vertex c : kids_[v]) out.push_back({v, c});
    return out;
}

std::vector<int> PhyloNetwork::in_degrees() const {
    std::vector<int> d(alive_.size(), 0);
    for (Vertex v : vertices())
        for (Vertex c : kids_[v]) ++d[c];
    return d;
}

std::vector<std::vector<Vertex>> PhyloNetwork::parent_lists() const {
    std::vector<std::vector<Vertex>> p(alive_.size());
    for (Vertex v : vertices())
        for (Vertex c : kids_[v]) p[c].push_back(v);
    return p;
}

std::vector<Vertex> PhyloNetwork::reticulations() const {
    std::vector<Vertex> out;
    auto d = in_degrees();
    for (Vertex v : vertices())
        if (d[v] >= 2) out.push_back(v);
    return out;
}

Vertex PhyloNetwork::find_leaf(const std::string& label) const {
    for (Vertex v : leaves())
        if (label_[v] == label) return v;
    throw validation_error("no leaf labelled '" + label + "'");
}

void PhyloNetwork::add_edge(Vertex u, Vertex v) {
    kids_[u].push_back(v);
}

void PhyloNetwork::remove_edge(Vertex u, Vertex v) {
    auto& k = kids_[u];
    auto it = std::find(k.begin(), k.end(), v);
    if (it == k.end())
        throw internal_check_error("remove_edge: no edge " + std::to_string(u) + "->" +
                                   std::to_string(v));
    k.erase(it);
}

Vertex PhyloNetwork::subdivide(Vertex u, Vertex v) {
    auto& k = kids_[u];
    auto it = std::find(k.begin(), k.end(), v);
    if (it == k.end())
        throw internal_check_error("subdivide: no edge " + std::to_string(u) + "->" +
                                   std::to_string(v));
    Vertex w = add_vertex();
    *std::find(kids_[u].begin(), kids_[u].end(), v) = w;  // add_vertex may reallocate
    kids_[w].push_back(v);
    return w;
}

void PhyloNetwork::suppress(Vertex v) {
    if (kids_[v].size() != 1)
        throw internal_check_error("suppress: vertex " + std::to_string(v) +
                                   " does not have exactly one child");
    Vertex c = kids_[v][0];
    auto par = parent_lists();
    if (par[v].size() > 1)
        throw internal_check_error("suppress: vertex " + std::to_string(v) +
                                   " has several parents");
    if (par[v].empty()) {  // root: child takes over
        kill_vertex(v);
        root = c;
        return;
    }
    Vertex p = par[v][0];
    if (std::find(kids_[p].begin(), kids_[p].end(), c) != kids_[p].end())
        throw internal_check_error("suppress: splicing " + std::to_string(p) + "->" +
                                   std::to_string(c) + " would duplicate an edge");
    remove_edge(p, v);
    remove_edge(v, c);
    add_edge(p, c);
    kill_vertex(v);
}

void PhyloNetwork::delete_reticulation_edge(Vertex u, Vertex v) {
    remove_edge(u, v);
    auto d = in_degrees();
    if (alive(v) && d[v] == 1 && kids_[v].size() == 1) suppress(v);
    d = in_degrees();
    if (alive(u) && kids_[u].size() == 1 && (d[u] <= 1)) suppress(u);
}

void PhyloNetwork::delete_leaf(const std::string& x) {
    Vertex v = find_leaf(x);
    auto par = parent_lists();
    if (par[v].empty())
        throw validation_error("delete_leaf: '" + x + "' is the whole network");
    Vertex p = par[v][0];
    if (par[v].size() > 1 || par[p].size() > 1)
        throw validation_error("delete_leaf: '" + x + "' hangs below a reticulation");
    remove_edge(p, v);
    kill_vertex(v);
    if (kids_[p].size() == 1) suppress(p);
}

PhyloNetwork PhyloNetwork::from_tree(const PhyloTree& t) {
    PhyloNetwork n;
    std::function<Vertex(const PhyloTree&)> build = [&](const PhyloTree& node) {
        Vertex v = n.add_vertex(node.is_leaf() ? node.leaf : "");
        for (const PhyloTree& k : node.kids) {
            Vertex c = build(k);
            n.add_edge(v, c);
        }
        return v;
    };
    n.root = build(t);
    return n;
}

PhyloNetwork PhyloNetwork::single_leaf(const std::string& label) {
    PhyloNetwork n;
    n.root = n.add_vertex(label);
    return n;
}

// ---------------------------------------------------------------------------
// reachability helpers

namespace {

std::vector<char> descendants_of(const PhyloNetwork& net, Vertex start) {
    std::vector<char> seen(net.in_degrees().size(), 0);
    std::vector<Vertex> stack = {start};
    seen[start] = 1;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex c : net.children(v))
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
    }
    return seen;
}

std::vector<char> ancestors_of(const PhyloNetwork& net,
                               const std::vector<std::vector<Vertex>>& par, Vertex start) {
    std::vector<char> seen(par.size(), 0);
    std::vector<Vertex> stack = {start};
    seen[start] = 1;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex p : par[v])
            if (!seen[p]) {
                seen[p] = 1;
                stack.push_back(p);
            }
    }
    return seen;
}

}  // namespace

// ---------------------------------------------------------------------------
// validation / classification

std::optional<std::string> invalid_reason(const PhyloNetwork& net) {
    auto vs = net.vertices();
    if (vs.empty()) return "network has no vertices";
    if (!net.alive(net.root)) return "root vertex is not alive";

    auto indeg = net.in_degrees();
    if (indeg[net.root] != 0)
        return "root " + std::to_string(net.root) + " has incoming edges";

    for (Vertex v : vs) {
        const auto& k = net.children(v);
        for (Vertex c : k) {
            if (!net.alive(c))
                return "edge " + std::to_string(v) + "->" + std::to_string(c) +
                       " points at a dead vertex";
            if (c == v) return "self-loop at vertex " + std::to_string(v);
        }
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = i + 1; j < k.size(); ++j)
                if (k[i] == k[j])
                    return "parallel edges " + std::to_string(v) + "->" + std::to_string(k[i]);
        if (v != net.root && indeg[v] == 0)
            return "vertex " + std::to_string(v) + " is unreachable (in-degree 0)";
    }

    // acyclicity + reachability in one DFS from the root
    {
        std::vector<int> colour(indeg.size(), 0);  // 0 white, 1 grey, 2 black
        std::vector<std::pair<Vertex, std::size_t>> stack;
        stack.push_back({net.root, 0});
        colour[net.root] = 1;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i < net.children(v).size()) {
                Vertex c = net.children(v)[i++];
                if (colour[c] == 1)
                    return "cycle through edge " + std::to_string(v) + "->" + std::to_string(c);
                if (colour[c] == 0) {
                    colour[c] = 1;
                    stack.push_back({c, 0});
                }
            } else {
                colour[v] = 2;
                stack.pop_back();
            }
        }
        for (Vertex v : vs)
            if (colour[v] == 0)
                return "vertex " + std::to_string(v) + " is unreachable from the root";
    }

    if (vs.size() == 1) {
        if (net.label(net.root).empty()) return "single vertex carries no label";
        return std::nullopt;
    }

    std::set<std::string> labels;
    for (Vertex v : vs) {
        const auto& k = net.children(v);
        if (k.empty()) {
            if (net.label(v).empty())
                return "leaf " + std::to_string(v) + " carries no label";
            if (!labels.insert(net.label(v)).second)
                return "duplicate leaf label '" + net.label(v) + "'";
            if (indeg[v] != 1)
                return "leaf " + std::to_string(v) + " has in-degree " +
                       std::to_string(indeg[v]);
            continue;
        }
        if (!net.label(v).empty())
            return "internal vertex " + std::to_string(v) + " carries label '" +
                   net.label(v) + "'";
        if (k.size() > 2)
            return "vertex " + std::to_string(v) + " has out-degree " +
                   std::to_string(k.size());
        if (v == net.root) {
            if (k.size() != 2)
                return "root has out-degree " + std::to_string(k.size());
            continue;
        }
        if (indeg[v] == 1) {
            if (k.size() != 2)
                return "vertex " + std::to_string(v) +
                       " has in-degree 1 and out-degree " + std::to_string(k.size());
        } else {  // indeg >= 2
            if (k.size() != 1)
                return "reticulation " + std::to_string(v) + " has out-degree " +
                       std::to_string(k.size());
        }
    }
    return std::nullopt;
}

void validate_network(const PhyloNetwork& net) {
    if (auto why = invalid_reason(net)) throw validation_error(*why);
}

int shortcut_length(const PhyloNetwork& net, Vertex u, Vertex v) {
    auto par = net.parent_lists();
    std::vector<char> anc(par.size(), 0);
    for (Vertex p : par[v]) {
        if (p == u) continue;
        auto a = ancestors_of(net, par, p);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i]) anc[i] = 1;
    }
    auto desc = descendants_of(net, u);
    int n = 0;
    for (std::size_t i = 0; i < anc.size(); ++i)
        if (anc[i] && desc[i]) ++n;
    return n;
}

NetworkClassification classify(const PhyloNetwork& net) {
    validate_network(net);
    NetworkClassification c;
    auto indeg = net.in_degrees();

    c.is_binary = true;
    c.is_tree_child = true;
    for (Vertex v : net.vertices()) {
        if (indeg[v] >= 2) {
            ++c.reticulation_count;
            c.hybridisation_number += indeg[v] - 1;
            if (indeg[v] > 2) c.is_binary = false;
        }
        if (!net.is_leaf(v)) {
            bool has_tree_child = false;
            for (Vertex k : net.children(v))
                if (indeg[k] <= 1) has_tree_child = true;
            if (!has_tree_child) c.is_tree_child = false;
        }
    }

    for (Vertex v : net.reticulations()) {
        auto par = net.parent_lists();
        for (Vertex u : par[v]) {
            int len = shortcut_length(net, u, v);
            if (len > 0) c.shortcuts.push_back({u, v, len});
        }
    }
    std::sort(c.shortcuts.begin(), c.shortcuts.end(),
              [](const Shortcut& a, const Shortcut& b) {
                  return std::tie(a.length, a.u, a.v) < std::tie(b.length, b.u, b.v);
              });

    c.is_normal = c.is_tree_child && c.shortcuts.empty();
    return c;
}

std::set<std::string> cluster(const PhyloNetwork& net, Vertex v) {
    std::set<std::string> out;
    auto seen = descendants_of(net, v);
    for (Vertex w = 0; w < seen.size(); ++w)
        if (seen[w] && net.alive(w) && net.is_leaf(w)) out.insert(net.label(w));
    return out;
}

Cherries find_cherries(const PhyloNetwork& net) {
    Cherries out;
    auto indeg = net.in_degrees();
    auto par = net.parent_lists();
    for (Vertex v : net.vertices()) {
        const auto& k = net.children(v);
        // plain cherries: two leaf children of one tree vertex
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = i + 1; j < k.size(); ++j)
                if (net.is_leaf(k[i]) && net.is_leaf(k[j])) {
                    std::string a = net.label(k[i]), b = net.label(k[j]);
                    if (b < a) std::swap(a, b);
                    out.plain.insert({a, b});
                }
    }
    // reticulated cherries: leaf x below reticulation r, leaf y below a tree
    // vertex that is also a parent of r
    for (Vertex x : net.leaves()) {
        if (par[x].empty()) continue;
        Vertex r = par[x][0];
        if (indeg[r] < 2) continue;
        for (Vertex p : par[r]) {
            for (Vertex c : net.children(p))
                if (c != r && net.is_leaf(c))
                    out.reticulated.insert({net.label(x), net.label(c)});
        }
    }
    return out;
}

std::set<std::string> tree_path_leaves(const PhyloNetwork& net, Vertex v) {
    std::set<std::string> out;
    auto indeg = net.in_degrees();
    std::vector<char> seen(indeg.size(), 0);
    std::vector<Vertex> stack = {v};
    seen[v] = 1;
    if (net.is_leaf(v)) {
        out.insert(net.label(v));
        return out;
    }
    while (!stack.empty()) {
        Vertex w = stack.back();
        stack.pop_back();
        for (Vertex c : net.children(w)) {
            if (indeg[c] >= 2 || seen[c]) continue;
            seen[c] = 1;
            if (net.is_leaf(c))
                out.insert(net.label(c));
            else
                stack.push_back(c);
        }
    }
    return out;
}

std::string verifier_leaf(const PhyloNetwork& net, Vertex v) {
    auto s = tree_path_leaves(net, v);
    if (s.empty()) return "";
    return *s.begin();
}

// ---------------------------------------------------------------------------
// canonical serialisation

namespace {

struct CanonCtx {
    const PhyloNetwork& net;
    std::vector<int> indeg;
    std::map<Vertex, std::string> skey;
    std::map<Vertex, std::string> minleaf;

    explicit CanonCtx(const PhyloNetwork& n) : net(n), indeg(n.in_degrees()) {}

    const std::string& ml(Vertex v) {
        auto it = minleaf.find(v);
        if (it != minleaf.end()) return it->second;
        std::string m;
        if (net.is_leaf(v)) {
            m = net.label(v);
        } else {
            bool first = true;
            for (Vertex c : net.children(v)) {
                const std::string& cm = ml(c);
                if (first || cm < m) { m = cm; first = false; }
            }
        }
        return minleaf.emplace(v, std::move(m)).first->second;
    }

    // structural key: equal keys <=> equal unfoldings into labelled trees
    const std::string& key(Vertex v) {
        auto it = skey.find(v);
        if (it != skey.end()) return it->second;
        std::string k;
        if (net.is_leaf(v)) {
            k = "L" + net.label(v);
        } else if (indeg[v] >= 2) {
            k = "R(" + key(net.children(v)[0]) + ")";
        } else {
            std::vector<std::string> parts;
            for (Vertex c : net.children(v)) parts.push_back(composite(c));
            std::sort(parts.begin(), parts.end());
            k = "T(";
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) k += ',';
                k += parts[i];
            }
            k += ')';
        }
        return skey.emplace(v, std::move(k)).first->second;
    }

    // child ordering key: smallest cluster leaf first, structure second
    std::string composite(Vertex v) { return ml(v) + '\x01' + key(v); }

    std::vector<Vertex> ordered_children(Vertex v, bool swap_tied) {
        std::vector<Vertex> k = net.children(v);
        std::stable_sort(k.begin(), k.end(), [&](Vertex a, Vertex b) {
            return composite(a) < composite(b);
        });
        if (swap_tied && k.size() == 2) std::swap(k[0], k[1]);
        return k;
    }

    bool tied(Vertex v) {
        const auto& k = net.children(v);
        return k.size() == 2 && indeg[v] <= 1 && composite(k[0]) == composite(k[1]);
    }

    std::string emit(const std::set<Vertex>& swapped) {
        std::string out;
        std::map<Vertex, int> tag;
        int next_tag = 1;
        std::function<void(Vertex)> rec = [&](Vertex v) {
            if (net.is_leaf(v)) {
                out += net.label(v);
                return;
            }
            if (indeg[v] >= 2) {
                auto it = tag.find(v);
                if (it != tag.end()) {
                    out += "#H" + std::to_string(it->second);
                    return;
                }
                int t = next_tag++;
                tag[v] = t;
                out += '(';
                rec(net.children(v)[0]);
                out += ")#H" + std::to_string(t);
                return;
            }
            out += '(';
            auto k = ordered_children(v, swapped.count(v) != 0);
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (i) out += ',';
                rec(k[i]);
            }
            out += ')';
        };
        rec(net.root);
        out += ';';
        return out;
    }
};

}  // namespace

std::string canonical_text(const PhyloNetwork& net) {
    CanonCtx ctx(net);

    // Children are ordered by (smallest cluster leaf, structural key); when
    // both agree the two subtrees look identical in isolation but may attach
    // to shared reticulations differently, so we try both orders at every such
    // vertex and keep the lexicographically smallest full text.
    std::vector<Vertex> tie_vertices;
    for (Vertex v : net.vertices())
        if (!net.is_leaf(v) && ctx.tied(v)) tie_vertices.push_back(v);
    if (tie_vertices.size() > 16)
        throw internal_check_error("canonical_text: too many tied vertices (" +
                                   std::to_string(tie_vertices.size()) + ")");

    std::string best;
    for (unsigned mask = 0; mask < (1u << tie_vertices.size()); ++mask) {
        std::set<Vertex> swapped;
        for (std::size_t i = 0; i < tie_vertices.size(); ++i)
            if (mask & (1u << i)) swapped.insert(tie_vertices[i]);
        std::string s = ctx.emit(swapped);
        if (best.empty() || s < best) best = std::move(s);
    }
    return best;
}

bool isomorphic(const PhyloNetwork& a, const PhyloNetwork& b) {
    return canonical_text(a) == canonical_text(b);
}

}  // namespace normalnet
