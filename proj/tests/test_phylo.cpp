#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "normalnet/newick.hpp"
#include "normalnet/phylo.hpp"
#include "support.hpp"

using namespace normalnet;

TEST_CASE("tree construction canonicalizes child order") {
    PhyloTree t = make_internal({make_leaf("c"), make_leaf("a")});
    CHECK(tree_text(t) == "(a,c)");
    PhyloTree u = make_internal({make_leaf("a"), make_leaf("c")});
    CHECK(t == u);
    CHECK(isomorphic(t, u));

    PhyloTree big = make_internal({make_internal({make_leaf("d"), make_leaf("b")}),
                                   make_leaf("a")});
    CHECK(tree_text(big) == "(a,(b,d))");

    // manual surgery then canonicalize
    PhyloTree raw;
    raw.kids = {make_leaf("z"), make_leaf("a")};
    canonicalize(raw);
    CHECK(tree_text(raw) == "(a,z)");
}

TEST_CASE("tree queries") {
    PhyloTree t = parse_tree("((a,b),(c,(d,e)));");
    CHECK(tree_leaves(t) == std::set<std::string>{"a", "b", "c", "d", "e"});
    CHECK(tree_is_binary(t));
    CHECK_FALSE(tree_is_binary(parse_tree("(a,b,c);")));

    CHECK(tree_cherries(t) ==
          std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"d", "e"}});

    std::set<std::set<std::string>> cl = tree_clusters(t);
    CHECK(cl.count({"a", "b"}) == 1);
    CHECK(cl.count({"d", "e"}) == 1);
    CHECK(cl.count({"c", "d", "e"}) == 1);
    CHECK(cl.count({"a", "b", "c", "d", "e"}) == 1);
    CHECK(cl.count({"a", "c"}) == 0);
    // 5 leaves + 4 internal vertices
    CHECK(cl.size() == 9);
}

TEST_CASE("delete_leaf and restrict_to on trees") {
    PhyloTree t = parse_tree("((a,b),(c,(d,e)));");
    CHECK(tree_text(delete_leaf(t, "c")) == "((a,b),(d,e))");
    CHECK(tree_text(delete_leaf(t, "a")) == "(b,(c,(d,e)))");
    // deleting a root child's sibling structure entirely
    CHECK(tree_text(delete_leaf(parse_tree("(a,b);"), "a")) == "b");
    CHECK_THROWS_AS(delete_leaf(t, "zz"), validation_error);
    CHECK_THROWS_AS(delete_leaf(make_leaf("a"), "a"), validation_error);

    CHECK(tree_text(restrict_to(t, {"a", "d", "e"})) == "(a,(d,e))");
    CHECK(tree_text(restrict_to(t, {"b", "c"})) == "(b,c)");
    CHECK(tree_text(restrict_to(t, {"d"})) == "d");
    CHECK(tree_text(restrict_to(t, tree_leaves(t))) == tree_text(t));
}

TEST_CASE("refinement counts match the double factorial") {
    PhyloTree star3 = parse_tree("(a,b,c);");
    PhyloTree star4 = parse_tree("(a,b,c,d);");
    CHECK(binary_refinements(star3).size() == 3);
    CHECK(binary_refinements(star4).size() == 15);

    PhyloTree bin = parse_tree("((a,b),(c,d));");
    std::vector<PhyloTree> own = binary_refinements(bin);
    REQUIRE(own.size() == 1);
    CHECK(own[0] == bin);

    // one multifurcation inside a larger tree
    CHECK(binary_refinements(parse_tree("((a,b,c),d);")).size() == 3);

    // early stop
    int seen = 0;
    for_each_binary_refinement(star4, [&](const PhyloTree&) { return ++seen < 4; });
    CHECK(seen == 4);
}

TEST_CASE("refinements agree with direct enumeration of binary shapes") {
    for (std::vector<std::string> labels :
         {std::vector<std::string>{"a", "b", "c"},
          std::vector<std::string>{"a", "b", "c", "d"}}) {
        std::vector<PhyloTree> kids;
        for (const std::string& l : labels) kids.push_back(make_leaf(l));
        std::vector<PhyloTree> ref = binary_refinements(make_internal(std::move(kids)));
        std::vector<PhyloTree> all = testsupport::all_binary_trees(labels);
        std::set<PhyloTree> rs(ref.begin(), ref.end());
        std::set<PhyloTree> as(all.begin(), all.end());
        CHECK(rs == as);
    }
}

TEST_CASE("is_refinement") {
    PhyloTree star = parse_tree("(a,b,c,d);");
    for (const PhyloTree& r : binary_refinements(star)) CHECK(is_refinement(r, star));
    CHECK(is_refinement(parse_tree("((a,b),(c,d));"), parse_tree("((a,b),c,d);")));
    CHECK_FALSE(is_refinement(parse_tree("((a,c),(b,d));"), parse_tree("((a,b),c,d);")));
    CHECK(is_refinement(parse_tree("((a,b),c);"), parse_tree("((a,b),c);")));
    CHECK_THROWS_AS(is_refinement(parse_tree("(a,b);"), parse_tree("(a,c);")),
                    validation_error);
}

static PhyloNetwork three_leaf_net() {
    return parse_network("((a,(b)#H1),(#H1,c));");
}

TEST_CASE("network surgery: subdivide, suppress, edges") {
    PhyloNetwork n = PhyloNetwork::from_tree(parse_tree("((a,b),c);"));
    std::size_t before = n.edges().size();
    Vertex c = n.find_leaf("c");
    // locate the root edge to c
    Vertex w = n.subdivide(n.root, c);
    CHECK(n.edges().size() == before + 1);
    CHECK(n.children(w) == std::vector<Vertex>{c});
    CHECK(invalid_reason(n).has_value());  // degree-two vertex for now
    n.suppress(w);
    CHECK_FALSE(invalid_reason(n).has_value());
    CHECK(serialize(n) == "((a,b),c);");
}

TEST_CASE("suppress removes an out-degree-one root") {
    PhyloNetwork n = PhyloNetwork::from_tree(parse_tree("(a,b);"));
    Vertex a = n.find_leaf("a");
    n.remove_edge(n.root, a);
    n.kill_vertex(a);
    Vertex old_root = n.root;
    n.suppress(old_root);
    CHECK(n.alive(n.root));
    CHECK(n.root != old_root);
    CHECK(n.label(n.root) == "b");
    CHECK(n.vertex_count() == 1);
}

TEST_CASE("suppress refuses to create a parallel edge") {
    // p -> x -> c alongside p -> c directly
    PhyloNetwork n;
    Vertex p = n.add_vertex();
    Vertex x = n.add_vertex();
    Vertex c = n.add_vertex();
    n.root = p;
    n.add_edge(p, x);
    n.add_edge(p, c);
    n.add_edge(x, c);
    CHECK_THROWS_AS(n.suppress(x), internal_check_error);
}

TEST_CASE("delete_reticulation_edge yields the two displayed trees") {
    {
        PhyloNetwork n = three_leaf_net();
        auto par = n.parent_lists();
        std::vector<Vertex> rets = n.reticulations();
        REQUIRE(rets.size() == 1);
        Vertex r = rets[0];
        REQUIRE(par[r].size() == 2);
        std::set<std::string> got;
        for (Vertex p : par[r]) {
            PhyloNetwork m = three_leaf_net();
            m.delete_reticulation_edge(p, r);
            CHECK_FALSE(invalid_reason(m).has_value());
            CHECK(m.reticulations().empty());
            got.insert(serialize(m));
        }
        CHECK(got == std::set<std::string>{"((a,b),c);", "(a,(b,c));"});
    }
}

TEST_CASE("delete_leaf on networks and find_leaf") {
    PhyloNetwork n = PhyloNetwork::from_tree(parse_tree("((a,b),c);"));
    n.delete_leaf("c");
    CHECK(serialize(n) == "(a,b);");
    CHECK_THROWS_AS(n.find_leaf("c"), validation_error);
    CHECK(n.label(n.find_leaf("a")) == "a");
}

TEST_CASE("invalid_reason catches malformed graphs") {
    CHECK_FALSE(invalid_reason(three_leaf_net()).has_value());
    CHECK_FALSE(invalid_reason(PhyloNetwork::single_leaf("a")).has_value());

    {  // out-degree three at the root
        PhyloNetwork n = PhyloNetwork::from_tree(parse_tree("(a,b,c);"));
        auto why = invalid_reason(n);
        REQUIRE(why.has_value());
        CHECK(why->find("out-degree") != std::string::npos);
        CHECK_THROWS_AS(validate_network(n), validation_error);
        CHECK_THROWS_AS(classify(n), validation_error);
    }
    {  // parallel edges
        PhyloNetwork n;
        Vertex r = n.add_vertex();
        Vertex v = n.add_vertex();
        Vertex a = n.add_vertex("a");
        n.root = r;
        n.add_edge(r, v);
        n.add_edge(r, v);
        n.add_edge(v, a);
        CHECK(invalid_reason(n).has_value());
    }
    {  // directed cycle
        PhyloNetwork n;
        Vertex r = n.add_vertex();
        Vertex u = n.add_vertex();
        Vertex v = n.add_vertex();
        Vertex a = n.add_vertex("a");
        Vertex b = n.add_vertex("b");
        Vertex c = n.add_vertex("c");
        n.root = r;
        n.add_edge(r, u);
        n.add_edge(r, a);
        n.add_edge(u, v);
        n.add_edge(u, b);
        n.add_edge(v, u);
        n.add_edge(v, c);
        CHECK(invalid_reason(n).has_value());
    }
    {  // unlabeled leaf
        PhyloNetwork n;
        Vertex r = n.add_vertex();
        Vertex a = n.add_vertex("a");
        Vertex x = n.add_vertex();
        n.root = r;
        n.add_edge(r, a);
        n.add_edge(r, x);
        CHECK(invalid_reason(n).has_value());
    }
    {  // duplicate leaf labels
        PhyloNetwork n;
        Vertex r = n.add_vertex();
        Vertex a1 = n.add_vertex("a");
        Vertex a2 = n.add_vertex("a");
        n.root = r;
        n.add_edge(r, a1);
        n.add_edge(r, a2);
        CHECK(invalid_reason(n).has_value());
    }
    {  // an edge into the root
        PhyloNetwork n = PhyloNetwork::from_tree(parse_tree("((a,b),c);"));
        n.add_edge(n.find_leaf("a"), n.root);
        CHECK(invalid_reason(n).has_value());
    }
    {  // disconnected extra vertex
        PhyloNetwork n = PhyloNetwork::from_tree(parse_tree("(a,b);"));
        n.add_vertex("z");
        CHECK(invalid_reason(n).has_value());
    }
    {  // reticulation with out-degree two
        PhyloNetwork n;
        Vertex r = n.add_vertex();
        Vertex u = n.add_vertex();
        Vertex v = n.add_vertex();
        Vertex m = n.add_vertex();
        Vertex a = n.add_vertex("a");
        Vertex b = n.add_vertex("b");
        Vertex c = n.add_vertex("c");
        Vertex d = n.add_vertex("d");
        n.root = r;
        n.add_edge(r, u);
        n.add_edge(r, v);
        n.add_edge(u, m);
        n.add_edge(v, m);
        n.add_edge(u, a);
        n.add_edge(v, b);
        n.add_edge(m, c);
        n.add_edge(m, d);
        CHECK(invalid_reason(n).has_value());
    }
}

TEST_CASE("classify: binary normal network") {
    PhyloNetwork n = three_leaf_net();
    NetworkClassification c = classify(n);
    CHECK(c.is_binary);
    CHECK(c.is_tree_child);
    CHECK(c.is_normal);
    CHECK(c.shortcuts.empty());
    CHECK(c.hybridisation_number == 1);
    CHECK(c.reticulation_count == 1);
}

TEST_CASE("classify: tree-child network with a shortcut") {
    PhyloNetwork n = parse_network("((a)#H1,(#H1,b));");
    NetworkClassification c = classify(n);
    CHECK(c.is_binary);
    CHECK(c.is_tree_child);
    CHECK_FALSE(c.is_normal);
    REQUIRE(c.shortcuts.size() == 1);
    CHECK(c.shortcuts[0].u == n.root);
    CHECK(c.shortcuts[0].length == 2);
    CHECK(shortcut_length(n, c.shortcuts[0].u, c.shortcuts[0].v) == 2);
    // the other in-edge of the reticulation is not a shortcut
    auto par = n.parent_lists();
    Vertex r = n.reticulations()[0];
    for (Vertex p : par[r])
        if (p != n.root) CHECK(shortcut_length(n, p, r) == 0);
}

TEST_CASE("classify: non-binary normal networks") {
    {
        PhyloNetwork n = testsupport::pstar_network();
        NetworkClassification c = classify(n);
        CHECK_FALSE(c.is_binary);
        CHECK(c.is_tree_child);
        CHECK(c.is_normal);
        CHECK(c.hybridisation_number == 2);
        CHECK(c.reticulation_count == 1);
    }
    {
        PhyloNetwork n = parse_network("((((b,(a)#H2))#H1,(c,#H2)),(#H1,(d,#H2)));");
        NetworkClassification c = classify(n);
        CHECK_FALSE(c.is_binary);
        CHECK(c.is_tree_child);
        CHECK(c.is_normal);
        CHECK(c.hybridisation_number == 3);
        CHECK(c.reticulation_count == 2);
    }
}

TEST_CASE("classify: the five-leaf reference network") {
    PhyloNetwork n =
        parse_network("(((((2)#H2,(3,(4)#H3)))#H1,(1,#H2)),(#H1,(5,#H3)));");
    NetworkClassification c = classify(n);
    CHECK(c.is_binary);
    CHECK(c.is_normal);
    CHECK(c.hybridisation_number == 3);
    CHECK(c.reticulation_count == 3);
}

TEST_CASE("cluster") {
    PhyloNetwork n = three_leaf_net();
    CHECK(cluster(n, n.root) == std::set<std::string>{"a", "b", "c"});
    CHECK(cluster(n, n.find_leaf("b")) == std::set<std::string>{"b"});
    Vertex r = n.reticulations()[0];
    CHECK(cluster(n, r) == std::set<std::string>{"b"});
}

TEST_CASE("find_cherries") {
    {
        Cherries ch = find_cherries(three_leaf_net());
        CHECK(ch.plain.empty());
        CHECK(ch.reticulated ==
              std::set<std::pair<std::string, std::string>>{{"b", "a"}, {"b", "c"}});
    }
    {
        Cherries ch = find_cherries(PhyloNetwork::from_tree(parse_tree("((a,b),c);")));
        CHECK(ch.plain == std::set<std::pair<std::string, std::string>>{{"a", "b"}});
        CHECK(ch.reticulated.empty());
    }
}

TEST_CASE("tree_path_leaves and verifier_leaf") {
    PhyloNetwork n = three_leaf_net();
    CHECK(tree_path_leaves(n, n.root) == std::set<std::string>{"a", "c"});
    CHECK(verifier_leaf(n, n.root) == "a");
    Vertex r = n.reticulations()[0];
    CHECK(tree_path_leaves(n, r) == std::set<std::string>{"b"});
    CHECK(verifier_leaf(n, r) == "b");
}

TEST_CASE("canonical_text is invariant under vertex numbering and child order") {
    PhyloNetwork a = three_leaf_net();
    // same network built by hand in a scrambled order
    PhyloNetwork b;
    Vertex y = b.add_vertex();           // (#H1,c)
    Vertex leaf_c = b.add_vertex("c");
    Vertex h = b.add_vertex();           // the reticulation
    Vertex leaf_b = b.add_vertex("b");
    Vertex x = b.add_vertex();           // (a,#H1-parent)
    Vertex leaf_a = b.add_vertex("a");
    Vertex root = b.add_vertex();
    b.root = root;
    b.add_edge(y, leaf_c);
    b.add_edge(y, h);
    b.add_edge(h, leaf_b);
    b.add_edge(x, h);
    b.add_edge(x, leaf_a);
    b.add_edge(root, y);
    b.add_edge(root, x);
    CHECK(canonical_text(a) == canonical_text(b));
    CHECK(isomorphic(a, b));

    // identical clusters on both root children: needs tie-breaking beyond
    // smallest cluster leaf
    PhyloNetwork t1 = parse_network("(((a)#H1,(b)#H2),(#H1,#H2));");
    PhyloNetwork t2 = parse_network("(((b)#H2,(a)#H1),(#H2,#H1));");
    CHECK(canonical_text(t1) == canonical_text(t2));
    CHECK(isomorphic(t1, t2));
}

TEST_CASE("isomorphic distinguishes genuinely different networks") {
    CHECK_FALSE(isomorphic(three_leaf_net(),
                           PhyloNetwork::from_tree(parse_tree("((a,b),c);"))));
    CHECK_FALSE(isomorphic(parse_network("((a,(b)#H1),(#H1,c));"),
                           parse_network("((b,(a)#H1),(#H1,c));")));
    CHECK(isomorphic(parse_network("((a,(b)#H1),(#H1,c));"),
                     parse_network("((#H1,c),((b)#H1,a));")));
}

TEST_CASE("serialize round-trips through parse") {
    for (const char* s : {"((a,(b)#H1),(#H1,c));", "((a)#H1,(#H1,b));",
                          "(((((2)#H2,(3,(4)#H3)))#H1,(1,#H2)),(#H1,(5,#H3)));"}) {
        PhyloNetwork n = parse_network(s);
        PhyloNetwork again = parse_network(serialize(n));
        CHECK(isomorphic(n, again));
    }
}
