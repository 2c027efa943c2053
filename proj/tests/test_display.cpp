#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "normalnet/display.hpp"
#include "normalnet/newick.hpp"
#include "normalnet/phylo.hpp"
#include "support.hpp"

using namespace normalnet;

TEST_CASE("display set of a tree is the tree itself") {
    PhyloNetwork n = PhyloNetwork::from_tree(parse_tree("((a,b),(c,d));"));
    DisplaySet ds = display_set(n);
    CHECK(ds.embedding_count == 1);
    REQUIRE(ds.trees.size() == 1);
    CHECK(tree_text(ds.trees[0]) == "((a,b),(c,d))");

    DisplaySet single = display_set(PhyloNetwork::single_leaf("a"));
    CHECK(single.embedding_count == 1);
    REQUIRE(single.trees.size() == 1);
    CHECK(tree_text(single.trees[0]) == "a");
}

TEST_CASE("display set of the three-leaf network") {
    PhyloNetwork n = parse_network("((a,(b)#H1),(#H1,c));");
    DisplaySet ds = display_set(n);
    CHECK(ds.embedding_count == 2);
    REQUIRE(ds.trees.size() == 2);
    CHECK(tree_text(ds.trees[0]) == "((a,b),c)");
    CHECK(tree_text(ds.trees[1]) == "(a,(b,c))");
}

TEST_CASE("display set of the five-leaf reference network") {
    PhyloNetwork n =
        parse_network("(((((2)#H2,(3,(4)#H3)))#H1,(1,#H2)),(#H1,(5,#H3)));");
    DisplaySet ds = display_set(n);
    CHECK(ds.embedding_count == 8);
    std::set<std::string> got;
    for (const PhyloTree& t : ds.trees) got.insert(tree_text(t));
    std::set<std::string> expect = {
        "(((1,2),(3,4)),5)", "(((1,2),3),(4,5))", "((1,(2,(3,4))),5)",
        "((1,(2,3)),(4,5))", "((1,2),((3,4),5))", "((1,2),(3,(4,5)))",
        "(1,((2,(3,4)),5))", "(1,((2,3),(4,5)))",
    };
    CHECK(got == expect);
}

TEST_CASE("embeddings induce exactly the displayed trees") {
    PhyloNetwork n = parse_network("((a,(b)#H1),(#H1,c));");
    std::vector<Embedding> embs = enumerate_embeddings(n);
    REQUIRE(embs.size() == 2);
    CHECK_FALSE(embs[0] == embs[1]);
    std::set<std::string> got;
    for (const Embedding& e : embs) {
        REQUIRE(e.chosen.size() == 1);
        got.insert(tree_text(embedding_to_tree(n, e)));
    }
    CHECK(got == std::set<std::string>{"((a,b),c)", "(a,(b,c))"});
}

TEST_CASE("display_set rejects inputs outside its domain") {
    // both root children feed both reticulations: not tree-child
    CHECK_THROWS_AS(display_set(parse_network("(((a)#H1,(b)#H2),(#H1,#H2));")),
                    unsupported_input_error);
    // in-degree-three reticulation: not binary
    CHECK_THROWS_AS(display_set(testsupport::pstar_network()),
                    unsupported_input_error);
}

TEST_CASE("displays: containment, restriction, refinement") {
    PhyloNetwork n = parse_network("((a,(b)#H1),(#H1,c));");
    CHECK(displays(n, parse_tree("((a,b),c);")));
    CHECK(displays(n, parse_tree("(a,(b,c));")));
    CHECK_FALSE(displays(n, parse_tree("((a,c),b);")));
    // restriction to a leaf subset
    CHECK(displays(n, parse_tree("(a,b);")));
    CHECK(displays(n, parse_tree("(b,c);")));
    CHECK(displays(n, parse_tree("(a,c);")));
    CHECK(displays(n, parse_tree("a;")));
    // a multifurcation is displayed when some resolution is
    CHECK(displays(n, parse_tree("(a,b,c);")));
    // leaves outside the network are an input error
    CHECK_THROWS_AS(displays(n, parse_tree("(a,q);")), validation_error);
}

TEST_CASE("displays rejects non-binary and non-tree-child hosts") {
    PhyloNetwork p = testsupport::pstar_network();
    CHECK_THROWS_AS(displays(p, parse_tree("(((a,b),c),d);")),
                    unsupported_input_error);
    PhyloNetwork crossed = parse_network("(((a)#H1,(b)#H2),(#H1,#H2));");
    CHECK_THROWS_AS(displays(crossed, parse_tree("(a,b);")),
                    unsupported_input_error);
    // the support oracle has no such restriction and covers those shapes
    auto od = testsupport::oracle_display_set(p);
    std::set<std::string> got;
    for (const PhyloTree& t : od.trees) got.insert(serialize(t));
    for (const PhyloTree& t : testsupport::pstar_trees())
        CHECK(got.count(serialize(t)) == 1);
    CHECK(got.count(serialize(parse_tree("(((a,b),c),d);"))) == 0);
}

TEST_CASE("display_set agrees with the independent oracle on every binary "
          "normal four-leaf network") {
    auto nets = testsupport::enumerate_normal({"a", "b", "c", "d"}, 3, true);
    // saturation: the h-layer census proves the enumeration is complete
    CHECK(testsupport::h_layer_counts(nets) ==
          std::map<int, int>{{0, 15}, {1, 54}, {2, 48}});
    std::set<std::string> seen_display_sets;
    for (const auto& [key, net] : nets) {
        NetworkClassification c = classify(net);
        DisplaySet ds = display_set(net);
        testsupport::OracleDisplay od = testsupport::oracle_display_set(net);
        CHECK(ds.embedding_count == od.raw);
        CHECK(ds.embedding_count == (std::uint64_t{1} << c.reticulation_count));
        REQUIRE(ds.trees.size() == od.trees.size());
        CHECK(std::equal(ds.trees.begin(), ds.trees.end(), od.trees.begin()));
        // trees are pairwise distinct = display set has full size 2^k here
        CHECK(ds.trees.size() == ds.embedding_count);
        std::string sig;
        for (const PhyloTree& t : ds.trees) sig += tree_text(t) + "|";
        seen_display_sets.insert(sig);
    }
    // distinct networks have distinct display sets on four leaves
    CHECK(seen_display_sets.size() == nets.size());
    CHECK(nets.size() == 117);
}

TEST_CASE("oracle and displays() agree on the non-binary closure layer") {
    auto nets = testsupport::enumerate_normal({"a", "b", "c"}, 1, false);
    CHECK(testsupport::h_layer_counts(nets) == std::map<int, int>{{0, 3}, {1, 3}});
    for (const auto& [key, net] : nets) {
        if (!classify(net).is_binary) continue;
        DisplaySet ds = display_set(net);
        for (const PhyloTree& t : ds.trees) {
            CHECK(displays(net, t));
            CHECK(testsupport::oracle_displays(net, t));
        }
    }
}
