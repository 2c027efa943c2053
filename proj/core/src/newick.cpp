#include "normalnet/newick.hpp"

#include <cctype>
#include <functional>
#include <map>

namespace normalnet {

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool at(char c) {
        skip_ws();
        return i < s.size() && s[i] == c;
    }
    void expect(char c) {
        skip_ws();
        if (i >= s.size() || s[i] != c)
            throw parse_error(std::string("expected '") + c + "'", i);
        ++i;
    }
    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, i); }

    static bool label_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) &&
               c != '(' && c != ')' && c != ',' && c != ';' && c != '#';
    }

    std::string label() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && label_char(s[i])) ++i;
        if (i == start) fail("expected a leaf label");
        return s.substr(start, i - start);
    }

    // the H<number> part after '#'
    std::string hybrid_tag() {
        std::size_t start = i;
        if (i >= s.size() || (s[i] != 'H' && s[i] != 'h'))
            fail("expected 'H' after '#'");
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start + 1) fail("expected a number after '#H'");
        return s.substr(start, i - start);
    }

    void finish() {
        expect(';');
        skip_ws();
        if (i != s.size()) fail("trailing characters after ';'");
    }
};

PhyloTree parse_tree_node(Cursor& c) {
    if (c.at('(')) {
        c.expect('(');
        std::vector<PhyloTree> kids;
        kids.push_back(parse_tree_node(c));
        while (c.at(',')) {
            c.expect(',');
            kids.push_back(parse_tree_node(c));
        }
        c.expect(')');
        if (kids.size() == 1) c.fail("internal node with a single child");
        return make_internal(std::move(kids));
    }
    if (c.at('#')) c.fail("'#' tags are only valid in networks");
    return make_leaf(c.label());
}

}  // namespace

PhyloTree parse_tree(const std::string& text) {
    Cursor c{text};
    PhyloTree t = parse_tree_node(c);
    c.finish();
    std::size_t n = 0;
    std::function<void(const PhyloTree&)> count = [&](const PhyloTree& node) {
        if (node.is_leaf()) ++n;
        for (const PhyloTree& k : node.kids) count(k);
    };
    count(t);
    if (tree_leaves(t).size() != n)
        throw validation_error("duplicate leaf label in tree");
    return t;
}

namespace {

struct NetParser {
    Cursor c;
    PhyloNetwork net;
    std::map<std::string, Vertex> by_tag;   // "#H1" -> reticulation vertex
    std::map<std::string, bool> defined;    // tag has its subtree yet

    Vertex ret_for(const std::string& tag) {
        auto it = by_tag.find(tag);
        if (it != by_tag.end()) return it->second;
        Vertex v = net.add_vertex();
        by_tag[tag] = v;
        defined[tag] = false;
        return v;
    }

    Vertex node() {
        if (c.at('(')) {
            c.expect('(');
            std::vector<Vertex> kids;
            kids.push_back(node());
            while (c.at(',')) {
                c.expect(',');
                kids.push_back(node());
            }
            c.expect(')');
            if (c.at('#')) {  // "(subtree)#H1": a reticulation definition
                c.expect('#');
                std::string tag = c.hybrid_tag();
                if (kids.size() != 1)
                    c.fail("reticulation '#" + tag + "' must wrap a single subtree");
                Vertex r = ret_for(tag);
                if (defined[tag])
                    c.fail("reticulation '#" + tag + "' defined twice");
                defined[tag] = true;
                net.add_edge(r, kids[0]);
                return r;
            }
            if (kids.size() == 1) c.fail("internal node with a single child");
            Vertex v = net.add_vertex();
            for (Vertex k : kids) net.add_edge(v, k);
            return v;
        }
        if (c.at('#')) {  // bare reference
            c.expect('#');
            return ret_for(c.hybrid_tag());
        }
        return net.add_vertex(c.label());
    }
};

}  // namespace

PhyloNetwork parse_network(const std::string& text) {
    NetParser p{Cursor{text}};
    p.net.root = p.node();
    p.c.finish();
    for (const auto& [tag, done] : p.defined)
        if (!done)
            throw parse_error("reticulation '#" + tag + "' is referenced but never defined");
    validate_network(p.net);
    return p.net;
}

std::string serialize(const PhyloTree& t) {
    PhyloTree copy = t;
    canonicalize(copy);
    return tree_text(copy) + ";";
}

std::string serialize(const PhyloNetwork& net) {
    return canonical_text(net);
}

}  // namespace normalnet
