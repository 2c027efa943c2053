// command line front end: validate networks, compute and invert display sets,
// check and search cherry-picking sequences, normalize tree pairs
//
// exit codes: 0 success / positive verdict, 1 negative verdict on well-formed
// input, 2 unusable input, 70 internal consistency failure

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "normalnet/cherry_seq.hpp"
#include "normalnet/display.hpp"
#include "normalnet/gen.hpp"
#include "normalnet/newick.hpp"
#include "normalnet/normalize.hpp"
#include "normalnet/phylo.hpp"
#include "normalnet/reconstruct.hpp"

namespace nn = normalnet;

namespace {

struct PayloadLine {
    int number;  // 1-based line number in the file
    std::string text;
};

// non-blank lines that do not start with '#'; "-" reads standard input
std::vector<PayloadLine> payload_lines(const std::string& path) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (path != "-") {
        file.open(path);
        if (!file) throw std::runtime_error("cannot open '" + path + "'");
        in = &file;
    }
    std::vector<PayloadLine> out;
    std::string line;
    int number = 0;
    while (std::getline(*in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t at = line.find_first_not_of(" \t");
        if (at == std::string::npos || line[at] == '#') continue;
        out.push_back({number, line.substr(at)});
    }
    return out;
}

std::vector<nn::PhyloTree> read_trees(const std::string& path) {
    std::vector<nn::PhyloTree> out;
    for (const PayloadLine& l : payload_lines(path)) {
        try {
            out.push_back(nn::parse_tree(l.text));
        } catch (const nn::parse_error& e) {
            throw nn::parse_error(path + ":" + std::to_string(l.number) + ": " + e.what(),
                                  e.offset);
        }
    }
    if (out.empty()) throw nn::validation_error("'" + path + "' holds no trees");
    return out;
}

nn::PhyloNetwork read_network(const std::string& path) {
    auto lines = payload_lines(path);
    if (lines.empty()) throw nn::validation_error("'" + path + "' holds no network");
    try {
        return nn::parse_network(lines.front().text);
    } catch (const nn::parse_error& e) {
        throw nn::parse_error(path + ":" + std::to_string(lines.front().number) + ": " + e.what(),
                              e.offset);
    }
}

// one pick per line as "first second", the terminal entry as "first -"
nn::PickSequence read_sequence(const std::string& path) {
    nn::PickSequence seq;
    auto lines = payload_lines(path);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        std::istringstream ss(lines[k].text);
        std::string x, y, extra;
        std::string where = path + ":" + std::to_string(lines[k].number);
        if (!(ss >> x >> y) || (ss >> extra))
            throw nn::validation_error(where + ": expected exactly two tokens");
        if (y == "-") {
            if (k + 1 != lines.size())
                throw nn::validation_error(where + ": terminal entry before the end");
            seq.push_back({x, ""});
        } else {
            if (x == y) throw nn::validation_error(where + ": pick repeats its leaf");
            seq.push_back({x, y});
        }
    }
    if (seq.empty()) throw nn::validation_error("'" + path + "' holds no sequence");
    return seq;
}

void print_sequence(const nn::PickSequence& seq) {
    for (const nn::CherryPick& p : seq)
        std::cout << p.first << ' ' << (p.is_end() ? "-" : p.second) << '\n';
}

int standalone_weight(const nn::PickSequence& seq) {
    std::set<std::string> labels;
    int s = 0;
    for (const nn::CherryPick& p : seq) {
        labels.insert(p.first);
        if (!p.is_end()) {
            labels.insert(p.second);
            ++s;
        }
    }
    return s + 1 - static_cast<int>(labels.size());
}

std::string describe(const nn::PhyloNetwork& net) {
    nn::NetworkClassification c = nn::classify(net);
    std::ostringstream out;
    out << "network on " << net.leaves().size() << " leaves: h = " << c.hybridisation_number;
    out << (c.is_binary ? ", binary" : ", non-binary");
    out << (c.is_tree_child ? ", tree-child" : ", not tree-child");
    if (c.is_normal) {
        out << ", normal";
    } else if (!c.shortcuts.empty()) {
        out << ", " << c.shortcuts.size() << (c.shortcuts.size() == 1 ? " shortcut" : " shortcuts")
            << " (shortest " << c.shortcuts.front().length << ")";
    }
    return out.str();
}

int run_validate(const std::string& path) {
    auto lines = payload_lines(path);
    if (lines.empty()) throw nn::validation_error("'" + path + "' holds no network");
    bool all_ok = true;
    for (const PayloadLine& l : lines) {
        std::string prefix =
            lines.size() > 1 ? "line " + std::to_string(l.number) + ": " : std::string();
        try {
            nn::PhyloNetwork net = nn::parse_network(l.text);
            std::cout << prefix << describe(net) << '\n';
        } catch (const nn::parse_error& e) {
            throw nn::parse_error(path + ":" + std::to_string(l.number) + ": " + e.what(),
                                  e.offset);
        } catch (const nn::validation_error& e) {
            std::cout << prefix << "invalid: " << e.what() << '\n';
            all_ok = false;
        }
    }
    return all_ok ? 0 : 1;
}

int run_display_set(const std::string& path) {
    nn::DisplaySet ds = nn::display_set(read_network(path));
    for (const nn::PhyloTree& t : ds.trees) std::cout << nn::serialize(t) << '\n';
    std::cerr << ds.trees.size() << " distinct trees from " << ds.embedding_count
              << " embeddings\n";
    return 0;
}

int run_displays(const std::string& net_path, const std::string& tree_path) {
    nn::PhyloNetwork net = read_network(net_path);
    nn::PhyloTree t = read_trees(tree_path).front();
    if (nn::displays(net, t)) {
        std::cout << "displays\n";
        return 0;
    }
    std::cout << "does not display\n";
    return 1;
}

int run_reconstruct(const std::string& path) {
    nn::ReconstructionOutcome out = nn::reconstruct(read_trees(path));
    if (out.verdict == nn::ReconstructionVerdict::ok) {
        std::cout << nn::serialize(*out.network) << '\n';
        return 0;
    }
    std::cout << "not the display set of a binary normal network (" << to_string(out.verdict)
              << "): " << out.detail << '\n';
    return 1;
}

int run_check_seq(const std::string& seq_path, const std::string& trees_path) {
    nn::PickSequence seq = read_sequence(seq_path);
    bool ok = true;

    auto tc = nn::check_tc(seq);
    if (tc) {
        std::cout << "tree-child: fail: pick " << tc->j + 1 << " reuses the first of pick "
                  << tc->i + 1 << " as its second\n";
        ok = false;
    } else {
        std::cout << "tree-child: pass\n";
    }

    auto nv = nn::check_n(seq);
    if (nv) {
        std::cout << "normal: fail: picks " << nv->i + 1 << " to " << nv->j + 1
                  << " contain a shortcut sequence\n";
        ok = false;
    } else {
        std::cout << "normal: pass\n";
    }

    std::cout << "weight: " << standalone_weight(seq) << '\n';

    if (!trees_path.empty()) {
        nn::ApplyResult ap = nn::apply_sequence(read_trees(trees_path), seq);
        std::cout << "reduces the trees: " << (ap.is_cps ? "yes" : "no") << '\n';
        if (!ap.is_cps) ok = false;
    }
    return ok ? 0 : 1;
}

int run_min_seq(const std::string& path, const std::string& mode_name, int budget) {
    nn::SequenceMode mode =
        mode_name == "tree-child" ? nn::SequenceMode::tree_child : nn::SequenceMode::normal;
    std::optional<int> b;
    if (budget >= 0) b = budget;
    nn::MinSequenceResult r = nn::min_sequence(read_trees(path), mode, b);
    switch (r.status) {
        case nn::MinSequenceStatus::found:
            std::cout << "# weight " << r.weight << '\n';
            print_sequence(*r.sequence);
            return 0;
        case nn::MinSequenceStatus::proven_nonexistent:
            std::cout << "no " << mode_name << " sequence exists for these trees\n";
            return 1;
        case nn::MinSequenceStatus::budget_exhausted:
            std::cout << "no " << mode_name << " sequence of weight <= " << budget
                      << " exists; heavier ones may (weight budget exhausted)\n";
            return 1;
    }
    throw nn::internal_check_error("unreachable search status");
}

int run_construct_seq(const std::string& path) {
    nn::PickSequence seq = nn::construct_sequence(read_network(path));
    std::cout << "# weight " << standalone_weight(seq) << '\n';
    print_sequence(seq);
    return 0;
}

int run_seq_to_network(const std::string& trees_path, const std::string& seq_path) {
    std::vector<nn::PhyloTree> P = read_trees(trees_path);
    nn::PickSequence seq = read_sequence(seq_path);

    if (auto tc = nn::check_tc(seq)) {
        std::cout << "not a tree-child sequence: pick " << tc->j + 1
                  << " reuses the first of pick " << tc->i + 1 << " as its second\n";
        return 1;
    }
    nn::ApplyResult ap = nn::apply_sequence(P, seq);
    if (!ap.is_cps) {
        std::cout << "the sequence does not reduce the trees to a single leaf\n";
        return 1;
    }
    std::cout << nn::serialize(nn::sequence_to_network(P, seq)) << '\n';
    return 0;
}

int run_normalize_pair(const std::string& path) {
    std::vector<nn::PhyloTree> trees = read_trees(path);
    if (trees.size() != 2)
        throw nn::validation_error("'" + path + "' must hold exactly two trees, not " +
                                   std::to_string(trees.size()));
    std::cout << nn::serialize(nn::normalize_pair(trees[0], trees[1])) << '\n';
    return 0;
}

int run_gen(int leaves, int rets, std::uint64_t seed, const std::string& mode, int count) {
    std::mt19937_64 rng(seed);
    auto labels = nn::default_labels(static_cast<std::size_t>(leaves));
    for (int k = 0; k < count; ++k) {
        if (mode == "tree") {
            if (rets != 0)
                throw nn::validation_error("--rets must be 0 when generating plain trees");
            std::cout << nn::serialize(nn::random_binary_tree(labels, rng)) << '\n';
        } else if (mode == "tree-child") {
            std::cout << nn::serialize(nn::random_binary_tree_child(labels, rets, rng)) << '\n';
        } else {
            std::cout << nn::serialize(nn::random_binary_normal(labels, rets, rng)) << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"binary normal phylogenetic networks: display sets, cherry-picking "
                 "sequences, reconstruction, normalization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "normalnet 0.1.0");

    int rc = 0;

    std::string v_path;
    auto* v = app.add_subcommand("validate", "parse networks and report their shape");
    v->add_option("file", v_path, "newick networks, one per line ('-' for stdin)")->required();
    v->callback([&] { rc = run_validate(v_path); });

    std::string ds_path;
    auto* ds = app.add_subcommand("display-set",
                                  "all trees a binary tree-child network displays");
    ds->add_option("network", ds_path, "newick network file")->required();
    ds->callback([&] { rc = run_display_set(ds_path); });

    std::string dp_net, dp_tree;
    auto* dp = app.add_subcommand("displays", "does the network display the tree?");
    dp->add_option("network", dp_net, "newick network file")->required();
    dp->add_option("tree", dp_tree, "newick tree file")->required();
    dp->callback([&] { rc = run_displays(dp_net, dp_tree); });

    std::string rc_path;
    auto* rcn = app.add_subcommand("reconstruct",
                                   "the binary normal network whose display set this is");
    rcn->add_option("trees", rc_path, "newick trees, one per line")->required();
    rcn->callback([&] { rc = run_reconstruct(rc_path); });

    std::string cs_path, cs_trees;
    auto* cs = app.add_subcommand("check-seq", "test a sequence for the tree-child and "
                                               "no-shortcut-substring conditions");
    cs->add_option("sequence", cs_path, "picks, one per line as 'first second', final 'leaf -'")
        ->required();
    cs->add_option("--trees", cs_trees, "also test that the sequence reduces these trees");
    cs->callback([&] { rc = run_check_seq(cs_path, cs_trees); });

    std::string ms_path, ms_mode = "normal";
    int ms_budget = -1;
    auto* ms = app.add_subcommand("min-seq", "minimum-weight cherry-picking sequence");
    ms->add_option("trees", ms_path, "newick trees, one per line")->required();
    ms->add_option("--mode", ms_mode, "sequence class (default normal)")
        ->check(CLI::IsMember({"tree-child", "normal"}));
    ms->add_option("--budget", ms_budget, "largest acceptable weight")->check(CLI::NonNegativeNumber);
    ms->callback([&] { rc = run_min_seq(ms_path, ms_mode, ms_budget); });

    std::string cq_path;
    auto* cq = app.add_subcommand("construct-seq",
                                  "cherry-picking sequence of a binary normal network");
    cq->add_option("network", cq_path, "newick network file")->required();
    cq->callback([&] { rc = run_construct_seq(cq_path); });

    std::string sn_trees, sn_seq;
    auto* sn = app.add_subcommand("seq-to-network",
                                  "build the network a tree-child sequence encodes");
    sn->add_option("trees", sn_trees, "newick trees, one per line")->required();
    sn->add_option("sequence", sn_seq, "pick sequence file")->required();
    sn->callback([&] { rc = run_seq_to_network(sn_trees, sn_seq); });

    std::string np_path;
    auto* np = app.add_subcommand("normalize-pair",
                                  "binary normal network displaying two given trees");
    np->add_option("trees", np_path, "newick file with exactly two trees")->required();
    np->callback([&] { rc = run_normalize_pair(np_path); });

    int g_leaves = 0, g_rets = 0, g_count = 1;
    std::uint64_t g_seed = 0;
    std::string g_mode = "normal";
    auto* g = app.add_subcommand("gen", "generate random networks or trees");
    g->add_option("--leaves", g_leaves, "number of leaves")->required()->check(CLI::PositiveNumber);
    g->add_option("--rets", g_rets, "number of reticulations (default 0)")
        ->check(CLI::NonNegativeNumber);
    g->add_option("--seed", g_seed, "random seed (default 0)");
    g->add_option("--mode", g_mode, "normal, tree-child, or tree (default normal)")
        ->check(CLI::IsMember({"normal", "tree-child", "tree"}));
    g->add_option("--count", g_count, "how many to generate (default 1)")
        ->check(CLI::PositiveNumber);
    g->callback([&] { rc = run_gen(g_leaves, g_rets, g_seed, g_mode, g_count); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const nn::internal_check_error& e) {
        std::cerr << "internal check failed: " << e.what() << '\n';
        return 70;
    } catch (const nn::parse_error& e) {
        std::cerr << "error: " << e.what();
        if (e.offset != std::string::npos) std::cerr << " (at offset " << e.offset << ")";
        std::cerr << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal check failed: " << e.what() << '\n';
        return 70;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
