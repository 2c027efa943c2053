#include "normalnet/cherry_seq.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "normalnet/display.hpp"

namespace normalnet {

std::string to_string(const CherryPick& p) {
    return "(" + p.first + "," + (p.is_end() ? "-" : p.second) + ")";
}

std::string to_string(const PickSequence& seq) {
    std::string s;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) s += ',';
        s += to_string(seq[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// structural tests

namespace {

bool picks_intersect(const CherryPick& a, const CherryPick& b) {
    return a.first == b.first || a.first == b.second || a.second == b.first ||
           a.second == b.second;
}

void reject_misplaced_terminal(const PickSequence& seq) {
    for (std::size_t k = 0; k < seq.size(); ++k)
        if (seq[k].is_end() && k + 1 != seq.size())
            throw validation_error("terminal entry before the end of the sequence");
}

}  // namespace

bool is_shortcut_sequence(const PickSequence& seq, ShortcutWitness* witness) {
    for (const CherryPick& p : seq)
        if (p.is_end())
            throw validation_error("shortcut-sequence test does not take terminal entries");
    if (seq.size() < 2) return false;
    const std::size_t last = seq.size() - 1;

    if (seq[0] == seq[last]) {
        if (witness) witness->indices = {0, last};
        return true;
    }
    if (seq[0].first != seq[last].first) return false;

    const std::string& x0 = seq[0].first;
    std::vector<std::size_t> chain = {0};
    std::set<std::string> interior_firsts;

    std::function<bool()> extend = [&]() -> bool {
        std::size_t cur = chain.back();
        if (chain.size() >= 2 && picks_intersect(seq[cur], seq[last])) {
            chain.push_back(last);
            return true;
        }
        for (std::size_t t = cur + 1; t < last; ++t) {
            if (seq[t].first == x0 || seq[t].second == x0) continue;
            if (interior_firsts.count(seq[t].first)) continue;
            if (!picks_intersect(seq[cur], seq[t])) continue;
            chain.push_back(t);
            interior_firsts.insert(seq[t].first);
            if (extend()) return true;
            interior_firsts.erase(seq[t].first);
            chain.pop_back();
        }
        return false;
    };
    if (extend()) {
        if (witness) witness->indices = chain;
        return true;
    }
    return false;
}

std::optional<TcViolation> check_tc(const PickSequence& seq) {
    reject_misplaced_terminal(seq);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i].is_end()) continue;
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            if (seq[j].is_end()) continue;
            if (seq[j].second == seq[i].first) return TcViolation{i, j};
        }
    }
    return std::nullopt;
}

std::optional<NormalViolation> check_n(const PickSequence& seq) {
    reject_misplaced_terminal(seq);
    std::size_t n = seq.size();
    if (n > 0 && seq[n - 1].is_end()) --n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            PickSequence sub(seq.begin() + i, seq.begin() + j + 1);
            ShortcutWitness w;
            if (is_shortcut_sequence(sub, &w)) {
                for (std::size_t& idx : w.indices) idx += i;
                return NormalViolation{i, j, std::move(w)};
            }
        }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// sequences against trees

ApplyResult apply_sequence(const std::vector<PhyloTree>& P, const PickSequence& seq) {
    if (P.empty()) throw validation_error("no trees given");
    const std::set<std::string> X = tree_leaves(P[0]);
    for (const PhyloTree& t : P)
        if (tree_leaves(t) != X)
            throw validation_error("trees do not share one leaf set");

    if (seq.empty()) throw validation_error("empty sequence");
    reject_misplaced_terminal(seq);
    if (!seq.back().is_end())
        throw validation_error("sequence lacks a terminal entry");
    for (const CherryPick& p : seq) {
        if (p.first.empty())
            throw validation_error("pick with an empty first entry");
        if (!p.is_end() && p.first == p.second)
            throw validation_error("pick " + to_string(p) + " names one leaf twice");
        if (!X.count(p.first))
            throw validation_error("pick leaf '" + p.first + "' is not a leaf of the trees");
        if (!p.is_end() && !X.count(p.second))
            throw validation_error("pick leaf '" + p.second + "' is not a leaf of the trees");
    }
    {
        std::set<std::string> firsts;
        for (const CherryPick& p : seq) firsts.insert(p.first);
        for (const std::string& x : X)
            if (!firsts.count(x))
                throw validation_error("leaf '" + x + "' never occurs as a first entry");
    }

    ApplyResult res;
    res.essential.assign(seq.size(), 0);
    res.essential.back() = 1;  // the terminal entry names the outcome
    std::vector<PhyloTree> trees = P;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        const CherryPick& p = seq[k];
        std::string a = p.first, b = p.second;
        if (b < a) std::swap(a, b);
        for (PhyloTree& t : trees) {
            if (t.is_leaf()) continue;
            if (tree_cherries(t).count({a, b})) {
                t = delete_leaf(t, p.first);
                res.essential[k] = 1;
            }
        }
    }
    const std::string& z = seq.back().first;
    res.is_cps = std::all_of(trees.begin(), trees.end(), [&](const PhyloTree& t) {
        return t.is_leaf() && t.leaf == z;
    });
    res.weight = static_cast<int>(seq.size()) - static_cast<int>(X.size());
    return res;
}

// ---------------------------------------------------------------------------
// designated leaves

VerifierMap verifier_map(const PhyloNetwork& net) {
    NetworkClassification c = classify(net);
    if (!c.is_tree_child)
        throw unsupported_input_error("designated leaves need a tree-child network");
    VerifierMap m;
    m.root_leaf = verifier_leaf(net, net.root);
    if (m.root_leaf.empty())
        throw internal_check_error("root of a tree-child network without a tree-path leaf");
    std::set<std::string> seen = {m.root_leaf};
    for (Vertex r : net.reticulations()) {
        std::string l = verifier_leaf(net, r);
        if (l.empty() || !seen.insert(l).second)
            throw internal_check_error("designated leaves are not pairwise distinct");
        m.of_ret[r] = l;
    }
    return m;
}

// ---------------------------------------------------------------------------
// network -> sequence

PickSequence construct_sequence(const PhyloNetwork& input) {
    NetworkClassification cls = classify(input);
    if (!cls.is_binary || !cls.is_normal)
        throw unsupported_input_error("sequence construction needs a binary normal network");

    PhyloNetwork net = input;           // reduced in place
    const VerifierMap vm = verifier_map(input);  // designated leaves stay fixed

    PickSequence out;
    while (net.vertex_count() > 1) {
        auto indeg = net.in_degrees();
        std::set<std::string> freed, unfreed;
        for (const auto& [r, leaf] : vm.of_ret) {
            if (net.alive(r) && indeg[r] >= 2)
                unfreed.insert(leaf);
            else
                freed.insert(leaf);
        }

        Cherries ch = find_cherries(net);
        std::optional<CherryPick> best;
        auto consider = [&](const std::string& x, const std::string& y) {
            if (!best || std::tie(x, y) < std::tie(best->first, best->second))
                best = CherryPick{x, y};
        };
        for (const auto& [a, b] : ch.plain) {
            bool fa = freed.count(a) != 0, fb = freed.count(b) != 0;
            if (fa || fb) {
                // a freed designated leaf must be picked away first
                if (fa) consider(a, b);
                if (fb) consider(b, a);
            } else {
                if (a != vm.root_leaf && !unfreed.count(a)) consider(a, b);
                if (b != vm.root_leaf && !unfreed.count(b)) consider(b, a);
            }
        }
        if (best) {
            out.push_back(*best);
            net.delete_leaf(best->first);
            continue;
        }
        if (!ch.reticulated.empty()) {
            auto [x, y] = *ch.reticulated.begin();
            out.push_back({x, y});
            auto par = net.parent_lists();
            Vertex px = par[net.find_leaf(x)][0];  // the reticulation
            Vertex py = par[net.find_leaf(y)][0];  // one of its parents
            net.delete_reticulation_edge(py, px);
            continue;
        }
        throw internal_check_error("reduction stuck: no cherry of either kind");
    }
    out.push_back({net.label(net.root), ""});
    return out;
}

// ---------------------------------------------------------------------------
// sequence -> network

PhyloNetwork sequence_to_network(const std::vector<PhyloTree>& P, const PickSequence& seq) {
    if (auto v = check_tc(seq))
        throw validation_error("sequence reuses the first of pick " + std::to_string(v->i + 1) +
                               " as the second of pick " + std::to_string(v->j + 1));
    ApplyResult ap = apply_sequence(P, seq);  // validates shape and leaf sets
    if (!ap.is_cps)
        throw validation_error("the sequence does not reduce every tree to its final leaf");

    PhyloNetwork net = PhyloNetwork::single_leaf(seq.back().first);
    auto leaf_of = [&](const std::string& l) -> std::optional<Vertex> {
        for (Vertex v : net.leaves())
            if (net.label(v) == l) return v;
        return std::nullopt;
    };

    for (std::size_t k = seq.size() - 1; k-- > 0;) {
        const std::string& x = seq[k].first;
        const std::string& y = seq[k].second;
        auto vy = leaf_of(y);
        if (!vy)
            throw validation_error("pick " + std::to_string(k + 1) + ": leaf '" + y +
                                   "' is not in the network yet");
        auto vx = leaf_of(x);
        auto par = net.parent_lists();
        if (!vx) {
            // x enters as a fresh sibling of y
            Vertex leafx = net.add_vertex(x);
            if (par[*vy].empty()) {  // the network is just the leaf y
                Vertex r = net.add_vertex();
                net.add_edge(r, *vy);
                net.add_edge(r, leafx);
                net.root = r;
            } else {
                Vertex u = net.subdivide(par[*vy][0], *vy);
                net.add_edge(u, leafx);
            }
        } else {
            auto indeg = net.in_degrees();
            Vertex px = par[*vx][0];
            if (indeg[px] >= 2)
                throw validation_error("pick " + std::to_string(k + 1) + ": leaf '" + x +
                                       "' would need a third parent");
            Vertex u = net.subdivide(par[*vy][0], *vy);
            Vertex v = net.subdivide(px, *vx);
            net.add_edge(u, v);
        }
    }

    if (auto why = invalid_reason(net))
        throw internal_check_error("rebuilt network is broken: " + *why);
    NetworkClassification c = classify(net);
    if (!c.is_binary || !c.is_tree_child)
        throw internal_check_error("rebuilt network is not binary tree-child");
    for (const PhyloTree& t : P)
        if (!displays(net, t))
            throw internal_check_error("rebuilt network fails to display an input tree");
    if (c.hybridisation_number > ap.weight)
        throw internal_check_error("rebuilt network is heavier than the sequence");
    if (!check_n(seq) && !c.is_normal)
        throw internal_check_error("sequence satisfies both properties but the network is not normal");
    return net;
}

// ---------------------------------------------------------------------------
// network/sequence property report

SequencePropertyReport verify_network_sequence_properties(const PhyloNetwork& net,
                                                          const PickSequence& seq) {
    NetworkClassification cls = classify(net);
    if (!cls.is_binary || !cls.is_tree_child)
        throw unsupported_input_error("property report needs a binary tree-child network");
    reject_misplaced_terminal(seq);

    PickSequence sigma;
    for (const CherryPick& p : seq)
        if (!p.is_end()) sigma.push_back(p);

    auto indeg = net.in_degrees();
    auto par = net.parent_lists();

    std::map<Vertex, std::set<std::string>> TP;
    for (Vertex v : net.vertices()) TP[v] = tree_path_leaves(net, v);

    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> pos;
    for (std::size_t k = 0; k < sigma.size(); ++k)
        pos[{sigma[k].first, sigma[k].second}].push_back(k);

    auto is_tree_vertex = [&](Vertex v) { return !net.is_leaf(v) && indeg[v] <= 1; };
    auto name = [&](Vertex v) {
        std::string d = verifier_leaf(net, v);
        return std::to_string(v) + (d.empty() ? std::string() : " (above '" + d + "')");
    };
    // ordered pairs drawing one leaf from each child's tree-path set
    auto cross_pairs = [&](Vertex v) {
        std::set<std::pair<std::string, std::string>> out;
        const auto& kids = net.children(v);
        if (kids.size() == 2)
            for (const std::string& l1 : TP[kids[0]])
                for (const std::string& l2 : TP[kids[1]]) {
                    out.insert({l1, l2});
                    out.insert({l2, l1});
                }
        return out;
    };

    SequencePropertyReport rep;

    for (Vertex u : net.vertices()) {
        if (!is_tree_vertex(u)) continue;
        bool ret_child = false;
        for (Vertex k : net.children(u))
            if (indeg[k] >= 2) ret_child = true;

        if (!ret_child) {
            bool ok = false;
            for (const auto& p : cross_pairs(u))
                if (pos.count(p)) { ok = true; break; }
            if (!ok) {
                rep.pairing.pass = false;
                rep.pairing.failures.push_back("vertex " + name(u) +
                                               ": no pick pairs its two sides");
            }
        } else {
            for (Vertex v : net.children(u)) {
                if (indeg[v] < 2) continue;
                bool ok = false;
                for (const std::string& lv : TP[v]) {
                    for (const std::string& lu : TP[u])
                        if (pos.count({lv, lu})) { ok = true; break; }
                    if (ok) break;
                }
                if (!ok) {
                    rep.reticulation_pick.pass = false;
                    rep.reticulation_pick.failures.push_back(
                        "reticulation " + name(v) + " below vertex " + name(u) +
                        ": no pick leads with one of its leaves");
                }
            }
        }
    }

    // both parents of one reticulation joined by an edge
    for (Vertex v : net.vertices()) {
        if (indeg[v] < 2) continue;
        for (Vertex u : par[v]) {
            for (Vertex up : par[v]) {
                if (u == up) continue;
                const auto& upk = net.children(up);
                if (std::find(upk.begin(), upk.end(), u) == upk.end()) continue;
                // u is the lower parent; one of its children is v
                bool ok = false;
                for (const auto& p : cross_pairs(u)) {
                    auto it = pos.find(p);
                    if (it != pos.end() && it->second.size() >= 2) { ok = true; break; }
                }
                if (!ok) {
                    rep.double_occurrence.pass = false;
                    rep.double_occurrence.failures.push_back(
                        "reticulation " + name(v) + " with stacked parents " + name(up) +
                        " over " + name(u) + ": no pick from the lower parent repeats");
                }
            }
        }
    }

    // adjacent tree vertices, u above u2
    for (Vertex u : net.vertices()) {
        if (!is_tree_vertex(u)) continue;
        for (Vertex ch : net.children(u)) {
            Vertex u2 = 0;
            bool have = false;
            if (indeg[ch] >= 2) {
                Vertex w = net.children(ch)[0];
                if (is_tree_vertex(w)) { u2 = w; have = true; }
            } else if (!net.is_leaf(ch)) {
                bool shared_ret = false;
                for (Vertex k1 : net.children(u))
                    if (indeg[k1] >= 2)
                        for (Vertex k2 : net.children(ch))
                            if (k1 == k2) shared_ret = true;
                if (!shared_ret) { u2 = ch; have = true; }
            }
            if (!have) continue;

            auto low = cross_pairs(u2), high = cross_pairs(u);
            for (const auto& p1 : low) {
                auto it = pos.find(p1);
                if (it == pos.end()) continue;
                std::size_t f = it->second.front();
                bool ok = false;
                for (const auto& p2 : high) {
                    if (p2.first == p1.first) continue;
                    if (p2.first != p1.second && p2.second != p1.first &&
                        p2.second != p1.second)
                        continue;  // no shared leaf
                    auto jt = pos.find(p2);
                    if (jt != pos.end() && jt->second.back() > f) { ok = true; break; }
                }
                if (!ok) {
                    rep.ordering.pass = false;
                    rep.ordering.failures.push_back(
                        "vertices " + name(u) + " over " + name(u2) + ": pick " +
                        to_string(CherryPick{p1.first, p1.second}) +
                        " is never followed by a matching pick from above");
                }
            }
        }
    }

    return rep;
}

// ---------------------------------------------------------------------------
// optimal sequences

namespace {

struct MinSearch {
    SequenceMode mode;
    std::optional<int> budget;
    int n_labels = 0;
    std::uint64_t nodes = 0;
    bool clipped = false;
    std::optional<PickSequence> best_seq;
    int best_weight = 0;
    PickSequence prefix;
    std::map<std::string, int> first_uses;  // incremental tree-child test

    bool normal_violation_with(const CherryPick& cand) {
        prefix.push_back(cand);
        bool bad = false;
        for (std::size_t i = 0; i + 1 < prefix.size() && !bad; ++i) {
            PickSequence sub(prefix.begin() + i, prefix.end());
            if (is_shortcut_sequence(sub)) bad = true;
        }
        prefix.pop_back();
        return bad;
    }

    void dfs(const std::vector<PhyloTree>& trees) {
        ++nodes;

        bool all_single = true;
        std::set<std::string> singles, present, common;
        bool first_tree = true;
        for (const PhyloTree& t : trees) {
            std::set<std::string> L = tree_leaves(t);
            present.insert(L.begin(), L.end());
            if (first_tree) {
                common = L;
                first_tree = false;
            } else {
                std::set<std::string> keep;
                std::set_intersection(common.begin(), common.end(), L.begin(), L.end(),
                                      std::inserter(keep, keep.begin()));
                common = std::move(keep);
            }
            if (t.is_leaf())
                singles.insert(t.leaf);
            else
                all_single = false;
        }

        if (all_single) {
            if (singles.size() != 1) return;
            int w = static_cast<int>(prefix.size()) + 1 - n_labels;
            if (budget && w > *budget) {
                clipped = true;
                return;
            }
            if (!best_seq || w < best_weight) {
                best_seq = prefix;
                best_seq->push_back({*singles.begin(), ""});
                best_weight = w;
            }
            return;
        }

        if (common.empty()) return;
        if (singles.size() > 1) return;
        if (singles.size() == 1 && !common.count(*singles.begin())) return;

        int lb = static_cast<int>(prefix.size()) + static_cast<int>(present.size()) - n_labels;
        if (best_seq && lb >= best_weight) return;
        if (budget && lb > *budget) {
            clipped = true;
            return;
        }

        std::set<std::pair<std::string, std::string>> cands;
        for (const PhyloTree& t : trees)
            for (const auto& [a, b] : tree_cherries(t)) {
                cands.insert({a, b});
                cands.insert({b, a});
            }
        const std::string pinned = singles.empty() ? "" : *singles.begin();

        for (const auto& [x, y] : cands) {
            if (!pinned.empty() && x == pinned) continue;
            if (first_uses.count(y)) continue;  // y was a first: tree-child fails
            CherryPick cand{x, y};
            if (mode == SequenceMode::normal && normal_violation_with(cand)) continue;

            std::vector<PhyloTree> next = trees;
            std::string a = x, b = y;
            if (b < a) std::swap(a, b);
            bool changed = false;
            for (PhyloTree& t : next) {
                if (t.is_leaf()) continue;
                if (tree_cherries(t).count({a, b})) {
                    t = delete_leaf(t, x);
                    changed = true;
                }
            }
            if (!changed) continue;

            prefix.push_back(cand);
            ++first_uses[x];
            dfs(next);
            if (--first_uses[x] == 0) first_uses.erase(x);
            prefix.pop_back();
        }
    }
};

}  // namespace

MinSequenceResult min_sequence(const std::vector<PhyloTree>& P0, SequenceMode mode,
                               std::optional<int> budget) {
    if (P0.empty()) throw validation_error("no trees given");
    const std::set<std::string> X = tree_leaves(P0[0]);
    for (const PhyloTree& t : P0)
        if (tree_leaves(t) != X)
            throw validation_error("trees do not share one leaf set");

    std::vector<PhyloTree> P;
    {
        std::set<std::string> seen;
        for (const PhyloTree& t : P0) {
            PhyloTree c = t;
            canonicalize(c);
            if (seen.insert(tree_text(c)).second) P.push_back(std::move(c));
        }
    }

    MinSearch s;
    s.mode = mode;
    s.budget = budget;
    s.n_labels = static_cast<int>(X.size());
    s.dfs(P);

    MinSequenceResult res;
    res.nodes_visited = s.nodes;
    if (s.best_seq) {
        res.status = MinSequenceStatus::found;
        res.sequence = std::move(s.best_seq);
        res.weight = s.best_weight;
    } else if (s.clipped) {
        res.status = MinSequenceStatus::budget_exhausted;
    } else {
        res.status = MinSequenceStatus::proven_nonexistent;
    }
    return res;
}

}  // namespace normalnet
