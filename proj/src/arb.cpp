#include "karb/arb.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "karb/flow.hpp"

namespace karb {

std::vector<int> reduce_parallel_classes(const Digraph& d, const CostMap& costs, int keep) {
    std::map<std::tuple<int, int, Rat>, std::vector<int>> classes;
    for (const Arc& a : d.arcs()) {
        Rat c(0);
        auto it = costs.find(a.id);
        if (it != costs.end()) c = it->second;
        classes[{a.tail, a.head, c}].push_back(a.id);
    }
    std::vector<int> kept;
    for (auto& [key, ids] : classes) {
        std::sort(ids.begin(), ids.end());
        for (int i = 0; i < static_cast<int>(ids.size()) && i < keep; ++i) kept.push_back(ids[i]);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

namespace {

std::vector<UndirectedEdge> underlying_edges(const Digraph& d, const std::vector<int>& arc_ids) {
    std::vector<UndirectedEdge> edges;
    edges.reserve(arc_ids.size());
    for (int id : arc_ids) {
        const Arc& a = d.arc(id);
        edges.push_back(UndirectedEdge{a.id, a.tail, a.head});
    }
    return edges;
}

CostMap restrict_costs(const CostMap& costs, const std::vector<int>& ids) {
    CostMap out;
    for (int id : ids) {
        auto it = costs.find(id);
        if (it != costs.end()) out[id] = it->second;
    }
    return out;
}

}  // namespace

std::optional<MinCostArb> min_cost_rooted_k_arb(const Digraph& d, const CostMap& costs, int s,
                                                int k) {
    if (!d.has_node(s)) throw std::invalid_argument("root is not a node");
    if (k <= 0) throw std::invalid_argument("k must be positive");
    int target = k * (d.node_count() - 1);
    if (target == 0) {
        MinCostArb r{make_k_arborescence(d, {}, s, k), Rat(0)};
        return r;
    }
    Digraph d1 = d.remove_arcs(d.in_arc_ids(s));
    std::vector<int> ground = reduce_parallel_classes(d1, costs, k);
    Digraph dr = d1;
    {
        std::set<int> keep(ground.begin(), ground.end());
        std::vector<int> drop;
        for (const Arc& a : d1.arcs())
            if (!keep.count(a.id)) drop.push_back(a.id);
        dr = d1.remove_arcs(drop);
    }
    OraclePtr m1 = k_fold_graphic_oracle(underlying_edges(dr, ground), k);
    std::vector<PartitionBlock> blocks;
    for (int v : dr.nodes()) {
        if (v == s) continue;
        auto in = dr.in_arc_ids(v);
        if (!in.empty()) blocks.push_back(PartitionBlock{in, k});
    }
    OraclePtr m2 = partition_oracle(std::move(blocks));
    auto best = matroid_intersection_min_cost(*m1, *m2, restrict_costs(costs, ground), target);
    if (!best) return std::nullopt;
    MinCostArb r{make_k_arborescence(d, best->elements, s, k), best->cost.value_or(Rat(0))};
    if (!is_rooted_k_arborescence(d, r.arb.arcs, s, k))
        throw std::logic_error("intersection result is not a rooted k-arborescence");
    return r;
}

std::optional<MinCostArb> min_cost_k_arb(const Digraph& d, const CostMap& costs, int k) {
    if (k <= 0) throw std::invalid_argument("k must be positive");
    Rat beta(1);
    for (const Arc& a : d.arcs()) {
        auto it = costs.find(a.id);
        if (it != costs.end()) beta += it->second;
    }
    int alpha = d.arc_count() + k;
    CostExtension ext = build_cost_extension(d, costs, alpha, beta);
    auto rooted = min_cost_rooted_k_arb(ext.graph, ext.costs, ext.root, k);
    if (!rooted) return std::nullopt;  // cannot happen: the extension is always feasible
    std::vector<int> inner;
    int used_ext = 0;
    for (int id : rooted->arb.arcs) {
        if (d.has_arc(id))
            inner.push_back(id);
        else
            ++used_ext;
    }
    // A k-arborescence of d exists iff the optimum uses exactly k root arcs.
    if (used_ext != k) return std::nullopt;
    MinCostArb r{make_k_arborescence(d, inner, std::nullopt, k), rooted->cost - Rat(k) * beta};
    if (!is_k_arborescence(d, r.arb.arcs, k))
        throw std::logic_error("stripped extension result is not a k-arborescence");
    return r;
}

bool exists_matroid_restricted_k_arb(const Digraph& d, const MatroidFamily& family, int k) {
    if (k <= 0) throw std::invalid_argument("k must be positive");
    int target = k * (d.node_count() - 1);
    if (target == 0) return true;
    std::vector<int> all;
    for (const Arc& a : d.arcs()) all.push_back(a.id);
    std::sort(all.begin(), all.end());
    OraclePtr m1 = k_fold_graphic_oracle(underlying_edges(d, all), k);
    std::vector<OraclePtr> parts;
    for (int v : d.nodes()) {
        auto in = d.in_arc_ids(v);
        if (in.empty()) continue;
        auto it = family.per_node.find(v);
        if (it == family.per_node.end())
            throw std::invalid_argument("matroid family misses a node with in-arcs");
        std::sort(in.begin(), in.end());
        if (it->second->ground_set() != in)
            throw std::invalid_argument("per-node matroid ground set is not the in-star");
        parts.push_back(k_shorten(it->second, k));
    }
    OraclePtr m2 = direct_sum(std::move(parts));
    return matroid_intersection_max(*m1, *m2).size == target;
}

bool exists_L_tight(const Digraph& d, int s, int k, const LaminarFamily& l) {
    CostMap entering_count;
    for (const Arc& a : d.arcs()) entering_count[a.id] = Rat(0);
    for (const auto& w : l.members()) {
        std::set<int> inside(w.begin(), w.end());
        for (const Arc& a : d.arcs())
            if (inside.count(a.head) && !inside.count(a.tail)) entering_count[a.id] += 1;
    }
    auto best = min_cost_rooted_k_arb(d, entering_count, s, k);
    if (!best) return false;
    return best->cost == Rat(k) * Rat(l.size());
}

namespace {

// Grows one spanning s-arborescence inside `remaining`, accepting an arc only
// when the arcs left over still give lambda(s, v) >= m-1 for every v.
// Safe-choice greedy in arc-id order; a wrong safe pick is backtracked.
bool grow_tree(const Digraph& d, const std::set<int>& remaining, std::set<int>& in_tree,
               std::set<int>& chosen, int s, int m) {
    if (static_cast<int>(in_tree.size()) == d.node_count()) return true;
    for (int id : remaining) {
        if (chosen.count(id)) continue;
        const Arc& a = d.arc(id);
        if (!in_tree.count(a.tail) || in_tree.count(a.head)) continue;
        std::vector<int> residual;
        for (int other : remaining)
            if (other != id && !chosen.count(other)) residual.push_back(other);
        if (!connectivity_at_least(d, residual, s, m - 1)) continue;
        chosen.insert(id);
        in_tree.insert(a.head);
        if (grow_tree(d, remaining, in_tree, chosen, s, m)) return true;
        chosen.erase(id);
        in_tree.erase(a.head);
    }
    return false;
}

bool peel(const Digraph& d, std::set<int>& remaining, int s, int m, std::vector<int>& tree) {
    std::set<int> in_tree{s};
    std::set<int> chosen;
    if (!grow_tree(d, remaining, in_tree, chosen, s, m)) return false;
    tree.assign(chosen.begin(), chosen.end());
    for (int id : chosen) remaining.erase(id);
    return true;
}

}  // namespace

std::vector<std::vector<int>> decompose(const Digraph& d, const KArborescence& f, int s, int k) {
    if (!is_rooted_k_arborescence(d, f.arcs, s, k))
        throw std::invalid_argument("decompose requires a rooted k-arborescence");
    std::set<int> remaining(f.arcs.begin(), f.arcs.end());
    std::vector<std::vector<int>> parts;
    for (int j = 0; j < k; ++j) {
        std::vector<int> tree;
        if (!peel(d, remaining, s, k - j, tree))
            throw std::logic_error("failed to peel an arborescence from a valid k-arborescence");
        std::sort(tree.begin(), tree.end());
        parts.push_back(std::move(tree));
    }
    return parts;
}

}  // namespace karb
