#pragma once

#include <map>
#include <optional>
#include <vector>

#include "karb/arborescence.hpp"
#include "karb/digraph.hpp"
#include "karb/laminar.hpp"
#include "karb/matroid.hpp"
#include "karb/rational.hpp"

namespace karb {

struct MinCostArb {
    KArborescence arb;
    Rat cost;
};

/// Minimum-cost s-rooted k-arborescence as a common independent set of the
/// k-fold graphic matroid and the in-degree partition matroid (arcs entering
/// s are deleted first). nullopt when none exists.
std::optional<MinCostArb> min_cost_rooted_k_arb(const Digraph& d, const CostMap& costs, int s,
                                                int k);

/// Minimum-cost k-arborescence through the (|A|+k, sum(c)+1)-extension.
std::optional<MinCostArb> min_cost_k_arb(const Digraph& d, const CostMap& costs, int k);

/// Per-node matroids M_v on the in-stars of d.
struct MatroidFamily {
    std::map<int, OraclePtr> per_node;
};

/// Existence of a matroid-restricted k-arborescence: the k-fold graphic
/// matroid against the direct sum of the k-shortenings of the M_v.
bool exists_matroid_restricted_k_arb(const Digraph& d, const MatroidFamily& family, int k);

/// Whether an L-tight s-rooted k-arborescence exists: a minimum-cost rooted
/// k-arborescence under the cost "number of L-members the arc enters" has
/// cost exactly k|L|.
bool exists_L_tight(const Digraph& d, int s, int k, const LaminarFamily& l);

/// Partition of a rooted k-arborescence into k arc-disjoint spanning
/// s-arborescences; greedy peeling with connectivity-safe arc choices and a
/// backtracking fallback.
std::vector<std::vector<int>> decompose(const Digraph& d, const KArborescence& f, int s, int k);

/// Parallel arcs with equal (tail, head, cost) are interchangeable in any
/// solution; keeps the `keep` smallest ids per class. Used to shrink solver
/// ground sets without changing optimal values.
std::vector<int> reduce_parallel_classes(const Digraph& d, const CostMap& costs, int keep);

}  // namespace karb
