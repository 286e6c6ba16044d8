#pragma once

#include <optional>
#include <vector>

#include "karb/arborescence.hpp"
#include "karb/blocking.hpp"
#include "karb/digraph.hpp"
#include "karb/laminar.hpp"
#include "karb/rational.hpp"

namespace karb::oracle {

/// Enumeration limits; exceeding them raises BoundError. Impossible sizes
/// (k(|V|-1) > |A|) short-circuit to an empty list before the bound check.
struct OracleBounds {
    int max_tree_arcs = 12;
    int max_arcs = 18;
};

/// All rooted k-arborescences of d with root s, as sorted arc-id sets, in
/// lexicographic order. Backtracking with in-degree and size pruning.
std::vector<std::vector<int>> enumerate_rooted_k_arbs(const Digraph& d, int s, int k,
                                                      const OracleBounds& bounds = {});

/// All (unrooted) k-arborescences of d.
std::vector<std::vector<int>> enumerate_k_arbs(const Digraph& d, int k,
                                               const OracleBounds& bounds = {});

/// All L-tight k-arborescences (unrooted tightness by definition).
std::vector<std::vector<int>> enumerate_l_tight_k_arbs(const Digraph& d, const LaminarFamily& l,
                                                       int k, const OracleBounds& bounds = {});

/// Exact minimum hitting set of the given arc sets, by increasing-cardinality
/// subset search over their union; lexicographically first witness.
/// nullopt when no hitting set exists (some set is empty).
std::optional<std::vector<int>> min_hitting_set(const std::vector<std::vector<int>>& sets);

struct BruteBlocking {
    bool family_nonempty = false;
    Rat opt_cost;
    int num_optima = 0;
    std::vector<std::vector<int>> optima;
    int size = 0;            // 0 for an empty family
    std::vector<int> arcs;   // hitting-set witness
};

/// Ground truth for Problem 1: enumerate optimal k-arborescences and solve
/// the minimum hitting set exactly.
BruteBlocking brute_min_transversal(const Digraph& d, const CostMap& costs, int k,
                                    const OracleBounds& bounds = {});

/// Ground truth for Problem 2 (arcs entering s are deleted first).
BruteBlocking brute_min_transversal_rooted(const Digraph& d, const CostMap& costs, int s, int k,
                                           const OracleBounds& bounds = {});

/// Ground truth for Problem 3 on an extension-free instance: the family of
/// L-tight k-arborescences of d.
BruteBlocking brute_min_transversal_l_tight(const Digraph& d, const LaminarFamily& l, int k,
                                            const OracleBounds& bounds = {});

/// Sum of f_W over every L[W]-compatible subpartition is at least k(|X|-1),
/// for every member W. The pseudo-feasibility condition of the witness hunt.
bool f_subpartition_inequalities_hold(const Digraph& d, const LaminarFamily& l, int k);

/// f_W(Z1) + f_W(Z2) >= k for every member W and disjoint nonempty
/// Z1, Z2 <= W. Tightness implies this; for k = 1 it is exact.
bool f_pair_inequalities_hold(const Digraph& d, const LaminarFamily& l, int k);

struct Fig2Witness {
    Digraph d;
    std::vector<std::vector<int>> extra_members;  // beyond V and singletons
    LaminarFamily l;                              // normalized
};

struct Fig2SearchSpace {
    int k = 2;
    int nodes = 3;
    bool bidirected_pairs_only = false;  // pair states: none / one way / bold both-ways
    int max_multiplicity = 2;
    int max_extra_members = 2;
    bool require_plain_k_arb = true;
    long long max_instances = -1;  // -1: unbounded
};

/// Deterministic sweep for an instance without an L-tight 2-arborescence
/// whose f-subpartition inequalities all hold. Returns the first hit in
/// enumeration order, or nullopt when the space is exhausted.
std::optional<Fig2Witness> find_fig2_witness(const Fig2SearchSpace& space);

}  // namespace karb::oracle
