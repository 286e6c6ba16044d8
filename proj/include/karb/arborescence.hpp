#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "karb/digraph.hpp"
#include "karb/laminar.hpp"

namespace karb {

/// A (candidate) k-arborescence: k arc-disjoint spanning arborescences given
/// as one arc-id set. Parallel arcs are distinct ids, never multiplicities.
struct KArborescence {
    std::vector<int> arcs;  // sorted ids
    std::optional<int> root;
    int k = 1;
    std::map<int, int> root_vector;  // q(v) = k - indegree(v)
};

/// q(v) = k - indegree_F(v); sums to k over the nodes of d.
std::map<int, int> root_vector(const Digraph& d, std::span<const int> arcs, int k);

/// Edmonds' characterization: |F| = k(|V|-1), in-degree 0 at s and k
/// elsewhere, and lambda_F(s,v) >= k for every node v.
bool is_rooted_k_arborescence(const Digraph& d, std::span<const int> arcs, int s, int k);

/// Unrooted validity: F has size k(|V|-1), nonnegative root vector q, and
/// attaching q(v) arcs from an auxiliary root to each v yields a rooted
/// k-arborescence of the extended digraph.
bool is_k_arborescence(const Digraph& d, std::span<const int> arcs, int k);

/// F[W] is a k-arborescence of D[W] for every member W of L.
/// Pre: F is a rooted k-arborescence of d with root s (checked).
bool is_L_tight(const Digraph& d, std::span<const int> arcs, const LaminarFamily& l, int s,
                int k);

/// The unrooted variant: F a k-arborescence of d, tightness by definition.
bool is_L_tight_unrooted(const Digraph& d, std::span<const int> arcs, const LaminarFamily& l,
                         int k);

KArborescence make_k_arborescence(const Digraph& d, std::vector<int> arcs, std::optional<int> root,
                                  int k);

}  // namespace karb
