#pragma once

#include <optional>
#include <span>
#include <vector>

#include "karb/digraph.hpp"
#include "karb/laminar.hpp"
#include "karb/optstruct.hpp"
#include "karb/rational.hpp"

namespace karb {

/// Exhaustive-search limits of the transversal pipeline.
struct BlockingOptions {
    int max_pair_set = 14;  // |W| bound for the exact f-pair enumeration
    int jobs = 1;           // worker fan-out for the per-W pair searches
};

/// Raised when an exact enumeration would exceed its configured bound.
struct BoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FPairWitness {
    std::vector<int> w;       // member of L
    std::vector<int> z1, z2;  // disjoint nonempty subsets of W
    int value = 0;            // f_W(Z1) + f_W(Z2)
    std::vector<int> e1, e2;  // the arc sets counted by f_W
};

enum class Provenance { EmptyFamily, MandatoryArc, SmallSearch, FPairFormula };

const char* provenance_name(Provenance p);

struct TransversalResult {
    std::vector<int> arcs;  // sorted ids, subset of the original arc set
    int size = 0;
    Provenance provenance = Provenance::EmptyFamily;
    std::optional<FPairWitness> witness;
    std::optional<Rat> opt_cost;
    WorkCounters counters;
};

/// f_W(Z): arcs of D[W] entering Z that leave no member of L[W] meeting Z.
/// Returns the value and the counted arc set (the E_j of the witness).
std::pair<int, std::vector<int>> f_w(const Digraph& d, const LaminarFamily& l,
                                     std::span<const int> w, std::span<const int> z);

/// Same value via precomputed shadow sets T_e (the maximal member of L[W]
/// the arc leaves, else its tail); f_W(Z) counts heads in Z with T_e
/// disjoint from Z.
int f_w_shadow(const Digraph& d, const LaminarFamily& l, std::span<const int> w,
               std::span<const int> z);

/// Tail relocation: every arc of D[W] entering Z that leaves some member of
/// L[W] meeting Z gets its tail moved into that member's intersection with Z
/// (smallest node). After it, f_W(Z) is the plain in-degree of Z in D'[W].
Digraph relocate_tails(const Digraph& d, const LaminarFamily& l, std::span<const int> w,
                       std::span<const int> z);

/// Exact minimum of f_W(Z1)+f_W(Z2) over disjoint nonempty Z1, Z2 <= W by
/// ternary assignment enumeration with Z1-first symmetry pruning.
FPairWitness min_f_pair(const Digraph& d, const LaminarFamily& l, std::span<const int> w,
                        const BlockingOptions& opts = {}, WorkCounters* counters = nullptr);

/// H blocks every L-tight rooted k-arborescence of d.
bool is_transversal(const Digraph& d, int s, int k, const LaminarFamily& l,
                    std::span<const int> h, WorkCounters* counters = nullptr);

/// Smallest transversal of size <= max_size among arcs not leaving s, or
/// nullopt. Increasing cardinality, lexicographic order; candidates are
/// pruned against the L-tight arborescences found so far.
std::optional<std::vector<int>> small_transversal(const Digraph& d, int s, int k,
                                                  const LaminarFamily& l, int max_size,
                                                  WorkCounters* counters = nullptr);

/// Minimum transversal of the L-tight rooted k-arborescences of d.
/// Pre: one exists, L is normalized (universe V-s and singletons present) and
/// d already carries its root extension when called from the cost pipelines.
TransversalResult minimum_transversal_L_tight(const Digraph& d, int s, int k,
                                              const LaminarFamily& l,
                                              const BlockingOptions& opts = {});

/// Problem-1 pipeline: blocking minimum-cost k-arborescences of (d, c).
TransversalResult minimum_transversal(const Digraph& d, const CostMap& costs, int k,
                                      const BlockingOptions& opts = {});

/// Problem-2 pipeline: blocking minimum-cost s-rooted k-arborescences.
TransversalResult minimum_transversal_rooted(const Digraph& d, const CostMap& costs, int s,
                                             int k, const BlockingOptions& opts = {});

/// Problem-3 entry for instances given directly as (d, s, L): blocks the
/// L-tight s-rooted k-arborescences of d (no costs involved).
TransversalResult solve_l_tight_instance(const Digraph& d, int s, int k,
                                         const std::vector<std::vector<int>>& l_members,
                                         const BlockingOptions& opts = {});

}  // namespace karb
