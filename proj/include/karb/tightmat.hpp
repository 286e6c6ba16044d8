#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "karb/arb.hpp"
#include "karb/digraph.hpp"
#include "karb/laminar.hpp"
#include "karb/oracle.hpp"
#include "karb/rational.hpp"

namespace karb {

/// Context for the matroids M_W of L-tight arborescences: an extension-bearing
/// rooted digraph, a normalized laminar family (universe and singletons
/// present) over the non-root nodes, and k. Rank queries are pure; results
/// are memoized behind a mutex.
class TightContext {
public:
    /// check_tight verifies that an L-tight rooted k-arborescence exists;
    /// deletion studies construct damaged contexts with check_tight = false.
    TightContext(Digraph dplus, int root, LaminarFamily l, int k, bool check_tight = true);

    const Digraph& dplus() const { return dplus_; }
    int root() const { return root_; }
    const LaminarFamily& l() const { return l_; }
    int k() const { return k_; }

    /// The in-star of a member W in the context digraph.
    std::vector<int> in_star(std::span<const int> w) const;

    /// r_W(E): the largest |F cap E| over L[W]-tight s_W-rooted
    /// k-arborescences of the contraction D_W, by one two-level min-cost
    /// rooted k-arborescence call (scale N = |A(D_W)|+1).
    int rank_mw(std::span<const int> w, std::span<const int> e) const;

    /// Same rank by exhaustive recursion over L[W]-compatible subpartitions;
    /// kept as an independent cross-check of rank_mw.
    int rank_recursive(std::span<const int> w, std::span<const int> e,
                       int max_children = 10) const;

    /// Sum of child ranks r_W^oplus over the maximal members inside the
    /// compatible set X, for the arc set E cup D[W].
    int rank_oplus(std::span<const int> w, std::span<const int> x,
                   std::span<const int> e) const;

private:
    Digraph dplus_;
    int root_;
    LaminarFamily l_;
    int k_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<std::vector<int>, std::vector<int>>, int> cache_;
};

/// p(E) = max over nonempty X of k - r_oplus(indegree structure of D-E);
/// exhaustive over subsets. Test harness for the near-supermodularity layer;
/// never on the solve path.
int p_value(const Digraph& d, int s, const MatroidFamily& per_node, int k,
            std::span<const int> e);

/// The upper truncation via subpartitions of V-s (fully supermodular).
int p_truncation(const Digraph& d, int s, const MatroidFamily& per_node, int k,
                 std::span<const int> e);

/// Whether some partition of E into at least two parts satisfies
/// p(E) <= sum of part values.
bool p_separable(const Digraph& d, int s, const MatroidFamily& per_node, int k,
                 std::span<const int> e);

/// Conditions (a) and (b) for the nonemptiness of the root-arc matroid,
/// checked by enumeration.
bool bs_conditions_hold(const Digraph& d, int s, const MatroidFamily& per_node, int k);

struct MandatoryArcTransform {
    Digraph graph;
    LaminarFamily l;
    int new_node;              // x_a
    std::vector<int> bundle;   // B_a: u->x_a, x_a->v, k-1 copies of v->x_a
};

/// Replaces arc a = uv by the gadget B_a and grows every v-containing member
/// by x_a; L-tight rooted k-arborescences through a correspond bijectively
/// to L'-tight ones in the transformed digraph.
MandatoryArcTransform mandatory_arc_transform(const Digraph& d, const LaminarFamily& l, int s,
                                              int arc_id, int k);

/// Root vectors of the minimum-cost k-arborescences, by enumeration.
std::vector<std::map<int, int>> root_vectors_of_optima(const Digraph& d, const CostMap& costs,
                                                       int k,
                                                       const oracle::OracleBounds& bounds = {});

/// Integer base-polyhedron exchange: for q != q' and any v with
/// q(v) > q'(v), some u with q(u) < q'(u) keeps q - chi_v + chi_u in the set.
bool root_vector_exchange_holds(const std::vector<std::map<int, int>>& vectors);

}  // namespace karb
