#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "karb/digraph.hpp"
#include "karb/laminar.hpp"
#include "karb/rational.hpp"

namespace karb {

/// Deterministic work counters; these stand in for wall-clock timings in all
/// machine-readable reports so repeated runs stay byte-identical.
struct WorkCounters {
    long long lp_rounds = 0;
    long long lp_pivots = 0;
    long long transversal_checks = 0;
    long long fpair_assignments = 0;
};

/// Optimal dual of the cut LP. y is supported on node sets Z (subsets of
/// V-s), z sits on arcs; feasibility means sum_{Z entered} y_Z - z_a <= c_a.
struct DualSolution {
    std::vector<std::pair<std::vector<int>, Rat>> y;  // sorted sets, positive values
    CostMap z;
    Rat objective;
};

struct LpSolution {
    CostMap x;                               // per arc id (all arcs of the input)
    std::vector<std::vector<int>> cut_sets;  // rows of the final relaxation
    std::vector<Rat> row_duals;              // basis duals, aligned with cut_sets
    Rat objective;
};

/// Certificate of Problem-2 optimality: a rooted k-arborescence F is optimal
/// iff A1 <= F <= A - A0 and F is L-tight.
struct OptimalityStructure {
    LaminarFamily l;          // over V-s, singletons included
    std::vector<int> a0;      // forbidden arcs
    std::vector<int> a1;      // mandatory arcs
    Rat opt_cost;
    LpSolution lp;
    DualSolution dual;
};

/// min cx, 0 <= x <= 1, in-degree of every nonempty Z <= V-s at least k.
/// Cutting planes: per-node exact min-cut separation against the current x;
/// the working relaxation is solved by an exact rational simplex.
/// Pre: a rooted k-arborescence exists (throws otherwise).
LpSolution solve_primal_lp(const Digraph& d, const CostMap& costs, int s, int k,
                           WorkCounters* counters = nullptr);

/// Dual of the final relaxation: y from the simplex basis of the cut rows,
/// z_a = max(0, sum_{Z entered} y_Z - c_a). Verifies exact strong duality.
DualSolution extract_dual(const Digraph& d, const CostMap& costs, int k, const LpSolution& lp);

/// Repeatedly shifts min(y_Y1, y_Y2) from a properly crossing pair onto their
/// intersection and union. Preserves feasibility and the objective; the
/// support ends pairwise laminar.
DualSolution uncross(const Digraph& d, const CostMap& costs, int k, const DualSolution& dual);

/// Full pipeline: LP, duals, uncrossing, and the (L, A0, A1) classification.
OptimalityStructure optimality_structure(const Digraph& d, const CostMap& costs, int s, int k,
                                         WorkCounters* counters = nullptr);

/// Debug dump of (x, y, z, L, A0, A1) with rationals as "p/q" strings.
std::string dump_structure_json(const OptimalityStructure& os);

}  // namespace karb
