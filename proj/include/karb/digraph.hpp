#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "karb/rational.hpp"

namespace karb {

/// One directed arc. Ids are immutable: deletion never renumbers, and every
/// arc-set handled by the library (A0, A1, H, E1, E2, ...) is a set of ids.
struct Arc {
    int id;
    int tail;
    int head;
};

/// Directed multigraph with stable arc ids. Parallel and anti-parallel arcs
/// are allowed; self-loops are rejected at construction. Node ids are
/// arbitrary ints (instances use 0..n-1, derived graphs add fresh ids).
/// Instances are immutable after construction; derived graphs are new values.
class Digraph {
public:
    Digraph() = default;
    Digraph(std::vector<int> nodes, std::vector<Arc> arcs);

    static Digraph with_node_range(int n, std::vector<Arc> arcs = {});

    const std::vector<int>& nodes() const { return nodes_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int arc_count() const { return static_cast<int>(arcs_.size()); }

    bool has_node(int v) const;
    bool has_arc(int id) const;
    const Arc& arc(int id) const;
    int max_node_id() const;
    int max_arc_id() const;
    /// Smallest id not used by any node (where extensions put the new root).
    int fresh_node_id() const { return nodes_.empty() ? 0 : max_node_id() + 1; }
    int fresh_arc_id() const { return arcs_.empty() ? 0 : max_arc_id() + 1; }

    /// New digraph without the given arcs; surviving ids unchanged.
    Digraph remove_arcs(std::span<const int> ids) const;
    Digraph remove_arc(int id) const;
    /// Subgraph induced by the node set W (arc ids preserved).
    Digraph induced(std::span<const int> w) const;

    std::vector<int> in_arc_ids(int v) const;
    std::vector<int> out_arc_ids(int v) const;
    /// Arcs entering the node set W (head inside, tail outside).
    std::vector<int> entering_arc_ids(std::span<const int> w) const;
    int in_degree(int v) const;

private:
    std::vector<int> nodes_;  // sorted, unique
    std::vector<Arc> arcs_;   // sorted by id, ids unique
    std::map<int, int> arc_index_;
};

struct Extension {
    Digraph graph;
    int root;
    /// Added arc ids per original node, in node order.
    std::map<int, std::vector<int>> added;
};

/// The alpha-extension: new node s with alpha parallel arcs s->v for every
/// original node v. Original arc ids are preserved.
Extension build_extension(const Digraph& d, int alpha);

struct CostExtension {
    Digraph graph;
    int root;
    CostMap costs;
    std::map<int, std::vector<int>> added;
};

/// The (alpha,beta)-extension: like build_extension, with every added arc
/// carrying cost beta and original costs unchanged.
CostExtension build_cost_extension(const Digraph& d, const CostMap& costs, int alpha,
                                   const Rat& beta);

struct Contraction {
    Digraph graph;
    int contracted_node;  // s_W
};

/// Contracts everything outside W to a single node s_W and discards loops.
/// Arcs into W keep their ids (the bijection between delta_out(s_W) and the
/// in-star of W), arcs induced in W are unchanged.
Contraction contract_to_root(const Digraph& dplus, std::span<const int> w);

}  // namespace karb
