#include "karb/digraph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace karb {

Digraph::Digraph(std::vector<int> nodes, std::vector<Arc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        const Arc& a = arcs_[i];
        if (i > 0 && arcs_[i - 1].id == a.id) throw std::invalid_argument("duplicate arc id");
        if (a.tail == a.head) throw std::invalid_argument("self-loop rejected");
        if (!std::binary_search(nodes_.begin(), nodes_.end(), a.tail) ||
            !std::binary_search(nodes_.begin(), nodes_.end(), a.head))
            throw std::invalid_argument("arc endpoint is not a node");
        arc_index_[a.id] = static_cast<int>(i);
    }
}

Digraph Digraph::with_node_range(int n, std::vector<Arc> arcs) {
    std::vector<int> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = i;
    return Digraph(std::move(nodes), std::move(arcs));
}

bool Digraph::has_node(int v) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

bool Digraph::has_arc(int id) const { return arc_index_.count(id) > 0; }

const Arc& Digraph::arc(int id) const {
    auto it = arc_index_.find(id);
    if (it == arc_index_.end()) throw std::out_of_range("no such arc id");
    return arcs_[it->second];
}

int Digraph::max_node_id() const {
    if (nodes_.empty()) throw std::logic_error("empty node set");
    return nodes_.back();
}

int Digraph::max_arc_id() const {
    if (arcs_.empty()) throw std::logic_error("no arcs");
    return arcs_.back().id;
}

Digraph Digraph::remove_arcs(std::span<const int> ids) const {
    std::set<int> gone(ids.begin(), ids.end());
    std::vector<Arc> kept;
    kept.reserve(arcs_.size());
    for (const Arc& a : arcs_)
        if (!gone.count(a.id)) kept.push_back(a);
    return Digraph(nodes_, std::move(kept));
}

Digraph Digraph::remove_arc(int id) const {
    int ids[1] = {id};
    return remove_arcs(ids);
}

Digraph Digraph::induced(std::span<const int> w) const {
    std::set<int> inside(w.begin(), w.end());
    std::vector<int> nodes(inside.begin(), inside.end());
    std::vector<Arc> kept;
    for (const Arc& a : arcs_)
        if (inside.count(a.tail) && inside.count(a.head)) kept.push_back(a);
    return Digraph(std::move(nodes), std::move(kept));
}

std::vector<int> Digraph::in_arc_ids(int v) const {
    std::vector<int> out;
    for (const Arc& a : arcs_)
        if (a.head == v) out.push_back(a.id);
    return out;
}

std::vector<int> Digraph::out_arc_ids(int v) const {
    std::vector<int> out;
    for (const Arc& a : arcs_)
        if (a.tail == v) out.push_back(a.id);
    return out;
}

std::vector<int> Digraph::entering_arc_ids(std::span<const int> w) const {
    std::set<int> inside(w.begin(), w.end());
    std::vector<int> out;
    for (const Arc& a : arcs_)
        if (inside.count(a.head) && !inside.count(a.tail)) out.push_back(a.id);
    return out;
}

int Digraph::in_degree(int v) const { return static_cast<int>(in_arc_ids(v).size()); }

Extension build_extension(const Digraph& d, int alpha) {
    if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
    int s = d.fresh_node_id();
    std::vector<int> nodes = d.nodes();
    nodes.push_back(s);
    std::vector<Arc> arcs = d.arcs();
    int next = d.arcs().empty() ? 0 : d.max_arc_id() + 1;
    std::map<int, std::vector<int>> added;
    for (int v : d.nodes()) {
        for (int i = 0; i < alpha; ++i) {
            arcs.push_back(Arc{next, s, v});
            added[v].push_back(next);
            ++next;
        }
    }
    return Extension{Digraph(std::move(nodes), std::move(arcs)), s, std::move(added)};
}

CostExtension build_cost_extension(const Digraph& d, const CostMap& costs, int alpha,
                                   const Rat& beta) {
    for (const Arc& a : d.arcs())
        if (!costs.count(a.id)) throw std::invalid_argument("cost missing for an arc");
    if (beta < 0) throw std::invalid_argument("beta must be nonnegative");
    Extension ext = build_extension(d, alpha);
    CostMap all = costs;
    for (const auto& [v, ids] : ext.added)
        for (int id : ids) all[id] = beta;
    return CostExtension{std::move(ext.graph), ext.root, std::move(all), std::move(ext.added)};
}

Contraction contract_to_root(const Digraph& dplus, std::span<const int> w) {
    if (w.empty()) throw std::invalid_argument("cannot contract to an empty set");
    std::set<int> inside(w.begin(), w.end());
    for (int v : inside)
        if (!dplus.has_node(v)) throw std::invalid_argument("W contains a non-node");
    int sw = dplus.fresh_node_id();
    std::vector<int> nodes(inside.begin(), inside.end());
    nodes.push_back(sw);
    std::vector<Arc> arcs;
    for (const Arc& a : dplus.arcs()) {
        bool tin = inside.count(a.tail) > 0, hin = inside.count(a.head) > 0;
        if (tin && hin)
            arcs.push_back(a);
        else if (hin)
            arcs.push_back(Arc{a.id, sw, a.head});
        else if (tin)
            arcs.push_back(Arc{a.id, a.tail, sw});
        // both outside: becomes a loop at s_W, discarded
    }
    return Contraction{Digraph(std::move(nodes), std::move(arcs)), sw};
}

}  // namespace karb
