#include "karb/arborescence.hpp"

#include <algorithm>
#include <stdexcept>

#include "karb/flow.hpp"

namespace karb {

std::map<int, int> root_vector(const Digraph& d, std::span<const int> arcs, int k) {
    std::map<int, int> q;
    for (int v : d.nodes()) q[v] = k;
    for (int id : arcs) q[d.arc(id).head] -= 1;
    return q;
}

bool is_rooted_k_arborescence(const Digraph& d, std::span<const int> arcs, int s, int k) {
    if (!d.has_node(s)) throw std::invalid_argument("root is not a node");
    long long need = static_cast<long long>(k) * (d.node_count() - 1);
    if (static_cast<long long>(arcs.size()) != need) return false;
    std::map<int, int> indeg;
    for (int id : arcs) {
        if (!d.has_arc(id)) return false;
        indeg[d.arc(id).head] += 1;
    }
    if (indeg.count(s)) return false;
    for (int v : d.nodes())
        if (v != s && indeg[v] != k) return false;
    return connectivity_at_least(d, arcs, s, k);
}

bool is_k_arborescence(const Digraph& d, std::span<const int> arcs, int k) {
    long long need = static_cast<long long>(k) * (d.node_count() - 1);
    if (static_cast<long long>(arcs.size()) != need) return false;
    for (int id : arcs)
        if (!d.has_arc(id)) return false;
    auto q = root_vector(d, arcs, k);
    for (const auto& [v, qv] : q)
        if (qv < 0) return false;
    // Attach q(v) parallel root arcs and check the rooted criterion.
    int s = d.fresh_node_id();
    std::vector<int> nodes = d.nodes();
    nodes.push_back(s);
    std::vector<Arc> all = d.arcs();
    std::vector<int> fplus(arcs.begin(), arcs.end());
    int next = d.arcs().empty() ? 0 : d.max_arc_id() + 1;
    for (const auto& [v, qv] : q)
        for (int i = 0; i < qv; ++i) {
            all.push_back(Arc{next, s, v});
            fplus.push_back(next);
            ++next;
        }
    Digraph ext(std::move(nodes), std::move(all));
    return is_rooted_k_arborescence(ext, fplus, s, k);
}

bool is_L_tight(const Digraph& d, std::span<const int> arcs, const LaminarFamily& l, int s,
                int k) {
    if (!is_rooted_k_arborescence(d, arcs, s, k))
        throw std::invalid_argument("F is not a rooted k-arborescence");
    for (const auto& w : l.members()) {
        Digraph dw = d.induced(w);
        std::vector<int> fw;
        for (int id : arcs)
            if (dw.has_arc(id)) fw.push_back(id);
        if (!is_k_arborescence(dw, fw, k)) return false;
    }
    return true;
}

bool is_L_tight_unrooted(const Digraph& d, std::span<const int> arcs, const LaminarFamily& l,
                         int k) {
    if (!is_k_arborescence(d, arcs, k)) return false;
    for (const auto& w : l.members()) {
        Digraph dw = d.induced(w);
        std::vector<int> fw;
        for (int id : arcs)
            if (dw.has_arc(id)) fw.push_back(id);
        if (!is_k_arborescence(dw, fw, k)) return false;
    }
    return true;
}

KArborescence make_k_arborescence(const Digraph& d, std::vector<int> arcs, std::optional<int> root,
                                  int k) {
    std::sort(arcs.begin(), arcs.end());
    KArborescence f;
    f.root_vector = root_vector(d, arcs, k);
    f.arcs = std::move(arcs);
    f.root = root;
    f.k = k;
    return f;
}

}  // namespace karb
