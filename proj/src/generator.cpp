#include "karb/generator.hpp"

#include <algorithm>

namespace karb {

GeneratedInstance InstanceGen::problem1_instance(int max_nodes, int max_arcs, int max_k) {
    static const std::vector<Rat> pool = {Rat(0), Rat(1),    Rat(2),    Rat(3),
                                          Rat(5), Rat(1, 2), Rat(3, 2), Rat(7, 3)};
    int n = pick(2, max_nodes);
    int k = pick(1, max_k);
    int m = pick(0, max_arcs);
    std::vector<Arc> arcs;
    CostMap costs;
    for (int i = 0; i < m; ++i) {
        int tail = pick(0, n - 1);
        int head = pick(0, n - 2);
        if (head >= tail) ++head;
        arcs.push_back(Arc{i, tail, head});
        costs[i] = pool[pick(0, static_cast<int>(pool.size()) - 1)];
    }
    return GeneratedInstance{Digraph::with_node_range(n, std::move(arcs)), std::move(costs), k};
}

std::vector<std::vector<int>> InstanceGen::laminar_members(const std::vector<int>& universe,
                                                           int tries) {
    std::vector<std::vector<int>> members;
    int n = static_cast<int>(universe.size());
    for (int t = 0; t < tries; ++t) {
        std::vector<int> m;
        for (int v : universe)
            if (pick(0, 1)) m.push_back(v);
        if (static_cast<int>(m.size()) < 2 || static_cast<int>(m.size()) >= n) continue;
        bool ok = true;
        for (const auto& other : members)
            if (!sets_disjoint(m, other) && !is_subset(m, other) && !is_subset(other, m)) {
                ok = false;
                break;
            }
        if (ok) members.push_back(std::move(m));
    }
    return members;
}

}  // namespace karb
