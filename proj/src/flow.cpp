#include "karb/flow.hpp"

namespace karb {

int arc_connectivity(const Digraph& d, std::span<const int> arc_ids, int s, int t, int limit) {
    if (s == t) return limit;
    MaxFlow<int> mf(d.nodes(), s, t);
    for (int id : arc_ids) {
        const Arc& a = d.arc(id);
        mf.add_arc(a.tail, a.head, 1);
    }
    return mf.run(limit);
}

bool connectivity_at_least(const Digraph& d, std::span<const int> arc_ids, int s, int k) {
    for (int v : d.nodes()) {
        if (v == s) continue;
        if (arc_connectivity(d, arc_ids, s, v, k) < k) return false;
    }
    return true;
}

}  // namespace karb
