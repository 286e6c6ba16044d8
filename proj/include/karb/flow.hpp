#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <span>
#include <vector>

#include "karb/digraph.hpp"
#include "karb/rational.hpp"

namespace karb {

/// Breadth-first augmenting max-flow, exact on the capacity type (int for
/// connectivity checks, Rat for LP separation). Stops once `limit` is
/// reached, so lambda >= k tests do not pay for the full flow value.
template <class Cap>
class MaxFlow {
public:
    MaxFlow(std::span<const int> nodes, int source, int sink) : source_(source), sink_(sink) {
        int idx = 0;
        for (int v : nodes) index_[v] = idx++;
        adj_.resize(index_.size());
    }

    void add_arc(int tail, int head, Cap cap) {
        int u = index_.at(tail), v = index_.at(head);
        adj_[u].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({v, cap});
        adj_[v].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({u, Cap(0)});
    }

    Cap run(const Cap& limit) {
        Cap total(0);
        int s = index_.at(source_), t = index_.at(sink_);
        while (total < limit) {
            std::vector<int> pred_edge(adj_.size(), -1);
            std::vector<char> seen(adj_.size(), 0);
            std::queue<int> q;
            q.push(s);
            seen[s] = 1;
            while (!q.empty() && !seen[t]) {
                int u = q.front();
                q.pop();
                for (int ei : adj_[u]) {
                    const Edge& e = edges_[ei];
                    if (!seen[e.to] && e.cap > Cap(0)) {
                        seen[e.to] = 1;
                        pred_edge[e.to] = ei;
                        q.push(e.to);
                    }
                }
            }
            if (!seen[t]) break;
            Cap push = limit - total;
            for (int v = t; v != s;) {
                const Edge& e = edges_[pred_edge[v]];
                push = std::min(push, e.cap);
                v = edges_[pred_edge[v] ^ 1].to;
            }
            for (int v = t; v != s;) {
                edges_[pred_edge[v]].cap -= push;
                edges_[pred_edge[v] ^ 1].cap += push;
                v = edges_[pred_edge[v] ^ 1].to;
            }
            total += push;
        }
        return total;
    }

    /// After run(): the sink side of a minimum cut, as original node ids
    /// (nodes that reach the sink in the residual graph). Minimal such set.
    std::vector<int> min_cut_sink_side() const {
        std::vector<std::vector<int>> radj(adj_.size());
        for (std::size_t ei = 0; ei < edges_.size(); ++ei)
            if (edges_[ei].cap > Cap(0)) radj[edges_[ei].to].push_back(static_cast<int>(edges_[ei ^ 1].to));
        std::vector<char> reaches(adj_.size(), 0);
        std::queue<int> q;
        int t = index_.at(sink_);
        reaches[t] = 1;
        q.push(t);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : radj[v])
                if (!reaches[u]) {
                    reaches[u] = 1;
                    q.push(u);
                }
        }
        std::vector<int> side;
        for (const auto& [node, idx] : index_)
            if (reaches[idx]) side.push_back(node);
        return side;
    }

private:
    struct Edge {
        int to;
        Cap cap;
    };
    int source_, sink_;
    std::map<int, int> index_;
    std::vector<std::vector<int>> adj_;
    std::vector<Edge> edges_;
};

/// Arc connectivity lambda(s,t) in the subgraph given by arc ids of d,
/// capped at `limit` (unit capacities, parallel arcs counted separately).
int arc_connectivity(const Digraph& d, std::span<const int> arc_ids, int s, int t, int limit);

/// True iff lambda(s,v) >= k within the given arc set for every node v != s.
bool connectivity_at_least(const Digraph& d, std::span<const int> arc_ids, int s, int k);

}  // namespace karb
