#include "karb/matroid.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace karb {

namespace {

std::vector<int> sorted_copy(std::span<const int> xs) {
    std::vector<int> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<int> with_element(std::span<const int> s, int x) {
    std::vector<int> v(s.begin(), s.end());
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    return v;
}

std::vector<int> without_element(std::span<const int> s, int y) {
    std::vector<int> v;
    v.reserve(s.size());
    for (int e : s)
        if (e != y) v.push_back(e);
    return v;
}

}  // namespace

std::optional<std::vector<int>> RankOracle::circuit(std::span<const int> s, int x) const {
    auto sx = with_element(s, x);
    if (rank(sx) == static_cast<int>(sx.size())) return std::nullopt;
    std::vector<int> c;
    for (int y : s) {
        auto probe = without_element(sx, y);
        if (rank(probe) == static_cast<int>(probe.size())) c.push_back(y);
    }
    c.push_back(x);
    std::sort(c.begin(), c.end());
    return c;
}

// ---------------------------------------------------------------------------
// Uniform matroid

namespace {

class UniformOracle final : public RankOracle {
public:
    UniformOracle(std::vector<int> ground, int r) : ground_(std::move(ground)), r_(r) {
        std::sort(ground_.begin(), ground_.end());
        if (r_ < 0) throw std::invalid_argument("negative rank");
    }
    const std::vector<int>& ground_set() const override { return ground_; }
    int rank(std::span<const int> elements) const override {
        return std::min<int>(static_cast<int>(elements.size()), r_);
    }
    std::optional<std::vector<int>> circuit(std::span<const int> s, int x) const override {
        if (static_cast<int>(s.size()) < r_) return std::nullopt;
        return with_element(s, x);
    }

private:
    std::vector<int> ground_;
    int r_;
};

}  // namespace

OraclePtr uniform_oracle(std::vector<int> ground, int r) {
    return std::make_shared<UniformOracle>(std::move(ground), r);
}

int uniform_rank(int set_size, int k) { return std::min(set_size, k); }

// ---------------------------------------------------------------------------
// Graphic matroid

namespace {

struct UnionFind {
    std::map<int, int> parent;
    int find(int x) {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent[x] = x;
            return x;
        }
        if (it->second == x) return x;
        return it->second = find(it->second);
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

class GraphicOracle final : public RankOracle {
public:
    explicit GraphicOracle(std::vector<UndirectedEdge> edges) : edges_(std::move(edges)) {
        std::sort(edges_.begin(), edges_.end(),
                  [](const UndirectedEdge& a, const UndirectedEdge& b) { return a.id < b.id; });
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (i > 0 && edges_[i - 1].id == edges_[i].id)
                throw std::invalid_argument("duplicate edge id");
            ground_.push_back(edges_[i].id);
            by_id_[edges_[i].id] = edges_[i];
        }
    }
    const std::vector<int>& ground_set() const override { return ground_; }
    int rank(std::span<const int> elements) const override {
        UnionFind uf;
        int r = 0;
        for (int id : elements)
            if (uf.unite(by_id_.at(id).u, by_id_.at(id).v)) ++r;
        return r;
    }
    std::optional<std::vector<int>> circuit(std::span<const int> s, int x) const override {
        const UndirectedEdge& e = by_id_.at(x);
        // Path between the endpoints of x inside the forest S, if any.
        std::map<int, std::vector<std::pair<int, int>>> adj;  // node -> (other, edge id)
        for (int id : s) {
            const UndirectedEdge& f = by_id_.at(id);
            adj[f.u].push_back({f.v, id});
            adj[f.v].push_back({f.u, id});
        }
        std::map<int, std::pair<int, int>> pred;  // node -> (prev node, edge id)
        std::queue<int> q;
        q.push(e.u);
        pred[e.u] = {e.u, -1};
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            if (v == e.v) break;
            for (auto [w, id] : adj[v])
                if (!pred.count(w)) {
                    pred[w] = {v, id};
                    q.push(w);
                }
        }
        if (!pred.count(e.v)) return std::nullopt;
        std::vector<int> c{x};
        for (int v = e.v; v != e.u; v = pred[v].first) c.push_back(pred[v].second);
        std::sort(c.begin(), c.end());
        return c;
    }
    const UndirectedEdge& edge(int id) const { return by_id_.at(id); }

private:
    std::vector<UndirectedEdge> edges_;
    std::vector<int> ground_;
    std::map<int, UndirectedEdge> by_id_;
};

}  // namespace

OraclePtr graphic_oracle(std::vector<UndirectedEdge> edges) {
    return std::make_shared<GraphicOracle>(std::move(edges));
}

int graphic_rank(const std::vector<UndirectedEdge>& edges) {
    std::vector<int> ids;
    for (const auto& e : edges) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end());
    return GraphicOracle(edges).rank(ids);
}

// ---------------------------------------------------------------------------
// k-fold graphic matroid (matroid union by forest packing)

namespace {

// A packing of a subset of edges into k forests, with augmenting-path
// insertion. Insertion order is by edge id for determinism.
class ForestPacking {
public:
    ForestPacking(const std::map<int, UndirectedEdge>& by_id, int k) : by_id_(by_id), k_(k) {
        forests_.resize(k);
    }

    // Tries to insert edge `x`; returns false if the packing cannot absorb it
    // (the visited evictable elements are then available via last_visited()).
    bool insert(int x) {
        std::map<int, std::pair<int, int>> parent;  // element -> (parent elem, forest it frees)
        std::set<int> seen{x};
        std::queue<int> q;
        q.push(x);
        while (!q.empty()) {
            int cur = q.front();
            q.pop();
            int home = forest_of(cur);  // -1 for the fresh element
            for (int i = 0; i < k_; ++i) {
                if (i == home) continue;
                auto cyc = forest_cycle(i, cur);
                if (!cyc) {
                    // cur fits in forest i; unwind the eviction chain.
                    place(i, cur);
                    int walk = cur;
                    while (parent.count(walk)) {
                        auto [par, freed] = parent[walk];
                        place(freed, par);
                        walk = par;
                    }
                    return true;
                }
                for (int y : *cyc)
                    if (!seen.count(y)) {
                        seen.insert(y);
                        parent[y] = {cur, i};
                        q.push(y);
                    }
            }
        }
        visited_ = std::move(seen);
        return false;
    }

    const std::set<int>& last_visited() const { return visited_; }
    const std::vector<std::set<int>>& forests() const { return forests_; }

private:
    // Cycle that `x` would close in forest i (element ids, excluding x), or
    // nullopt when x fits. An element currently assigned elsewhere is treated
    // by its endpoints only.
    std::optional<std::vector<int>> forest_cycle(int i, int x) const {
        const UndirectedEdge& e = by_id_.at(x);
        if (e.u == e.v) return std::vector<int>{};  // loop never fits
        std::map<int, std::vector<std::pair<int, int>>> adj;
        for (int id : forests_[i]) {
            if (id == x) continue;
            const UndirectedEdge& f = by_id_.at(id);
            adj[f.u].push_back({f.v, id});
            adj[f.v].push_back({f.u, id});
        }
        std::map<int, std::pair<int, int>> pred;
        std::queue<int> q;
        q.push(e.u);
        pred[e.u] = {e.u, -1};
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            if (v == e.v) break;
            for (auto [w, id] : adj[v])
                if (!pred.count(w)) {
                    pred[w] = {v, id};
                    q.push(w);
                }
        }
        if (!pred.count(e.v)) return std::nullopt;
        std::vector<int> cyc;
        for (int v = e.v; v != e.u; v = pred[v].first) cyc.push_back(pred[v].second);
        return cyc;
    }

    void place(int i, int x) {
        for (auto& f : forests_) f.erase(x);
        forests_[i].insert(x);
    }

    int forest_of(int x) const {
        for (int i = 0; i < k_; ++i)
            if (forests_[i].count(x)) return i;
        return -1;
    }

    const std::map<int, UndirectedEdge>& by_id_;
    int k_;
    std::vector<std::set<int>> forests_;
    std::set<int> visited_;
};

class KFoldGraphicOracle final : public RankOracle {
public:
    KFoldGraphicOracle(std::vector<UndirectedEdge> edges, int k) : k_(k) {
        if (k <= 0) throw std::invalid_argument("k must be positive");
        std::sort(edges.begin(), edges.end(),
                  [](const UndirectedEdge& a, const UndirectedEdge& b) { return a.id < b.id; });
        for (const auto& e : edges) {
            if (by_id_.count(e.id)) throw std::invalid_argument("duplicate edge id");
            ground_.push_back(e.id);
            by_id_[e.id] = e;
        }
    }
    const std::vector<int>& ground_set() const override { return ground_; }
    int rank(std::span<const int> elements) const override {
        ForestPacking packing(by_id_, k_);
        int r = 0;
        for (int id : elements)
            if (packing.insert(id)) ++r;
        return r;
    }
    std::optional<std::vector<int>> circuit(std::span<const int> s, int x) const override {
        ForestPacking packing(by_id_, k_);
        for (int id : s)
            if (!packing.insert(id)) throw std::logic_error("circuit() requires independent S");
        if (packing.insert(x)) return std::nullopt;
        // On failure, the visited elements are exactly the evictable ones.
        std::vector<int> c(packing.last_visited().begin(), packing.last_visited().end());
        std::sort(c.begin(), c.end());
        return c;
    }
    std::optional<std::vector<std::vector<int>>> partition(std::span<const int> subset) const {
        ForestPacking packing(by_id_, k_);
        for (int id : subset)
            if (!packing.insert(id)) return std::nullopt;
        std::vector<std::vector<int>> out;
        for (const auto& f : packing.forests()) out.emplace_back(f.begin(), f.end());
        return out;
    }

private:
    int k_;
    std::vector<int> ground_;
    std::map<int, UndirectedEdge> by_id_;
};

}  // namespace

OraclePtr k_fold_graphic_oracle(std::vector<UndirectedEdge> edges, int k) {
    return std::make_shared<KFoldGraphicOracle>(std::move(edges), k);
}

int k_fold_graphic_rank(const std::vector<UndirectedEdge>& edges, int k) {
    std::vector<int> ids;
    for (const auto& e : edges) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end());
    return KFoldGraphicOracle(edges, k).rank(ids);
}

std::optional<std::vector<std::vector<int>>> forest_partition(
    const std::vector<UndirectedEdge>& edges, std::span<const int> subset, int k) {
    return KFoldGraphicOracle(edges, k).partition(sorted_copy(subset));
}

// ---------------------------------------------------------------------------
// Partition matroid, direct sum, shortening

namespace {

class PartitionOracle final : public RankOracle {
public:
    explicit PartitionOracle(std::vector<PartitionBlock> blocks) : blocks_(std::move(blocks)) {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (blocks_[b].capacity < 0) throw std::invalid_argument("negative capacity");
            for (int id : blocks_[b].elements) {
                if (block_of_.count(id)) throw std::invalid_argument("blocks must be disjoint");
                block_of_[id] = static_cast<int>(b);
                ground_.push_back(id);
            }
        }
        std::sort(ground_.begin(), ground_.end());
    }
    const std::vector<int>& ground_set() const override { return ground_; }
    int rank(std::span<const int> elements) const override {
        std::map<int, int> used;
        int r = 0;
        for (int id : elements) {
            auto it = block_of_.find(id);
            if (it == block_of_.end()) throw std::invalid_argument("element outside every block");
            int b = it->second;
            if (used[b] < blocks_[b].capacity) {
                ++used[b];
                ++r;
            }
        }
        return r;
    }
    std::optional<std::vector<int>> circuit(std::span<const int> s, int x) const override {
        auto it = block_of_.find(x);
        if (it == block_of_.end()) throw std::invalid_argument("element outside every block");
        int b = it->second;
        std::vector<int> same{x};
        for (int y : s)
            if (block_of_.at(y) == b) same.push_back(y);
        if (static_cast<int>(same.size()) <= blocks_[b].capacity) return std::nullopt;
        std::sort(same.begin(), same.end());
        return same;
    }

private:
    std::vector<PartitionBlock> blocks_;
    std::map<int, int> block_of_;
    std::vector<int> ground_;
};

class DirectSumOracle final : public RankOracle {
public:
    explicit DirectSumOracle(std::vector<OraclePtr> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i < parts_.size(); ++i)
            for (int id : parts_[i]->ground_set()) {
                if (part_of_.count(id))
                    throw std::invalid_argument("direct sum parts must be disjoint");
                part_of_[id] = static_cast<int>(i);
                ground_.push_back(id);
            }
        std::sort(ground_.begin(), ground_.end());
    }
    const std::vector<int>& ground_set() const override { return ground_; }
    int rank(std::span<const int> elements) const override {
        std::map<int, std::vector<int>> split;
        for (int id : elements) {
            auto it = part_of_.find(id);
            if (it == part_of_.end()) throw std::invalid_argument("element outside every part");
            split[it->second].push_back(id);
        }
        int r = 0;
        for (auto& [p, ids] : split) r += parts_[p]->rank(ids);
        return r;
    }
    std::optional<std::vector<int>> circuit(std::span<const int> s, int x) const override {
        int p = part_of_.at(x);
        std::vector<int> sub;
        for (int y : s)
            if (part_of_.at(y) == p) sub.push_back(y);
        return parts_[p]->circuit(sub, x);
    }

private:
    std::vector<OraclePtr> parts_;
    std::map<int, int> part_of_;
    std::vector<int> ground_;
};

class ShortenedOracle final : public RankOracle {
public:
    ShortenedOracle(OraclePtr inner, int k) : inner_(std::move(inner)), k_(k) {
        if (k_ < 0) throw std::invalid_argument("negative shortening");
    }
    const std::vector<int>& ground_set() const override { return inner_->ground_set(); }
    int rank(std::span<const int> elements) const override {
        return std::min(inner_->rank(elements), k_);
    }
    std::optional<std::vector<int>> circuit(std::span<const int> s, int x) const override {
        if (static_cast<int>(s.size()) < k_) return inner_->circuit(s, x);
        // |S| == k: S-y+x keeps size k, where shortened independence equals
        // inner independence. If S+x is inner-independent every y works.
        auto c = inner_->circuit(s, x);
        if (!c) return with_element(s, x);
        return c;
    }

private:
    OraclePtr inner_;
    int k_;
};

}  // namespace

OraclePtr partition_oracle(std::vector<PartitionBlock> blocks) {
    return std::make_shared<PartitionOracle>(std::move(blocks));
}

OraclePtr direct_sum(std::vector<OraclePtr> parts) {
    return std::make_shared<DirectSumOracle>(std::move(parts));
}

OraclePtr k_shorten(OraclePtr inner, int k) {
    return std::make_shared<ShortenedOracle>(std::move(inner), k);
}

// ---------------------------------------------------------------------------
// Matroid intersection

namespace {

struct PathState {
    Rat cost;
    int hops = 0;
    int parent = -1;  // ground index
    bool reached = false;
};

// One augmentation step: finds a minimum (cost, hops) alternating path in the
// exchange graph and applies it, or reports that S is maximum.
bool augment(const RankOracle& m1, const RankOracle& m2, const std::vector<int>& ground,
             const CostMap* cost, std::vector<char>& in_s) {
    int n = static_cast<int>(ground.size());
    std::map<int, int> index;
    for (int i = 0; i < n; ++i) index[ground[i]] = i;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
        if (in_s[i]) s.push_back(ground[i]);

    auto weight = [&](int gi) -> Rat {
        if (!cost) return Rat(0);
        auto it = cost->find(ground[gi]);
        Rat c = it == cost->end() ? Rat(0) : it->second;
        return in_s[gi] ? -c : c;
    };

    // Exchange arcs. arcs1[y] -> list of x with S-y+x independent in M1
    // (travel y -> x); arcs2 gives x -> y moves for M2.
    std::vector<std::vector<int>> adj(n);
    std::vector<char> source(n, 0), sink(n, 0);
    for (int xi = 0; xi < n; ++xi) {
        if (in_s[xi]) continue;
        int x = ground[xi];
        auto c1 = m1.circuit(s, x);
        if (!c1)
            source[xi] = 1;
        else
            for (int y : *c1)
                if (y != x) adj[index[y]].push_back(xi);
        auto c2 = m2.circuit(s, x);
        if (!c2)
            sink[xi] = 1;
        else
            for (int y : *c2)
                if (y != x) adj[xi].push_back(index[y]);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<PathState> state(n);
    for (int i = 0; i < n; ++i)
        if (source[i]) {
            state[i].reached = true;
            state[i].cost = weight(i);
            state[i].hops = 1;
        }
    // Bellman-Ford on node weights; strict lexicographic improvement keeps
    // parents deterministic. No negative cycles exist for extreme S.
    for (int round = 0; round <= n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
            if (!state[u].reached) continue;
            for (int v : adj[u]) {
                Rat cand_cost = state[u].cost + weight(v);
                int cand_hops = state[u].hops + 1;
                if (!state[v].reached || cand_cost < state[v].cost ||
                    (cand_cost == state[v].cost && cand_hops < state[v].hops)) {
                    state[v].reached = true;
                    state[v].cost = cand_cost;
                    state[v].hops = cand_hops;
                    state[v].parent = u;
                    changed = true;
                }
            }
        }
        if (!changed) break;
        if (round == n) throw std::logic_error("negative cycle in exchange graph");
    }

    int best = -1;
    for (int i = 0; i < n; ++i) {
        if (!sink[i] || !state[i].reached) continue;
        if (best == -1 || state[i].cost < state[best].cost ||
            (state[i].cost == state[best].cost && state[i].hops < state[best].hops))
            best = i;
    }
    if (best == -1) return false;
    for (int v = best; v != -1; v = state[v].parent) in_s[v] = !in_s[v];
    return true;
}

CommonIndependentSet collect(const std::vector<int>& ground, const std::vector<char>& in_s,
                             const CostMap* cost) {
    CommonIndependentSet out;
    for (std::size_t i = 0; i < ground.size(); ++i)
        if (in_s[i]) out.elements.push_back(ground[i]);
    out.size = static_cast<int>(out.elements.size());
    if (cost) {
        Rat total(0);
        for (int id : out.elements) {
            auto it = cost->find(id);
            if (it != cost->end()) total += it->second;
        }
        out.cost = total;
    }
    return out;
}

void check_grounds(const RankOracle& m1, const RankOracle& m2) {
    if (m1.ground_set() != m2.ground_set())
        throw std::invalid_argument("matroid intersection requires identical ground sets");
}

}  // namespace

CommonIndependentSet matroid_intersection_max(const RankOracle& m1, const RankOracle& m2) {
    check_grounds(m1, m2);
    const auto& ground = m1.ground_set();
    std::vector<char> in_s(ground.size(), 0);
    while (augment(m1, m2, ground, nullptr, in_s)) {
    }
    return collect(ground, in_s, nullptr);
}

std::optional<CommonIndependentSet> matroid_intersection_min_cost(const RankOracle& m1,
                                                                  const RankOracle& m2,
                                                                  const CostMap& cost,
                                                                  int target) {
    check_grounds(m1, m2);
    if (target < 0) throw std::invalid_argument("target must be nonnegative");
    const auto& ground = m1.ground_set();
    std::vector<char> in_s(ground.size(), 0);
    for (int t = 0; t < target; ++t)
        if (!augment(m1, m2, ground, &cost, in_s)) return std::nullopt;
    return collect(ground, in_s, &cost);
}

}  // namespace karb
