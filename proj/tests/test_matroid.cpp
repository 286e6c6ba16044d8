#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "helpers.hpp"
#include "karb/matroid.hpp"

using namespace karb;

namespace {

std::vector<int> subset_of(const std::vector<int>& ground, unsigned mask) {
    std::vector<int> out;
    for (std::size_t i = 0; i < ground.size(); ++i)
        if (mask & (1u << i)) out.push_back(ground[i]);
    return out;
}

// Independent test oracle: can `subset` be split into k forests? Exhaustive
// over assignments.
bool brute_forests(const std::vector<UndirectedEdge>& edges, const std::vector<int>& subset,
                   int k) {
    std::map<int, UndirectedEdge> by_id;
    for (const auto& e : edges) by_id[e.id] = e;
    int m = static_cast<int>(subset.size());
    std::vector<int> color(m, 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == m) {
            for (int f = 0; f < k; ++f) {
                std::map<int, int> parent;
                std::function<int(int)> find = [&](int x) {
                    if (!parent.count(x)) parent[x] = x;
                    while (parent[x] != x) x = parent[x] = parent[parent[x]];
                    return x;
                };
                for (int j = 0; j < m; ++j) {
                    if (color[j] != f) continue;
                    const auto& e = by_id[subset[j]];
                    int a = find(e.u), b = find(e.v);
                    if (a == b) return false;
                    parent[a] = b;
                }
            }
            return true;
        }
        for (int f = 0; f < k; ++f) {
            color[i] = f;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

int brute_union_rank(const std::vector<UndirectedEdge>& edges, const std::vector<int>& subset,
                     int k) {
    int best = 0;
    int m = static_cast<int>(subset.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> sub;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) sub.push_back(subset[i]);
        if (static_cast<int>(sub.size()) > best && brute_forests(edges, sub, k))
            best = static_cast<int>(sub.size());
    }
    return best;
}

void check_rank_axioms(const RankOracle& m) {
    const auto& g = m.ground_set();
    REQUIRE(g.size() <= 10);
    std::vector<int> ranks(1u << g.size());
    for (unsigned mask = 0; mask < (1u << g.size()); ++mask) {
        auto sub = subset_of(g, mask);
        int r = m.rank(sub);
        ranks[mask] = r;
        CHECK(r >= 0);
        CHECK(r <= static_cast<int>(sub.size()));
    }
    CHECK(ranks[0] == 0);
    for (unsigned mask = 0; mask < (1u << g.size()); ++mask)
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (mask & (1u << i)) continue;
            unsigned with = mask | (1u << i);
            int step = ranks[with] - ranks[mask];
            CHECK(step >= 0);  // monotone
            CHECK(step <= 1);  // unit step
        }
    // submodularity: r(X+e) - r(X) >= r(Y+e) - r(Y) for X <= Y
    for (unsigned y = 0; y < (1u << g.size()); ++y)
        for (unsigned x = y;; x = (x - 1) & y) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (y & (1u << i)) continue;
                CHECK(ranks[x | (1u << i)] - ranks[x] >= ranks[y | (1u << i)] - ranks[y]);
            }
            if (x == 0) break;
        }
}

void check_circuits(const RankOracle& m, std::mt19937_64& rng) {
    const auto& g = m.ground_set();
    for (int t = 0; t < 30; ++t) {
        // grow a random independent set
        std::vector<int> order(g);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng() % i]);
        std::vector<int> s;
        for (int e : order) {
            auto probe = s;
            probe.insert(std::lower_bound(probe.begin(), probe.end(), e), e);
            if (m.rank(probe) == static_cast<int>(probe.size())) s = probe;
            if (s.size() >= 6) break;
        }
        for (int x : g) {
            if (std::binary_search(s.begin(), s.end(), x)) continue;
            auto fast = m.circuit(s, x);
            auto slow = m.RankOracle::circuit(s, x);
            CHECK(fast.has_value() == slow.has_value());
            if (fast && slow) CHECK(*fast == *slow);
        }
    }
}

}  // namespace

TEST_CASE("graphic rank basics") {
    std::vector<UndirectedEdge> tri{{0, 0, 1}, {1, 1, 2}, {2, 2, 0}};
    CHECK(graphic_rank(tri) == 2);
    CHECK(graphic_rank({}) == 0);
    CHECK(graphic_rank({{0, 0, 1}, {1, 2, 3}}) == 2);
}

TEST_CASE("k-fold graphic rank") {
    std::vector<UndirectedEdge> tri{{0, 0, 1}, {1, 1, 2}, {2, 2, 0}};
    CHECK(k_fold_graphic_rank(tri, 2) == 3);
    CHECK(brute_union_rank(tri, {0, 1, 2}, 2) == 3);
    std::vector<UndirectedEdge> par{{0, 0, 1}, {1, 0, 1}};
    CHECK(k_fold_graphic_rank(par, 2) == 2);
    CHECK(k_fold_graphic_rank(par, 1) == 1);
}

TEST_CASE("uniform, shorten, direct sum") {
    CHECK(uniform_rank(5, 3) == 3);
    std::vector<UndirectedEdge> tri{{0, 0, 1}, {1, 1, 2}, {2, 2, 0}};
    auto g = graphic_oracle(tri);
    auto s1 = k_shorten(g, 1);
    CHECK(s1->rank(std::vector<int>{0, 1, 2}) == 1);
    auto u2 = uniform_oracle({10, 11}, 2);
    auto u1 = uniform_oracle({20}, 1);
    auto ds = direct_sum({u2, u1});
    CHECK(ds->rank(std::vector<int>{10, 11, 20}) == 3);
    CHECK_THROWS_AS(ds->rank(std::vector<int>{99}), std::invalid_argument);
    CHECK_THROWS_AS(partition_oracle({{{1, 2}, 1}})->rank(std::vector<int>{7}),
                    std::invalid_argument);
}

TEST_CASE("axioms and circuits across oracle families") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 12; ++t) {
        int n = 3 + static_cast<int>(rng() % 3);
        int m = 4 + static_cast<int>(rng() % 5);
        std::vector<UndirectedEdge> edges;
        for (int i = 0; i < m; ++i) {
            int u = static_cast<int>(rng() % n);
            int v = static_cast<int>(rng() % (n - 1));
            if (v >= u) ++v;
            edges.push_back({i, u, v});
        }
        int k = 1 + static_cast<int>(rng() % 2);
        auto kf = k_fold_graphic_oracle(edges, k);
        check_rank_axioms(*kf);
        check_circuits(*kf, rng);
        auto sh = k_shorten(graphic_oracle(edges), 2);
        check_rank_axioms(*sh);
        check_circuits(*sh, rng);
    }
    std::vector<PartitionBlock> blocks{{{0, 1, 2}, 2}, {{3, 4}, 1}, {{5}, 1}};
    auto p = partition_oracle(blocks);
    check_rank_axioms(*p);
    check_circuits(*p, rng);
}

TEST_CASE("k-fold independence equals forest partition equals sparsity count") {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 25; ++t) {
        int n = 3 + static_cast<int>(rng() % 4);  // up to 6 nodes
        int m = 3 + static_cast<int>(rng() % 6);
        std::vector<UndirectedEdge> edges;
        for (int i = 0; i < m; ++i) {
            int u = static_cast<int>(rng() % n);
            int v = static_cast<int>(rng() % (n - 1));
            if (v >= u) ++v;
            edges.push_back({i, u, v});
        }
        int k = 1 + static_cast<int>(rng() % 2);
        std::vector<int> all;
        for (const auto& e : edges) all.push_back(e.id);
        auto kf = k_fold_graphic_oracle(edges, k);
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            auto sub = subset_of(all, mask);
            bool indep = kf->rank(sub) == static_cast<int>(sub.size());
            bool forests = brute_forests(edges, sub, k);
            CHECK(indep == forests);
            // Nash-Williams: every node subset X spans at most k(|X|-1) edges
            bool sparse = true;
            for (unsigned nm = 0; nm < (1u << n); ++nm) {
                int cnt = 0, size = 0;
                for (int v = 0; v < n; ++v)
                    if (nm & (1u << v)) ++size;
                if (size < 2) continue;
                for (int id : sub) {
                    const auto& e = edges[id];
                    if ((nm & (1u << e.u)) && (nm & (1u << e.v))) ++cnt;
                }
                if (cnt > k * (size - 1)) sparse = false;
            }
            CHECK(indep == sparse);
            if (indep) {
                auto parts = forest_partition(edges, sub, k);
                REQUIRE(parts.has_value());
                std::set<int> covered;
                int total = 0;
                for (const auto& part : *parts) {
                    total += static_cast<int>(part.size());
                    covered.insert(part.begin(), part.end());
                    // each part acyclic
                    std::map<int, int> uf;
                    std::function<int(int)> find = [&](int x) {
                        if (!uf.count(x)) uf[x] = x;
                        while (uf[x] != x) x = uf[x] = uf[uf[x]];
                        return x;
                    };
                    for (int id : part) {
                        int a = find(edges[id].u), b = find(edges[id].v);
                        CHECK(a != b);
                        uf[a] = b;
                    }
                }
                CHECK(total == static_cast<int>(sub.size()));
                CHECK(covered.size() == sub.size());
            }
        }
    }
}

TEST_CASE("maximum intersection") {
    auto f1 = uniform_oracle({0, 1, 2}, 3);
    auto f2 = uniform_oracle({0, 1, 2}, 3);
    CHECK(matroid_intersection_max(*f1, *f2).size == 3);
    auto u1 = uniform_oracle({0, 1, 2}, 1);
    CHECK(matroid_intersection_max(*u1, *f2).size == 1);
    CHECK_THROWS_AS(matroid_intersection_max(*f1, *uniform_oracle({5}, 1)),
                    std::invalid_argument);

    // 3-node digraph with a unique spanning arborescence 0->1->2
    std::vector<UndirectedEdge> und{{0, 0, 1}, {1, 1, 2}};
    auto m1 = k_fold_graphic_oracle(und, 1);
    auto m2 = partition_oracle({{{0}, 1}, {{1}, 1}});
    auto best = matroid_intersection_max(*m1, *m2);
    CHECK(best.elements == std::vector<int>{0, 1});
}

TEST_CASE("minimum cost intersection agrees with brute force") {
    auto f1 = uniform_oracle({0, 1, 2}, 3);
    auto f2 = uniform_oracle({0, 1, 2}, 3);
    CostMap c = karbtest::costs_of({5, 1, 3});
    auto zero = matroid_intersection_min_cost(*f1, *f2, c, 0);
    REQUIRE(zero);
    CHECK(zero->size == 0);
    CHECK(*zero->cost == Rat(0));
    auto two = matroid_intersection_min_cost(*f1, *f2, c, 2);
    REQUIRE(two);
    CHECK(*two->cost == Rat(4));

    std::mt19937_64 rng(2024);
    for (int t = 0; t < 20; ++t) {
        int n = 3 + static_cast<int>(rng() % 3);
        int m = 4 + static_cast<int>(rng() % 4);
        std::vector<UndirectedEdge> edges;
        CostMap costs;
        bool negatives = t % 3 == 0;  // the rank engine feeds negative costs
        for (int i = 0; i < m; ++i) {
            int u = static_cast<int>(rng() % n);
            int v = static_cast<int>(rng() % (n - 1));
            if (v >= u) ++v;
            edges.push_back({i, u, v});
            costs[i] = Rat(static_cast<int>(rng() % 7)) - (negatives ? Rat(2) : Rat(0));
        }
        int k = 1 + static_cast<int>(rng() % 2);
        auto m1 = k_fold_graphic_oracle(edges, k);
        std::vector<PartitionBlock> blocks;
        std::map<int, std::vector<int>> by_head;
        for (const auto& e : edges) by_head[e.v].push_back(e.id);
        for (auto& [v, ids] : by_head) blocks.push_back({ids, k});
        auto m2 = partition_oracle(blocks);

        std::vector<int> all;
        for (const auto& e : edges) all.push_back(e.id);
        // brute per target
        std::optional<Rat> prev, prev2;
        for (int target = 0; target <= m; ++target) {
            std::optional<Rat> brute;
            for (unsigned mask = 0; mask < (1u << m); ++mask) {
                auto sub = subset_of(all, mask);
                if (static_cast<int>(sub.size()) != target) continue;
                if (m1->rank(sub) != target || m2->rank(sub) != target) continue;
                Rat cost(0);
                for (int id : sub) cost += costs[id];
                if (!brute || cost < *brute) brute = cost;
            }
            auto engine = matroid_intersection_min_cost(*m1, *m2, costs, target);
            CHECK(engine.has_value() == brute.has_value());
            if (engine && brute) {
                CHECK(*engine->cost == *brute);
                if (prev && !negatives) CHECK(*engine->cost >= *prev);  // monotone for c >= 0
                if (prev && prev2)  // increments never shrink (convexity)
                    CHECK(*engine->cost - *prev >= *prev - *prev2);
                prev2 = prev;
                prev = *engine->cost;
                CHECK(matroid_intersection_max(*m1, *m2).size >= target);
            }
        }
    }
}
