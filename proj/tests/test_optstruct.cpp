#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "karb/arb.hpp"
#include "karb/generator.hpp"
#include "karb/optstruct.hpp"
#include "karb/oracle.hpp"

using namespace karb;
using karbtest::graph;

namespace {

bool dual_feasible(const Digraph& d, const CostMap& costs, const DualSolution& dual) {
    for (const Arc& a : d.arcs()) {
        Rat sum(0);
        for (const auto& [z, y] : dual.y) {
            bool hin = std::binary_search(z.begin(), z.end(), a.head);
            bool tin = std::binary_search(z.begin(), z.end(), a.tail);
            if (hin && !tin) sum += y;
        }
        Rat za = dual.z.count(a.id) ? dual.z.at(a.id) : Rat(0);
        Rat ca = costs.count(a.id) ? costs.at(a.id) : Rat(0);
        if (sum - za > ca) return false;
        if (za < 0) return false;
    }
    for (const auto& [z, y] : dual.y)
        if (y < 0) return false;
    return true;
}

bool laminar_support(const DualSolution& dual) {
    for (std::size_t i = 0; i < dual.y.size(); ++i)
        for (std::size_t j = i + 1; j < dual.y.size(); ++j) {
            const auto& a = dual.y[i].first;
            const auto& b = dual.y[j].first;
            if (!sets_disjoint(a, b) && !is_subset(a, b) && !is_subset(b, a)) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("single-node cut LP") {
    // k parallel root arcs of cost 1 into the only non-root node
    Digraph d = graph(2, {{0, 1}, {0, 1}, {0, 1}});
    CostMap c = karbtest::costs_of({1, 1, 1});
    auto lp = solve_primal_lp(d, c, 0, 2);
    CHECK(lp.objective == Rat(2));
    Rat mass(0);
    for (const auto& [id, x] : lp.x) {
        CHECK(x >= 0);
        CHECK(x <= 1);
        mass += x;
    }
    CHECK(mass == Rat(2));

    CostMap zero = karbtest::costs_of({0, 0, 0});
    auto lp0 = solve_primal_lp(d, zero, 0, 2);
    CHECK(lp0.objective == Rat(0));
    auto dual0 = extract_dual(d, zero, 2, lp0);
    CHECK(dual0.y.empty());
    CHECK(dual0.z.empty());

    Digraph bad = graph(2, {{1, 0}});
    CHECK_THROWS_AS(solve_primal_lp(bad, karbtest::costs_of({0}), 0, 1), std::invalid_argument);
}

TEST_CASE("LP optimum equals matroid intersection optimum") {
    InstanceGen gen(1234);
    int feasible = 0;
    for (int t = 0; t < 45; ++t) {
        auto gi = gen.problem1_instance(5, 10, 3);
        auto best = min_cost_rooted_k_arb(gi.d, gi.costs, 0, gi.k);
        if (!best) continue;
        Digraph d1 = gi.d.remove_arcs(gi.d.in_arc_ids(0));
        auto lp = solve_primal_lp(d1, gi.costs, 0, gi.k);
        CHECK(lp.objective == best->cost);
        auto dual = extract_dual(d1, gi.costs, gi.k, lp);
        CHECK(dual.objective == best->cost);  // exact strong duality
        CHECK(dual_feasible(d1, gi.costs, dual));
        auto flat = uncross(d1, gi.costs, gi.k, dual);
        CHECK(flat.objective == best->cost);
        CHECK(dual_feasible(d1, gi.costs, flat));
        CHECK(laminar_support(flat));
        ++feasible;
    }
    CHECK(feasible > 10);
}

TEST_CASE("uncross merges a crossing pair") {
    // star from the root; every arc enters exactly the sets holding its head,
    // so shifting mass to intersection and union preserves all entering sums
    Digraph d = graph(4, {{0, 1}, {0, 2}, {0, 3}});
    CostMap c = karbtest::costs_of({1, 1, 1});
    DualSolution crossing;
    crossing.y.push_back({{1, 2}, Rat(1, 2)});
    crossing.y.push_back({{2, 3}, Rat(1, 2)});
    Rat obj(0);
    for (auto& [z, y] : crossing.y) obj += Rat(1) * y;  // k = 1
    crossing.z.clear();
    crossing.objective = obj;
    auto flat = uncross(d, c, 1, crossing);
    CHECK(laminar_support(flat));
    std::map<std::vector<int>, Rat> got(flat.y.begin(), flat.y.end());
    CHECK(got.at({2}) == Rat(1, 2));
    CHECK(got.at({1, 2, 3}) == Rat(1, 2));
    CHECK(flat.objective == crossing.objective);

    // already laminar support is untouched
    auto again = uncross(d, c, 1, flat);
    CHECK(again.y == flat.y);
}

TEST_CASE("classification examples") {
    // an arc strictly costlier than anything an optimum uses is forbidden
    Digraph d = graph(3, {{0, 1}, {1, 2}, {0, 2}, {1, 2}});
    CostMap c;
    c[0] = Rat(1);
    c[1] = Rat(1);
    c[2] = Rat(1);
    c[3] = Rat(50);
    auto os = optimality_structure(d, c, 0, 1);
    CHECK(std::count(os.a0.begin(), os.a0.end(), 3) == 1);
    CHECK(os.opt_cost == Rat(2));

    // all costs zero: nothing mandatory, every arborescence optimal
    CostMap zero = karbtest::costs_of({0, 0, 0, 0});
    auto os0 = optimality_structure(d, zero, 0, 1);
    CHECK(os0.a1.empty());
    CHECK(os0.opt_cost == Rat(0));
}

TEST_CASE("characterization is exact on small instances") {
    InstanceGen gen(5557);
    int feasible = 0;
    for (int t = 0; t < 40; ++t) {
        auto gi = gen.problem1_instance(5, 11, 3);
        if (gen.pick(0, 2) == 0)
            for (auto& [id, cv] : gi.costs) cv = Rat(gen.pick(0, 1));
        Digraph d1 = gi.d.remove_arcs(gi.d.in_arc_ids(0));
        std::vector<std::vector<int>> all;
        try {
            all = oracle::enumerate_rooted_k_arbs(d1, 0, gi.k, {15, 14});
        } catch (const BoundError&) {
            continue;
        }
        if (all.empty()) continue;
        ++feasible;
        auto os = optimality_structure(d1, gi.costs, 0, gi.k);
        CHECK(os.dual.objective == os.opt_cost);

        std::set<std::vector<int>> optima;
        for (const auto& f : all) {
            Rat cost(0);
            for (int id : f) cost += gi.costs[id];
            if (cost == os.opt_cost) optima.insert(f);
        }
        std::set<std::vector<int>> characterized;
        for (const auto& f : all) {
            bool ok = true;
            for (int id : os.a1)
                if (!std::binary_search(f.begin(), f.end(), id)) ok = false;
            for (int id : os.a0)
                if (std::binary_search(f.begin(), f.end(), id)) ok = false;
            if (ok && is_L_tight(d1, f, os.l, 0, gi.k)) characterized.insert(f);
        }
        CHECK(optima == characterized);
    }
    CHECK(feasible > 8);
}

TEST_CASE("debug dump shape") {
    Digraph d = graph(2, {{0, 1}, {0, 1}});
    auto os = optimality_structure(d, karbtest::costs_of({1, 3}), 0, 1);
    std::string j = dump_structure_json(os);
    CHECK(j.find("\"x\"") != std::string::npos);
    CHECK(j.find("\"A0\"") != std::string::npos);
    CHECK(j.find("/") != std::string::npos);  // rationals as p/q
}
