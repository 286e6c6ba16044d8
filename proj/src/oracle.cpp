#include "karb/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace karb::oracle {

namespace {

void check_bounds(const Digraph& d, int k, const OracleBounds& bounds) {
    long long need = static_cast<long long>(k) * (d.node_count() - 1);
    if (need > bounds.max_tree_arcs)
        throw BoundError("oracle bound exceeded: k(|V|-1) too large");
    if (d.arc_count() > bounds.max_arcs) throw BoundError("oracle bound exceeded: too many arcs");
}

// Backtracking over arcs in id order; prunes on remaining count and on
// in-degree caps (k everywhere, 0 at the root when rooted). The visitor
// returns false to stop the scan.
template <class Visit>
void scan_core(const Digraph& d, std::optional<int> root, int k, Visit&& visit) {
    int need = k * (d.node_count() - 1);
    std::vector<int> ids;
    for (const Arc& a : d.arcs()) {
        if (root && a.head == *root) continue;
        ids.push_back(a.id);
    }
    std::sort(ids.begin(), ids.end());
    if (need > static_cast<int>(ids.size())) return;

    std::map<int, int> indeg;
    std::vector<int> chosen;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (static_cast<int>(chosen.size()) == need) {
            bool ok = root ? is_rooted_k_arborescence(d, chosen, *root, k)
                           : is_k_arborescence(d, chosen, k);
            if (ok) return visit(chosen);
            return true;
        }
        if (i >= ids.size()) return true;
        if (static_cast<int>(ids.size() - i) < need - static_cast<int>(chosen.size())) return true;
        int head = d.arc(ids[i]).head;
        if (indeg[head] < k) {
            indeg[head] += 1;
            chosen.push_back(ids[i]);
            bool go = rec(i + 1);
            chosen.pop_back();
            indeg[head] -= 1;
            if (!go) return false;
        }
        return rec(i + 1);
    };
    rec(0);
}

template <class Visit>
void scan_k_arbs(const Digraph& d, int k, Visit&& visit) {
    scan_core(d, std::nullopt, k, std::forward<Visit>(visit));
}

std::vector<std::vector<int>> enumerate_core(const Digraph& d, std::optional<int> root, int k,
                                             const OracleBounds& bounds) {
    int need = k * (d.node_count() - 1);
    int usable = 0;
    for (const Arc& a : d.arcs())
        if (!(root && a.head == *root)) ++usable;
    std::vector<std::vector<int>> out;
    if (need > usable) return out;
    check_bounds(d, k, bounds);
    scan_core(d, root, k, [&](const std::vector<int>& f) {
        out.push_back(f);
        return true;
    });
    return out;
}

}  // namespace

std::vector<std::vector<int>> enumerate_rooted_k_arbs(const Digraph& d, int s, int k,
                                                      const OracleBounds& bounds) {
    if (!d.has_node(s)) throw std::invalid_argument("root is not a node");
    return enumerate_core(d, s, k, bounds);
}

std::vector<std::vector<int>> enumerate_k_arbs(const Digraph& d, int k,
                                               const OracleBounds& bounds) {
    return enumerate_core(d, std::nullopt, k, bounds);
}

std::vector<std::vector<int>> enumerate_l_tight_k_arbs(const Digraph& d, const LaminarFamily& l,
                                                       int k, const OracleBounds& bounds) {
    std::vector<std::vector<int>> out;
    for (auto& f : enumerate_k_arbs(d, k, bounds))
        if (is_L_tight_unrooted(d, f, l, k)) out.push_back(std::move(f));
    return out;
}

std::optional<std::vector<int>> min_hitting_set(const std::vector<std::vector<int>>& sets) {
    if (sets.empty()) return std::vector<int>{};
    std::set<int> union_arcs;
    for (const auto& s : sets) {
        if (s.empty()) return std::nullopt;  // the empty member cannot be hit
        union_arcs.insert(s.begin(), s.end());
    }
    std::vector<int> cand(union_arcs.begin(), union_arcs.end());
    int nc = static_cast<int>(cand.size());
    std::vector<std::set<int>> fam;
    for (const auto& s : sets) fam.emplace_back(s.begin(), s.end());

    std::vector<int> pick;
    std::function<bool(int, int)> dfs = [&](int start, int remaining) -> bool {
        if (remaining == 0) {
            for (const auto& f : fam) {
                bool hit = false;
                for (int id : pick)
                    if (f.count(id)) {
                        hit = true;
                        break;
                    }
                if (!hit) return false;
            }
            return true;
        }
        for (int i = start; i <= nc - remaining; ++i) {
            pick.push_back(cand[i]);
            if (dfs(i + 1, remaining - 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    for (int m = 1; m <= nc; ++m) {
        pick.clear();
        if (dfs(0, m)) return pick;
    }
    return std::nullopt;  // unreachable: the union itself hits everything
}

namespace {

BruteBlocking blocking_of_family(std::vector<std::vector<int>> optima,
                                 std::optional<Rat> opt_cost) {
    BruteBlocking out;
    out.num_optima = static_cast<int>(optima.size());
    out.family_nonempty = !optima.empty();
    if (opt_cost) out.opt_cost = *opt_cost;
    out.optima = std::move(optima);
    if (!out.family_nonempty) return out;
    auto hit = min_hitting_set(out.optima);
    if (!hit)
        throw std::invalid_argument(
            "the family contains the empty arc set; no transversal exists");
    out.arcs = *hit;
    out.size = static_cast<int>(out.arcs.size());
    return out;
}

BruteBlocking brute_from_enumeration(const CostMap& costs, std::vector<std::vector<int>> all) {
    std::optional<Rat> best;
    for (const auto& f : all) {
        Rat c(0);
        for (int id : f) {
            auto it = costs.find(id);
            if (it != costs.end()) c += it->second;
        }
        if (!best || c < *best) best = c;
    }
    std::vector<std::vector<int>> optima;
    for (auto& f : all) {
        Rat c(0);
        for (int id : f) {
            auto it = costs.find(id);
            if (it != costs.end()) c += it->second;
        }
        if (best && c == *best) optima.push_back(std::move(f));
    }
    return blocking_of_family(std::move(optima), best);
}

}  // namespace

BruteBlocking brute_min_transversal(const Digraph& d, const CostMap& costs, int k,
                                    const OracleBounds& bounds) {
    return brute_from_enumeration(costs, enumerate_k_arbs(d, k, bounds));
}

BruteBlocking brute_min_transversal_rooted(const Digraph& d, const CostMap& costs, int s, int k,
                                           const OracleBounds& bounds) {
    return brute_from_enumeration(costs, enumerate_rooted_k_arbs(d, s, k, bounds));
}

BruteBlocking brute_min_transversal_l_tight(const Digraph& d, const LaminarFamily& l, int k,
                                            const OracleBounds& bounds) {
    return blocking_of_family(enumerate_l_tight_k_arbs(d, l, k, bounds), std::nullopt);
}

bool f_subpartition_inequalities_hold(const Digraph& d, const LaminarFamily& l, int k) {
    for (const auto& w : l.members()) {
        auto children = l.maximal_children(w);
        int c = static_cast<int>(children.size());
        if (c == 0) continue;
        // Assign children to group 0 (excluded) or groups 1..t; every
        // grouping induces one compatible subpartition.
        std::vector<int> assign(c, 0);
        std::function<bool(int, int)> rec = [&](int i, int groups) -> bool {
            if (i == c) {
                if (groups == 0) return true;
                std::vector<std::vector<int>> parts(groups);
                for (int j = 0; j < c; ++j)
                    if (assign[j] > 0)
                        parts[assign[j] - 1].insert(parts[assign[j] - 1].end(),
                                                    children[j].begin(), children[j].end());
                long long sum = 0;
                for (auto& x : parts) {
                    std::sort(x.begin(), x.end());
                    sum += f_w(d, l, w, x).first;
                }
                return sum >= static_cast<long long>(k) * (groups - 1);
            }
            for (int g = 0; g <= std::min(groups + 1, c); ++g) {
                assign[i] = g;
                if (!rec(i + 1, std::max(groups, g))) return false;
            }
            assign[i] = 0;
            return true;
        };
        if (!rec(0, 0)) return false;
    }
    return true;
}

bool f_pair_inequalities_hold(const Digraph& d, const LaminarFamily& l, int k) {
    for (const auto& w : l.members()) {
        if (w.size() < 2) continue;
        if (min_f_pair(d, l, w).value < k) return false;
    }
    return true;
}

namespace {

std::vector<std::vector<std::vector<int>>> laminar_extra_families(int n, int max_members) {
    // Candidate members: proper subsets of {0..n-1} of size >= 2, in
    // (size, lex) order; then every laminar subfamily up to max_members.
    std::vector<std::vector<int>> pool;
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> m;
        for (int v = 0; v < n; ++v)
            if (mask & (1 << v)) m.push_back(v);
        if (static_cast<int>(m.size()) >= 2 && static_cast<int>(m.size()) <= n - 1)
            pool.push_back(std::move(m));
    }
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_members) return;
        for (std::size_t j = i; j < pool.size(); ++j) {
            bool ok = true;
            for (const auto& m : cur)
                if (!sets_disjoint(m, pool[j]) && !is_subset(m, pool[j]) &&
                    !is_subset(pool[j], m)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur.push_back(pool[j]);
            rec(j + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace

std::optional<Fig2Witness> find_fig2_witness(const Fig2SearchSpace& space) {
    const int k = space.k;
    const int n = space.nodes;
    std::vector<std::pair<int, int>> ordered_pairs;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) ordered_pairs.push_back({u, v});
    std::vector<std::pair<int, int>> unordered_pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) unordered_pairs.push_back({u, v});

    auto families = laminar_extra_families(n, space.max_extra_members);
    long long tried = 0;

    // Deterministic order: families outer, arc configurations inner
    // (counting up, so sparse instances come first).
    for (const auto& extras : families) {
        std::vector<int> universe(n);
        for (int v = 0; v < n; ++v) universe[v] = v;
        LaminarFamily l = LaminarFamily::build(universe, extras).normalized();

        long long configs = 1;
        if (space.bidirected_pairs_only) {
            for (std::size_t i = 0; i < unordered_pairs.size(); ++i) configs *= 5;
        } else {
            for (std::size_t i = 0; i < ordered_pairs.size(); ++i)
                configs *= space.max_multiplicity + 1;
        }
        for (long long code = 0; code < configs; ++code) {
            if (space.max_instances >= 0 && tried >= space.max_instances) return std::nullopt;
            ++tried;
            std::vector<Arc> arcs;
            int next = 0;
            long long rest = code;
            if (space.bidirected_pairs_only) {
                for (auto [u, v] : unordered_pairs) {
                    int state = static_cast<int>(rest % 5);
                    rest /= 5;
                    if (state == 1) arcs.push_back(Arc{next++, u, v});
                    if (state == 2) arcs.push_back(Arc{next++, v, u});
                    if (state == 3) {
                        arcs.push_back(Arc{next++, u, v});
                        arcs.push_back(Arc{next++, v, u});
                    }
                    if (state == 4) {
                        arcs.push_back(Arc{next++, u, v});
                        arcs.push_back(Arc{next++, u, v});
                        arcs.push_back(Arc{next++, v, u});
                        arcs.push_back(Arc{next++, v, u});
                    }
                }
            } else {
                for (auto [u, v] : ordered_pairs) {
                    int mult = static_cast<int>(rest % (space.max_multiplicity + 1));
                    rest /= space.max_multiplicity + 1;
                    for (int i = 0; i < mult; ++i) arcs.push_back(Arc{next++, u, v});
                }
            }
            if (static_cast<int>(arcs.size()) < k * (n - 1)) continue;
            Digraph d = Digraph::with_node_range(n, arcs);
            // One backtracking pass, stopping at the first tight witness;
            // the subpartition sweep runs only for the rare survivors.
            bool any_karb = false, any_tight = false;
            scan_k_arbs(d, k, [&](const std::vector<int>& f) {
                any_karb = true;
                if (is_L_tight_unrooted(d, f, l, k)) any_tight = true;
                return !any_tight;  // keep scanning until a tight one shows up
            });
            if (any_tight) continue;
            if (space.require_plain_k_arb && !any_karb) continue;
            if (!f_pair_inequalities_hold(d, l, k)) continue;
            if (!f_subpartition_inequalities_hold(d, l, k)) continue;
            return Fig2Witness{d, extras, l};
        }
    }
    return std::nullopt;
}

}  // namespace karb::oracle
