#include "karb/blocking.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "karb/arb.hpp"
#include "karb/flow.hpp"

namespace karb {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::EmptyFamily: return "emptyFamily";
        case Provenance::MandatoryArc: return "mandatoryArc";
        case Provenance::SmallSearch: return "smallSearch";
        case Provenance::FPairFormula: return "fPairFormula";
    }
    return "?";
}

namespace {

std::vector<int> sorted_vec(std::span<const int> xs) {
    std::vector<int> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return v;
}

void require_z_in_w(std::span<const int> w, std::span<const int> z) {
    if (z.empty()) throw std::invalid_argument("Z must be nonempty");
    std::set<int> inside(w.begin(), w.end());
    for (int v : z)
        if (!inside.count(v)) throw std::invalid_argument("Z must be a subset of W");
}

// The maximal member of L[W] that arc (tail -> head) leaves, or {tail}.
// Members containing the tail but not the head form a chain by laminarity.
std::vector<int> shadow_set(const std::vector<std::vector<int>>& lw, int tail, int head) {
    const std::vector<int>* best = nullptr;
    for (const auto& m : lw) {
        bool tin = std::binary_search(m.begin(), m.end(), tail);
        bool hin = std::binary_search(m.begin(), m.end(), head);
        if (tin && !hin && (!best || m.size() > best->size())) best = &m;
    }
    if (!best) return {tail};
    return *best;
}

}  // namespace

std::pair<int, std::vector<int>> f_w(const Digraph& d, const LaminarFamily& l,
                                     std::span<const int> w, std::span<const int> z) {
    require_z_in_w(w, z);
    std::set<int> inw(w.begin(), w.end());
    std::set<int> inz(z.begin(), z.end());
    auto lw = l.members_within(w);
    std::vector<int> counted;
    for (const Arc& a : d.arcs()) {
        if (!inw.count(a.tail) || !inw.count(a.head)) continue;
        if (!inz.count(a.head) || inz.count(a.tail)) continue;
        bool excluded = false;
        for (const auto& m : lw) {
            if (sets_disjoint(m, std::vector<int>(inz.begin(), inz.end()))) continue;
            bool tin = std::binary_search(m.begin(), m.end(), a.tail);
            bool hin = std::binary_search(m.begin(), m.end(), a.head);
            if (tin && !hin) {
                excluded = true;
                break;
            }
        }
        if (!excluded) counted.push_back(a.id);
    }
    return {static_cast<int>(counted.size()), counted};
}

int f_w_shadow(const Digraph& d, const LaminarFamily& l, std::span<const int> w,
               std::span<const int> z) {
    require_z_in_w(w, z);
    std::set<int> inw(w.begin(), w.end());
    std::vector<int> zv = sorted_vec(z);
    auto lw = l.members_within(w);
    std::vector<int> wv = sorted_vec(w);
    int count = 0;
    for (const Arc& a : d.arcs()) {
        if (!inw.count(a.tail) || !inw.count(a.head)) continue;
        if (!std::binary_search(zv.begin(), zv.end(), a.head)) continue;
        auto t = shadow_set(lw, a.tail, a.head);
        if (t == wv) throw std::logic_error("shadow set cannot be W itself");
        if (sets_disjoint(t, zv)) ++count;
    }
    return count;
}

Digraph relocate_tails(const Digraph& d, const LaminarFamily& l, std::span<const int> w,
                       std::span<const int> z) {
    require_z_in_w(w, z);
    std::set<int> inw(w.begin(), w.end());
    std::vector<int> zv = sorted_vec(z);
    auto lw = l.members_within(w);
    std::vector<Arc> arcs;
    for (const Arc& a : d.arcs()) {
        Arc copy = a;
        if (inw.count(a.tail) && inw.count(a.head) &&
            std::binary_search(zv.begin(), zv.end(), a.head) &&
            !std::binary_search(zv.begin(), zv.end(), a.tail)) {
            // Move the tail into W' cap Z for the maximal qualifying member.
            const std::vector<int>* pick = nullptr;
            for (const auto& m : lw) {
                bool tin = std::binary_search(m.begin(), m.end(), a.tail);
                bool hin = std::binary_search(m.begin(), m.end(), a.head);
                if (!tin || hin) continue;
                if (sets_disjoint(m, zv)) continue;
                if (!pick || m.size() > pick->size()) pick = &m;
            }
            if (pick) {
                for (int v : *pick)
                    if (std::binary_search(zv.begin(), zv.end(), v)) {
                        copy.tail = v;
                        break;
                    }
            }
        }
        arcs.push_back(copy);
    }
    return Digraph(d.nodes(), std::move(arcs));
}

FPairWitness min_f_pair(const Digraph& d, const LaminarFamily& l, std::span<const int> w,
                        const BlockingOptions& opts, WorkCounters* counters) {
    std::vector<int> wv = sorted_vec(w);
    int n = static_cast<int>(wv.size());
    if (n < 2) throw std::invalid_argument("min_f_pair needs |W| >= 2");
    if (n > opts.max_pair_set)
        throw BoundError("instance too large for exact pair search (|W| > bound)");
    if (n > 62) throw BoundError("pair search limited to 62 nodes");

    auto lw = l.members_within(wv);
    auto node_index = [&](int v) {
        return static_cast<int>(std::lower_bound(wv.begin(), wv.end(), v) - wv.begin());
    };
    // Arcs of D[W] bucketed by (head, shadow mask); parallel classes collapse
    // to multiplicities.
    std::map<std::pair<int, unsigned long long>, int> classes;
    for (const Arc& a : d.arcs()) {
        if (!std::binary_search(wv.begin(), wv.end(), a.tail) ||
            !std::binary_search(wv.begin(), wv.end(), a.head))
            continue;
        auto t = shadow_set(lw, a.tail, a.head);
        unsigned long long mask = 0;
        for (int v : t) mask |= 1ULL << node_index(v);
        classes[{node_index(a.head), mask}] += 1;
    }
    std::vector<std::tuple<unsigned long long, unsigned long long, int>> arcsum;
    for (const auto& [key, count] : classes)
        arcsum.push_back({1ULL << key.first, key.second, count});

    auto f_of_mask = [&](unsigned long long zmask) {
        int total = 0;
        for (const auto& [head, shadow, count] : arcsum)
            if ((head & zmask) && !(shadow & zmask)) total += count;
        return total;
    };

    long long assignments = 0;
    int best_value = -1;
    unsigned long long best_z1 = 0, best_z2 = 0;
    // Ternary assignment {Z1, Z2, neither}; the lowest assigned node always
    // joins Z1, which halves the space.
    std::vector<int> state(n, 0);
    std::function<void(int, bool)> rec = [&](int i, bool z1_started) {
        if (i == n) {
            unsigned long long z1 = 0, z2 = 0;
            for (int j = 0; j < n; ++j) {
                if (state[j] == 1) z1 |= 1ULL << j;
                if (state[j] == 2) z2 |= 1ULL << j;
            }
            if (!z1 || !z2) return;
            ++assignments;
            int value = f_of_mask(z1) + f_of_mask(z2);
            if (best_value < 0 || value < best_value ||
                (value == best_value && std::pair(z1, z2) < std::pair(best_z1, best_z2))) {
                best_value = value;
                best_z1 = z1;
                best_z2 = z2;
            }
            return;
        }
        state[i] = 0;
        rec(i + 1, z1_started);
        state[i] = 1;
        rec(i + 1, true);
        if (z1_started) {
            state[i] = 2;
            rec(i + 1, true);
        }
        state[i] = 0;
    };
    rec(0, false);
    if (counters) counters->fpair_assignments += assignments;

    FPairWitness out;
    out.w = wv;
    for (int j = 0; j < n; ++j) {
        if (best_z1 & (1ULL << j)) out.z1.push_back(wv[j]);
        if (best_z2 & (1ULL << j)) out.z2.push_back(wv[j]);
    }
    out.value = best_value;
    auto [v1, e1] = f_w(d, l, wv, out.z1);
    auto [v2, e2] = f_w(d, l, wv, out.z2);
    if (v1 + v2 != best_value) throw std::logic_error("shadow f disagrees with definitional f");
    out.e1 = std::move(e1);
    out.e2 = std::move(e2);
    return out;
}

namespace {

// The L-tight arborescence found by the entering-count reduction, if any.
std::optional<std::vector<int>> find_l_tight(const Digraph& d, int s, int k,
                                             const LaminarFamily& l) {
    CostMap entering;
    for (const Arc& a : d.arcs()) entering[a.id] = Rat(0);
    for (const auto& m : l.members()) {
        std::set<int> inside(m.begin(), m.end());
        for (const Arc& a : d.arcs())
            if (inside.count(a.head) && !inside.count(a.tail)) entering[a.id] += 1;
    }
    auto best = min_cost_rooted_k_arb(d, entering, s, k);
    if (!best || best->cost != Rat(k) * Rat(l.size())) return std::nullopt;
    return best->arb.arcs;
}

}  // namespace

bool is_transversal(const Digraph& d, int s, int k, const LaminarFamily& l,
                    std::span<const int> h, WorkCounters* counters) {
    if (counters) counters->transversal_checks += 1;
    Digraph rest = d.remove_arcs(h);
    std::vector<int> usable;
    for (const Arc& a : rest.arcs())
        if (a.head != s) usable.push_back(a.id);
    if (!connectivity_at_least(rest, usable, s, k)) return true;
    return !find_l_tight(rest, s, k, l).has_value();
}

std::optional<std::vector<int>> small_transversal(const Digraph& d, int s, int k,
                                                  const LaminarFamily& l, int max_size,
                                                  WorkCounters* counters) {
    if (max_size < 0) return std::nullopt;
    // Candidates: arcs inside or entering some member, never the root arcs.
    std::vector<int> candidates;
    for (const Arc& a : d.arcs()) {
        if (a.tail == s) continue;
        bool in_scope = false;
        for (const auto& m : l.members()) {
            bool tin = std::binary_search(m.begin(), m.end(), a.tail);
            bool hin = std::binary_search(m.begin(), m.end(), a.head);
            if (hin) {
                in_scope = true;  // enters m, or lies inside m
                break;
            }
            (void)tin;
        }
        if (in_scope) candidates.push_back(a.id);
    }
    std::sort(candidates.begin(), candidates.end());
    int nc = static_cast<int>(candidates.size());

    // Every transversal must hit every L-tight arborescence found so far.
    std::vector<std::set<int>> hit_sets;
    auto record_counterexample = [&](const std::vector<int>& f) {
        std::set<int> cut;
        for (int id : f)
            if (std::binary_search(candidates.begin(), candidates.end(), id)) cut.insert(id);
        hit_sets.push_back(std::move(cut));
    };

    std::vector<int> h;
    std::optional<std::vector<int>> found;
    std::function<bool(int, int)> dfs = [&](int start, int remaining) -> bool {
        if (remaining == 0) {
            for (const auto& cut : hit_sets) {
                bool any = false;
                for (int id : h)
                    if (cut.count(id)) {
                        any = true;
                        break;
                    }
                if (!any) return false;
            }
            if (counters) counters->transversal_checks += 1;
            Digraph rest = d.remove_arcs(h);
            auto f = find_l_tight(rest, s, k, l);
            if (!f) {
                found = h;
                return true;
            }
            record_counterexample(*f);
            return false;
        }
        for (int i = start; i <= nc - remaining; ++i) {
            h.push_back(candidates[i]);
            if (dfs(i + 1, remaining - 1)) return true;
            h.pop_back();
        }
        return false;
    };

    for (int m = 0; m <= max_size; ++m) {
        h.clear();
        if (dfs(0, m)) {
            std::sort(found->begin(), found->end());
            return found;
        }
    }
    return std::nullopt;
}

TransversalResult minimum_transversal_L_tight(const Digraph& d, int s, int k,
                                              const LaminarFamily& l,
                                              const BlockingOptions& opts) {
    TransversalResult res;
    if (!l.contains_member(l.universe()))
        throw std::invalid_argument("the family must be normalized (universe missing)");
    for (int v : l.universe())
        if (!l.contains_member(std::vector<int>{v}))
            throw std::invalid_argument("the family must be normalized (singleton missing)");
    if (!find_l_tight(d, s, k, l))
        throw std::invalid_argument("no L-tight rooted k-arborescence exists");

    auto small = small_transversal(d, s, k, l, k - 1, &res.counters);
    if (small) {
        res.arcs = *small;
        res.size = static_cast<int>(res.arcs.size());
        res.provenance = Provenance::SmallSearch;
    } else {
        std::vector<std::vector<int>> members;
        for (const auto& m : l.members())
            if (m.size() >= 2) members.push_back(m);
        if (members.empty())
            throw std::invalid_argument(
                "the L-tight family cannot be blocked: no member admits a pair");
        std::optional<FPairWitness> best;
        std::vector<std::optional<FPairWitness>> results(members.size());
        int jobs = std::max(1, opts.jobs);
        if (jobs == 1) {
            for (std::size_t i = 0; i < members.size(); ++i)
                results[i] = min_f_pair(d, l, members[i], opts, &res.counters);
        } else {
            std::vector<std::future<FPairWitness>> futs;
            for (std::size_t i = 0; i < members.size(); ++i)
                futs.push_back(std::async(std::launch::async, [&, i] {
                    return min_f_pair(d, l, members[i], opts, nullptr);
                }));
            for (std::size_t i = 0; i < members.size(); ++i) results[i] = futs[i].get();
        }
        for (auto& r : results) {
            if (!best || r->value < best->value ||
                (r->value == best->value &&
                 std::tie(r->w, r->z1, r->z2) < std::tie(best->w, best->z1, best->z2)))
                best = std::move(*r);
        }
        // E1 and E2 are disjoint: their heads lie in disjoint Z's.
        std::set<int> h_set(best->e1.begin(), best->e1.end());
        for (int id : best->e2)
            if (!h_set.insert(id).second) throw std::logic_error("E1 and E2 must be disjoint");
        if (static_cast<int>(h_set.size()) != best->value)
            throw std::logic_error("|E1 u E2| must equal f(Z1)+f(Z2)");
        std::vector<int> h(h_set.begin(), h_set.end());
        for (int i = 0; i < k - 1; ++i) h.pop_back();  // drop the k-1 largest ids
        if (static_cast<int>(h.size()) != best->value - k + 1)
            throw std::logic_error("transversal size must be value-k+1");
        res.arcs = h;
        res.size = static_cast<int>(h.size());
        res.provenance = Provenance::FPairFormula;
        res.witness = std::move(best);
    }
    if (!is_transversal(d, s, k, l, res.arcs, &res.counters))
        throw std::logic_error("emitted arc set failed transversal re-verification");
    return res;
}

namespace {

LaminarFamily lift_to_universe(const LaminarFamily& inner, const std::vector<int>& universe) {
    return LaminarFamily::build(universe, inner.members()).normalized();
}

}  // namespace

TransversalResult minimum_transversal_rooted(const Digraph& d, const CostMap& costs, int s,
                                             int k, const BlockingOptions& opts) {
    TransversalResult res;
    if (d.node_count() == 1)
        throw std::invalid_argument(
            "the family consists of the empty arborescence; no transversal exists");
    Digraph d1 = d.remove_arcs(d.in_arc_ids(s));
    auto feasible = min_cost_rooted_k_arb(d1, costs, s, k);
    if (!feasible) {
        res.provenance = Provenance::EmptyFamily;
        return res;
    }
    OptimalityStructure os = optimality_structure(d1, costs, s, k, &res.counters);
    res.opt_cost = os.opt_cost;
    if (!os.a1.empty()) {
        res.arcs = {*std::min_element(os.a1.begin(), os.a1.end())};
        res.size = 1;
        res.provenance = Provenance::MandatoryArc;
    } else {
        Digraph d2 = d1.remove_arcs(os.a0);
        LaminarFamily lhat = lift_to_universe(os.l, d2.nodes());
        Extension ext = build_extension(d2, d2.arc_count() + k);
        TransversalResult inner = minimum_transversal_L_tight(ext.graph, ext.root, k, lhat, opts);
        res.arcs = inner.arcs;
        res.size = inner.size;
        res.provenance = inner.provenance;
        res.witness = inner.witness;
        res.counters.transversal_checks += inner.counters.transversal_checks;
        res.counters.fpair_assignments += inner.counters.fpair_assignments;
        for (int id : res.arcs)
            if (!d1.has_arc(id)) throw std::logic_error("transversal leaked an extension arc");
    }
    auto after = min_cost_rooted_k_arb(d1.remove_arcs(res.arcs), costs, s, k);
    if (after && after->cost == os.opt_cost)
        throw std::logic_error("an optimal rooted k-arborescence survives the transversal");
    return res;
}

TransversalResult minimum_transversal(const Digraph& d, const CostMap& costs, int k,
                                      const BlockingOptions& opts) {
    TransversalResult res;
    if (d.node_count() == 1)
        throw std::invalid_argument(
            "the family consists of the empty arborescence; no transversal exists");
    Rat beta(1);
    for (const Arc& a : d.arcs()) {
        auto it = costs.find(a.id);
        if (it != costs.end()) beta += it->second;
    }
    CostExtension ext = build_cost_extension(d, costs, d.arc_count() + k, beta);
    auto rooted = min_cost_rooted_k_arb(ext.graph, ext.costs, ext.root, k);
    if (!rooted) throw std::logic_error("extension must admit a rooted k-arborescence");
    int used_ext = 0;
    for (int id : rooted->arb.arcs)
        if (!d.has_arc(id)) ++used_ext;
    if (used_ext != k) {
        res.provenance = Provenance::EmptyFamily;  // d has no k-arborescence
        return res;
    }

    OptimalityStructure os = optimality_structure(ext.graph, ext.costs, ext.root, k,
                                                  &res.counters);
    res.opt_cost = os.opt_cost - Rat(k) * beta;
    for (int id : os.a1)
        if (!d.has_arc(id))
            throw std::logic_error("mandatory arcs must lie in the original arc set");
    if (!os.a1.empty()) {
        res.arcs = {*std::min_element(os.a1.begin(), os.a1.end())};
        res.size = 1;
        res.provenance = Provenance::MandatoryArc;
    } else {
        Digraph d2 = ext.graph.remove_arcs(os.a0);
        LaminarFamily lhat = lift_to_universe(os.l, d2.nodes());
        Extension ext2 = build_extension(d2, d2.arc_count() + k);
        TransversalResult inner = minimum_transversal_L_tight(ext2.graph, ext2.root, k, lhat,
                                                              opts);
        res.arcs = inner.arcs;
        res.size = inner.size;
        res.provenance = inner.provenance;
        res.witness = inner.witness;
        res.counters.transversal_checks += inner.counters.transversal_checks;
        res.counters.fpair_assignments += inner.counters.fpair_assignments;
        for (int id : res.arcs)
            if (!d.has_arc(id)) throw std::logic_error("transversal leaked an extension arc");
    }
    auto after = min_cost_k_arb(d.remove_arcs(res.arcs), costs, k);
    if (after && after->cost == res.opt_cost)
        throw std::logic_error("an optimal k-arborescence survives the transversal");
    return res;
}

TransversalResult solve_l_tight_instance(const Digraph& d, int s, int k,
                                         const std::vector<std::vector<int>>& l_members,
                                         const BlockingOptions& opts) {
    for (const auto& m : l_members)
        for (int v : m)
            if (v == s) throw std::invalid_argument("laminar members must avoid the root");
    Digraph d1 = d.remove_arcs(d.in_arc_ids(s));
    LaminarFamily lhat = LaminarFamily::build(d1.nodes(), l_members).normalized();
    Extension ext = build_extension(d1, d1.arc_count() + k);
    TransversalResult res;
    if (!find_l_tight(ext.graph, ext.root, k, lhat)) {
        res.provenance = Provenance::EmptyFamily;
        return res;
    }
    TransversalResult inner = minimum_transversal_L_tight(ext.graph, ext.root, k, lhat, opts);
    for (int id : inner.arcs)
        if (!d.has_arc(id)) throw std::logic_error("transversal leaked an extension arc");
    return inner;
}

}  // namespace karb
