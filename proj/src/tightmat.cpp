#include "karb/tightmat.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "karb/blocking.hpp"

namespace karb {

namespace {

std::vector<int> sorted_vec(std::span<const int> xs) {
    std::vector<int> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TightContext::TightContext(Digraph dplus, int root, LaminarFamily l, int k, bool check_tight)
    : dplus_(std::move(dplus)), root_(root), l_(std::move(l)), k_(k) {
    if (!dplus_.has_node(root_)) throw std::invalid_argument("root is not a node");
    if (!l_.contains_member(l_.universe()))
        throw std::invalid_argument("context family must contain its universe");
    for (int v : l_.universe())
        if (v == root_) throw std::invalid_argument("family universe must avoid the root");
    if (check_tight && !exists_L_tight(dplus_, root_, k_, l_))
        throw std::invalid_argument("no L-tight rooted k-arborescence in the context digraph");
}

std::vector<int> TightContext::in_star(std::span<const int> w) const {
    return dplus_.entering_arc_ids(w);
}

int TightContext::rank_mw(std::span<const int> w, std::span<const int> e) const {
    std::vector<int> wv = sorted_vec(w);
    std::vector<int> ev = sorted_vec(e);
    if (!l_.contains_member(wv)) throw std::invalid_argument("W must be a member of L");
    {
        auto star = in_star(wv);
        std::sort(star.begin(), star.end());
        for (int id : ev)
            if (!std::binary_search(star.begin(), star.end(), id))
                throw std::invalid_argument("E must lie in the in-star of W");
    }
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find({wv, ev});
        if (it != cache_.end()) return it->second;
    }

    Contraction c = contract_to_root(dplus_, wv);
    auto lw = l_.members_within(wv);
    const Rat scale(c.graph.arc_count() + 1);
    CostMap costs;
    for (const Arc& a : c.graph.arcs()) {
        int entered = 0;
        for (const auto& m : lw) {
            bool hin = std::binary_search(m.begin(), m.end(), a.head);
            bool tin = std::binary_search(m.begin(), m.end(), a.tail);
            if (hin && !tin) ++entered;
        }
        Rat cost = scale * entered;
        if (std::binary_search(ev.begin(), ev.end(), a.id)) cost -= 1;
        costs[a.id] = cost;
    }
    auto best = min_cost_rooted_k_arb(c.graph, costs, c.contracted_node, k_);
    if (!best)
        throw std::invalid_argument("contraction admits no rooted k-arborescence (bad context)");
    long long entered_total = 0;
    for (int id : best->arb.arcs) {
        const Arc& a = c.graph.arc(id);
        for (const auto& m : lw) {
            bool hin = std::binary_search(m.begin(), m.end(), a.head);
            bool tin = std::binary_search(m.begin(), m.end(), a.tail);
            if (hin && !tin) ++entered_total;
        }
    }
    if (entered_total != static_cast<long long>(k_) * static_cast<long long>(lw.size()))
        throw std::invalid_argument("no L[W]-tight rooted k-arborescence in D_W (bad context)");
    Rat r = Rat(k_) * scale * Rat(lw.size()) - best->cost;
    if (denominator(r) != 1) throw std::logic_error("rank must be integral");
    int rank = static_cast<int>(numerator(r));
    if (rank < 0 || rank > k_) throw std::logic_error("rank out of range");
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        cache_[{wv, ev}] = rank;
    }
    return rank;
}

namespace {

// Arcs of (E cup D[W]) entering X, restricted to heads in `child`.
std::vector<int> entering_child(const Digraph& d, std::span<const int> w,
                                std::span<const int> e, const std::vector<int>& x,
                                const std::vector<int>& child) {
    std::set<int> inw(w.begin(), w.end());
    std::set<int> inx(x.begin(), x.end());
    std::set<int> inchild(child.begin(), child.end());
    std::vector<int> out;
    for (int id : e) {
        const Arc& a = d.arc(id);
        if (inchild.count(a.head)) out.push_back(id);  // E tails live outside W
    }
    for (const Arc& a : d.arcs()) {
        if (!inw.count(a.tail) || !inw.count(a.head)) continue;
        if (inchild.count(a.head) && !inx.count(a.tail)) out.push_back(a.id);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

int TightContext::rank_recursive(std::span<const int> w, std::span<const int> e,
                                 int max_children) const {
    std::vector<int> wv = sorted_vec(w);
    std::vector<int> ev = sorted_vec(e);
    if (!l_.contains_member(wv)) throw std::invalid_argument("W must be a member of L");
    if (wv.size() == 1) return std::min<int>(k_, static_cast<int>(ev.size()));
    auto children = l_.maximal_children(wv);
    int c = static_cast<int>(children.size());
    if (c > max_children)
        throw BoundError("rank_recursive: too many maximal children; use rank_mw");

    int best = k_;  // the empty subpartition contributes k(0-1) with empty sum
    std::vector<int> assign(c, 0);
    std::function<void(int, int)> rec = [&](int i, int groups) {
        if (i == c) {
            if (groups == 0) return;  // already accounted by `best` init
            std::vector<std::vector<int>> unions(groups);
            for (int j = 0; j < c; ++j)
                if (assign[j] > 0)
                    unions[assign[j] - 1].insert(unions[assign[j] - 1].end(),
                                                 children[j].begin(), children[j].end());
            int value = -k_ * (groups - 1);
            for (int g = 0; g < groups; ++g) {
                std::sort(unions[g].begin(), unions[g].end());
                for (int j = 0; j < c; ++j) {
                    if (assign[j] != g + 1) continue;
                    auto sub = entering_child(dplus_, wv, ev, unions[g], children[j]);
                    value += rank_recursive(children[j], sub, max_children);
                }
            }
            best = std::min(best, value);
            return;
        }
        for (int g = 0; g <= std::min(groups + 1, c); ++g) {
            assign[i] = g;
            rec(i + 1, std::max(groups, g));
        }
        assign[i] = 0;
    };
    rec(0, 0);
    return best;
}

int TightContext::rank_oplus(std::span<const int> w, std::span<const int> x,
                             std::span<const int> e) const {
    std::vector<int> wv = sorted_vec(w);
    std::vector<int> xv = sorted_vec(x);
    int total = 0;
    for (const auto& child : l_.maximal_children(wv)) {
        if (!is_subset(child, xv)) continue;
        auto sub = entering_child(dplus_, wv, e, xv, child);
        total += rank_mw(child, sub);
    }
    return total;
}

namespace {

void validate_family(const Digraph& d, int s, const MatroidFamily& per_node, int k) {
    for (int v : d.nodes()) {
        if (v == s) continue;
        auto in = d.in_arc_ids(v);
        std::sort(in.begin(), in.end());
        auto it = per_node.per_node.find(v);
        if (it == per_node.per_node.end())
            throw std::invalid_argument("per-node matroid missing");
        if (it->second->ground_set() != in)
            throw std::invalid_argument("per-node matroid ground set is not the in-star");
        if (it->second->rank(in) != k)
            throw std::invalid_argument("per-node matroids must have rank k");
    }
}

int r_oplus_minus(const Digraph& d, int s, const MatroidFamily& per_node,
                  const std::set<int>& removed, const std::vector<int>& x,
                  bool induced_only) {
    std::set<int> inx(x.begin(), x.end());
    int total = 0;
    for (int v : x) {
        std::vector<int> sub;
        for (int id : d.in_arc_ids(v)) {
            const Arc& a = d.arc(id);
            if (removed.count(id)) continue;
            if (inx.count(a.tail)) continue;
            if (induced_only && a.tail == s) continue;
            sub.push_back(id);
        }
        std::sort(sub.begin(), sub.end());
        total += per_node.per_node.at(v)->rank(sub);
    }
    return total;
}

std::vector<int> nonroot_nodes(const Digraph& d, int s) {
    std::vector<int> out;
    for (int v : d.nodes())
        if (v != s) out.push_back(v);
    return out;
}

}  // namespace

int p_value(const Digraph& d, int s, const MatroidFamily& per_node, int k,
            std::span<const int> e) {
    validate_family(d, s, per_node, k);
    auto rest = nonroot_nodes(d, s);
    if (rest.size() > 16) throw BoundError("p_value: node set too large for enumeration");
    for (int id : e)
        if (d.arc(id).tail != s) throw std::invalid_argument("E must leave the root");
    std::set<int> removed(e.begin(), e.end());
    int best = 0;
    bool first = true;
    for (unsigned mask = 1; mask < (1u << rest.size()); ++mask) {
        std::vector<int> x;
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (mask & (1u << i)) x.push_back(rest[i]);
        int value = k - r_oplus_minus(d, s, per_node, removed, x, false);
        if (first || value > best) best = value;
        first = false;
    }
    return best;
}

int p_truncation(const Digraph& d, int s, const MatroidFamily& per_node, int k,
                 std::span<const int> e) {
    validate_family(d, s, per_node, k);
    auto rest = nonroot_nodes(d, s);
    if (rest.size() > 10) throw BoundError("p_truncation: node set too large");
    std::set<int> removed(e.begin(), e.end());
    int n = static_cast<int>(rest.size());
    int best = 0;  // the empty subpartition
    std::vector<int> assign(n, 0);
    std::function<void(int, int)> rec = [&](int i, int groups) {
        if (i == n) {
            if (groups == 0) return;
            int value = 0;
            for (int g = 1; g <= groups; ++g) {
                std::vector<int> x;
                for (int j = 0; j < n; ++j)
                    if (assign[j] == g) x.push_back(rest[j]);
                value += k - r_oplus_minus(d, s, per_node, removed, x, false);
            }
            best = std::max(best, value);
            return;
        }
        for (int g = 0; g <= std::min(groups + 1, n); ++g) {
            assign[i] = g;
            rec(i + 1, std::max(groups, g));
        }
        assign[i] = 0;
    };
    rec(0, 0);
    return best;
}

bool p_separable(const Digraph& d, int s, const MatroidFamily& per_node, int k,
                 std::span<const int> e) {
    std::vector<int> ev(e.begin(), e.end());
    std::sort(ev.begin(), ev.end());
    int n = static_cast<int>(ev.size());
    if (n < 2) return false;
    int whole = p_value(d, s, per_node, k, ev);
    std::vector<int> assign(n, 0);
    bool found = false;
    std::function<void(int, int)> rec = [&](int i, int groups) {
        if (found) return;
        if (i == n) {
            if (groups < 2) return;
            int sum = 0;
            for (int g = 1; g <= groups; ++g) {
                std::vector<int> part;
                for (int j = 0; j < n; ++j)
                    if (assign[j] == g) part.push_back(ev[j]);
                sum += p_value(d, s, per_node, k, part);
            }
            if (whole <= sum) found = true;
            return;
        }
        for (int g = 1; g <= std::min(groups + 1, n); ++g) {
            assign[i] = g;
            rec(i + 1, std::max(groups, g));
        }
    };
    rec(0, 0);
    return found;
}

bool bs_conditions_hold(const Digraph& d, int s, const MatroidFamily& per_node, int k) {
    validate_family(d, s, per_node, k);
    auto rest = nonroot_nodes(d, s);
    if (rest.size() > 10) throw BoundError("bs_conditions_hold: node set too large");
    std::set<int> removed;
    for (unsigned mask = 1; mask < (1u << rest.size()); ++mask) {
        std::vector<int> x;
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (mask & (1u << i)) x.push_back(rest[i]);
        if (r_oplus_minus(d, s, per_node, removed, x, false) < k) return false;
    }
    int n = static_cast<int>(rest.size());
    std::vector<int> assign(n, 0);
    bool ok = true;
    std::function<void(int, int)> rec = [&](int i, int groups) {
        if (!ok) return;
        if (i == n) {
            int sum = 0;
            for (int g = 1; g <= groups; ++g) {
                std::vector<int> x;
                for (int j = 0; j < n; ++j)
                    if (assign[j] == g) x.push_back(rest[j]);
                sum += k - r_oplus_minus(d, s, per_node, removed, x, true);
            }
            if (sum > k) ok = false;
            return;
        }
        for (int g = 0; g <= std::min(groups + 1, n); ++g) {
            assign[i] = g;
            rec(i + 1, std::max(groups, g));
        }
        assign[i] = 0;
    };
    rec(0, 0);
    return ok;
}

MandatoryArcTransform mandatory_arc_transform(const Digraph& d, const LaminarFamily& l, int s,
                                              int arc_id, int k) {
    const Arc& a = d.arc(arc_id);
    if (a.tail == s || a.head == s)
        throw std::invalid_argument("mandatory arc transform needs an arc avoiding the root");
    std::vector<int> v_single{a.head};
    if (!l.contains_member(v_single))
        throw std::invalid_argument("the head singleton must be a member of L");
    int x = d.fresh_node_id();
    std::vector<int> nodes = d.nodes();
    nodes.push_back(x);
    std::vector<Arc> arcs;
    for (const Arc& b : d.arcs())
        if (b.id != arc_id) arcs.push_back(b);
    int next = d.fresh_arc_id();
    std::vector<int> bundle;
    arcs.push_back(Arc{next, a.tail, x});
    bundle.push_back(next++);
    arcs.push_back(Arc{next, x, a.head});
    bundle.push_back(next++);
    for (int i = 0; i < k - 1; ++i) {
        arcs.push_back(Arc{next, a.head, x});
        bundle.push_back(next++);
    }
    std::vector<int> universe = l.universe();
    universe.push_back(x);
    std::vector<std::vector<int>> members;
    for (const auto& m : l.members()) {
        std::vector<int> grown = m;
        if (std::binary_search(m.begin(), m.end(), a.head)) grown.push_back(x);
        members.push_back(std::move(grown));
    }
    return MandatoryArcTransform{Digraph(std::move(nodes), std::move(arcs)),
                                 LaminarFamily::build(std::move(universe), std::move(members)),
                                 x, std::move(bundle)};
}

std::vector<std::map<int, int>> root_vectors_of_optima(const Digraph& d, const CostMap& costs,
                                                       int k,
                                                       const oracle::OracleBounds& bounds) {
    auto all = oracle::enumerate_k_arbs(d, k, bounds);
    std::optional<Rat> best;
    for (const auto& f : all) {
        Rat c(0);
        for (int id : f) {
            auto it = costs.find(id);
            if (it != costs.end()) c += it->second;
        }
        if (!best || c < *best) best = c;
    }
    std::set<std::map<int, int>> vectors;
    for (const auto& f : all) {
        Rat c(0);
        for (int id : f) {
            auto it = costs.find(id);
            if (it != costs.end()) c += it->second;
        }
        if (best && c == *best) vectors.insert(root_vector(d, f, k));
    }
    return {vectors.begin(), vectors.end()};
}

bool root_vector_exchange_holds(const std::vector<std::map<int, int>>& vectors) {
    std::set<std::map<int, int>> all(vectors.begin(), vectors.end());
    for (const auto& q : vectors)
        for (const auto& q2 : vectors) {
            if (q == q2) continue;
            for (const auto& [v, qv] : q) {
                if (qv <= q2.at(v)) continue;
                bool found = false;
                for (const auto& [u, qu] : q) {
                    if (qu >= q2.at(u)) continue;
                    std::map<int, int> moved = q;
                    moved[v] -= 1;
                    moved[u] += 1;
                    if (all.count(moved)) {
                        found = true;
                        break;
                    }
                }
                if (!found) return false;
            }
        }
    return true;
}

}  // namespace karb
