#include "karb/optstruct.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "karb/arb.hpp"
#include "karb/flow.hpp"

namespace karb {

namespace {

// ---------------------------------------------------------------------------
// Exact rational primal simplex on equality rows with variable bounds,
// Bland's rule throughout. Columns: structural vars, then one surplus and one
// artificial per row (the artificial block doubles as B^{-1}).

class Simplex {
public:
    Simplex(std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs, int structural,
            std::vector<Rat> upper, std::vector<bool> upper_finite)
        : m_(static_cast<int>(rows.size())), ns_(structural) {
        n_ = ns_ + 2 * m_;
        low_.assign(n_, Rat(0));
        up_ = std::move(upper);
        up_finite_ = std::move(upper_finite);
        up_.resize(n_, Rat(0));
        up_finite_.resize(n_, false);  // surplus and artificials: [0, inf)
        tab_.assign(m_, std::vector<Rat>(n_, Rat(0)));
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < ns_; ++j) tab_[i][j] = rows[i][j];
            tab_[i][ns_ + i] = Rat(-1);       // surplus
            tab_[i][ns_ + m_ + i] = Rat(1);   // artificial
        }
        xb_ = std::move(rhs);
        basis_.resize(m_);
        status_.assign(n_, AT_LOWER);
        for (int i = 0; i < m_; ++i) {
            basis_[i] = ns_ + m_ + i;
            status_[ns_ + m_ + i] = BASIC;
        }
        fixed_.assign(n_, false);
    }

    long long pivots() const { return pivots_; }

    // Phase 1 drives the artificials to zero; returns false when infeasible.
    bool solve_two_phase(const std::vector<Rat>& structural_cost) {
        std::vector<Rat> phase1(n_, Rat(0));
        for (int i = 0; i < m_; ++i) phase1[ns_ + m_ + i] = Rat(1);
        run(phase1);
        Rat infeas(0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= ns_ + m_) infeas += xb_[i];
        if (infeas != 0) return false;
        // Pin artificials at zero: they may stay basic at value 0 but can
        // neither re-enter nor drift (the ratio test blocks on both bounds).
        for (int j = ns_ + m_; j < n_; ++j) {
            fixed_[j] = true;
            up_[j] = Rat(0);
            up_finite_[j] = true;
        }
        std::vector<Rat> cost(n_, Rat(0));
        for (int j = 0; j < ns_; ++j) cost[j] = structural_cost[j];
        run(cost);
        cost_ = cost;
        return true;
    }

    Rat value(int j) const {
        if (status_[j] == BASIC) {
            for (int i = 0; i < m_; ++i)
                if (basis_[i] == j) return xb_[i];
            throw std::logic_error("basic variable without a row");
        }
        return status_[j] == AT_LOWER ? low_[j] : up_[j];
    }

    /// y = c_B B^{-1}, read off the artificial block.
    std::vector<Rat> row_duals() const {
        std::vector<Rat> y(m_, Rat(0));
        for (int i = 0; i < m_; ++i)
            for (int r = 0; r < m_; ++r) {
                const Rat& c = cost_[basis_[r]];
                if (c != 0) y[i] += c * tab_[r][ns_ + m_ + i];
            }
        return y;
    }

private:
    enum Status { AT_LOWER, AT_UPPER, BASIC };

    void run(const std::vector<Rat>& cost) {
        while (step(cost)) {
        }
    }

    bool step(const std::vector<Rat>& cost) {
        // Reduced costs, Bland entering: smallest eligible column index.
        int enter = -1, dir = 0;
        Rat d_enter(0);
        for (int j = 0; j < n_ && enter < 0; ++j) {
            if (status_[j] == BASIC || fixed_[j]) continue;
            if (up_finite_[j] && low_[j] == up_[j]) continue;
            Rat d = cost[j];
            for (int i = 0; i < m_; ++i) {
                const Rat& cb = cost[basis_[i]];
                if (cb != 0 && tab_[i][j] != 0) d -= cb * tab_[i][j];
            }
            if (status_[j] == AT_LOWER && d < 0) {
                enter = j;
                dir = 1;
                d_enter = d;
            } else if (status_[j] == AT_UPPER && d > 0) {
                enter = j;
                dir = -1;
                d_enter = d;
            }
        }
        if (enter < 0) return false;

        // Ratio test with bound flip; Bland leaving rule on row ties.
        bool bounded = up_finite_[enter];
        Rat best = bounded ? up_[enter] - low_[enter] : Rat(0);
        int leave_row = -1;  // -1 while the flip is the tightest limit
        for (int i = 0; i < m_; ++i) {
            const Rat& w = tab_[i][enter];
            if (w == 0) continue;
            Rat slope = Rat(dir) * w;
            Rat limit;
            if (slope > 0)
                limit = (xb_[i] - low_[basis_[i]]) / slope;
            else if (up_finite_[basis_[i]])
                limit = (up_[basis_[i]] - xb_[i]) / (-slope);
            else
                continue;
            if (!bounded || limit < best) {
                bounded = true;
                best = limit;
                leave_row = i;
            } else if (limit == best && leave_row != -1 && basis_[i] < basis_[leave_row]) {
                leave_row = i;
            }
        }
        if (!bounded) throw std::logic_error("LP unbounded");
        const Rat delta = best;

        ++pivots_;
        if (leave_row == -1) {
            // Bound flip: the entering variable crosses to its other bound.
            for (int i = 0; i < m_; ++i)
                if (tab_[i][enter] != 0) xb_[i] -= Rat(dir) * delta * tab_[i][enter];
            status_[enter] = status_[enter] == AT_LOWER ? AT_UPPER : AT_LOWER;
            return true;
        }

        int leave = basis_[leave_row];
        Rat enter_val = (dir == 1 ? low_[enter] : up_[enter]) + Rat(dir) * delta;
        for (int i = 0; i < m_; ++i)
            if (i != leave_row && tab_[i][enter] != 0) xb_[i] -= Rat(dir) * delta * tab_[i][enter];
        status_[leave] = (Rat(dir) * tab_[leave_row][enter] > 0) ? AT_LOWER : AT_UPPER;
        if (status_[leave] == AT_UPPER && !up_finite_[leave])
            throw std::logic_error("unbounded variable left at upper bound");
        status_[enter] = BASIC;
        basis_[leave_row] = enter;
        xb_[leave_row] = enter_val;

        const Rat pivot = tab_[leave_row][enter];
        for (int j = 0; j < n_; ++j)
            if (tab_[leave_row][j] != 0) tab_[leave_row][j] /= pivot;
        for (int i = 0; i < m_; ++i) {
            if (i == leave_row) continue;
            const Rat f = tab_[i][enter];
            if (f == 0) continue;
            for (int j = 0; j < n_; ++j)
                if (tab_[leave_row][j] != 0) tab_[i][j] -= f * tab_[leave_row][j];
        }
        return true;
    }

    int m_, ns_, n_;
    std::vector<std::vector<Rat>> tab_;
    std::vector<Rat> xb_;
    std::vector<int> basis_;
    std::vector<Status> status_;
    std::vector<Rat> low_, up_;
    std::vector<bool> up_finite_;
    std::vector<bool> fixed_;
    std::vector<Rat> cost_;
    long long pivots_ = 0;
};

struct Relaxation {
    std::vector<int> vars;                   // arc ids used as LP columns
    std::vector<std::vector<int>> cut_sets;  // sorted node sets
    std::map<int, Rat> x;                    // solution on vars
    std::vector<Rat> duals;                  // per cut row
    Rat objective;
};

Rat cost_of(const CostMap& costs, int id) {
    auto it = costs.find(id);
    return it == costs.end() ? Rat(0) : it->second;
}

void solve_relaxation(const Digraph& d, const CostMap& costs, int k, Relaxation& rel,
                      WorkCounters* counters) {
    int na = static_cast<int>(rel.vars.size());
    int m = static_cast<int>(rel.cut_sets.size());
    std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(na, Rat(0)));
    for (int i = 0; i < m; ++i) {
        std::set<int> inside(rel.cut_sets[i].begin(), rel.cut_sets[i].end());
        for (int j = 0; j < na; ++j) {
            const Arc& a = d.arc(rel.vars[j]);
            if (inside.count(a.head) && !inside.count(a.tail)) rows[i][j] = Rat(1);
        }
    }
    std::vector<Rat> rhs(m, Rat(k));
    std::vector<Rat> upper(na, Rat(1));
    std::vector<bool> finite(na, true);
    Simplex lp(std::move(rows), std::move(rhs), na, std::move(upper), std::move(finite));
    std::vector<Rat> cost(na);
    for (int j = 0; j < na; ++j) cost[j] = cost_of(costs, rel.vars[j]);
    if (!lp.solve_two_phase(cost))
        throw std::logic_error("cut relaxation infeasible despite existence pre-check");
    if (counters) counters->lp_pivots += lp.pivots();
    rel.x.clear();
    rel.objective = Rat(0);
    for (int j = 0; j < na; ++j) {
        Rat v = lp.value(j);
        rel.x[rel.vars[j]] = v;
        if (v != 0) rel.objective += cost[j] * v;
    }
    rel.duals.clear();
    auto y = lp.row_duals();
    for (int i = 0; i < m; ++i) rel.duals.push_back(y[i]);
}

}  // namespace

LpSolution solve_primal_lp(const Digraph& d, const CostMap& costs, int s, int k,
                           WorkCounters* counters) {
    if (!d.has_node(s)) throw std::invalid_argument("root is not a node");
    {
        std::vector<int> all;
        for (const Arc& a : d.arcs())
            if (a.head != s) all.push_back(a.id);
        if (!connectivity_at_least(d, all, s, k))
            throw std::invalid_argument("no rooted k-arborescence exists");
    }
    Relaxation rel;
    // k+1 copies per (tail, head, cost) class suffice: an optimal solution
    // never loads more mass on one class, and with k+1 kept copies no class
    // can be all-mandatory, so the dual extends to the removed twins with
    // z = 0 unchanged.
    Digraph d1 = d.remove_arcs(d.in_arc_ids(s));
    rel.vars = reduce_parallel_classes(d1, costs, k + 1);

    std::set<std::vector<int>> seen;
    for (int round = 0;; ++round) {
        if (round > 1000) throw std::logic_error("cut generation failed to converge");
        if (counters) counters->lp_rounds += 1;
        solve_relaxation(d, costs, k, rel, counters);
        // Separation: an exact min s-v cut under capacities x per node.
        std::vector<std::vector<int>> violated;
        for (int v : d.nodes()) {
            if (v == s) continue;
            MaxFlow<Rat> mf(d.nodes(), s, v);
            for (const auto& [id, xv] : rel.x)
                if (xv > 0) mf.add_arc(d.arc(id).tail, d.arc(id).head, xv);
            Rat flow = mf.run(Rat(k));
            if (flow < Rat(k)) {
                auto side = mf.min_cut_sink_side();
                std::sort(side.begin(), side.end());
                if (seen.insert(side).second) violated.push_back(side);
            }
        }
        if (violated.empty()) break;
        for (auto& z : violated) rel.cut_sets.push_back(std::move(z));
    }

    LpSolution out;
    out.cut_sets = rel.cut_sets;
    out.row_duals = rel.duals;
    out.objective = rel.objective;
    for (const Arc& a : d.arcs()) {
        auto it = rel.x.find(a.id);
        out.x[a.id] = it == rel.x.end() ? Rat(0) : it->second;
    }
    return out;
}

namespace {

Rat entering_sum(const Digraph& d, const DualSolution& dual, int arc_id) {
    const Arc& a = d.arc(arc_id);
    Rat sum(0);
    for (const auto& [z, y] : dual.y) {
        bool head_in = std::binary_search(z.begin(), z.end(), a.head);
        bool tail_in = std::binary_search(z.begin(), z.end(), a.tail);
        if (head_in && !tail_in) sum += y;
    }
    return sum;
}

void finish_dual(const Digraph& d, const CostMap& costs, int k, DualSolution& dual) {
    dual.z.clear();
    Rat obj(0);
    for (const auto& [z, y] : dual.y) obj += Rat(k) * y;
    for (const Arc& a : d.arcs()) {
        Rat slack = entering_sum(d, dual, a.id) - cost_of(costs, a.id);
        if (slack > 0) {
            dual.z[a.id] = slack;
            obj -= slack;
        }
    }
    dual.objective = obj;
}

}  // namespace

DualSolution extract_dual(const Digraph& d, const CostMap& costs, int k, const LpSolution& lp) {
    DualSolution dual;
    for (std::size_t i = 0; i < lp.cut_sets.size(); ++i) {
        if (lp.row_duals.at(i) < 0)
            throw std::logic_error("negative cut dual at optimality");
        if (lp.row_duals.at(i) > 0) dual.y.push_back({lp.cut_sets[i], lp.row_duals.at(i)});
    }
    finish_dual(d, costs, k, dual);
    if (dual.objective != lp.objective)
        throw std::logic_error("exact strong duality violated (dual extraction)");
    return dual;
}

DualSolution uncross(const Digraph& d, const CostMap& costs, int k, const DualSolution& dual) {
    std::map<std::vector<int>, Rat> y;
    for (const auto& [z, v] : dual.y)
        if (v > 0) y[z] += v;
    // One shift per scan: the first properly crossing pair in key order moves
    // min(y_a, y_b) onto intersection and union. Terminates because the total
    // mass is conserved while sum y_Z |Z|^2 strictly grows on a fixed
    // denominator lattice.
    auto shift_once = [&]() -> bool {
        for (auto i = y.begin(); i != y.end(); ++i)
            for (auto j = std::next(i); j != y.end(); ++j) {
                const auto& a = i->first;
                const auto& b = j->first;
                if (sets_disjoint(a, b) || is_subset(a, b) || is_subset(b, a)) continue;
                std::vector<int> inter, uni;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                      std::back_inserter(inter));
                std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                               std::back_inserter(uni));
                Rat eps = std::min(i->second, j->second);
                i->second -= eps;
                j->second -= eps;
                y[inter] += eps;
                y[uni] += eps;
                for (auto it = y.begin(); it != y.end();) {
                    if (it->second == 0)
                        it = y.erase(it);
                    else
                        ++it;
                }
                return true;  // iterators are stale now; rescan from the top
            }
        return false;
    };
    while (shift_once()) {
    }
    DualSolution out;
    for (const auto& [z, v] : y) out.y.push_back({z, v});
    std::sort(out.y.begin(), out.y.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
    });
    finish_dual(d, costs, k, out);
    if (out.objective != dual.objective)
        throw std::logic_error("uncrossing changed the dual objective");
    return out;
}

OptimalityStructure optimality_structure(const Digraph& d, const CostMap& costs, int s, int k,
                                         WorkCounters* counters) {
    auto best = min_cost_rooted_k_arb(d, costs, s, k);
    if (!best) throw std::invalid_argument("no rooted k-arborescence exists");

    OptimalityStructure os;
    os.lp = solve_primal_lp(d, costs, s, k, counters);
    if (os.lp.objective != best->cost)
        throw std::logic_error("LP optimum disagrees with matroid intersection optimum");
    DualSolution raw = extract_dual(d, costs, k, os.lp);
    os.dual = uncross(d, costs, k, raw);
    os.opt_cost = best->cost;

    std::vector<int> universe;
    for (int v : d.nodes())
        if (v != s) universe.push_back(v);
    std::vector<std::vector<int>> members;
    for (const auto& [z, y] : os.dual.y) members.push_back(z);
    os.l = LaminarFamily::build(universe, members).normalized_singletons();

    for (const Arc& a : d.arcs()) {
        Rat slack = cost_of(costs, a.id) -
                    (entering_sum(d, os.dual, a.id) - (os.dual.z.count(a.id) ? os.dual.z.at(a.id) : Rat(0)));
        if (slack > 0) os.a0.push_back(a.id);
        if (os.dual.z.count(a.id) && os.dual.z.at(a.id) > 0) os.a1.push_back(a.id);
    }
    return os;
}

std::string dump_structure_json(const OptimalityStructure& os) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json x = nlohmann::ordered_json::object();
    for (const auto& [id, v] : os.lp.x) x[std::to_string(id)] = rat_to_string(v);
    j["x"] = x;
    nlohmann::ordered_json y = nlohmann::ordered_json::array();
    for (const auto& [z, v] : os.dual.y) y.push_back({{"set", z}, {"value", rat_to_string(v)}});
    j["y"] = y;
    nlohmann::ordered_json z = nlohmann::ordered_json::object();
    for (const auto& [id, v] : os.dual.z) z[std::to_string(id)] = rat_to_string(v);
    j["z"] = z;
    j["L"] = os.l.members();
    j["A0"] = os.a0;
    j["A1"] = os.a1;
    j["optCost"] = rat_to_string(os.opt_cost);
    return j.dump();
}

}  // namespace karb
