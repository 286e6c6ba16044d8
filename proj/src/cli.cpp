#include "karb/cli.hpp"

#include <fstream>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "karb/arb.hpp"
#include "karb/blocking.hpp"
#include "karb/generator.hpp"
#include "karb/instance_io.hpp"
#include "karb/oracle.hpp"
#include "karb/optstruct.hpp"
#include "karb/tightmat.hpp"

namespace karb::cli {

namespace {

using json = nlohmann::ordered_json;

struct CommonFlags {
    std::string file;
    bool rooted = false;
    bool l_tight = false;
    int root = -1;
    int k = 0;
    int jobs = 1;
    std::uint64_t seed = 1;
    int max_pair_set = 14;
    bool dump_dual = false;
    std::string json_out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_solve_extras) {
    cmd->add_option("instance", f.file, "instance file")->required();
    cmd->add_flag("--rooted", f.rooted, "block optimal rooted k-arborescences");
    cmd->add_flag("--l-tight", f.l_tight, "block L-tight rooted k-arborescences directly");
    cmd->add_option("--root", f.root, "root node (overrides the instance record)");
    cmd->add_option("--k", f.k, "k (overrides the instance record)");
    cmd->add_option("--jobs", f.jobs, "worker fan-out for pair searches");
    cmd->add_option("--seed", f.seed, "seed for generated inputs");
    cmd->add_option("--max-pair-set", f.max_pair_set, "bound on |W| in the exact pair search");
    if (with_solve_extras) {
        cmd->add_flag("--dump-dual", f.dump_dual, "include the (x,y,z,L,A0,A1) block");
        cmd->add_option("--json-out", f.json_out, "write the JSON report to this path");
    }
}

struct ResolvedProblem {
    Instance inst;
    int k;
    int root = -1;          // meaningful for rooted / l-tight
    std::string name;       // report field
};

ResolvedProblem resolve(const CommonFlags& f) {
    ResolvedProblem r{load_instance_file(f.file), 0, -1, ""};
    if (f.rooted && f.l_tight) throw InputError("--rooted and --l-tight are exclusive");
    if (f.k > 0)
        r.k = f.k;
    else if (r.inst.k)
        r.k = *r.inst.k;
    else
        throw InputError("k is required (instance record or --k)");
    if (f.rooted || f.l_tight) {
        if (f.root >= 0)
            r.root = f.root;
        else if (r.inst.root)
            r.root = *r.inst.root;
        else
            throw InputError("a root is required (instance record or --root)");
        if (!r.inst.d.has_node(r.root)) throw InputError("root is not a node");
    }
    if (f.l_tight) {
        r.name = "blocking-L-tight";
    } else {
        if (!r.inst.costs) {
            if (r.inst.d.arc_count() > 0) throw InputError("cost problems need per-arc costs");
            r.inst.costs = CostMap{};
        }
        r.name = f.rooted ? "blocking-opt-rooted-karb" : "blocking-opt-karb";
    }
    return r;
}

json arc_echo(const Instance& inst, int id) {
    const Arc& a = inst.d.arc(id);
    json j;
    j["id"] = a.id;
    j["tail"] = a.tail;
    j["head"] = a.head;
    if (inst.costs)
        j["cost"] = rat_to_string(inst.costs->at(id));
    else
        j["cost"] = nullptr;
    return j;
}

json witness_json(const std::optional<FPairWitness>& w) {
    if (!w) return nullptr;
    json j;
    j["W"] = w->w;
    j["Z1"] = w->z1;
    j["Z2"] = w->z2;
    j["value"] = w->value;
    j["E1"] = w->e1;
    j["E2"] = w->e2;
    return j;
}

void emit(const json& j, const CommonFlags& f, std::ostream& out) {
    std::string text = j.dump(2);
    text.push_back('\n');
    if (!f.json_out.empty()) {
        std::ofstream file(f.json_out, std::ios::binary);
        if (!file) throw InputError("cannot write " + f.json_out);
        file << text;
    } else {
        out << text;
    }
}

int cmd_solve(const CommonFlags& f, std::ostream& out) {
    ResolvedProblem rp = resolve(f);
    BlockingOptions opts;
    opts.max_pair_set = f.max_pair_set;
    opts.jobs = f.jobs;

    TransversalResult res;
    if (rp.name == "blocking-L-tight")
        res = solve_l_tight_instance(rp.inst.d, rp.root, rp.k, rp.inst.l_members, opts);
    else if (rp.name == "blocking-opt-rooted-karb")
        res = minimum_transversal_rooted(rp.inst.d, *rp.inst.costs, rp.root, rp.k, opts);
    else
        res = minimum_transversal(rp.inst.d, *rp.inst.costs, rp.k, opts);

    json j;
    j["problem"] = rp.name;
    j["k"] = rp.k;
    j["optCost"] = res.opt_cost ? json(rat_to_string(*res.opt_cost)) : json(nullptr);
    json tr = json::array();
    for (int id : res.arcs) tr.push_back(arc_echo(rp.inst, id));
    j["transversal"] = tr;
    j["size"] = res.size;
    j["provenance"] = provenance_name(res.provenance);
    j["witness"] = witness_json(res.witness);
    if (f.dump_dual && rp.name != "blocking-L-tight") {
        if (rp.name == "blocking-opt-rooted-karb") {
            Digraph d1 = rp.inst.d.remove_arcs(rp.inst.d.in_arc_ids(rp.root));
            auto os = optimality_structure(d1, *rp.inst.costs, rp.root, rp.k);
            j["laminarDual"] = json::parse(dump_structure_json(os));
        } else {
            Rat beta(1);
            for (const auto& [id, c] : *rp.inst.costs) beta += c;
            auto ext = build_cost_extension(rp.inst.d, *rp.inst.costs,
                                            rp.inst.d.arc_count() + rp.k, beta);
            auto rooted = min_cost_rooted_k_arb(ext.graph, ext.costs, ext.root, rp.k);
            int used_ext = 0;
            for (int id : rooted->arb.arcs)
                if (!rp.inst.d.has_arc(id)) ++used_ext;
            if (used_ext == rp.k) {
                auto os = optimality_structure(ext.graph, ext.costs, ext.root, rp.k);
                j["laminarDual"] = json::parse(dump_structure_json(os));
            } else {
                j["laminarDual"] = nullptr;  // empty family: no structure
            }
        }
    }
    json timings;
    timings["lpRounds"] = res.counters.lp_rounds;
    timings["lpPivots"] = res.counters.lp_pivots;
    timings["transversalChecks"] = res.counters.transversal_checks;
    timings["fpairAssignments"] = res.counters.fpair_assignments;
    j["timings"] = timings;
    emit(j, f, out);
    return 0;
}

int cmd_verify(const CommonFlags& f, const std::vector<int>& ids, std::ostream& out) {
    ResolvedProblem rp = resolve(f);
    for (int id : ids)
        if (!rp.inst.d.has_arc(id)) throw InputError("candidate arc id does not exist");
    std::vector<int> h(ids.begin(), ids.end());
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());

    json details;
    bool is_trans = false;
    std::optional<int> oracle_size;

    if (rp.name == "blocking-L-tight") {
        Digraph d1 = rp.inst.d.remove_arcs(rp.inst.d.in_arc_ids(rp.root));
        LaminarFamily lhat = LaminarFamily::build(d1.nodes(), rp.inst.l_members).normalized();
        Extension ext = build_extension(d1, d1.arc_count() + rp.k);
        is_trans = is_transversal(ext.graph, ext.root, rp.k, lhat, h);
        try {
            auto rooted = oracle::enumerate_rooted_k_arbs(d1, rp.root, rp.k);
            std::vector<std::vector<int>> fam;
            for (auto& ft : rooted)
                if (is_L_tight(d1, ft, lhat, rp.root, rp.k)) fam.push_back(std::move(ft));
            if (fam.empty())
                oracle_size = 0;
            else if (auto hs = oracle::min_hitting_set(fam))
                oracle_size = static_cast<int>(hs->size());
            details["numTight"] = fam.size();
        } catch (const BoundError&) {
        }
    } else if (rp.name == "blocking-opt-rooted-karb") {
        Digraph d1 = rp.inst.d.remove_arcs(rp.inst.d.in_arc_ids(rp.root));
        auto before = min_cost_rooted_k_arb(d1, *rp.inst.costs, rp.root, rp.k);
        if (!before) {
            is_trans = true;  // empty family: vacuous
            oracle_size = 0;
        } else {
            details["optCost"] = rat_to_string(before->cost);
            auto after = min_cost_rooted_k_arb(d1.remove_arcs(h), *rp.inst.costs, rp.root, rp.k);
            is_trans = !after || after->cost > before->cost;
            if (after) details["optCostAfter"] = rat_to_string(after->cost);
            try {
                auto brute =
                    oracle::brute_min_transversal_rooted(d1, *rp.inst.costs, rp.root, rp.k);
                oracle_size = brute.size;
            } catch (const BoundError&) {
            }
        }
    } else {
        auto before = min_cost_k_arb(rp.inst.d, *rp.inst.costs, rp.k);
        if (!before) {
            is_trans = true;
            oracle_size = 0;
        } else {
            details["optCost"] = rat_to_string(before->cost);
            auto after = min_cost_k_arb(rp.inst.d.remove_arcs(h), *rp.inst.costs, rp.k);
            is_trans = !after || after->cost > before->cost;
            if (after) details["optCostAfter"] = rat_to_string(after->cost);
            try {
                auto brute = oracle::brute_min_transversal(rp.inst.d, *rp.inst.costs, rp.k);
                oracle_size = brute.size;
            } catch (const BoundError&) {
            }
        }
    }

    json j;
    j["isTransversal"] = is_trans;
    if (oracle_size)
        j["isMinimum"] = is_trans && static_cast<int>(h.size()) == *oracle_size;
    else
        j["isMinimum"] = nullptr;
    if (oracle_size) details["oracleMinimum"] = *oracle_size;
    j["details"] = details;
    emit(j, f, out);
    return 0;
}

int cmd_oracle(const CommonFlags& f, std::ostream& out) {
    ResolvedProblem rp = resolve(f);
    json j;
    std::vector<std::map<int, int>> root_vectors;
    if (rp.name == "blocking-L-tight") {
        Digraph d1 = rp.inst.d.remove_arcs(rp.inst.d.in_arc_ids(rp.root));
        LaminarFamily lhat = LaminarFamily::build(d1.nodes(), rp.inst.l_members).normalized();
        auto rooted = oracle::enumerate_rooted_k_arbs(d1, rp.root, rp.k);
        std::vector<std::vector<int>> fam;
        for (auto& ft : rooted)
            if (is_L_tight(d1, ft, lhat, rp.root, rp.k)) fam.push_back(std::move(ft));
        j["numOptima"] = fam.size();
        j["optCost"] = nullptr;
        if (fam.empty()) {
            j["minTransversalSize"] = 0;
            j["witness"] = json::array();
        } else {
            auto hs = oracle::min_hitting_set(fam);
            if (!hs) throw InputError("the family contains the empty arc set");
            j["minTransversalSize"] = hs->size();
            j["witness"] = *hs;
        }
        for (const auto& ft : fam) root_vectors.push_back(root_vector(d1, ft, rp.k));
    } else if (rp.name == "blocking-opt-rooted-karb") {
        Digraph d1 = rp.inst.d.remove_arcs(rp.inst.d.in_arc_ids(rp.root));
        auto brute = oracle::brute_min_transversal_rooted(d1, *rp.inst.costs, rp.root, rp.k);
        j["numOptima"] = brute.num_optima;
        j["optCost"] = brute.family_nonempty ? json(rat_to_string(brute.opt_cost)) : json(nullptr);
        j["minTransversalSize"] = brute.size;
        j["witness"] = brute.arcs;
        for (const auto& ft : brute.optima) root_vectors.push_back(root_vector(d1, ft, rp.k));
    } else {
        auto brute = oracle::brute_min_transversal(rp.inst.d, *rp.inst.costs, rp.k);
        j["numOptima"] = brute.num_optima;
        j["optCost"] = brute.family_nonempty ? json(rat_to_string(brute.opt_cost)) : json(nullptr);
        j["minTransversalSize"] = brute.size;
        j["witness"] = brute.arcs;
        root_vectors = root_vectors_of_optima(rp.inst.d, *rp.inst.costs, rp.k);
    }
    std::set<std::vector<int>> unique_vectors;
    for (const auto& q : root_vectors) {
        std::vector<int> flat;
        for (const auto& [v, qv] : q) flat.push_back(qv);
        unique_vectors.insert(flat);
    }
    j["rootVectors"] = json(unique_vectors);
    std::vector<std::map<int, int>> dedup(root_vectors.begin(), root_vectors.end());
    std::sort(dedup.begin(), dedup.end());
    dedup.erase(std::unique(dedup.begin(), dedup.end()), dedup.end());
    j["exchangeOk"] = root_vector_exchange_holds(dedup);
    emit(j, f, out);
    return 0;
}

int cmd_selftest(const CommonFlags& f, int count, std::ostream& out) {
    InstanceGen gen(f.seed);
    oracle::OracleBounds bounds;
    bounds.max_tree_arcs = 15;
    bounds.max_arcs = 14;
    BlockingOptions opts;
    opts.max_pair_set = f.max_pair_set;
    opts.jobs = f.jobs;

    int failures = 0;
    json checks = json::array();
    for (int i = 0; i < count; ++i) {
        GeneratedInstance gi = gen.problem1_instance();
        json entry;
        entry["instance"] = i;
        entry["nodes"] = gi.d.node_count();
        entry["arcs"] = gi.d.arc_count();
        entry["k"] = gi.k;
        std::string failure;
        try {
            auto brute = oracle::brute_min_transversal(gi.d, gi.costs, gi.k, bounds);
            auto res = minimum_transversal(gi.d, gi.costs, gi.k, opts);
            bool empty_agrees =
                brute.family_nonempty == (res.provenance != Provenance::EmptyFamily);
            if (!empty_agrees) failure = "feasibility disagreement";
            if (failure.empty() && brute.family_nonempty && res.size != brute.size)
                failure = "transversal size mismatch";
            if (failure.empty() && brute.family_nonempty) {
                auto vectors = root_vectors_of_optima(gi.d, gi.costs, gi.k, bounds);
                for (const auto& q : vectors) {
                    int total = 0;
                    for (const auto& [v, qv] : q) total += qv;
                    if (total != gi.k) failure = "root vector sum mismatch";
                }
                if (failure.empty() && !root_vector_exchange_holds(vectors))
                    failure = "root vector exchange failed";
            }
            if (failure.empty() && brute.family_nonempty) {
                Rat beta(1);
                for (const auto& [id, c] : gi.costs) beta += c;
                auto ext = build_cost_extension(gi.d, gi.costs, gi.d.arc_count() + gi.k, beta);
                auto rooted = min_cost_rooted_k_arb(ext.graph, ext.costs, ext.root, gi.k);
                auto parts = decompose(ext.graph, rooted->arb, ext.root, gi.k);
                for (const auto& part : parts)
                    if (!is_rooted_k_arborescence(ext.graph, part, ext.root, 1))
                        failure = "decomposition part invalid";
            }
        } catch (const std::exception& e) {
            failure = e.what();
        }
        entry["passed"] = failure.empty();
        if (!failure.empty()) {
            entry["failure"] = failure;
            ++failures;
        }
        checks.push_back(entry);
    }
    json j;
    j["seed"] = f.seed;
    j["count"] = count;
    j["failures"] = failures;
    j["checks"] = checks;
    emit(j, f, out);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"blocking minimum-cost k-arborescences"};
    app.require_subcommand(1);

    CommonFlags sf, vf, of, tf;
    std::vector<int> verify_ids;
    int selftest_count = 20;

    CLI::App* solve = app.add_subcommand("solve", "run the blocking pipeline");
    add_common(solve, sf, true);
    CLI::App* verify = app.add_subcommand("verify", "check a candidate transversal");
    add_common(verify, vf, true);
    verify->add_option("ids", verify_ids, "candidate arc ids");
    CLI::App* orc = app.add_subcommand("oracle", "brute-force ground truth report");
    add_common(orc, of, true);
    CLI::App* selftest = app.add_subcommand("selftest", "invariant suite on generated instances");
    selftest->add_option("--seed", tf.seed, "generator seed");
    selftest->add_option("--count", selftest_count, "number of generated instances");
    selftest->add_option("--jobs", tf.jobs, "worker fan-out");
    selftest->add_option("--max-pair-set", tf.max_pair_set, "pair search bound");
    selftest->add_option("--json-out", tf.json_out, "write the JSON report to this path");

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return cmd_solve(sf, out);
        if (verify->parsed()) return cmd_verify(vf, verify_ids, out);
        if (orc->parsed()) return cmd_oracle(of, out);
        if (selftest->parsed()) return cmd_selftest(tf, selftest_count, out);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const BoundError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace karb::cli
