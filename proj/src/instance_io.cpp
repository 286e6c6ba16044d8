#include "karb/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace karb {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

std::optional<long long> parse_int(const std::string& tok) {
    if (tok.empty()) return std::nullopt;
    std::size_t i = tok[0] == '-' ? 1 : 0;
    if (i == tok.size()) return std::nullopt;
    for (; i < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
    return std::stoll(tok);
}

}  // namespace

Instance parse_instance(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::optional<int> n, k, root;
    std::vector<Arc> arcs;
    CostMap costs;
    bool any_costed = false, any_bare = false;
    std::vector<std::vector<int>> l_members;
    std::vector<std::string> expect;

    auto need_node = [&](long long v, int line_no) {
        if (!n) fail(line_no, "node record required before this line");
        if (v < 0 || v >= *n) fail(line_no, "node id out of range");
        return static_cast<int>(v);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head[0] == '#') continue;
        if (head == "expect") {
            std::string rest;
            std::getline(ls, rest);
            std::size_t start = rest.find_first_not_of(' ');
            expect.push_back(start == std::string::npos ? "" : rest.substr(start));
            continue;
        }
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (head == "n") {
            if (n) fail(lineno, "duplicate node count");
            if (toks.size() != 1) fail(lineno, "expected: n <count>");
            auto v = parse_int(toks[0]);
            if (!v || *v < 1) fail(lineno, "node count must be a positive integer");
            n = static_cast<int>(*v);
        } else if (head == "k") {
            if (k) fail(lineno, "duplicate k");
            if (toks.size() != 1) fail(lineno, "expected: k <int>");
            auto v = parse_int(toks[0]);
            if (!v || *v < 1) fail(lineno, "k must be a positive integer");
            k = static_cast<int>(*v);
        } else if (head == "root") {
            if (root) fail(lineno, "duplicate root");
            if (toks.size() != 1) fail(lineno, "expected: root <node>");
            auto v = parse_int(toks[0]);
            if (!v) fail(lineno, "root must be an integer");
            root = need_node(*v, lineno);
        } else if (head == "a") {
            if (toks.size() != 2 && toks.size() != 3)
                fail(lineno, "expected: a <tail> <head> [<num>/<den>]");
            auto t = parse_int(toks[0]), h = parse_int(toks[1]);
            if (!t || !h) fail(lineno, "arc endpoints must be integers");
            int tail = need_node(*t, lineno), headn = need_node(*h, lineno);
            if (tail == headn) fail(lineno, "self-loops are not allowed");
            int id = static_cast<int>(arcs.size());
            arcs.push_back(Arc{id, tail, headn});
            if (toks.size() == 3) {
                auto r = rat_from_string(toks[2]);
                if (!r) fail(lineno, "malformed cost, expected <num>/<den>");
                if (*r < 0) fail(lineno, "costs must be nonnegative");
                costs[id] = *r;
                any_costed = true;
            } else {
                any_bare = true;
            }
            if (any_costed && any_bare) fail(lineno, "either all arcs carry costs or none");
        } else if (head == "L") {
            if (toks.empty()) fail(lineno, "laminar member must be nonempty");
            std::vector<int> member;
            for (const auto& t2 : toks) {
                auto v = parse_int(t2);
                if (!v) fail(lineno, "laminar member nodes must be integers");
                member.push_back(need_node(*v, lineno));
            }
            l_members.push_back(std::move(member));
        } else {
            fail(lineno, "unknown record '" + head + "'");
        }
    }
    if (!n) throw InputError("instance is missing the node count record");

    Instance inst;
    try {
        inst.d = Digraph::with_node_range(*n, std::move(arcs));
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("invalid digraph: ") + e.what());
    }
    if (any_costed) inst.costs = std::move(costs);
    inst.root = root;
    inst.k = k;
    inst.l_members = std::move(l_members);
    inst.expect = std::move(expect);
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open instance file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "n " << inst.d.node_count() << "\n";
    if (inst.k) out << "k " << *inst.k << "\n";
    if (inst.root) out << "root " << *inst.root << "\n";
    for (const Arc& a : inst.d.arcs()) {
        out << "a " << a.tail << " " << a.head;
        if (inst.costs) out << " " << rat_to_string(inst.costs->at(a.id));
        out << "\n";
    }
    for (const auto& m : inst.l_members) {
        out << "L";
        for (int v : m) out << " " << v;
        out << "\n";
    }
    for (const auto& e : inst.expect) out << "expect " << e << "\n";
    return out.str();
}

}  // namespace karb
