#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "karb/digraph.hpp"
#include "karb/rational.hpp"

namespace karb {

/// User-facing errors (malformed instances, inconsistent flags). Exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One parsed instance of the text format:
///   n <count>        node count, nodes are 0..n-1
///   k <int>
///   root <node>      optional
///   a <tail> <head> [<p>/<q>]   one per arc, ids are 0,1,... in file order
///   L <node> <node> ...         one laminar member per line
///   expect <json>    oracle fixture trailer
///   # comment
struct Instance {
    Digraph d;
    std::optional<CostMap> costs;
    std::optional<int> root;
    std::optional<int> k;
    std::vector<std::vector<int>> l_members;
    std::vector<std::string> expect;
};

/// Strict parser; malformed lines raise InputError with their line number.
Instance parse_instance(const std::string& text);

Instance load_instance_file(const std::string& path);

std::string serialize_instance(const Instance& inst);

}  // namespace karb
