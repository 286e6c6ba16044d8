#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "karb/digraph.hpp"
#include "karb/rational.hpp"

namespace karbtest {

/// Digraph from (tail, head) pairs; arc ids follow list order.
inline karb::Digraph graph(int n, const std::vector<std::pair<int, int>>& arcs) {
    std::vector<karb::Arc> list;
    for (std::size_t i = 0; i < arcs.size(); ++i)
        list.push_back(karb::Arc{static_cast<int>(i), arcs[i].first, arcs[i].second});
    return karb::Digraph::with_node_range(n, std::move(list));
}

inline karb::CostMap costs_of(const std::vector<long long>& values) {
    karb::CostMap out;
    for (std::size_t i = 0; i < values.size(); ++i) out[static_cast<int>(i)] = karb::Rat(values[i]);
    return out;
}

inline std::string fixture_path(const std::string& name) {
    const char* dir = std::getenv("KARB_FIXTURES");
    return std::string(dir ? dir : "tests/fixtures") + "/" + name;
}

}  // namespace karbtest
