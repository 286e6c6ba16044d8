#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "karb/digraph.hpp"
#include "karb/laminar.hpp"
#include "karb/rational.hpp"

namespace karb {

struct GeneratedInstance {
    Digraph d;
    CostMap costs;
    int k = 1;
};

/// Seeded instance source for the random suites. Sampling avoids
/// distribution classes whose output is implementation-defined.
class InstanceGen {
public:
    explicit InstanceGen(std::uint64_t seed) : rng_(seed) {}

    int pick(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// |V| in [2,6], |A| <= 14, k in {1,2,3}, costs from a small pool.
    GeneratedInstance problem1_instance(int max_nodes = 6, int max_arcs = 14, int max_k = 3);

    /// A random laminar family over the given universe (members only; callers
    /// normalize as needed).
    std::vector<std::vector<int>> laminar_members(const std::vector<int>& universe,
                                                  int tries);

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace karb
