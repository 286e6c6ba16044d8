#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "karb/rational.hpp"

namespace karb {

/// A matroid presented by its rank function on a ground set of element ids.
/// Queries take sorted unique id vectors. Oracles are pure and reentrant.
class RankOracle {
public:
    virtual ~RankOracle() = default;
    virtual const std::vector<int>& ground_set() const = 0;
    virtual int rank(std::span<const int> elements) const = 0;

    bool is_independent(std::span<const int> elements) const {
        return rank(elements) == static_cast<int>(elements.size());
    }

    /// For independent S and x not in S: nullopt when S+x stays independent,
    /// otherwise the unique circuit of S+x (contains x). The default walks
    /// rank queries; concrete oracles override with combinatorial versions.
    virtual std::optional<std::vector<int>> circuit(std::span<const int> s, int x) const;
};

using OraclePtr = std::shared_ptr<const RankOracle>;

struct UndirectedEdge {
    int id;
    int u;
    int v;
};

/// Free matroid truncated at rank r (uniform matroid) on the given ground set.
OraclePtr uniform_oracle(std::vector<int> ground, int r);

/// Circuit matroid of an undirected (multi)graph; rank = max forest size.
OraclePtr graphic_oracle(std::vector<UndirectedEdge> edges);

/// k-fold graphic matroid (matroid union of k forest matroids), realized by
/// augmenting-path forest packing so that independence comes with a
/// certificate partition into k forests.
OraclePtr k_fold_graphic_oracle(std::vector<UndirectedEdge> edges, int k);

struct PartitionBlock {
    std::vector<int> elements;
    int capacity;
};

/// Independent iff every block is hit at most its capacity.
OraclePtr partition_oracle(std::vector<PartitionBlock> blocks);

/// Direct sum; block ground sets must be disjoint.
OraclePtr direct_sum(std::vector<OraclePtr> parts);

/// r'(E) = min(r(E), k).
OraclePtr k_shorten(OraclePtr inner, int k);

int graphic_rank(const std::vector<UndirectedEdge>& edges);
int k_fold_graphic_rank(const std::vector<UndirectedEdge>& edges, int k);
int uniform_rank(int set_size, int k);

/// The forest partition certifying independence; empty when dependent.
/// forest[i] lists the edge ids assigned to the i-th forest.
std::optional<std::vector<std::vector<int>>> forest_partition(
    const std::vector<UndirectedEdge>& edges, std::span<const int> subset, int k);

struct CommonIndependentSet {
    std::vector<int> elements;  // sorted
    int size = 0;
    std::optional<Rat> cost;
};

/// Maximum-cardinality common independent set via exchange-graph
/// augmenting paths. Ground sets must coincide.
CommonIndependentSet matroid_intersection_max(const RankOracle& m1, const RankOracle& m2);

/// Among common independent sets of size exactly `target`, one of minimum
/// total cost; nullopt if the maximum common size is below target.
/// Successive shortest augmenting paths; all tie-breaking by element id.
std::optional<CommonIndependentSet> matroid_intersection_min_cost(const RankOracle& m1,
                                                                  const RankOracle& m2,
                                                                  const CostMap& cost, int target);

}  // namespace karb
