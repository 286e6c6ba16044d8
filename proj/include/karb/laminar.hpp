#pragma once

#include <span>
#include <vector>

namespace karb {

/// A laminar family over a node universe: any two members are disjoint or
/// nested. Members are kept as sorted node vectors in a canonical order
/// (by size, then lexicographically), so equal families compare equal.
class LaminarFamily {
public:
    LaminarFamily() = default;

    /// Validates pairwise laminarity and membership in the universe; dedupes.
    static LaminarFamily build(std::vector<int> universe,
                               std::vector<std::vector<int>> members);

    /// Adds the universe and all singletons when absent. Idempotent.
    LaminarFamily normalized() const;
    /// Adds all singletons (but not the universe) when absent.
    LaminarFamily normalized_singletons() const;

    const std::vector<int>& universe() const { return universe_; }
    const std::vector<std::vector<int>>& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }

    bool contains_member(std::span<const int> w) const;
    /// Index of the smallest member strictly containing member i, or -1.
    int parent_of(int i) const { return parent_[i]; }

    /// L[W]: members that are subsets of W (including W itself if present).
    std::vector<std::vector<int>> members_within(std::span<const int> w) const;
    /// Maximal members of L[W] - W.
    std::vector<std::vector<int>> maximal_children(std::span<const int> w) const;

private:
    std::vector<int> universe_;
    std::vector<std::vector<int>> members_;
    std::vector<int> parent_;

    void rebuild_parents();
};

bool is_subset(std::span<const int> a, std::span<const int> b);
bool sets_disjoint(std::span<const int> a, std::span<const int> b);

}  // namespace karb
