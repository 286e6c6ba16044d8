#include "karb/laminar.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace karb {

bool is_subset(std::span<const int> a, std::span<const int> b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool sets_disjoint(std::span<const int> a, std::span<const int> b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return true;
}

LaminarFamily LaminarFamily::build(std::vector<int> universe,
                                   std::vector<std::vector<int>> members) {
    LaminarFamily fam;
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    fam.universe_ = std::move(universe);

    std::set<std::vector<int>> seen;
    for (auto& m : members) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        if (m.empty()) throw std::invalid_argument("empty laminar member");
        if (!is_subset(m, fam.universe_))
            throw std::invalid_argument("laminar member outside the universe");
        if (seen.insert(m).second) fam.members_.push_back(std::move(m));
    }
    std::sort(fam.members_.begin(), fam.members_.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    for (std::size_t i = 0; i < fam.members_.size(); ++i)
        for (std::size_t j = i + 1; j < fam.members_.size(); ++j) {
            const auto& a = fam.members_[i];
            const auto& b = fam.members_[j];
            if (!sets_disjoint(a, b) && !is_subset(a, b) && !is_subset(b, a))
                throw std::invalid_argument("family is not laminar");
        }
    fam.rebuild_parents();
    return fam;
}

void LaminarFamily::rebuild_parents() {
    parent_.assign(members_.size(), -1);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        int best = -1;
        for (std::size_t j = 0; j < members_.size(); ++j) {
            if (i == j) continue;
            if (members_[j].size() <= members_[i].size()) continue;
            if (!is_subset(members_[i], members_[j])) continue;
            if (best == -1 || members_[j].size() < members_[best].size()) best = static_cast<int>(j);
        }
        parent_[i] = best;
    }
}

LaminarFamily LaminarFamily::normalized() const {
    std::vector<std::vector<int>> members = members_;
    for (int v : universe_) members.push_back({v});
    members.push_back(universe_);
    return build(universe_, std::move(members));
}

LaminarFamily LaminarFamily::normalized_singletons() const {
    std::vector<std::vector<int>> members = members_;
    for (int v : universe_) members.push_back({v});
    return build(universe_, std::move(members));
}

bool LaminarFamily::contains_member(std::span<const int> w) const {
    std::vector<int> key(w.begin(), w.end());
    std::sort(key.begin(), key.end());
    return std::find(members_.begin(), members_.end(), key) != members_.end();
}

std::vector<std::vector<int>> LaminarFamily::members_within(std::span<const int> w) const {
    std::vector<int> key(w.begin(), w.end());
    std::sort(key.begin(), key.end());
    std::vector<std::vector<int>> out;
    for (const auto& m : members_)
        if (is_subset(m, key)) out.push_back(m);
    return out;
}

std::vector<std::vector<int>> LaminarFamily::maximal_children(std::span<const int> w) const {
    std::vector<int> key(w.begin(), w.end());
    std::sort(key.begin(), key.end());
    auto inside = members_within(key);
    std::vector<std::vector<int>> out;
    for (const auto& m : inside) {
        if (m == key) continue;
        bool maximal = true;
        for (const auto& other : inside) {
            if (other == key || other == m) continue;
            if (m.size() < other.size() && is_subset(m, other)) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(m);
    }
    return out;
}

}  // namespace karb
