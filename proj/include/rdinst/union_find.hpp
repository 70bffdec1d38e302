#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rdinst {

/// Disjoint sets over dense indices. The representative of a class is always
/// its smallest index, so the partition and the representatives depend only
/// on the multiset of merges, not on their order.
class UnionFind {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t size() const { return parent_.size(); }

  std::size_t find(std::size_t i) {
    check(i);
    std::size_t root = i;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[i] != root) {
      std::size_t next = parent_[i];
      parent_[i] = root;
      i = next;
    }
    return root;
  }

  /// Returns the surviving representative.
  std::size_t merge(std::size_t a, std::size_t b) {
    std::size_t ra = find(a), rb = find(b);
    if (ra == rb) return ra;
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
    return ra;
  }

  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

 private:
  void check(std::size_t i) const {
    if (i >= parent_.size()) throw std::out_of_range("union-find: unregistered element");
  }

  std::vector<std::size_t> parent_;
};

}  // namespace rdinst
