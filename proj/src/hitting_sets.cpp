#include "persnet/hitting_sets.hpp"

#include <algorithm>

namespace persnet {

std::vector<IndexSet> minimal_sets(std::vector<IndexSet> sets) {
  std::sort(sets.begin(), sets.end(), set_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<IndexSet> out;
  for (auto& s : sets) {
    // Sorted by size, so any subset of s is already in out.
    if (std::none_of(out.begin(), out.end(),
                     [&](const IndexSet& m) { return m.is_subset_of(s); }))
      out.push_back(std::move(s));
  }
  return out;
}

std::vector<IndexSet> minimal_hitting_sets(const std::vector<IndexSet>& edges,
                                           std::size_t universe) {
  std::vector<IndexSet> current{IndexSet(universe)};
  for (const auto& raw : edges) {
    IndexSet edge = raw;
    edge.resize(universe);
    std::vector<IndexSet> next;
    for (const auto& t : current) {
      if (t.intersects(edge)) {
        next.push_back(t);
        continue;
      }
      for (auto h = edge.find_first(); h != IndexSet::npos; h = edge.find_next(h)) {
        IndexSet u = t;
        u.set(h);
        next.push_back(std::move(u));
      }
    }
    current = minimal_sets(std::move(next));
    if (current.empty()) break;
  }
  return current;
}

}  // namespace persnet
