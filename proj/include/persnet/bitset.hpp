#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace persnet {

/// Dense set of small indices. Used for event sets, item sets and pasts.
using IndexSet = boost::dynamic_bitset<>;

inline IndexSet make_set(std::size_t universe,
                         std::initializer_list<std::size_t> members = {}) {
  IndexSet s(universe);
  for (auto m : members) s.set(m);
  return s;
}

template <typename Range>
IndexSet make_set_from(std::size_t universe, const Range& members) {
  IndexSet s(universe);
  for (auto m : members) s.set(static_cast<std::size_t>(m));
  return s;
}

inline std::vector<std::size_t> members(const IndexSet& s) {
  std::vector<std::size_t> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != IndexSet::npos; i = s.find_next(i))
    out.push_back(i);
  return out;
}

/// Union that tolerates operands of different sizes (result has the larger).
inline IndexSet unite(IndexSet a, IndexSet b) {
  if (a.size() < b.size()) a.resize(b.size());
  if (b.size() < a.size()) b.resize(a.size());
  a |= b;
  return a;
}

inline bool intersects_sized(IndexSet a, IndexSet b) {
  if (a.size() < b.size()) a.resize(b.size());
  if (b.size() < a.size()) b.resize(a.size());
  return a.intersects(b);
}

/// Canonical order on sets: by size, then lexicographically on members.
inline bool set_less(const IndexSet& a, const IndexSet& b) {
  if (a.count() != b.count()) return a.count() < b.count();
  return members(a) < members(b);
}

inline bool test_sized(const IndexSet& s, std::size_t i) {
  return i < s.size() && s.test(i);
}

}  // namespace persnet
