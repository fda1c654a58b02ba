#include "support/oracles.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace oracle {

using namespace persnet;

namespace {

std::uint32_t mask_of(const IndexSet& s) {
  std::uint32_t m = 0;
  for (auto i = s.find_first(); i != IndexSet::npos; i = s.find_next(i)) m |= 1u << i;
  return m;
}

IndexSet set_of(std::uint32_t m, std::size_t n) {
  IndexSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (m >> i & 1u) s.set(i);
  return s;
}

std::vector<IndexSet> canonical(std::vector<IndexSet> v) {
  std::sort(v.begin(), v.end(), set_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool connected_set(const EventStructure& es, const IndexSet& x) {
  const auto ms = members(x);
  if (ms.empty()) return true;
  std::set<std::size_t> reached{ms[0]};
  for (bool grew = true; grew;) {
    grew = false;
    for (auto a : ms)
      for (auto b : ms)
        if (reached.contains(a) && !reached.contains(b) && !es.conflict(a, b)) {
          reached.insert(b);
          grew = true;
        }
  }
  return reached.size() == ms.size();
}

}  // namespace

std::vector<IndexSet> all_subsets(std::size_t n) {
  if (n > 20) throw std::invalid_argument("universe too large");
  std::vector<IndexSet> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) out.push_back(set_of(m, n));
  return canonical(std::move(out));
}

// ------------------------------------------------------------- conflict

SaturatedConflict::SaturatedConflict(const PNet& n) : places_(n.num_places()) {
  const std::size_t items = n.num_places() + n.num_transitions();
  if (items > 18) throw std::invalid_argument("too many items for saturation");
  const std::uint32_t full = 1u << items;
  conf_.assign(full, 0);
  auto tbit = [&](TransId t) { return 1u << (places_ + t); };

  for (TransId t = 0; t < n.num_transitions(); ++t)
    for (TransId t2 = t + 1; t2 < n.num_transitions(); ++t2)
      for (PlaceId s : n.pre(t)) {
        const auto& pre2 = n.pre(t2);
        if (!n.persistent(s) && std::find(pre2.begin(), pre2.end(), s) != pre2.end())
          conf_[tbit(t) | tbit(t2)] = 1;
      }

  for (bool changed = true; changed;) {
    changed = false;
    auto set = [&](std::uint32_t m) {
      if (!conf_[m]) {
        conf_[m] = 1;
        changed = true;
      }
    };
    for (std::uint32_t m = 0; m < full; ++m) {
      if (conf_[m])
        for (std::size_t i = 0; i < items; ++i) set(m | 1u << i);
      // (b) condition lifting.
      for (PlaceId s = 0; s < n.num_places(); ++s) {
        const auto& gens = n.producers(s);
        if (gens.empty()) continue;
        const bool all = std::all_of(gens.begin(), gens.end(),
                                     [&](TransId t) { return conf_[m | tbit(t)] != 0; });
        if (all) set(m | 1u << s);
      }
      // (c) inheritance through pre-sets.
      if (conf_[m])
        for (PlaceId s = 0; s < n.num_places(); ++s) {
          if (!(m >> s & 1u)) continue;
          for (TransId t : n.consumers(s)) set((m & ~(1u << s)) | tbit(t));
        }
    }
  }
}

bool SaturatedConflict::operator()(const IndexSet& items) const {
  return conf_.at(mask_of(items)) != 0;
}

bool SaturatedConflict::events(std::size_t e, std::size_t e2) const {
  return conf_.at((1u << (places_ + e)) | (1u << (places_ + e2))) != 0;
}

// ------------------------------------------------------- configurations

namespace {

bool enables(const PNet& n, const IndexSet& x, TransId t) {
  for (PlaceId s : n.pre(t)) {
    if (n.initial().contains(s)) continue;
    bool produced = false;
    for (TransId g : n.producers(s)) produced |= x.test(g);
    if (!produced) return false;
  }
  return true;
}

}  // namespace

std::vector<IndexSet> secured_subsets(const PNet& n, const EventConflict& conflict) {
  const std::size_t m = n.num_transitions();
  std::vector<IndexSet> out;
  for (const auto& x : all_subsets(m)) {
    bool ok = true;
    for (auto e = x.find_first(); e != IndexSet::npos && ok; e = x.find_next(e))
      for (auto e2 = x.find_first(); e2 != IndexSet::npos && ok; e2 = x.find_next(e2))
        ok = !conflict(e, e2);
    if (!ok) continue;
    IndexSet done(m);
    for (bool grew = true; grew;) {
      grew = false;
      for (auto e = x.find_first(); e != IndexSet::npos; e = x.find_next(e))
        if (!done.test(e) && enables(n, done, e)) {
          done.set(e);
          grew = true;
        }
    }
    if (done == x) out.push_back(x);
  }
  return canonical(std::move(out));
}

std::vector<IndexSet> firing_supports(const PNet& n) {
  std::set<std::pair<Marking, IndexSet>> seen;
  std::vector<IndexSet> out;
  std::vector<std::pair<Marking, IndexSet>> stack{{n.initial(), IndexSet(n.num_transitions())}};
  while (!stack.empty()) {
    auto [u, fired] = stack.back();
    stack.pop_back();
    if (!seen.insert({u, fired}).second) continue;
    out.push_back(fired);
    for (TransId t = 0; t < n.num_transitions(); ++t) {
      if (fired.test(t) || !enabled(n, u, t)) continue;
      IndexSet next = fired;
      next.set(t);
      stack.push_back({fire(n, u, t), next});
    }
  }
  return canonical(std::move(out));
}

std::vector<Marking> reachable_markings(const PNet& n) {
  std::set<Marking> seen{n.initial()};
  std::vector<Marking> stack{n.initial()};
  while (!stack.empty()) {
    Marking u = stack.back();
    stack.pop_back();
    for (TransId t = 0; t < n.num_transitions(); ++t)
      if (enabled(n, u, t)) {
        Marking v = fire(n, u, t);
        if (seen.insert(v).second) stack.push_back(v);
      }
    if (seen.size() > 200000) throw std::runtime_error("reachability too large");
  }
  return {seen.begin(), seen.end()};
}

bool coverable(const PNet& n, const Marking& target) {
  const auto all = reachable_markings(n);
  return std::any_of(all.begin(), all.end(), [&](const Marking& u) { return covers(u, target); });
}

// -------------------------------------------------------- event structures

std::vector<IndexSet> es_configurations(const EventStructure& es) {
  std::vector<IndexSet> out;
  for (const auto& x : all_subsets(es.size())) {
    bool ok = true;
    for (auto e = x.find_first(); e != IndexSet::npos && ok; e = x.find_next(e))
      for (auto e2 = x.find_first(); e2 != IndexSet::npos && ok; e2 = x.find_next(e2))
        ok = !es.conflict(e, e2);
    if (!ok) continue;
    IndexSet done(es.size());
    for (bool grew = true; grew;) {
      grew = false;
      for (auto e = x.find_first(); e != IndexSet::npos; e = x.find_next(e))
        if (!done.test(e) && es.enables(done, e)) {
          done.set(e);
          grew = true;
        }
    }
    if (done == x) out.push_back(x);
  }
  return canonical(std::move(out));
}

std::vector<IndexSet> hist(const EventStructure& es, std::size_t e) {
  const auto configs = oracle::es_configurations(es);
  std::vector<IndexSet> out;
  for (const auto& c : configs) {
    if (!es.enables(c, e)) continue;
    bool minimal = true;
    for (const auto& d : configs)
      if (d != c && d.is_subset_of(c) && es.enables(d, e)) minimal = false;
    if (minimal) out.push_back(c);
  }
  return canonical(std::move(out));
}

std::vector<IndexSet> minimal_hitting_sets(const std::vector<IndexSet>& family,
                                           std::size_t universe) {
  std::vector<IndexSet> hitting;
  for (const auto& x : all_subsets(universe))
    if (std::all_of(family.begin(), family.end(),
                    [&](const IndexSet& f) { return x.intersects(f); }))
      hitting.push_back(x);
  std::vector<IndexSet> out;
  for (const auto& x : hitting)
    if (std::none_of(hitting.begin(), hitting.end(),
                     [&](const IndexSet& y) { return y != x && y.is_subset_of(x); }))
      out.push_back(x);
  return canonical(std::move(out));
}

bool covering(const EventStructure& es, std::size_t e, const std::vector<IndexSet>& d) {
  for (const auto& c : oracle::es_configurations(es)) {
    const bool meets_all = std::all_of(d.begin(), d.end(),
                                       [&](const IndexSet& x) { return c.intersects(x); });
    if (meets_all && !es.enables(c, e)) return false;
  }
  return true;
}

bool connected_es(const EventStructure& es) {
  for (std::size_t e = 0; e < es.size(); ++e) {
    const auto h = hist(es, e);
    if (h.size() <= 1) continue;
    std::vector<std::size_t> comp(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) comp[i] = i;
    auto joint = [&](const IndexSet& a, const IndexSet& b) {
      IndexSet u = a | b;
      u.set(e);
      return es.consistent(u);
    };
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
          if (comp[i] != comp[j] && joint(h[i], h[j])) {
            const auto lo = std::min(comp[i], comp[j]);
            comp[i] = comp[j] = lo;
            changed = true;
          }
    }
    if (std::any_of(comp.begin(), comp.end(), [&](std::size_t c) { return c != comp[0]; }))
      return false;
  }
  return true;
}

bool locally_connected(const EventStructure& es) {
  for (std::size_t e = 0; e < es.size(); ++e) {
    std::vector<IndexSet> edges = hist(es, e);
    // An event enabled by the empty set has no disjuncts; the empty
    // covering works for it.
    bool has_empty = std::any_of(edges.begin(), edges.end(),
                                 [](const IndexSet& h) { return h.none(); });
    std::vector<IndexSet> connected;
    if (!has_empty && !edges.empty())
      for (const auto& x : minimal_hitting_sets(edges, es.size()))
        if (connected_set(es, x)) connected.push_back(x);
    if (connected.size() > 16) throw std::invalid_argument("too many connected disjuncts");
    bool found = false;
    for (std::uint32_t m = 0; m < (1u << connected.size()) && !found; ++m) {
      std::vector<IndexSet> d;
      for (std::size_t i = 0; i < connected.size(); ++i)
        if (m >> i & 1u) d.push_back(connected[i]);
      found = covering(es, e, d);
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace oracle
