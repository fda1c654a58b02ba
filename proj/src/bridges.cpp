#include "persnet/bridges.hpp"

#include "persnet/error.hpp"
#include "persnet/hitting_sets.hpp"
#include "persnet/unfold.hpp"

#include <algorithm>
#include <set>

namespace persnet {

EventStructure es_of_occnet(const OccNet& o) {
  const PNet& n = o.net();
  EventStructure es(n.name());
  for (TransId e = 0; e < n.num_transitions(); ++e) es.add_event(n.trans_name(e));
  for (TransId e = 0; e < n.num_transitions(); ++e)
    for (TransId e2 = e; e2 < n.num_transitions(); ++e2)
      if (o.conflict(e, e2)) es.add_conflict(e, e2);

  // X |- e iff X meets the generators of every non-initial pre-condition.
  for (TransId e = 0; e < n.num_transitions(); ++e) {
    std::vector<IndexSet> edges;
    for (PlaceId b : n.pre(e)) {
      if (n.initial().contains(b)) continue;
      edges.push_back(make_set_from(n.num_transitions(), n.producers(b)));
    }
    for (auto& g : minimal_hitting_sets(edges, n.num_transitions()))
      es.add_generator(e, std::move(g));
  }
  return es;
}

// ------------------------------------------------------------- net_of_es

namespace {

void check_input(const EventStructure& es, const EsAnalysis& a) {
  const auto live = check_live(es);
  if (!live.live) throw InvalidStructure("event structure is not live: " + live.message);
  const auto lc = check_locally_connected(a);
  if (!lc.holds)
    throw InvalidStructure("event structure is not locally connected at event '" +
                           es.event_name(*lc.failing_event) + "'");
}

// All cliques of the conflict graph restricted to `pool`, including the
// empty one, in canonical order.
std::vector<IndexSet> conflict_cliques(const EventStructure& es, const IndexSet& pool,
                                       std::size_t cap) {
  std::vector<IndexSet> out;
  IndexSet current = es.empty_set();
  const auto cand = members(pool);
  auto rec = [&](auto&& self, std::size_t from) -> void {
    out.push_back(current);
    if (out.size() > cap) throw BudgetExceeded("too many conflict cliques");
    for (std::size_t i = from; i < cand.size(); ++i) {
      const auto e = cand[i];
      bool ok = true;
      for (auto m = current.find_first(); m != IndexSet::npos && ok; m = current.find_next(m))
        ok = es.conflict(m, e);
      if (!ok) continue;
      current.set(e);
      self(self, i + 1);
      current.reset(e);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<IndexSet> maximal_only(std::vector<IndexSet> sets) {
  std::vector<IndexSet> out;
  for (const auto& s : sets)
    if (std::none_of(sets.begin(), sets.end(),
                     [&](const IndexSet& t) { return s != t && s.is_subset_of(t); }))
      out.push_back(s);
  return out;
}

std::vector<IndexSet> nonempty_subsets(const IndexSet& y, std::size_t cap) {
  const auto ms = members(y);
  if (ms.size() >= 63 || (std::size_t{1} << ms.size()) > cap + 1)
    throw BudgetExceeded("too many persistent places");
  std::vector<IndexSet> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ms.size()); ++mask) {
    IndexSet s(y.size());
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (mask >> i & 1) s.set(ms[i]);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), set_less);
  return out;
}

}  // namespace

SynthesisResult net_of_es(const EventStructure& es, SynthMode mode, std::size_t max_places) {
  const EsAnalysis a(es);
  check_input(es, a);
  const std::size_t n = es.size();

  struct Place {
    IndexSet x, y;
    bool persistent;
  };
  std::vector<Place> places;
  auto push = [&](IndexSet x, IndexSet y, bool persistent) {
    if (places.size() >= max_places)
      throw BudgetExceeded("synthesized net exceeds " + std::to_string(max_places) + " places");
    places.push_back({std::move(x), std::move(y), persistent});
  };

  // Non-persistent: X empty (any Y), or X = {e} with Y among the events e
  // strictly causes.
  IndexSet everything(n);
  everything.set();
  {
    auto ys = conflict_cliques(es, everything, max_places);
    if (mode == SynthMode::Reduced) ys = maximal_only(std::move(ys));
    for (auto& y : ys) push(IndexSet(n), std::move(y), false);
  }
  for (EventId e = 0; e < n; ++e) {
    IndexSet caused(n);
    for (EventId e2 = 0; e2 < n; ++e2)
      if (a.causes(e2).test(e)) caused.set(e2);
    auto ys = conflict_cliques(es, caused, max_places);
    if (mode == SynthMode::Reduced) ys = maximal_only(std::move(ys));
    for (auto& y : ys) push(make_set(n, {e}), std::move(y), false);
  }

  // Persistent: per connected disjunct X, the events it is a disjunct of.
  std::vector<IndexSet> xs;
  for (EventId e = 0; e < n; ++e)
    for (auto& x : a.connected_disjuncts(e)) xs.push_back(x);
  std::sort(xs.begin(), xs.end(), set_less);
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (const auto& x : xs) {
    IndexSet y_max(n);
    for (EventId e = 0; e < n; ++e) {
      const auto& ds = a.disjuncts(e);
      if (std::find(ds.begin(), ds.end(), x) != ds.end()) y_max.set(e);
    }
    if (mode == SynthMode::Reduced) push(x, y_max, true);
    else
      for (auto& y : nonempty_subsets(y_max, max_places)) push(x, std::move(y), true);
  }

  std::set<std::string> taken;
  for (EventId e = 0; e < n; ++e) taken.insert(es.event_name(e));
  auto fresh = [&](const std::string& base) {
    std::string id = base;
    while (taken.contains(id)) id += "'";
    taken.insert(id);
    return id;
  };

  SynthesisResult out;
  NetBuilder b(es.name());
  std::vector<PlaceId> ids;
  std::size_t np = 0, pp = 0;
  for (const auto& p : places) {
    const std::string name =
        fresh(p.persistent ? "o" + std::to_string(++pp) : "b" + std::to_string(++np));
    ids.push_back(b.add_place(name, p.persistent));
    out.tags[name] = "<" + es.format(p.x) + " | " + es.format(p.y) + ">";
  }
  for (EventId e = 0; e < n; ++e) {
    std::vector<PlaceId> pre, post;
    for (std::size_t i = 0; i < places.size(); ++i) {
      if (places[i].y.test(e)) pre.push_back(ids[i]);
      if (places[i].x.test(e)) post.push_back(ids[i]);
    }
    b.add_transition_ids(es.event_name(e), pre, post);
  }
  for (std::size_t i = 0; i < places.size(); ++i)
    if (places[i].x.none() && !places[i].persistent) b.mark_id(ids[i]);
  out.net = std::make_shared<const PNet>(b.build());
  return out;
}

// ---------------------------------------------------------- unit_iso_check

UnitReport unit_iso_check(const EventStructure& es, SynthMode mode) {
  UnitReport r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.isomorphic = false;
    r.discrepancies.push_back(std::move(msg));
  };

  const auto synth = net_of_es(es, mode);
  r.net = synth.net;
  r.occurrence = validate_occurrence(*synth.net);
  for (const auto& v : r.occurrence.violations) {
    r.ok = false;
    r.discrepancies.push_back("synthesized net: [" + v.rule + "] " + v.message);
  }
  if (r.occurrence.has("causality")) {
    r.isomorphic = false;
    return r;
  }

  const OccNet o(synth.net);
  const EventStructure back = es_of_occnet(o);
  if (back.size() != es.size()) {
    fail("event count differs");
    return r;
  }
  for (EventId e = 0; e < es.size(); ++e)
    if (back.event_name(e) != es.event_name(e))
      fail("event " + std::to_string(e) + " renamed to '" + back.event_name(e) + "'");

  for (EventId e = 0; e < es.size(); ++e)
    for (EventId e2 = e; e2 < es.size(); ++e2)
      if (es.conflict(e, e2) != back.conflict(e, e2))
        fail("conflict between '" + es.event_name(e) + "' and '" + es.event_name(e2) +
             "' is " + (es.conflict(e, e2) ? "lost" : "introduced"));

  // Enabling on the configurations of both sides.
  auto configs = es_configurations(es);
  const auto configs_back = o.configurations(OccNet::kInfinite);
  for (const auto& c : configs_back)
    if (!std::binary_search(configs.begin(), configs.end(), c, set_less))
      fail("configuration " + es.format(c) + " of the synthesized net is not one of the input");
  if (configs.size() != configs_back.size())
    fail("configuration counts differ: " + std::to_string(configs.size()) + " vs " +
         std::to_string(configs_back.size()));
  for (const auto& c : configs)
    for (EventId e = 0; e < es.size(); ++e) {
      const bool before = es.enables(c, e);
      const bool net_side = o.enables(c, e);
      if (before != net_side || before != back.enables(c, e))
        fail("enabling of '" + es.event_name(e) + "' by " + es.format(c) + " differs");
    }
  return r;
}

PNetEs es_of_pnet(const PNet& n, std::size_t depth_bound) {
  const auto u = unfold(n, depth_bound);
  const OccNet o(u.quotient.net);
  return {es_of_occnet(o), u.complete};
}

}  // namespace persnet
