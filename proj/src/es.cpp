#include "persnet/es.hpp"

#include "persnet/error.hpp"
#include "persnet/hitting_sets.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace persnet {

// ------------------------------------------------------- EventStructure

EventId EventStructure::add_event(const std::string& name) {
  if (name.empty()) throw InvalidStructure("empty event identifier");
  if (index_.contains(name)) throw InvalidStructure("duplicate event '" + name + "'");
  const EventId e = names_.size();
  names_.push_back(name);
  index_.emplace(name, e);
  for (auto& c : conflict_) c.resize(names_.size());
  conflict_.emplace_back(names_.size());
  for (auto& gens : generators_)
    for (auto& g : gens) g.resize(names_.size());
  generators_.emplace_back();
  return e;
}

void EventStructure::add_conflict(EventId a, EventId b) {
  event_name(a);
  event_name(b);
  conflict_[a].set(b);
  conflict_[b].set(a);
}

void EventStructure::add_generator(EventId e, IndexSet g) {
  event_name(e);
  if (g.size() > size()) throw UnknownId("generator mentions an unknown event");
  g.resize(size());
  auto& gens = generators_[e];
  if (std::any_of(gens.begin(), gens.end(),
                  [&](const IndexSet& h) { return h.is_subset_of(g); }))
    return;
  std::erase_if(gens, [&](const IndexSet& h) { return g.is_subset_of(h); });
  gens.push_back(std::move(g));
  std::sort(gens.begin(), gens.end(), set_less);
}

void EventStructure::add_generator(EventId e, const std::vector<std::string>& names) {
  add_generator(e, set_of(names));
}

const std::string& EventStructure::event_name(EventId e) const {
  if (e >= names_.size())
    throw UnknownId("event id " + std::to_string(e) + " out of range");
  return names_[e];
}

std::optional<EventId> EventStructure::find_event(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EventId EventStructure::event(std::string_view name) const {
  if (auto e = find_event(name)) return *e;
  throw UnknownId("unknown event '" + std::string(name) + "'");
}

bool EventStructure::enables(const IndexSet& x, EventId e) const {
  if (x.size() != size()) {
    IndexSet y = x;
    y.resize(size());
    return enables(y, e);
  }
  const auto& gens = generators_.at(e);
  return std::any_of(gens.begin(), gens.end(),
                     [&](const IndexSet& g) { return g.is_subset_of(x); });
}

bool EventStructure::consistent(const IndexSet& x) const {
  for (auto e = x.find_first(); e != IndexSet::npos; e = x.find_next(e))
    if (conflict_.at(e).intersects(x)) return false;
  return true;
}

IndexSet EventStructure::set_of(const std::vector<std::string>& names) const {
  IndexSet s(size());
  for (const auto& n : names) s.set(event(n));
  return s;
}

std::vector<std::string> EventStructure::names_of(const IndexSet& x) const {
  std::vector<std::string> out;
  for (auto e = x.find_first(); e != IndexSet::npos; e = x.find_next(e))
    out.push_back(event_name(e));
  return out;
}

std::string EventStructure::format(const IndexSet& x) const {
  std::string s = "{";
  for (const auto& n : names_of(x)) {
    if (s.size() > 1) s += ", ";
    s += n;
  }
  return s + "}";
}

// ------------------------------------------------------- configurations

std::vector<IndexSet> es_configurations(const EventStructure& es,
                                        std::size_t max_size) {
  std::vector<IndexSet> out;
  std::set<IndexSet> seen;
  std::vector<IndexSet> layer{es.empty_set()};
  seen.insert(layer.front());
  for (std::size_t k = 0;; ++k) {
    out.insert(out.end(), layer.begin(), layer.end());
    if (k >= max_size) break;
    std::vector<IndexSet> next;
    for (const auto& c : layer) {
      IndexSet blocked = es.empty_set();
      for (auto x = c.find_first(); x != IndexSet::npos; x = c.find_next(x))
        blocked |= es.conflicts_of(x);
      for (EventId e = 0; e < es.size(); ++e) {
        if (c.test(e) || blocked.test(e) || es.conflict(e, e) || !es.enables(c, e))
          continue;
        IndexSet d = c;
        d.set(e);
        if (seen.insert(d).second) next.push_back(std::move(d));
      }
    }
    if (next.empty()) break;
    layer = std::move(next);
  }
  std::sort(out.begin(), out.end(), set_less);
  return out;
}

bool is_es_configuration(const EventStructure& es, const IndexSet& x) {
  if (!es.consistent(x)) return false;
  IndexSet fired = es.empty_set();
  for (bool progress = true; progress;) {
    progress = false;
    for (auto e = x.find_first(); e != IndexSet::npos; e = x.find_next(e))
      if (!fired.test(e) && es.enables(fired, e)) {
        fired.set(e);
        progress = true;
      }
  }
  return fired == x;
}

// ------------------------------------------------------------ analysis

namespace {

std::vector<IndexSet> hist_from(const EventStructure& es,
                                const std::vector<IndexSet>& configs, EventId e) {
  std::vector<IndexSet> enabling;
  for (const auto& c : configs)
    if (es.enables(c, e)) enabling.push_back(c);
  // Configurations are sorted by size, so minimality only needs smaller ones.
  std::vector<IndexSet> out;
  for (const auto& c : enabling)
    if (std::none_of(enabling.begin(), enabling.end(), [&](const IndexSet& d) {
          return d != c && d.is_subset_of(c);
        }))
      out.push_back(c);
  return out;
}

std::vector<IndexSet> disjuncts_from(const EventStructure& es,
                                     const std::vector<IndexSet>& hist) {
  // The empty set is never a disjunct: no event has one when it has no
  // minimal enabling, or when it is enabled by the empty set.
  if (hist.empty()) return {};
  return minimal_hitting_sets(hist, es.size());
}

}  // namespace

EsAnalysis::EsAnalysis(const EventStructure& es, std::size_t max_size)
    : es_(std::make_shared<const EventStructure>(es)),
      configs_(es_configurations(es, max_size)) {
  for (EventId e = 0; e < es.size(); ++e) {
    hist_.push_back(hist_from(es, configs_, e));
    disjuncts_.push_back(disjuncts_from(es, hist_.back()));
  }
}

IndexSet EsAnalysis::causes(EventId e) const {
  const auto& h = hist(e);
  if (h.empty()) return es_->empty_set();
  IndexSet c = h.front();
  for (const auto& x : h) c &= x;
  return c;
}

std::vector<IndexSet> EsAnalysis::connected_disjuncts(EventId e) const {
  std::vector<IndexSet> out;
  for (const auto& x : disjuncts(e))
    if (is_connected_set(*es_, x)) out.push_back(x);
  return out;
}

LivenessReport check_live(const EventStructure& es) {
  LivenessReport r;
  for (EventId e = 0; e < es.size(); ++e)
    if (es.conflict(e, e)) {
      r.live = false;
      r.self_conflict = e;
      r.message = "event '" + es.event_name(e) + "' is in conflict with itself";
      return r;
    }
  const auto configs = es_configurations(es);
  for (EventId a = 0; a < es.size(); ++a)
    for (EventId b = a; b < es.size(); ++b) {
      if (es.conflict(a, b)) continue;
      const bool realised = std::any_of(configs.begin(), configs.end(),
                                        [&](const IndexSet& c) {
                                          return c.test(a) && c.test(b);
                                        });
      if (!realised) {
        r.live = false;
        r.unrealised_pair = std::make_pair(a, b);
        r.message = a == b ? "event '" + es.event_name(a) +
                                 "' occurs in no configuration"
                           : "consistent events '" + es.event_name(a) + "' and '" +
                                 es.event_name(b) +
                                 "' occur in no common configuration";
        return r;
      }
    }
  return r;
}

std::vector<IndexSet> minimal_enablings(const EventStructure& es, EventId e) {
  es.event_name(e);
  return hist_from(es, es_configurations(es), e);
}

IndexSet causes(const EventStructure& es, EventId e) {
  const auto h = minimal_enablings(es, e);
  if (h.empty()) return es.empty_set();
  IndexSet c = h.front();
  for (const auto& x : h) c &= x;
  return c;
}

std::vector<IndexSet> disjuncts(const EventStructure& es, EventId e) {
  return disjuncts_from(es, minimal_enablings(es, e));
}

bool is_connected_set(const EventStructure& es, const IndexSet& x) {
  const auto ms = members(x);
  if (ms.size() <= 1) return true;
  std::vector<bool> reached(ms.size(), false);
  std::deque<std::size_t> queue{0};
  reached[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < ms.size(); ++j)
      if (!reached[j] && !es.conflict(ms[i], ms[j])) {
        reached[j] = true;
        ++count;
        queue.push_back(j);
      }
  }
  return count == ms.size();
}

bool is_covering(const EsAnalysis& a, EventId e, const std::vector<IndexSet>& d) {
  const auto& ds = a.disjuncts(e);
  for (const auto& x : d)
    if (std::find(ds.begin(), ds.end(), x) == ds.end())
      throw InvalidStructure(a.es().format(x) + " is not a disjunct of '" +
                             a.es().event_name(e) + "'");
  for (const auto& c : a.configurations()) {
    const bool hits = std::all_of(d.begin(), d.end(),
                                  [&](const IndexSet& x) { return c.intersects(x); });
    if (hits && !a.es().enables(c, e)) return false;
  }
  return true;
}

bool is_covering(const EventStructure& es, EventId e, const std::vector<IndexSet>& d) {
  return is_covering(EsAnalysis(es), e, d);
}

ConnectivityReport check_connected_es(const EsAnalysis& a) {
  ConnectivityReport r;
  const EventStructure& es = a.es();
  for (EventId e = 0; e < es.size(); ++e) {
    const auto& h = a.hist(e);
    if (h.size() <= 1) continue;
    std::vector<bool> reached(h.size(), false);
    std::deque<std::size_t> queue{0};
    reached[0] = true;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < h.size(); ++j) {
        if (reached[j]) continue;
        IndexSet u = h[i] | h[j];
        u.set(e);
        if (es.consistent(u)) {
          reached[j] = true;
          queue.push_back(j);
        }
      }
    }
    if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
      r.holds = false;
      r.failing_event = e;
      return r;
    }
  }
  return r;
}

ConnectivityReport check_connected_es(const EventStructure& es) {
  return check_connected_es(EsAnalysis(es));
}

// A covering made of connected disjuncts exists iff the set of all
// connected disjuncts is one: enlarging D strengthens the premise of the
// covering implication.
ConnectivityReport check_locally_connected(const EsAnalysis& a) {
  ConnectivityReport r;
  for (EventId e = 0; e < a.es().size(); ++e) {
    auto d = a.connected_disjuncts(e);
    if (!is_covering(a, e, d)) {
      r.holds = false;
      if (!r.failing_event) r.failing_event = e;
    }
    r.witnesses.push_back(std::move(d));
  }
  return r;
}

ConnectivityReport check_locally_connected(const EventStructure& es) {
  return check_locally_connected(EsAnalysis(es));
}

bool concurrent_events(const EventStructure& es, EventId a, EventId b) {
  if (es.conflict(a, b)) return false;
  const auto configs = es_configurations(es);
  return std::any_of(configs.begin(), configs.end(), [&](const IndexSet& c) {
    return es.enables(c, a) && es.enables(c, b);
  });
}

// ------------------------------------------------------------ morphisms

EsMorphism::EsMorphism(std::shared_ptr<const EventStructure> src,
                       std::shared_ptr<const EventStructure> tgt)
    : source(std::move(src)), target(std::move(tgt)) {
  if (!source || !target) throw Error("morphism requires source and target");
  map.assign(source->size(), std::nullopt);
}

IndexSet EsMorphism::image(const IndexSet& x) const {
  IndexSet out = target->empty_set();
  for (auto e = x.find_first(); e != IndexSet::npos; e = x.find_next(e))
    if (auto f = map.at(e)) out.set(*f);
  return out;
}

ValidationReport validate_es_morphism(const EsMorphism& m, std::size_t max_config) {
  ValidationReport r;
  const EventStructure& s = *m.source;
  const EventStructure& t = *m.target;
  if (m.map.size() != s.size()) {
    r.add("shape", "event map does not cover the source");
    return r;
  }
  for (auto f : m.map)
    if (f && *f >= t.size()) {
      r.add("shape", "event image out of range");
      return r;
    }
  for (EventId a = 0; a < s.size(); ++a)
    for (EventId b = a; b < s.size(); ++b) {
      const auto fa = m.map[a], fb = m.map[b];
      if (!fa || !fb) continue;
      if (t.conflict(*fa, *fb) && !s.conflict(a, b))
        r.add("conflict reflection", "images of '" + s.event_name(a) + "' and '" +
                                         s.event_name(b) +
                                         "' conflict but the events do not");
      if (a != b && *fa == *fb && !s.conflict(a, b))
        r.add("injectivity", "consistent events '" + s.event_name(a) + "' and '" +
                                 s.event_name(b) + "' have the same image");
    }
  for (const auto& c : es_configurations(s, max_config)) {
    const IndexSet fc = m.image(c);
    for (EventId e = 0; e < s.size(); ++e) {
      const auto fe = m.map[e];
      if (!fe || !s.enables(c, e)) continue;
      if (!t.enables(fc, *fe))
        r.add("enabling", s.format(c) + " enables '" + s.event_name(e) +
                              "' but its image does not enable '" +
                              t.event_name(*fe) + "'");
    }
  }
  return r;
}

HasseDiagram config_poset(const EventStructure& es, std::size_t max_size) {
  return hasse_diagram(es_configurations(es, max_size));
}

}  // namespace persnet
