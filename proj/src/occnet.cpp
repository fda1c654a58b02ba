#include "persnet/occnet.hpp"

#include "persnet/error.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace persnet {

// ------------------------------------------------------- ConflictOracle

ConflictOracle::ConflictOracle(const PNet& n) : num_places_(n.num_places()) {
  const std::size_t items = n.num_places() + n.num_transitions();
  for (TransId t = 0; t < n.num_transitions(); ++t) pre_.push_back(n.pre(t));
  for (PlaceId p = 0; p < n.num_places(); ++p)
    producers_.push_back(n.producers(p));
  competitors_.assign(n.num_transitions(), IndexSet(items));
  consumers_.assign(n.num_places(), IndexSet(items));
  for (PlaceId p = 0; p < n.num_places(); ++p) {
    persistent_.push_back(n.persistent(p));
    for (TransId t : n.consumers(p)) consumers_[p].set(item_of_transition(t));
  }
  for (PlaceId p = 0; p < n.num_places(); ++p) {
    if (n.persistent(p)) continue;
    const auto& cons = n.consumers(p);
    for (TransId t : cons)
      for (TransId t2 : cons)
        if (t != t2) competitors_[t].set(item_of_transition(t2));
  }
}

ConflictOracle::ConflictOracle(const ConflictOracle& other)
    : num_places_(other.num_places_),
      pre_(other.pre_),
      producers_(other.producers_),
      competitors_(other.competitors_),
      consumers_(other.consumers_),
      persistent_(other.persistent_) {}

bool ConflictOracle::in_conflict(const std::vector<PlaceId>& places,
                                 const std::vector<TransId>& transitions) const {
  IndexSet x(num_items());
  for (PlaceId p : places) {
    if (p >= num_places_) throw UnknownId("condition id out of range");
    x.set(item_of_place(p));
  }
  for (TransId t : transitions) {
    if (t >= pre_.size()) throw UnknownId("event id out of range");
    x.set(item_of_transition(t));
  }
  return in_conflict(x);
}

bool ConflictOracle::in_conflict(const IndexSet& items) const {
  if (items.size() != num_items())
    throw Error("item set has the wrong universe size");
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(items); it != cache_.end()) return it->second;
  }
  std::set<IndexSet> failed;
  const bool result = !extend(items, failed, nullptr);
  std::lock_guard lock(mutex_);
  cache_.emplace(items, result);
  return result;
}

bool ConflictOracle::jointly_markable(const IndexSet& conditions) const {
  if (conditions.size() != num_places_)
    throw Error("condition set has the wrong universe size");
  IndexSet items(num_items()), forbidden(num_items());
  for (auto b = conditions.find_first(); b != IndexSet::npos; b = conditions.find_next(b)) {
    items.set(item_of_place(b));
    if (!persistent_[b]) forbidden |= consumers_[b];
  }
  std::set<IndexSet> failed;
  return extend(items, failed, &forbidden);
}

namespace {

std::size_t first_from(const IndexSet& s, std::size_t i) {
  return i == 0 ? s.find_first() : s.find_next(i - 1);
}

}  // namespace

// True iff k extends to a closed, competition-free item set avoiding the
// forbidden transitions.
bool ConflictOracle::extend(IndexSet k, std::set<IndexSet>& failed,
                            const IndexSet* forbidden) const {
  const std::size_t first_t = num_places_;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto x = first_from(k, first_t); x != IndexSet::npos; x = k.find_next(x))
      for (PlaceId p : pre_[x - first_t])
        if (!k.test(p)) {
          k.set(p);
          changed = true;
        }
    for (auto p = k.find_first(); p != IndexSet::npos && p < first_t;
         p = k.find_next(p)) {
      const auto& gens = producers_[p];
      if (gens.size() == 1 && !k.test(item_of_transition(gens[0]))) {
        k.set(item_of_transition(gens[0]));
        changed = true;
      }
    }
  }
  if (forbidden && forbidden->intersects(k)) return false;
  for (auto x = first_from(k, first_t); x != IndexSet::npos; x = k.find_next(x))
    if (competitors_[x - first_t].intersects(k)) return false;

  std::optional<PlaceId> open;
  for (auto p = k.find_first(); p != IndexSet::npos && p < first_t;
       p = k.find_next(p)) {
    const auto& gens = producers_[p];
    if (gens.empty()) continue;
    if (std::none_of(gens.begin(), gens.end(), [&](TransId t) {
          return k.test(item_of_transition(t));
        })) {
      open = p;
      break;
    }
  }
  if (!open) return true;
  if (failed.contains(k)) return false;
  for (TransId t : producers_[*open]) {
    if (competitors_[t].intersects(k)) continue;
    if (forbidden && forbidden->test(item_of_transition(t))) continue;
    IndexSet next = k;
    next.set(item_of_transition(t));
    if (extend(std::move(next), failed, forbidden)) return true;
  }
  failed.insert(std::move(k));
  return false;
}

// ---------------------------------------------------------------- OccNet

std::optional<std::vector<IndexSet>> causal_pasts(const PNet& n) {
  const std::size_t np = n.num_places();
  const std::size_t items = np + n.num_transitions();
  // Immediate causes of each item.
  std::vector<std::vector<std::size_t>> causes(items);
  for (TransId t = 0; t < n.num_transitions(); ++t)
    for (PlaceId p : n.pre(t)) causes[np + t].push_back(p);
  for (PlaceId p = 0; p < np; ++p)
    if (n.producers(p).size() == 1) causes[p].push_back(np + n.producers(p)[0]);

  std::vector<IndexSet> past(items, IndexSet(items));
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<int> state(items, 0);
  for (std::size_t root = 0; root < items; ++root) {
    if (state[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [x, i] = stack.back();
      if (i < causes[x].size()) {
        const std::size_t y = causes[x][i++];
        if (state[y] == 1) return std::nullopt;
        if (state[y] == 0) {
          state[y] = 1;
          stack.emplace_back(y, 0);
        }
        continue;
      }
      past[x].set(x);
      for (std::size_t y : causes[x]) past[x] |= past[y];
      state[x] = 2;
      stack.pop_back();
    }
  }
  return past;
}

OccNet::OccNet(PNet net) : OccNet(std::make_shared<const PNet>(std::move(net))) {}

OccNet::OccNet(std::shared_ptr<const PNet> net) : net_(std::move(net)) {
  if (!net_) throw Error("null net");
  compute();
}

OccNet OccNet::validated(PNet net) {
  const auto report = validate_occurrence(net);
  if (!report.ok()) {
    std::string msg = "not an occurrence p-net:";
    for (const auto& v : report.violations) msg += " [" + v.rule + "] " + v.message + ";";
    throw InvalidStructure(msg);
  }
  return OccNet(std::move(net));
}

void OccNet::compute() {
  const PNet& n = *net_;
  auto past = causal_pasts(n);
  if (!past) throw InvalidStructure("causality has a cycle");
  past_ = std::move(*past);
  oracle_ = std::make_shared<const ConflictOracle>(n);

  // Least solution of the depth equations, approached from above.
  depth_.assign(num_items(), kInfinite);
  for (auto [b, k] : n.initial().counts()) depth_[b] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (TransId e = 0; e < num_events(); ++e) {
      std::size_t d = 0;
      for (PlaceId b : n.pre(e)) d = std::max(d, depth_[b]);
      const std::size_t v = d == kInfinite ? kInfinite : d + 1;
      if (v != depth_[item_of_event(e)]) {
        depth_[item_of_event(e)] = v;
        changed = true;
      }
    }
    for (PlaceId b = 0; b < num_conditions(); ++b) {
      if (n.initial().contains(b)) continue;
      std::size_t v = kInfinite;
      for (TransId e : n.producers(b)) v = std::min(v, depth_[item_of_event(e)]);
      if (v != depth_[b]) {
        depth_[b] = v;
        changed = true;
      }
    }
  }

  event_conflict_.assign(num_events(), IndexSet(num_events()));
  for (TransId e = 0; e < num_events(); ++e)
    for (TransId e2 = e; e2 < num_events(); ++e2) {
      IndexSet x(num_items());
      x.set(item_of_event(e));
      x.set(item_of_event(e2));
      if (oracle_->in_conflict(x)) {
        event_conflict_[e].set(e2);
        event_conflict_[e2].set(e);
      }
    }
}

std::string OccNet::item_name(std::size_t x) const {
  return is_event_item(x) ? net_->trans_name(x - num_conditions())
                          : net_->place_name(x);
}

bool OccNet::item_conflict(std::size_t x, std::size_t y) const {
  if (is_event_item(x) && is_event_item(y))
    return conflict(x - num_conditions(), y - num_conditions());
  IndexSet s(num_items());
  s.set(x);
  s.set(y);
  return oracle_->in_conflict(s);
}

bool OccNet::enables(const IndexSet& events, TransId e) const {
  const PNet& n = *net_;
  for (PlaceId b : n.pre(e)) {
    if (n.initial().contains(b)) continue;
    const auto& gens = n.producers(b);
    if (std::none_of(gens.begin(), gens.end(),
                     [&](TransId t) { return test_sized(events, t); }))
      return false;
  }
  return true;
}

bool OccNet::is_securing_sequence(const std::vector<TransId>& seq) const {
  IndexSet prefix(num_events());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const TransId e = seq[i];
    if (e >= num_events() || prefix.test(e)) return false;
    if (event_conflict_[e].test(e) || event_conflict_[e].intersects(prefix))
      return false;
    if (!enables(prefix, e)) return false;
    prefix.set(e);
  }
  return true;
}

std::vector<TransId> OccNet::secured_order(const IndexSet& events) const {
  std::vector<TransId> order;
  IndexSet fired(num_events());
  for (bool progress = true; progress;) {
    progress = false;
    for (auto e = events.find_first(); e != IndexSet::npos; e = events.find_next(e)) {
      if (fired.test(e) || !enables(fired, e)) continue;
      fired.set(e);
      order.push_back(e);
      progress = true;
    }
  }
  return order;
}

SecuringResult OccNet::find_securing_sequence(TransId e, std::size_t budget) const {
  if (e >= num_events()) throw UnknownId("event id out of range");
  SecuringResult result;
  if (event_conflict_[e].test(e)) return result;
  const PNet& n = *net_;
  std::set<IndexSet> visited;
  std::size_t steps = 0;
  bool exhausted = false;

  // Depth-first over sets of needed events. A state s is a candidate
  // configuration; its greedily secured part f is fired, and the search
  // adds generators for pre-conditions of the unsecured part.
  std::vector<IndexSet> stack;
  IndexSet start(num_events());
  start.set(e);
  stack.push_back(start);
  while (!stack.empty()) {
    IndexSet s = std::move(stack.back());
    stack.pop_back();
    if (!visited.insert(s).second) continue;
    if (++steps > budget) {
      exhausted = true;
      break;
    }
    const auto order = secured_order(s);
    IndexSet fired(num_events());
    for (TransId x : order) fired.set(x);
    if (fired.test(e)) {
      for (TransId x : order) {
        result.sequence.push_back(x);
        if (x == e) break;
      }
      result.verdict = Verdict::Yes;
      return result;
    }
    IndexSet blocked(num_events());
    for (TransId x : order) blocked |= event_conflict_[x];
    for (auto x = s.find_first(); x != IndexSet::npos; x = s.find_next(x))
      blocked |= event_conflict_[x];

    std::vector<TransId> unresolved;  // no generator in s at all
    std::vector<TransId> stalled;     // generators in s, none fired
    std::set<PlaceId> seen;
    for (auto x = s.find_first(); x != IndexSet::npos; x = s.find_next(x)) {
      if (fired.test(x)) continue;
      for (PlaceId b : n.pre(x)) {
        if (n.initial().contains(b) || !seen.insert(b).second) continue;
        const auto& gens = n.producers(b);
        if (std::any_of(gens.begin(), gens.end(), [&](TransId t) { return fired.test(t); }))
          continue;
        const bool in_s = std::any_of(gens.begin(), gens.end(),
                                      [&](TransId t) { return s.test(t); });
        if (!in_s && unresolved.empty()) unresolved.push_back(b);
        stalled.push_back(b);
      }
    }
    // An unresolved condition needs one of its generators in any solution,
    // so branching on it alone is complete.
    const auto& branch_on = unresolved.empty() ? stalled : unresolved;
    std::set<TransId> options;
    for (PlaceId b : branch_on)
      for (TransId t : n.producers(b))
        if (!s.test(t) && !blocked.test(t) && !event_conflict_[t].test(t))
          options.insert(t);
    for (auto it = options.rbegin(); it != options.rend(); ++it) {
      IndexSet next = s;
      next.set(*it);
      if (!visited.contains(next)) stack.push_back(std::move(next));
    }
  }
  result.verdict = exhausted ? Verdict::Unknown : Verdict::No;
  return result;
}

std::vector<IndexSet> OccNet::configurations(std::size_t max_size) const {
  std::vector<IndexSet> out;
  std::set<IndexSet> seen;
  std::vector<IndexSet> layer{IndexSet(num_events())};
  seen.insert(layer.front());
  for (std::size_t size = 0;; ++size) {
    out.insert(out.end(), layer.begin(), layer.end());
    if (size >= max_size) break;
    std::vector<IndexSet> next;
    for (const auto& c : layer) {
      IndexSet blocked(num_events());
      for (auto x = c.find_first(); x != IndexSet::npos; x = c.find_next(x))
        blocked |= event_conflict_[x];
      for (TransId e = 0; e < num_events(); ++e) {
        if (c.test(e) || blocked.test(e) || event_conflict_[e].test(e)) continue;
        if (!enables(c, e)) continue;
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

bool OccNet::is_configuration(const IndexSet& events) const {
  if (events.size() != num_events()) return false;
  for (auto x = events.find_first(); x != IndexSet::npos; x = events.find_next(x))
    if (event_conflict_[x].intersects(events)) return false;
  return secured_order(events).size() == events.count();
}

Marking OccNet::mark_after(const IndexSet& c) const {
  if (!is_configuration(c)) throw InvalidStructure("not a configuration");
  const PNet& n = *net_;
  std::set<PlaceId> produced, consumed;
  for (auto [b, k] : n.initial().counts()) produced.insert(b);
  for (auto e = c.find_first(); e != IndexSet::npos; e = c.find_next(e)) {
    produced.insert(n.post(e).begin(), n.post(e).end());
    consumed.insert(n.pre(e).begin(), n.pre(e).end());
  }
  return subtract(Marking::of_ids(n.universe(), {produced.begin(), produced.end()}),
                  Marking::of_ids(n.universe(), {consumed.begin(), consumed.end()}));
}

std::vector<TransId> OccNet::config_to_firing(const IndexSet& c) const {
  if (!is_configuration(c)) throw InvalidStructure("not a configuration");
  return secured_order(c);
}

IndexSet OccNet::firing_to_config(const std::vector<TransId>& seq) const {
  IndexSet c(num_events());
  Marking u = net_->initial();
  for (TransId e : seq) {
    if (e >= num_events()) throw UnknownId("event id out of range");
    if (c.test(e))
      throw InvalidStructure("event '" + net_->trans_name(e) + "' fired twice");
    u = fire(*net_, u, e);
    c.set(e);
  }
  return c;
}

bool OccNet::concurrent(const IndexSet& conditions) const {
  return concurrent_as_defined(conditions) && oracle_->jointly_markable(conditions);
}

bool OccNet::concurrent_as_defined(const IndexSet& conditions) const {
  IndexSet items(num_items());
  for (auto b = conditions.find_first(); b != IndexSet::npos; b = conditions.find_next(b)) {
    if (b >= num_conditions()) throw UnknownId("condition id out of range");
    items.set(b);
  }
  if (oracle_->in_conflict(items)) return false;
  for (auto b = conditions.find_first(); b != IndexSet::npos; b = conditions.find_next(b))
    for (auto b2 = conditions.find_first(); b2 != IndexSet::npos; b2 = conditions.find_next(b2))
      if (b != b2 && leq(b, b2) && !net_->persistent(b)) return false;
  return true;
}

Verdict OccNet::coverable(const IndexSet& conditions, std::size_t budget) const {
  const PNet& n = *net_;
  std::vector<PlaceId> ids;
  for (auto b = conditions.find_first(); b != IndexSet::npos; b = conditions.find_next(b))
    ids.push_back(b);
  const Marking target = Marking::of_ids(n.universe(), ids);
  std::set<Marking> seen{n.initial()};
  std::deque<Marking> queue{n.initial()};
  while (!queue.empty()) {
    Marking u = std::move(queue.front());
    queue.pop_front();
    if (covers(u, target)) return Verdict::Yes;
    for (TransId e = 0; e < n.num_transitions(); ++e) {
      if (!enabled(n, u, e)) continue;
      Marking next = fire(n, u, e);
      if (seen.contains(next)) continue;
      if (seen.size() >= budget) return Verdict::Unknown;
      seen.insert(next);
      queue.push_back(std::move(next));
    }
  }
  return Verdict::No;
}

IndexSet OccNet::event_set(const std::vector<std::string>& names) const {
  IndexSet s(num_events());
  for (const auto& name : names) s.set(net_->transition(name));
  return s;
}

IndexSet OccNet::condition_set(const std::vector<std::string>& names) const {
  IndexSet s(num_conditions());
  for (const auto& name : names) s.set(net_->place(name));
  return s;
}

std::vector<std::string> OccNet::event_names(const IndexSet& events) const {
  std::vector<std::string> out;
  for (auto e = events.find_first(); e != IndexSet::npos; e = events.find_next(e))
    out.push_back(net_->trans_name(e));
  return out;
}

// ---------------------------------------------------------- validation

ValidationReport validate_occurrence(const PNet& n, std::size_t budget) {
  ValidationReport r = validate_well_formed(n);

  for (PlaceId b = 0; b < n.num_places(); ++b) {
    const bool initial = n.initial().contains(b);
    const bool source = n.producers(b).empty();
    if (initial != source)
      r.add("(1) initial marking",
            "condition '" + n.place_name(b) + "' " +
                (initial ? "is initial but has generators"
                         : "has no generators but is not initial"));
  }

  bool backward_free = true;
  for (PlaceId b = 0; b < n.num_places(); ++b) {
    const auto& gens = n.producers(b);
    if (gens.size() > 1) {
      backward_free = false;
      if (!n.persistent(b))
        r.add("(3) backward conflict",
              "non-persistent condition '" + n.place_name(b) +
                  "' has more than one generator");
    }
  }
  r.facts["backward-conflict-free"] = backward_free;

  if (!causal_pasts(n)) {
    r.add("causality", "causality has a cycle");
    return r;
  }
  const OccNet o(n);
  for (TransId e = 0; e < n.num_transitions(); ++e) {
    const auto res = o.find_securing_sequence(e, budget);
    if (res.verdict == Verdict::No)
      r.add("(2) securing sequence",
            "event '" + n.trans_name(e) + "' admits no securing sequence");
    else if (res.verdict == Verdict::Unknown)
      r.add("(2) securing sequence", "search budget exhausted for event '" +
                                         n.trans_name(e) + "'");
  }

  for (PlaceId b = 0; b < n.num_places(); ++b) {
    const auto& gens = n.producers(b);
    if (gens.size() < 2) continue;
    std::vector<bool> reached(gens.size(), false);
    std::deque<std::size_t> queue{0};
    reached[0] = true;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < gens.size(); ++j)
        if (!reached[j] && !o.conflict(gens[i], gens[j])) {
          reached[j] = true;
          queue.push_back(j);
        }
    }
    if (std::find(reached.begin(), reached.end(), false) != reached.end())
      r.add("(4) connected generators",
            "generators of condition '" + n.place_name(b) +
                "' are not connected by consistency");
  }
  return r;
}

// ----------------------------------------------------------------- Hasse

HasseDiagram hasse_diagram(std::vector<IndexSet> sets) {
  std::sort(sets.begin(), sets.end(), set_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  HasseDiagram h;
  h.nodes = std::move(sets);
  const auto& nodes = h.nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (nodes[i].count() >= nodes[j].count() || !nodes[i].is_subset_of(nodes[j]))
        continue;
      bool covering = true;
      for (std::size_t k = 0; k < nodes.size() && covering; ++k)
        if (k != i && k != j && nodes[i].is_proper_subset_of(nodes[k]) &&
            nodes[k].is_proper_subset_of(nodes[j]))
          covering = false;
      if (covering) h.edges.emplace_back(i, j);
    }
  return h;
}

}  // namespace persnet
