#include "persnet/unfold.hpp"

#include "persnet/error.hpp"

#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace persnet {

namespace {

class UnionFind {
public:
  explicit UnionFind(std::size_t n)
      : rank_(n, 0), parent_(n), sets_(rank_.data(), parent_.data()) {
    for (std::size_t i = 0; i < n; ++i) sets_.make_set(i);
  }
  std::size_t find(std::size_t x) { return sets_.find_set(x); }
  bool unite(std::size_t x, std::size_t y) {
    const auto rx = find(x), ry = find(y);
    if (rx == ry) return false;
    sets_.link(rx, ry);
    return true;
  }
  /// Per element, the least member of its class.
  std::vector<std::size_t> least_members() {
    std::vector<std::size_t> least(parent_.size(), parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      auto& l = least[find(i)];
      l = std::min(l, i);
    }
    std::vector<std::size_t> out(parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) out[i] = least[find(i)];
    return out;
  }

private:
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> parent_;
  boost::disjoint_sets<std::size_t*, std::size_t*> sets_;
};

std::vector<std::size_t> items_of(const IndexSet& s) { return members(s); }

}  // namespace

// ------------------------------------------------------------------ OccEq

OccEq::OccEq(std::shared_ptr<const OccNet> occ, const std::vector<std::size_t>& rep)
    : occ_(std::move(occ)) {
  if (!occ_) throw Error("null occurrence net");
  const std::size_t n = occ_->num_items();
  if (rep.size() != n) throw InvalidStructure("equivalence does not cover every item");
  UnionFind uf(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (rep[x] >= n) throw UnknownId("equivalence refers to an unknown item");
    if (occ_->is_event_item(x) != occ_->is_event_item(rep[x]))
      throw InvalidStructure("equivalence relates a condition with an event");
    uf.unite(x, rep[x]);
  }
  rep_ = uf.least_members();
}

OccEq OccEq::identity(std::shared_ptr<const OccNet> occ) {
  std::vector<std::size_t> rep(occ->num_items());
  for (std::size_t i = 0; i < rep.size(); ++i) rep[i] = i;
  return OccEq(std::move(occ), rep);
}

OccEq OccEq::from_pairs(std::shared_ptr<const OccNet> occ,
                        const std::vector<std::pair<std::string, std::string>>& pairs) {
  const PNet& n = occ->net();
  auto item = [&](const std::string& name) -> std::size_t {
    if (auto p = n.find_place(name)) return occ->item_of_condition(*p);
    if (auto t = n.find_transition(name)) return occ->item_of_event(*t);
    throw UnknownId("unknown item '" + name + "' in equivalence");
  };
  UnionFind uf(occ->num_items());
  for (const auto& [x, y] : pairs) uf.unite(item(x), item(y));
  return OccEq(std::move(occ), uf.least_members());
}

std::vector<std::vector<std::size_t>> OccEq::classes() const {
  std::map<std::size_t, std::vector<std::size_t>> by_rep;
  for (std::size_t x = 0; x < rep_.size(); ++x) by_rep[rep_[x]].push_back(x);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [r, members] : by_rep) out.push_back(std::move(members));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> OccEq::equivalent_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& cls : classes())
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j) out.emplace_back(cls[i], cls[j]);
  std::sort(out.begin(), out.end());
  return out;
}

bool OccEq::is_identity() const {
  for (std::size_t x = 0; x < rep_.size(); ++x)
    if (rep_[x] != x) return false;
  return true;
}

bool strongly_concurrent(const OccEq& oe, const IndexSet& conditions) {
  const auto xs = items_of(conditions);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (oe.equivalent(xs[i], xs[j])) return false;
  return oe.occ().concurrent(conditions);
}

// ------------------------------------------------------- validate_occ_eq

namespace {

// Classes of a set of conditions, as a sorted vector of representatives.
std::vector<std::size_t> class_image(const OccEq& oe, const std::vector<PlaceId>& xs) {
  std::vector<std::size_t> out;
  for (PlaceId b : xs) out.push_back(oe.rep(oe.occ().item_of_condition(b)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> event_class_image(const OccEq& oe, const std::vector<TransId>& es) {
  std::vector<std::size_t> out;
  for (TransId e : es) out.push_back(oe.rep(oe.occ().item_of_event(e)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ValidationReport validate_occ_eq(const OccEq& oe) {
  const OccNet& o = oe.occ();
  const PNet& n = o.net();
  ValidationReport r = validate_occurrence(n);
  if (!r.facts["backward-conflict-free"])
    r.add("backward conflict", "the underlying net has backward conflicts");

  auto gens = [&](PlaceId b) { return n.producers(b); };
  // {x} <= Y for |X| <= 1 with the convention that the empty set is below
  // everything.
  auto below = [&](const std::vector<TransId>& x, const std::vector<TransId>& y) {
    for (TransId e : x)
      for (TransId e2 : y)
        if (!o.leq(o.item_of_event(e), o.item_of_event(e2))) return false;
    return true;
  };

  for (const auto& cls : oe.classes()) {
    if (cls.size() < 2) continue;
    if (o.is_event_item(cls.front())) continue;
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = 0; j < cls.size(); ++j) {
        if (i == j) continue;
        const PlaceId b = cls[i], b2 = cls[j];
        const std::string pair = "'" + n.place_name(b) + "' ~ '" + n.place_name(b2) + "'";
        if (i < j && n.persistent(b) != n.persistent(b2))
          r.add("(1a) sorts", pair + " mixes persistent and non-persistent");
        if (below(gens(b), gens(b2)))
          r.add("(1b) order", pair + ": pre-set of the first is below the second");
        if (i < j) {
          for (TransId e : n.consumers(b)) {
            const auto& pre = n.pre(e);
            if (std::binary_search(pre.begin(), pre.end(), b2))
              r.add("(1b) pre-set", pair + " both in the pre-set of '" +
                                        n.trans_name(e) + "'");
          }
          const bool same_pre = event_class_image(oe, gens(b)) == event_class_image(oe, gens(b2));
          if (!n.persistent(b) && !n.persistent(b2) && !same_pre)
            r.add("(1c) non-persistent", pair + " have inequivalent pre-sets");
        }
      }
    // (1d): members with inequivalent pre-sets must be joined by a chain of
    // consistent equivalent conditions. The class is connected iff all such
    // pairs are.
    if (n.persistent(cls.front())) {
      std::vector<std::size_t> comp(cls.size());
      for (std::size_t i = 0; i < cls.size(); ++i) comp[i] = i;
      std::vector<bool> seen(cls.size(), false);
      for (std::size_t s = 0; s < cls.size(); ++s) {
        if (seen[s]) continue;
        std::deque<std::size_t> queue{s};
        seen[s] = true;
        while (!queue.empty()) {
          const auto i = queue.front();
          queue.pop_front();
          comp[i] = s;
          for (std::size_t j = 0; j < cls.size(); ++j)
            if (!seen[j] && !o.item_conflict(cls[i], cls[j])) {
              seen[j] = true;
              queue.push_back(j);
            }
        }
      }
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = i + 1; j < cls.size(); ++j)
          if (comp[i] != comp[j] &&
              event_class_image(oe, gens(cls[i])) != event_class_image(oe, gens(cls[j])))
            r.add("(1d) persistent", "'" + n.place_name(cls[i]) + "' ~ '" +
                                         n.place_name(cls[j]) +
                                         "' are neither generated by equivalent events "
                                         "nor connected by consistency");
    }
  }

  for (const auto& cls : oe.classes()) {
    if (cls.size() < 2 || !o.is_event_item(cls.front())) continue;
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        const TransId e = cls[i] - o.num_conditions(), e2 = cls[j] - o.num_conditions();
        const std::string pair = "'" + n.trans_name(e) + "' ~ '" + n.trans_name(e2) + "'";
        if (class_image(oe, n.pre(e)) != class_image(oe, n.pre(e2)))
          r.add("(2) pre-sets", pair + " have inequivalent pre-sets");
        if (n.pre(e) == n.pre(e2)) r.add("(2) pre-sets", pair + " have equal pre-sets");
        if (class_image(oe, n.post(e)) != class_image(oe, n.post(e2)))
          r.add("(2) post-sets", pair + " have inequivalent post-sets");
      }
  }

  // (3): for every pre-set X' of an event and every X ~ X', the events with
  // pre-set X match those with pre-set X' class by class. Only concurrent X
  // are considered (no event can have a non-concurrent pre-set), and under
  // a depth bound, X whose events would lie beyond the bound are skipped.
  std::map<std::vector<PlaceId>, std::vector<TransId>> by_pre;
  for (TransId e = 0; e < n.num_transitions(); ++e) by_pre[n.pre(e)].push_back(e);
  std::set<std::vector<PlaceId>> done;
  for (const auto& [pre, events] : by_pre) {
    std::vector<std::vector<std::size_t>> choices;
    for (PlaceId b : pre) {
      std::vector<std::size_t> cls;
      for (std::size_t x = 0; x < o.num_conditions(); ++x)
        if (oe.equivalent(x, b)) cls.push_back(x);
      choices.push_back(std::move(cls));
    }
    const auto want = event_class_image(oe, events);
    std::vector<std::size_t> pick(pre.size(), 0);
    std::size_t budget = 100000;
    for (bool more = !pre.empty(); more && budget > 0; --budget) {
      std::vector<PlaceId> x;
      for (std::size_t i = 0; i < pre.size(); ++i) x.push_back(choices[i][pick[i]]);
      std::sort(x.begin(), x.end());
      if (x.size() == pre.size() && std::adjacent_find(x.begin(), x.end()) == x.end() &&
          !done.contains(x)) {
        std::size_t depth = 0;
        for (PlaceId b : x) depth = std::max(depth, o.depth_of_condition(b));
        const bool beyond = oe.depth_bound && depth + 1 >= *oe.depth_bound;
        const auto it = by_pre.find(x);
        const std::vector<TransId> none;
        const auto have = event_class_image(oe, it == by_pre.end() ? none : it->second);
        if (have != want && !beyond && o.concurrent(make_set_from(o.num_conditions(), x))) {
          std::string names;
          for (PlaceId b : x) names += (names.empty() ? "" : ", ") + n.place_name(b);
          r.add("(3) equivalent pre-sets",
                "events with pre-set {" + names + "} do not match those of an "
                "equivalent pre-set");
          done.insert(x);
        }
      }
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
      more = k < pick.size();
    }
  }
  return r;
}

// ---------------------------------------------------------------- quotient

Quotient quotient(const OccEq& oe) {
  const OccNet& o = oe.occ();
  const PNet& n = o.net();
  Quotient q;
  q.item_map.assign(o.num_items(), 0);

  NetBuilder b(n.name());
  std::map<std::size_t, PlaceId> cond_class;
  for (PlaceId c = 0; c < o.num_conditions(); ++c) {
    const std::size_t r = oe.rep(c);
    if (n.persistent(c) != n.persistent(r))
      throw InvalidStructure("class of '" + n.place_name(c) + "' mixes sorts");
    if (r == c) cond_class[c] = b.add_place(n.place_name(c), n.persistent(c));
    q.item_map[c] = cond_class.at(r);
  }
  auto image = [&](const std::vector<PlaceId>& xs) {
    std::vector<PlaceId> out;
    for (PlaceId x : xs) out.push_back(cond_class.at(oe.rep(x)));
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
      throw InvalidStructure("an event pre- or post-set contains equivalent conditions");
    return out;
  };
  std::map<std::size_t, TransId> event_class;
  const std::size_t nc = o.num_conditions();
  for (TransId e = 0; e < o.num_events(); ++e) {
    const std::size_t x = o.item_of_event(e);
    const std::size_t r = oe.rep(x);
    if (r == x) {
      event_class[x] = b.add_transition_ids(n.trans_name(e), image(n.pre(e)), image(n.post(e)));
    } else {
      const TransId er = r - nc;
      if (image(n.pre(e)) != image(n.pre(er)) || image(n.post(e)) != image(n.post(er)))
        throw InvalidStructure("events '" + n.trans_name(e) + "' and '" + n.trans_name(er) +
                               "' are equivalent but their pre- or post-sets are not");
    }
  }
  // Places were all added before transitions, so quotient item ids are known.
  const std::size_t qc = cond_class.size();
  for (TransId e = 0; e < o.num_events(); ++e) {
    const std::size_t x = o.item_of_event(e);
    q.item_map[x] = qc + event_class.at(oe.rep(x));
  }
  for (auto [c, k] : n.initial().counts()) {
    const PlaceId img = cond_class.at(oe.rep(c));
    b.mark_id(img);
  }
  q.net = std::make_shared<const PNet>(b.build());
  return q;
}

// -------------------------------------------------------------- pre_unfold

namespace {

class PreUnfolder {
public:
  PreUnfolder(const PNet& n, std::size_t bound, std::size_t max_items)
      : n_(n), bound_(bound), max_items_(max_items), by_place_(n.num_places()) {}

  OccEq run(bool& complete) {
    for (auto [s, k] : n_.initial().counts()) add_condition(s, kNone);
    complete = true;
    for (std::size_t layer = 1;; ++layer) {
      if (layer >= bound_) {
        complete = !layer_has_event(layer);
        break;
      }
      if (!expand(layer)) break;
      close();
    }
    return build();
  }

private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Cond {
    PlaceId place;
    std::size_t gen;  // kNone for initial conditions
    std::size_t depth;
  };
  struct Event {
    TransId trans;
    std::vector<std::size_t> pre;  // conditions, in the order of pre(trans)
    std::vector<std::size_t> post;
    std::size_t depth;
    // For each non-persistent condition consumed in the causal past
    // (including the event itself), the consuming event.
    std::map<std::size_t, std::size_t> consumer;
  };

  void add_condition(PlaceId s, std::size_t gen) {
    if (conds_.size() + events_.size() >= max_items_)
      throw BudgetExceeded("pre-unfolding exceeds " + std::to_string(max_items_) + " items");
    const std::size_t depth = gen == kNone ? 0 : events_[gen].depth;
    by_place_[s].push_back(conds_.size());
    conds_.push_back({s, gen, depth});
  }

  const std::map<std::size_t, std::size_t>* past_of(std::size_t cond) const {
    const auto g = conds_[cond].gen;
    return g == kNone ? nullptr : &events_[g].consumer;
  }

  // Checks concurrency of the chosen conditions and returns the merged
  // consumer map of their pasts.
  bool concurrent(const std::vector<std::size_t>& xs,
                  std::map<std::size_t, std::size_t>& merged) const {
    merged.clear();
    for (std::size_t c : xs)
      if (const auto* past = past_of(c))
        for (auto [b, e] : *past) {
          auto [it, fresh] = merged.emplace(b, e);
          if (!fresh && it->second != e) return false;  // competing events
        }
    for (std::size_t c : xs)
      if (!n_.persistent(conds_[c].place) && merged.contains(c))
        return false;  // consumed in the past of another member
    return true;
  }

  // Enumerates strongly concurrent pre-sets for t whose deepest member has
  // depth layer - 1. Calls f for each; stops early if f returns false.
  template <typename F>
  void candidates(TransId t, std::size_t layer, F&& f) const {
    const auto& pre = n_.pre(t);
    std::vector<std::vector<std::size_t>> choices;
    for (PlaceId s : pre) {
      std::vector<std::size_t> cs;
      for (std::size_t c : by_place_[s])
        if (conds_[c].depth + 1 <= layer) cs.push_back(c);
      if (cs.empty()) return;
      choices.push_back(std::move(cs));
    }
    std::vector<std::size_t> chosen;
    std::map<std::size_t, std::size_t> merged;
    bool stop = false;
    auto rec = [&](auto&& self, std::size_t i, bool deepest) -> void {
      if (stop) return;
      if (i == choices.size()) {
        if (deepest && concurrent(chosen, merged) && !f(chosen, merged)) stop = true;
        return;
      }
      for (std::size_t c : choices[i]) {
        chosen.push_back(c);
        bool ok = true;
        for (std::size_t k = 0; k + 1 < chosen.size() && ok; ++k)
          ok = rep_of_cond(chosen[k]) != rep_of_cond(c);
        if (ok) self(self, i + 1, deepest || conds_[c].depth + 1 == layer);
        chosen.pop_back();
        if (stop) return;
      }
    };
    rec(rec, 0, false);
  }

  std::size_t rep_of_cond(std::size_t c) const {
    return c < cond_rep_.size() ? cond_rep_[c] : c;
  }

  bool layer_has_event(std::size_t layer) const {
    bool found = false;
    for (TransId t = 0; t < n_.num_transitions() && !found; ++t)
      candidates(t, layer, [&](const auto&, const auto&) {
        found = true;
        return false;
      });
    return found;
  }

  bool expand(std::size_t layer) {
    struct Pending {
      TransId t;
      std::vector<std::size_t> pre;
      std::map<std::size_t, std::size_t> consumer;
    };
    std::vector<Pending> fresh;
    for (TransId t = 0; t < n_.num_transitions(); ++t)
      candidates(t, layer, [&](const std::vector<std::size_t>& xs,
                               const std::map<std::size_t, std::size_t>& merged) {
        fresh.push_back({t, xs, merged});
        return true;
      });
    for (auto& p : fresh) {
      const std::size_t id = events_.size();
      for (std::size_t c : p.pre)
        if (!n_.persistent(conds_[c].place)) p.consumer[c] = id;
      events_.push_back({p.t, p.pre, {}, layer, std::move(p.consumer)});
      for (PlaceId s : n_.post(p.t)) {
        events_[id].post.push_back(conds_.size());
        add_condition(s, id);
      }
    }
    return !fresh.empty();
  }

  bool in_conflict(std::size_t e, std::size_t e2) const {
    const auto& a = events_[e].consumer;
    const auto& b = events_[e2].consumer;
    for (auto [c, x] : a) {
      auto it = b.find(c);
      if (it != b.end() && it->second != x) return true;
    }
    return false;
  }

  // Least equivalence closed under the three rules, over current items.
  void close() {
    const std::size_t nc = conds_.size();
    UnionFind uf(nc + events_.size());
    // Rule 1: instances of a persistent place generated by consistent events.
    for (PlaceId s = 0; s < n_.num_places(); ++s) {
      if (!n_.persistent(s)) continue;
      const auto& cs = by_place_[s];
      for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
          const auto g = conds_[cs[i]].gen, g2 = conds_[cs[j]].gen;
          if (g != kNone && g2 != kNone && !in_conflict(g, g2)) uf.unite(cs[i], cs[j]);
        }
    }
    for (bool changed = true; changed;) {
      changed = false;
      // Rule 2: same transition, equivalent pre-sets.
      std::map<std::pair<TransId, std::vector<std::size_t>>, std::size_t> by_pre;
      for (std::size_t e = 0; e < events_.size(); ++e) {
        std::vector<std::size_t> key;
        for (std::size_t c : events_[e].pre) key.push_back(uf.find(c));
        auto [it, fresh] = by_pre.emplace(std::make_pair(events_[e].trans, key), e);
        if (!fresh) changed |= uf.unite(nc + it->second, nc + e);
      }
      // Rule 3: same place, equivalent generators.
      std::map<std::pair<PlaceId, std::size_t>, std::size_t> by_gen;
      for (std::size_t c = 0; c < nc; ++c) {
        if (conds_[c].gen == kNone) continue;
        auto [it, fresh] =
            by_gen.emplace(std::make_pair(conds_[c].place, uf.find(nc + conds_[c].gen)), c);
        if (!fresh) changed |= uf.unite(it->second, c);
      }
    }
    const auto least = uf.least_members();
    cond_rep_.assign(least.begin(), least.begin() + nc);
    event_rep_.resize(events_.size());
    for (std::size_t e = 0; e < events_.size(); ++e) event_rep_[e] = least[nc + e] - nc;
  }

  OccEq build() const {
    NetBuilder b(n_.name());
    std::vector<std::size_t> count_p(n_.num_places(), 0), count_t(n_.num_transitions(), 0);
    for (const auto& c : conds_)
      b.add_place(n_.place_name(c.place) + "_" + std::to_string(++count_p[c.place]),
                  n_.persistent(c.place));
    for (const auto& e : events_) {
      std::vector<PlaceId> pre(e.pre.begin(), e.pre.end());
      std::vector<PlaceId> post(e.post.begin(), e.post.end());
      b.add_transition_ids(n_.trans_name(e.trans) + "_" + std::to_string(++count_t[e.trans]),
                           pre, post);
    }
    for (std::size_t c = 0; c < conds_.size(); ++c)
      if (conds_[c].gen == kNone) b.mark_id(c);

    auto occ = std::make_shared<const OccNet>(b.build());
    const std::size_t nc = conds_.size();
    std::vector<std::size_t> rep(nc + events_.size());
    for (std::size_t c = 0; c < nc; ++c) rep[c] = c < cond_rep_.size() ? cond_rep_[c] : c;
    for (std::size_t e = 0; e < events_.size(); ++e)
      rep[nc + e] = nc + (e < event_rep_.size() ? event_rep_[e] : e);
    OccEq oe(occ, rep);
    oe.origin_of.resize(rep.size());
    for (std::size_t c = 0; c < nc; ++c) oe.origin_of[c] = conds_[c].place;
    for (std::size_t e = 0; e < events_.size(); ++e) oe.origin_of[nc + e] = events_[e].trans;
    oe.depth_bound = bound_;
    return oe;
  }

  const PNet& n_;
  std::size_t bound_;
  std::size_t max_items_;
  std::vector<Cond> conds_;
  std::vector<Event> events_;
  std::vector<std::vector<std::size_t>> by_place_;
  std::vector<std::size_t> cond_rep_;
  std::vector<std::size_t> event_rep_;
};

}  // namespace

OccEq pre_unfold(const PNet& n, std::size_t depth_bound, std::size_t max_items) {
  const auto wf = validate_well_formed(n);
  if (!wf.ok())
    throw InvalidStructure("cannot unfold a net that is not well-formed: " +
                           wf.violations.front().message);
  bool complete = false;
  auto oe = PreUnfolder(n, depth_bound, max_items).run(complete);
  oe.origin = std::make_shared<const PNet>(n);
  if (complete) oe.depth_bound.reset();
  return oe;
}

UnfoldingResult unfold(const PNet& n, std::size_t depth_bound, std::size_t max_items) {
  OccEq pre = pre_unfold(n, depth_bound, max_items);
  Quotient q = quotient(pre);
  const OccNet& o = pre.occ();
  NetMorphism folding(q.net, pre.origin);
  for (std::size_t x = 0; x < o.num_items(); ++x) {
    const std::size_t img = q.item_map[x];
    const std::size_t origin = pre.origin_of[x];
    if (!o.is_event_item(x)) {
      Marking m = Marking::of_ids(pre.origin->universe(), {origin});
      auto& slot = folding.place_map[img];
      if (slot.empty()) slot = m;
      else if (slot != m)
        throw InvalidStructure("folding is not well defined on condition '" +
                               q.net->place_name(img) + "'");
    } else {
      auto& slot = folding.trans_map[img - q.net->num_places()];
      if (!slot) slot = origin;
      else if (*slot != origin)
        throw InvalidStructure("folding is not well defined on event '" +
                               q.net->trans_name(img - q.net->num_places()) + "'");
    }
  }
  const bool complete = !pre.depth_bound.has_value();
  return UnfoldingResult{std::move(pre), std::move(q), std::move(folding), depth_bound,
                         complete};
}

OccEq pre_unfold_of_occ(const OccNet& o) {
  return pre_unfold(o.net(), o.num_events() + 1);
}

RoundTripReport round_trip_check(const OccNet& o, std::size_t iso_budget) {
  RoundTripReport rep;
  const auto u = unfold(o.net(), o.num_events() + 1);
  rep.complete = u.complete;

  // Route 1: the folding itself is an isomorphism.
  const PNet& q = *u.quotient.net;
  const PNet& n = o.net();
  NetIsomorphism f;
  bool functional = true;
  for (PlaceId p = 0; p < q.num_places(); ++p) {
    const auto& img = u.folding.place_map[p];
    if (img.total() != 1) {
      functional = false;
      break;
    }
    f.places.push_back(img.support().front());
  }
  for (TransId t = 0; t < q.num_transitions() && functional; ++t) {
    if (!u.folding.trans_map[t]) functional = false;
    else f.transitions.push_back(*u.folding.trans_map[t]);
  }
  rep.folding_is_iso = functional && is_isomorphism(q, n, f);

  // Route 2: search, ignoring the folding.
  rep.search = iso_check(q, n, iso_budget).verdict;

  if (!rep.complete) rep.message = "pre-unfolding did not complete";
  else if (!rep.folding_is_iso) rep.message = "folding is not an isomorphism";
  else if (rep.search != Verdict::Yes)
    rep.message = std::string("isomorphism search: ") + to_string(rep.search);
  return rep;
}

}  // namespace persnet
