#include "persnet/pnet.hpp"

#include "persnet/error.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

namespace persnet {

// ---------------------------------------------------------------- PNet

PNet::PNet()
    : universe_(std::make_shared<PlaceUniverse>()), initial_(universe_) {}

std::size_t PNet::num_persistent() const {
  std::size_t k = 0;
  for (PlaceId p = 0; p < num_places(); ++p) k += persistent(p) ? 1 : 0;
  return k;
}

const std::string& PNet::trans_name(TransId t) const {
  if (t >= trans_names_.size())
    throw UnknownId("transition id " + std::to_string(t) + " out of range");
  return trans_names_[t];
}

std::optional<TransId> PNet::find_transition(std::string_view name) const {
  auto it = trans_index_.find(std::string(name));
  if (it == trans_index_.end()) return std::nullopt;
  return it->second;
}

TransId PNet::transition(std::string_view name) const {
  if (auto t = find_transition(name)) return *t;
  throw UnknownId("unknown transition '" + std::string(name) + "'");
}

const std::vector<PlaceId>& PNet::pre(TransId t) const {
  trans_name(t);
  return pre_[t];
}

const std::vector<PlaceId>& PNet::post(TransId t) const {
  trans_name(t);
  return post_[t];
}

const std::vector<TransId>& PNet::producers(PlaceId p) const {
  universe_->name(p);
  return producers_[p];
}

const std::vector<TransId>& PNet::consumers(PlaceId p) const {
  universe_->name(p);
  return consumers_[p];
}

const Marking& PNet::pre_marking(TransId t) const {
  trans_name(t);
  return pre_marking_[t];
}

const Marking& PNet::post_marking(TransId t) const {
  trans_name(t);
  return post_marking_[t];
}

namespace {

Marking scaled_sum(const PNet& n, const TransMultiset& v,
                   const std::vector<std::vector<PlaceId>>& side) {
  std::map<PlaceId, Count> counts;
  for (auto [t, k] : v) {
    n.trans_name(t);
    for (PlaceId p : side[t]) counts[p] += k;
  }
  return Marking(n.universe(), counts);
}

}  // namespace

Marking PNet::pre_of(const TransMultiset& v) const {
  return scaled_sum(*this, v, pre_);
}

Marking PNet::post_of(const TransMultiset& v) const {
  return scaled_sum(*this, v, post_);
}

TransMultiset PNet::transitions(const std::vector<std::string>& names) const {
  TransMultiset v;
  for (const auto& n : names) v[transition(n)] += 1;
  return v;
}

// ---------------------------------------------------------- NetBuilder

NetBuilder::NetBuilder(std::string name)
    : name_(std::move(name)), universe_(std::make_shared<PlaceUniverse>()) {}

bool NetBuilder::has_id(const std::string& name) const {
  return universe_->find(name).has_value() || trans_index_.contains(name);
}

PlaceId NetBuilder::add_place(const std::string& name, bool persistent) {
  if (name.empty()) throw InvalidStructure("empty place identifier");
  if (has_id(name)) throw InvalidStructure("duplicate identifier '" + name + "'");
  return universe_->add(name, persistent);
}

std::vector<PlaceId> NetBuilder::resolve(
    const std::string& owner, const std::vector<std::string>& names) const {
  std::vector<PlaceId> ids;
  ids.reserve(names.size());
  for (const auto& n : names) {
    auto p = universe_->find(n);
    if (!p)
      throw UnknownId("transition '" + owner + "' refers to unknown place '" +
                      n + "'");
    ids.push_back(*p);
  }
  return ids;
}

TransId NetBuilder::add_transition(const std::string& name,
                                   const std::vector<std::string>& pre,
                                   const std::vector<std::string>& post) {
  return add_transition_ids(name, resolve(name, pre), resolve(name, post));
}

TransId NetBuilder::add_transition_ids(const std::string& name,
                                       const std::vector<PlaceId>& pre,
                                       const std::vector<PlaceId>& post) {
  if (name.empty()) throw InvalidStructure("empty transition identifier");
  if (has_id(name)) throw InvalidStructure("duplicate identifier '" + name + "'");
  auto normalise = [&](std::vector<PlaceId> s, const char* side) {
    for (PlaceId p : s)
      if (p >= universe_->size())
        throw UnknownId("place id " + std::to_string(p) + " out of range");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw InvalidStructure("transition '" + name + "' repeats a place in its " +
                             side + "-set");
    return s;
  };
  const TransId t = trans_names_.size();
  pre_.push_back(normalise(pre, "pre"));
  post_.push_back(normalise(post, "post"));
  trans_names_.push_back(name);
  trans_index_.emplace(name, t);
  return t;
}

void NetBuilder::mark(const std::string& place) {
  auto p = universe_->find(place);
  if (!p) throw UnknownId("marking refers to unknown place '" + place + "'");
  mark_id(*p);
}

void NetBuilder::mark_id(PlaceId p) {
  if (p >= universe_->size())
    throw UnknownId("place id " + std::to_string(p) + " out of range");
  if (std::find(initial_.begin(), initial_.end(), p) != initial_.end())
    throw InvalidStructure("place '" + universe_->name(p) +
                           "' marked twice in the initial marking");
  initial_.push_back(p);
}

PNet NetBuilder::build() const {
  PNet n;
  n.name_ = name_;
  auto universe = std::make_shared<PlaceUniverse>(*universe_);
  n.universe_ = universe;
  n.trans_names_ = trans_names_;
  n.trans_index_ = trans_index_;
  n.pre_ = pre_;
  n.post_ = post_;
  n.producers_.assign(universe->size(), {});
  n.consumers_.assign(universe->size(), {});
  for (TransId t = 0; t < trans_names_.size(); ++t) {
    for (PlaceId p : pre_[t]) n.consumers_[p].push_back(t);
    for (PlaceId p : post_[t]) n.producers_[p].push_back(t);
    n.pre_marking_.push_back(Marking::of_ids(n.universe_, pre_[t]));
    n.post_marking_.push_back(Marking::of_ids(n.universe_, post_[t]));
  }
  n.initial_ = Marking::of_ids(n.universe_, initial_);
  return n;
}

// ------------------------------------------------------ well-formedness

ValidationReport validate_well_formed(const PNet& n) {
  ValidationReport r;
  for (TransId t = 0; t < n.num_transitions(); ++t) {
    const auto& pre = n.pre(t);
    if (std::all_of(pre.begin(), pre.end(),
                    [&](PlaceId p) { return n.persistent(p); }))
      r.add("t-restrictedness",
            "transition '" + n.trans_name(t) +
                "' has no non-persistent place in its pre-set");
  }

  // t ~> s directly and t ~>^n s for n >= 2: search from the consumers of
  // t's post-places.
  for (TransId t = 0; t < n.num_transitions(); ++t) {
    std::vector<bool> seen_place(n.num_places(), false);
    std::vector<bool> seen_trans(n.num_transitions(), false);
    std::deque<TransId> queue;
    for (PlaceId p : n.post(t))
      for (TransId t2 : n.consumers(p))
        if (!seen_trans[t2]) {
          seen_trans[t2] = true;
          queue.push_back(t2);
        }
    while (!queue.empty()) {
      TransId x = queue.front();
      queue.pop_front();
      for (PlaceId p : n.post(x)) {
        if (seen_place[p]) continue;
        seen_place[p] = true;
        for (TransId t2 : n.consumers(p))
          if (!seen_trans[t2]) {
            seen_trans[t2] = true;
            queue.push_back(t2);
          }
      }
    }
    for (PlaceId s : n.post(t))
      if (n.persistent(s) && seen_place[s])
        r.add("irredundancy", "transition '" + n.trans_name(t) +
                                  "' reaches persistent place '" +
                                  n.place_name(s) +
                                  "' both directly and by a longer path");
  }

  for (auto [p, k] : n.initial().counts())
    if (n.persistent(p))
      r.add("initial-marking", "persistent place '" + n.place_name(p) +
                                   "' is initially marked");
  return r;
}

// -------------------------------------------------------------- firing

bool enabled(const PNet& n, const Marking& u, const TransMultiset& v) {
  return covers(u, n.pre_of(v));
}

bool enabled(const PNet& n, const Marking& u, TransId t) {
  return covers(u, n.pre_marking(t));
}

Marking fire(const PNet& n, const Marking& u, const TransMultiset& v) {
  const Marking pre = n.pre_of(v);
  if (!same_universe(u.universe(), n.universe()))
    throw UniverseMismatch("marking is not over the net's places");
  for (auto [p, k] : pre.counts())
    if (u.count(p) < k)
      throw NotEnabled(n.place_name(p),
                       "{" + format_transitions(n, v) + "} not enabled at " +
                           u.to_string() + ": place '" + n.place_name(p) +
                           "' is not covered");
  return add(subtract(u, pre), n.post_of(v));
}

Marking fire(const PNet& n, const Marking& u, TransId t) {
  return fire(n, u, TransMultiset{{t, 1}});
}

Marking fire_sequence(const PNet& n, const std::vector<TransId>& seq) {
  return fire_sequence(n, n.initial(), seq);
}

Marking fire_sequence(const PNet& n, const Marking& start,
                      const std::vector<TransId>& seq) {
  Marking u = start;
  for (TransId t : seq) u = fire(n, u, t);
  return u;
}

// -------------------------------------------------------- reachability

const ReachableMarking* ReachabilityResult::find(const Marking& u) const {
  for (const auto& m : markings)
    if (m.marking == u) return &m;
  return nullptr;
}

bool ReachabilityResult::any_covering(const Marking& v) const {
  return std::any_of(markings.begin(), markings.end(),
                     [&](const ReachableMarking& m) {
                       return covers(m.marking, v);
                     });
}

ReachabilityResult reachable(const PNet& n, std::size_t step_bound,
                             std::size_t marking_cap) {
  ReachabilityResult r;
  std::map<Marking, std::size_t> index;
  std::vector<std::size_t> depth;
  r.markings.push_back({n.initial(), {}});
  index.emplace(n.initial(), 0);
  depth.push_back(0);
  for (std::size_t i = 0; i < r.markings.size(); ++i) {
    const Marking u = r.markings[i].marking;
    for (TransId t = 0; t < n.num_transitions(); ++t) {
      if (!enabled(n, u, t)) continue;
      Marking next = fire(n, u, t);
      if (index.contains(next)) continue;
      if (depth[i] >= step_bound || r.markings.size() >= marking_cap) {
        r.truncated = true;
        continue;
      }
      auto path = r.markings[i].path;
      path.push_back(t);
      index.emplace(next, r.markings.size());
      r.markings.push_back({std::move(next), std::move(path)});
      depth.push_back(depth[i] + 1);
    }
  }
  return r;
}

bool is_safe_up_to(const PNet& n, std::size_t step_bound,
                   std::size_t marking_cap) {
  const auto r = reachable(n, step_bound, marking_cap);
  return std::all_of(r.markings.begin(), r.markings.end(),
                     [](const ReachableMarking& m) { return m.marking.is_set(); });
}

// ----------------------------------------------------------- morphisms

NetMorphism::NetMorphism(std::shared_ptr<const PNet> src,
                         std::shared_ptr<const PNet> tgt)
    : source(std::move(src)), target(std::move(tgt)) {
  if (!source || !target) throw Error("morphism requires source and target");
  place_map.assign(source->num_places(), target->empty_marking());
  trans_map.assign(source->num_transitions(), std::nullopt);
}

NetMorphism NetMorphism::identity(std::shared_ptr<const PNet> net) {
  NetMorphism m(net, net);
  for (PlaceId p = 0; p < net->num_places(); ++p)
    m.place_map[p] = Marking::of_ids(net->universe(), {p});
  for (TransId t = 0; t < net->num_transitions(); ++t) m.trans_map[t] = t;
  return m;
}

Marking NetMorphism::map_marking(const Marking& u) const {
  if (!same_universe(u.universe(), source->universe()))
    throw UniverseMismatch("marking is not over the morphism's source");
  std::map<PlaceId, Count> counts;
  for (auto [p, k] : u.counts())
    for (auto [q, j] : place_map.at(p).counts()) counts[q] += k * j;
  return Marking(target->universe(), counts);
}

TransMultiset NetMorphism::map_transitions(const TransMultiset& v) const {
  TransMultiset out;
  for (auto [t, k] : v)
    if (auto image = trans_map.at(t)) out[*image] += k;
  return out;
}

ValidationReport validate_morphism(const NetMorphism& m) {
  ValidationReport r;
  const PNet& src = *m.source;
  const PNet& tgt = *m.target;
  if (m.place_map.size() != src.num_places() ||
      m.trans_map.size() != src.num_transitions()) {
    r.add("shape", "place or transition map does not cover the source");
    return r;
  }
  for (PlaceId p = 0; p < src.num_places(); ++p) {
    const Marking& img = m.place_map[p];
    if (!same_universe(img.universe(), tgt.universe())) {
      r.add("shape", "image of '" + src.place_name(p) +
                         "' is not over the target places");
      return r;
    }
    for (auto [q, k] : img.counts()) {
      if (!src.persistent(p) && tgt.persistent(q))
        r.add("(1) sorts", "non-persistent place '" + src.place_name(p) +
                               "' maps onto persistent place '" +
                               tgt.place_name(q) + "'");
      if (src.persistent(p) && !tgt.persistent(q))
        r.add("(1) sorts", "persistent place '" + src.place_name(p) +
                               "' maps onto non-persistent place '" +
                               tgt.place_name(q) + "'");
    }
  }
  for (auto t : m.trans_map)
    if (t && *t >= tgt.num_transitions()) {
      r.add("shape", "transition image out of range");
      return r;
    }
  const Marking init = m.map_marking(src.initial());
  if (init != tgt.initial())
    r.add("(1) initial", "image of the initial marking is " + init.to_string() +
                             ", target initial marking is " +
                             tgt.initial().to_string());

  for (TransId t = 0; t < src.num_transitions(); ++t) {
    const Marking fpre = m.map_marking(src.pre_marking(t));
    const Marking fpost = m.map_marking(src.post_marking(t));
    if (auto image = m.trans_map[t]) {
      if (tgt.pre_marking(*image) != fpre)
        r.add("(2) pre", "pre-set of '" + tgt.trans_name(*image) +
                             "' differs from the image of the pre-set of '" +
                             src.trans_name(t) + "'");
      if (tgt.post_marking(*image) != fpost)
        r.add("(2) post", "post-set of '" + tgt.trans_name(*image) +
                              "' differs from the image of the post-set of '" +
                              src.trans_name(t) + "'");
    } else if (!fpre.empty() || !fpost.empty()) {
      r.add("(2) undefined", "transition '" + src.trans_name(t) +
                                 "' is unmapped but its pre- or post-set has "
                                 "a non-empty image");
    }
    for (const auto* side : {&src.pre(t), &src.post(t)})
      for (std::size_t i = 0; i < side->size(); ++i)
        for (std::size_t j = i + 1; j < side->size(); ++j)
          if (!meet(m.place_map[(*side)[i]], m.place_map[(*side)[j]]).empty())
            r.add("(3) injectivity",
                  "places '" + src.place_name((*side)[i]) + "' and '" +
                      src.place_name((*side)[j]) + "' of transition '" +
                      src.trans_name(t) + "' have overlapping images");
  }
  return r;
}

PropertyResult check_simulation(const NetMorphism& m, std::size_t trials,
                                std::uint64_t seed) {
  PropertyResult res;
  const PNet& src = *m.source;
  const PNet& tgt = *m.target;
  std::mt19937_64 rng(seed);
  constexpr std::size_t kWalk = 12;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Marking u = src.initial();
    for (std::size_t step = 0; step < kWalk; ++step) {
      std::vector<TransId> en;
      for (TransId t = 0; t < src.num_transitions(); ++t)
        if (enabled(src, u, t)) en.push_back(t);
      if (en.empty()) break;
      // A random step: one transition, or a jointly enabled multiset.
      TransMultiset v{{en[rng() % en.size()], 1}};
      if (rng() % 3 == 0) {
        TransMultiset w = v;
        w[en[rng() % en.size()]] += 1;
        if (enabled(src, u, w)) v = w;
      }
      const Marking next = fire(src, u, v);
      const Marking fu = m.map_marking(u);
      const TransMultiset fv = m.map_transitions(v);
      const Marking fnext = m.map_marking(next);
      ++res.checked;
      const std::string what = src.name().empty() ? "" : src.name() + ": ";
      if (!enabled(tgt, fu, fv)) {
        res.fail(what + "f(" + format_transitions(src, v) +
                 ") not enabled at f(" + u.to_string() + ") = " +
                 fu.to_string());
        return res;
      }
      const Marking reached = fire(tgt, fu, fv);
      if (reached != fnext) {
        res.fail(what + "firing " + format_transitions(src, v) + " at " +
                 u.to_string() + ": target reaches " + reached.to_string() +
                 " but f(u') = " + fnext.to_string());
        return res;
      }
      u = next;
    }
  }
  return res;
}

std::string format_transitions(const PNet& n, const TransMultiset& v) {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [t, k] : v) {
    if (!first) os << " + ";
    first = false;
    if (k > 1) os << k;
    os << n.trans_name(t);
  }
  return os.str();
}

std::string format_sequence(const PNet& n, const std::vector<TransId>& seq) {
  std::string s;
  for (TransId t : seq) {
    if (!s.empty()) s += ' ';
    s += n.trans_name(t);
  }
  return s;
}

}  // namespace persnet
