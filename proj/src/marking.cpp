#include "persnet/marking.hpp"

#include "persnet/error.hpp"

#include <limits>
#include <sstream>

namespace persnet {

PlaceId PlaceUniverse::add(std::string name, bool persistent) {
  if (index_.contains(name))
    throw InvalidStructure("duplicate place '" + name + "'");
  const PlaceId id = names_.size();
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  persistent_.push_back(persistent);
  return id;
}

const std::string& PlaceUniverse::name(PlaceId p) const {
  if (p >= names_.size())
    throw UnknownId("place id " + std::to_string(p) + " out of range");
  return names_[p];
}

bool PlaceUniverse::persistent(PlaceId p) const {
  if (p >= names_.size())
    throw UnknownId("place id " + std::to_string(p) + " out of range");
  return persistent_[p];
}

std::optional<PlaceId> PlaceUniverse::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PlaceId PlaceUniverse::at(std::string_view name) const {
  if (auto p = find(name)) return *p;
  throw UnknownId("unknown place '" + std::string(name) + "'");
}

bool same_universe(const UniversePtr& a, const UniversePtr& b) {
  return a == b || (a && b && *a == *b);
}

namespace {

void require_same(const Marking& u, const Marking& v) {
  if (!same_universe(u.universe(), v.universe()))
    throw UniverseMismatch("markings over different place universes");
}

Count checked_sum(Count a, Count b) {
  if (a > std::numeric_limits<Count>::max() - b)
    throw Error("token count overflow");
  return a + b;
}

}  // namespace

Marking::Marking(UniversePtr universe) : universe_(std::move(universe)) {
  if (!universe_) throw Error("marking requires a place universe");
}

Marking::Marking(UniversePtr universe, const std::map<PlaceId, Count>& counts)
    : Marking(std::move(universe)) {
  for (auto [p, n] : counts) {
    if (n == 0) continue;
    counts_[p] = universe_->persistent(p) ? 1 : n;
  }
}

Marking Marking::of(UniversePtr universe,
                    const std::vector<std::string>& place_names) {
  std::map<PlaceId, Count> counts;
  for (const auto& n : place_names) counts[universe->at(n)] += 1;
  return Marking(std::move(universe), counts);
}

Marking Marking::of_ids(UniversePtr universe, const std::vector<PlaceId>& ids) {
  std::map<PlaceId, Count> counts;
  for (auto p : ids) {
    if (p >= universe->size())
      throw UnknownId("place id " + std::to_string(p) + " out of range");
    counts[p] += 1;
  }
  return Marking(std::move(universe), counts);
}

Count Marking::count(PlaceId p) const {
  auto it = counts_.find(p);
  return it == counts_.end() ? 0 : it->second;
}

bool Marking::is_set() const {
  for (auto [p, n] : counts_)
    if (n > 1) return false;
  return true;
}

std::vector<PlaceId> Marking::support() const {
  std::vector<PlaceId> out;
  out.reserve(counts_.size());
  for (auto [p, n] : counts_) out.push_back(p);
  return out;
}

Count Marking::total() const {
  Count t = 0;
  for (auto [p, n] : counts_) t = checked_sum(t, n);
  return t;
}

std::string Marking::to_string() const {
  if (counts_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [p, n] : counts_) {
    if (!first) os << " + ";
    first = false;
    if (n > 1) os << n;
    os << universe_->name(p);
  }
  return os.str();
}

Marking add(const Marking& u, const Marking& v) {
  require_same(u, v);
  std::map<PlaceId, Count> sum = u.counts();
  for (auto [p, n] : v.counts()) sum[p] = checked_sum(sum[p], n);
  return Marking(u.universe(), sum);
}

bool covers(const Marking& u, const Marking& v) {
  require_same(u, v);
  for (auto [p, n] : v.counts())
    if (u.count(p) < n) return false;
  return true;
}

Marking subtract(const Marking& u, const Marking& v) {
  require_same(u, v);
  std::map<PlaceId, Count> rest = u.counts();
  for (auto [p, n] : v.counts()) {
    const Count have = u.count(p);
    if (have < n) {
      const auto& name = u.universe()->name(p);
      throw NotCovered(name, "marking " + u.to_string() + " does not cover " +
                                 v.to_string() + " (place '" + name + "')");
    }
    // Persistent tokens are never removed: the top solution keeps them.
    if (!u.universe()->persistent(p)) rest[p] = have - n;
  }
  return Marking(u.universe(), rest);
}

Marking meet(const Marking& u, const Marking& v) {
  require_same(u, v);
  std::map<PlaceId, Count> m;
  for (auto [p, n] : u.counts()) {
    const Count other = v.count(p);
    if (other > 0) m[p] = std::min(n, other);
  }
  return Marking(u.universe(), m);
}

}  // namespace persnet
