#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace persnet {

using PlaceId = std::size_t;
using Count = std::uint64_t;

/// A finite set of named places with a distinguished persistent subset.
class PlaceUniverse {
public:
  PlaceUniverse() = default;

  /// Adds a place and returns its id. Throws on a duplicate name.
  PlaceId add(std::string name, bool persistent);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(PlaceId p) const;
  bool persistent(PlaceId p) const;
  std::optional<PlaceId> find(std::string_view name) const;
  PlaceId at(std::string_view name) const;

  friend bool operator==(const PlaceUniverse& a, const PlaceUniverse& b) {
    return a.names_ == b.names_ && a.persistent_ == b.persistent_;
  }

private:
  std::vector<std::string> names_;
  std::vector<bool> persistent_;
  std::unordered_map<std::string, PlaceId> index_;
};

using UniversePtr = std::shared_ptr<const PlaceUniverse>;

/// Element of the commutative monoid with idempotency over a place universe:
/// a finite multiset in which persistent places carry at most one token.
///
/// Stored in canonical form (zero counts absent), so equality, ordering and
/// use as a set key are structural. Values are immutable once built.
class Marking {
public:
  explicit Marking(UniversePtr universe);

  /// Builds the formal sum of the given counts. Persistent places saturate
  /// at one token; zero entries are dropped.
  Marking(UniversePtr universe, const std::map<PlaceId, Count>& counts);

  /// The set {p1, ..., pn}, or the formal sum p1 + ... + pn when names
  /// repeat.
  static Marking of(UniversePtr universe,
                    const std::vector<std::string>& place_names);
  static Marking of_ids(UniversePtr universe, const std::vector<PlaceId>& ids);

  const UniversePtr& universe() const noexcept { return universe_; }
  const std::map<PlaceId, Count>& counts() const noexcept { return counts_; }
  Count count(PlaceId p) const;
  bool contains(PlaceId p) const { return count(p) > 0; }
  bool empty() const noexcept { return counts_.empty(); }
  /// True iff every count is at most one.
  bool is_set() const;
  std::vector<PlaceId> support() const;
  Count total() const;

  /// Human-readable formal sum, e.g. "2a + b + c"; "0" for the empty marking.
  std::string to_string() const;

  friend bool operator==(const Marking& a, const Marking& b) {
    return a.counts_ == b.counts_;
  }
  friend std::strong_ordering operator<=>(const Marking& a, const Marking& b) {
    if (a.counts_ < b.counts_) return std::strong_ordering::less;
    if (b.counts_ < a.counts_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

private:
  UniversePtr universe_;
  std::map<PlaceId, Count> counts_;
};

/// Same pointer, or structurally identical universes.
bool same_universe(const UniversePtr& a, const UniversePtr& b);

/// u + v: non-persistent counts sum, persistent counts saturate at one.
Marking add(const Marking& u, const Marking& v);

/// True iff u = v + w for some w.
bool covers(const Marking& u, const Marking& v);

/// Greatest w (w.r.t. covering) with u = v + w. Persistent tokens of u are
/// kept. Throws NotCovered naming the first violating place.
Marking subtract(const Marking& u, const Marking& v);

/// Pointwise minimum.
Marking meet(const Marking& u, const Marking& v);

}  // namespace persnet
