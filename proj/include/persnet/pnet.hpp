#pragma once

#include "persnet/marking.hpp"
#include "persnet/report.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace persnet {

using TransId = std::size_t;
/// Finite multiset of transitions.
using TransMultiset = std::map<TransId, Count>;

/// A net with persistence. Pre- and post-sets are sets of places; the
/// initial marking is a set. Immutable once built by NetBuilder.
class PNet {
public:
  PNet();

  const std::string& name() const noexcept { return name_; }
  const UniversePtr& universe() const noexcept { return universe_; }

  std::size_t num_places() const noexcept { return universe_->size(); }
  std::size_t num_transitions() const noexcept { return trans_names_.size(); }
  std::size_t num_persistent() const;

  const std::string& place_name(PlaceId p) const { return universe_->name(p); }
  bool persistent(PlaceId p) const { return universe_->persistent(p); }
  PlaceId place(std::string_view name) const { return universe_->at(name); }
  std::optional<PlaceId> find_place(std::string_view name) const {
    return universe_->find(name);
  }

  const std::string& trans_name(TransId t) const;
  TransId transition(std::string_view name) const;
  std::optional<TransId> find_transition(std::string_view name) const;

  /// Sorted pre-set / post-set of a transition.
  const std::vector<PlaceId>& pre(TransId t) const;
  const std::vector<PlaceId>& post(TransId t) const;
  /// Sorted generators (•s) and consumers (s•) of a place.
  const std::vector<TransId>& producers(PlaceId p) const;
  const std::vector<TransId>& consumers(PlaceId p) const;

  const Marking& pre_marking(TransId t) const;
  const Marking& post_marking(TransId t) const;
  /// •v and v• for a multiset of transitions.
  Marking pre_of(const TransMultiset& v) const;
  Marking post_of(const TransMultiset& v) const;

  const Marking& initial() const noexcept { return initial_; }

  /// Marking over this net's universe built from place names.
  Marking marking(const std::vector<std::string>& place_names) const {
    return Marking::of(universe_, place_names);
  }
  Marking empty_marking() const { return Marking(universe_); }

  /// Multiset of transitions from names (repetition = multiplicity).
  TransMultiset transitions(const std::vector<std::string>& names) const;

private:
  friend class NetBuilder;

  std::string name_;
  UniversePtr universe_;
  std::vector<std::string> trans_names_;
  std::unordered_map<std::string, TransId> trans_index_;
  std::vector<std::vector<PlaceId>> pre_, post_;
  std::vector<std::vector<TransId>> producers_, consumers_;
  std::vector<Marking> pre_marking_, post_marking_;
  Marking initial_;
};

/// Incremental construction of a PNet. Identifiers must be unique across
/// places and transitions.
class NetBuilder {
public:
  explicit NetBuilder(std::string name = "");

  PlaceId add_place(const std::string& name, bool persistent = false);
  TransId add_transition(const std::string& name,
                         const std::vector<std::string>& pre,
                         const std::vector<std::string>& post);
  TransId add_transition_ids(const std::string& name,
                             const std::vector<PlaceId>& pre,
                             const std::vector<PlaceId>& post);
  void mark(const std::string& place);
  void mark_id(PlaceId p);

  bool has_id(const std::string& name) const;
  std::size_t num_places() const { return universe_->size(); }
  std::size_t num_transitions() const { return trans_names_.size(); }

  PNet build() const;

private:
  std::vector<PlaceId> resolve(const std::string& owner,
                               const std::vector<std::string>& names) const;

  std::string name_;
  std::shared_ptr<PlaceUniverse> universe_;
  std::vector<std::string> trans_names_;
  std::unordered_map<std::string, TransId> trans_index_;
  std::vector<std::vector<PlaceId>> pre_, post_;
  std::vector<PlaceId> initial_;
};

/// t-restrictedness, irredundancy, and absence of persistent places in the
/// initial marking.
ValidationReport validate_well_formed(const PNet& n);

bool enabled(const PNet& n, const Marking& u, const TransMultiset& v);
bool enabled(const PNet& n, const Marking& u, TransId t);

/// (u - •v) + v•. Throws NotEnabled naming the first uncovered place.
Marking fire(const PNet& n, const Marking& u, const TransMultiset& v);
Marking fire(const PNet& n, const Marking& u, TransId t);
/// Fires the transitions one after another, starting from the initial
/// marking unless a start marking is given.
Marking fire_sequence(const PNet& n, const std::vector<TransId>& seq);
Marking fire_sequence(const PNet& n, const Marking& start,
                      const std::vector<TransId>& seq);

struct ReachableMarking {
  Marking marking;
  /// Shortest firing sequence from the initial marking.
  std::vector<TransId> path;
};

struct ReachabilityResult {
  /// In BFS order; the first entry is the initial marking.
  std::vector<ReachableMarking> markings;
  /// True if the step bound or the marking cap cut off new markings.
  bool truncated = false;

  const ReachableMarking* find(const Marking& u) const;
  bool contains(const Marking& u) const { return find(u) != nullptr; }
  bool any_covering(const Marking& v) const;
};

/// Breadth-first search over single-transition firings.
ReachabilityResult reachable(const PNet& n, std::size_t step_bound,
                             std::size_t marking_cap);

/// True iff every marking reached within the bound is a set.
bool is_safe_up_to(const PNet& n, std::size_t step_bound,
                   std::size_t marking_cap = 200000);

/// A p-net morphism f = <f_S, f_T> : source -> target. f_S is given on
/// generators and extended homomorphically.
struct NetMorphism {
  std::shared_ptr<const PNet> source;
  std::shared_ptr<const PNet> target;
  /// Indexed by source place; markings over the target universe.
  std::vector<Marking> place_map;
  /// Indexed by source transition; nullopt = undefined.
  std::vector<std::optional<TransId>> trans_map;

  NetMorphism(std::shared_ptr<const PNet> source,
              std::shared_ptr<const PNet> target);

  static NetMorphism identity(std::shared_ptr<const PNet> net);

  Marking map_marking(const Marking& u) const;
  TransMultiset map_transitions(const TransMultiset& v) const;
};

ValidationReport validate_morphism(const NetMorphism& m);

/// Samples random firings u -v-> u' of the source and checks that
/// f(u) -f(v)-> f(u') is a firing of the target.
PropertyResult check_simulation(const NetMorphism& m, std::size_t trials,
                                std::uint64_t seed);

std::string format_transitions(const PNet& n, const TransMultiset& v);
std::string format_sequence(const PNet& n, const std::vector<TransId>& seq);

}  // namespace persnet
