#pragma once

#include "persnet/bitset.hpp"
#include "persnet/pnet.hpp"
#include "persnet/report.hpp"

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

namespace persnet {

/// Decides the set conflict #X of a p-net, over items indexed as places
/// first (0 .. |S|-1) and transitions after (|S| .. |S|+|T|-1).
///
/// #X fails exactly when X extends to an item set K that is closed (every
/// transition in K brings its pre-set, every place in K with a non-empty
/// pre-set brings one of its generators) and free of competition (no two
/// transitions in K share a non-persistent pre-place). The search for such
/// a K branches over generators and prunes on competition.
class ConflictOracle {
public:
  explicit ConflictOracle(const PNet& n);
  ConflictOracle(const ConflictOracle& other);
  ConflictOracle& operator=(const ConflictOracle&) = delete;

  std::size_t num_places() const noexcept { return num_places_; }
  std::size_t num_items() const noexcept { return num_places_ + pre_.size(); }
  std::size_t item_of_place(PlaceId p) const noexcept { return p; }
  std::size_t item_of_transition(TransId t) const noexcept {
    return num_places_ + t;
  }

  bool in_conflict(const IndexSet& items) const;
  bool in_conflict(const std::vector<PlaceId>& places,
                   const std::vector<TransId>& transitions) const;

  /// True iff the conditions extend to a closed, competition-free item set
  /// none of whose transitions consumes a non-persistent member. On an
  /// occurrence p-net this is exactly coverability.
  bool jointly_markable(const IndexSet& conditions) const;

private:
  bool extend(IndexSet k, std::set<IndexSet>& failed, const IndexSet* forbidden) const;

  std::size_t num_places_;
  std::vector<std::vector<PlaceId>> pre_;
  std::vector<std::vector<TransId>> producers_;
  std::vector<IndexSet> competitors_;
  std::vector<IndexSet> consumers_;
  std::vector<bool> persistent_;
  mutable std::mutex mutex_;
  mutable std::map<IndexSet, bool> cache_;
};

/// Outcome of a securing-sequence search.
struct SecuringResult {
  Verdict verdict = Verdict::No;
  std::vector<TransId> sequence;
};

/// An occurrence p-net (conditions = places, events = transitions) with its
/// relations computed once. Construction requires acyclic causality; use
/// validate_occurrence or OccNet::validated to check the other axioms.
class OccNet {
public:
  static constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kDefaultBudget = 200000;

  explicit OccNet(PNet net);
  explicit OccNet(std::shared_ptr<const PNet> net);

  /// Throws InvalidStructure listing the violations unless the net is an
  /// occurrence p-net.
  static OccNet validated(PNet net);

  const PNet& net() const noexcept { return *net_; }
  const std::shared_ptr<const PNet>& net_ptr() const noexcept { return net_; }
  std::size_t num_conditions() const noexcept { return net_->num_places(); }
  std::size_t num_events() const noexcept { return net_->num_transitions(); }
  std::size_t num_items() const noexcept { return num_conditions() + num_events(); }
  std::size_t item_of_condition(PlaceId b) const noexcept { return b; }
  std::size_t item_of_event(TransId e) const noexcept { return num_conditions() + e; }
  bool is_event_item(std::size_t x) const noexcept { return x >= num_conditions(); }
  std::string item_name(std::size_t x) const;

  const ConflictOracle& oracle() const noexcept { return *oracle_; }

  /// #X for a set of items.
  bool in_conflict(const IndexSet& items) const { return oracle_->in_conflict(items); }
  bool in_conflict(const std::vector<PlaceId>& conditions,
                   const std::vector<TransId>& events) const {
    return oracle_->in_conflict(conditions, events);
  }
  /// Binary conflict between events; conflict(e, e) is self-conflict.
  bool conflict(TransId e, TransId e2) const { return event_conflict_[e].test(e2); }
  /// Events in binary conflict with e (over events).
  const IndexSet& conflicts_of(TransId e) const { return event_conflict_.at(e); }
  /// Binary conflict between arbitrary items.
  bool item_conflict(std::size_t x, std::size_t y) const;

  /// x <= y in the causal order (over items).
  bool leq(std::size_t x, std::size_t y) const { return past_.at(y).test(x); }
  /// {x | x <= y}.
  const IndexSet& past(std::size_t y) const { return past_.at(y); }

  std::size_t depth_of_condition(PlaceId b) const { return depth_.at(b); }
  std::size_t depth_of_event(TransId e) const {
    return depth_.at(item_of_event(e));
  }
  std::size_t depth(std::size_t item) const { return depth_.at(item); }

  /// X |- e: every pre-condition of e is initial or produced by X.
  bool enables(const IndexSet& events, TransId e) const;
  bool is_securing_sequence(const std::vector<TransId>& seq) const;
  SecuringResult find_securing_sequence(TransId e,
                                        std::size_t budget = kDefaultBudget) const;

  /// Canonically ordered (by size, then lexicographically) configurations
  /// with at most max_size events.
  std::vector<IndexSet> configurations(std::size_t max_size) const;
  bool is_configuration(const IndexSet& events) const;
  /// The events of c that are secured inside c, in a securing order.
  std::vector<TransId> secured_order(const IndexSet& events) const;

  /// (v0 + sum of post-sets) - (sum of pre-sets); throws InvalidStructure if
  /// c is not a configuration.
  Marking mark_after(const IndexSet& c) const;
  std::vector<TransId> config_to_firing(const IndexSet& c) const;
  IndexSet firing_to_config(const std::vector<TransId>& seq) const;

  /// co X over conditions: no conflict, non-persistent members causally
  /// independent, and no event needed to produce some member consumes a
  /// non-persistent member. Coincides with coverability.
  bool concurrent(const IndexSet& conditions) const;
  /// The first two clauses only. Weaker when a persistent member has
  /// several generators: {p, q, o} with o produced by a consumer of p or by
  /// a consumer of q passes here but is not coverable.
  bool concurrent_as_defined(const IndexSet& conditions) const;
  /// Search for a reachable marking covering the conditions.
  Verdict coverable(const IndexSet& conditions,
                    std::size_t budget = kDefaultBudget) const;

  IndexSet event_set(const std::vector<std::string>& names) const;
  IndexSet condition_set(const std::vector<std::string>& names) const;
  std::vector<std::string> event_names(const IndexSet& events) const;

private:
  void compute();

  std::shared_ptr<const PNet> net_;
  std::shared_ptr<const ConflictOracle> oracle_;
  std::vector<IndexSet> event_conflict_;
  std::vector<IndexSet> past_;
  std::vector<std::size_t> depth_;
};

/// Causality closure of an arbitrary p-net, over items. Returns nullopt if
/// causality has a cycle.
std::optional<std::vector<IndexSet>> causal_pasts(const PNet& n);

/// Occurrence axioms (1)-(4) together with well-formedness. The fact
/// "backward-conflict-free" is recorded in the report.
ValidationReport validate_occurrence(const PNet& n,
                                     std::size_t budget = OccNet::kDefaultBudget);

/// Hasse diagram of a family of sets under inclusion.
struct HasseDiagram {
  std::vector<IndexSet> nodes;
  /// Covering pairs (lower, upper) as indices into nodes.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

HasseDiagram hasse_diagram(std::vector<IndexSet> sets);

}  // namespace persnet
