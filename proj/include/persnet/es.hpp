#pragma once

#include "persnet/bitset.hpp"
#include "persnet/occnet.hpp"
#include "persnet/report.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace persnet {

using EventId = std::size_t;

/// Event structure with binary conflict. Enabling is given by a per-event
/// antichain of generators: X |- e iff some generator of e is included in X.
class EventStructure {
public:
  EventStructure() = default;
  explicit EventStructure(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  EventId add_event(const std::string& name);
  /// Symmetric; add_conflict(e, e) records a self-conflict.
  void add_conflict(EventId a, EventId b);
  /// Adds a generator, keeping the antichain canonical (supersets of an
  /// existing generator are dropped, and so are existing supersets).
  void add_generator(EventId e, IndexSet generator);
  void add_generator(EventId e, const std::vector<std::string>& names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& event_name(EventId e) const;
  EventId event(std::string_view name) const;
  std::optional<EventId> find_event(std::string_view name) const;

  bool conflict(EventId a, EventId b) const { return conflict_.at(a).test(b); }
  const IndexSet& conflicts_of(EventId e) const { return conflict_.at(e); }
  /// Canonically ordered antichain.
  const std::vector<IndexSet>& generators(EventId e) const { return generators_.at(e); }

  bool enables(const IndexSet& x, EventId e) const;
  /// Pairwise consistent, including the absence of self-conflicts.
  bool consistent(const IndexSet& x) const;

  IndexSet empty_set() const { return IndexSet(size()); }
  IndexSet set_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(const IndexSet& x) const;
  /// "{a, b}".
  std::string format(const IndexSet& x) const;

  friend bool operator==(const EventStructure& a, const EventStructure& b) {
    return a.names_ == b.names_ && a.conflict_ == b.conflict_ &&
           a.generators_ == b.generators_;
  }

private:
  std::string name_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, EventId> index_;
  std::vector<IndexSet> conflict_;
  std::vector<std::vector<IndexSet>> generators_;
};

/// Write-once derived data of a finite event structure: configurations,
/// minimal enablings and disjuncts. Immutable after construction.
class EsAnalysis {
public:
  explicit EsAnalysis(const EventStructure& es,
                      std::size_t max_size = std::numeric_limits<std::size_t>::max());

  const EventStructure& es() const noexcept { return *es_; }
  /// Canonically ordered.
  const std::vector<IndexSet>& configurations() const noexcept { return configs_; }
  const std::vector<IndexSet>& hist(EventId e) const { return hist_.at(e); }
  const std::vector<IndexSet>& disjuncts(EventId e) const { return disjuncts_.at(e); }
  IndexSet causes(EventId e) const;
  std::vector<IndexSet> connected_disjuncts(EventId e) const;

private:
  std::shared_ptr<const EventStructure> es_;
  std::vector<IndexSet> configs_;
  std::vector<std::vector<IndexSet>> hist_;
  std::vector<std::vector<IndexSet>> disjuncts_;
};

/// Consistent secured sets of at most max_size events, canonically ordered.
std::vector<IndexSet> es_configurations(
    const EventStructure& es,
    std::size_t max_size = std::numeric_limits<std::size_t>::max());
bool is_es_configuration(const EventStructure& es, const IndexSet& x);

struct LivenessReport {
  bool live = true;
  std::optional<EventId> self_conflict;
  /// A consistent pair with no common configuration.
  std::optional<std::pair<EventId, EventId>> unrealised_pair;
  std::string message;
};

LivenessReport check_live(const EventStructure& es);
inline bool is_live(const EventStructure& es) { return check_live(es).live; }

std::vector<IndexSet> minimal_enablings(const EventStructure& es, EventId e);
IndexSet causes(const EventStructure& es, EventId e);
std::vector<IndexSet> disjuncts(const EventStructure& es, EventId e);
bool is_connected_set(const EventStructure& es, const IndexSet& x);

/// Throws InvalidStructure if some member of d is not a disjunct of e.
bool is_covering(const EventStructure& es, EventId e, const std::vector<IndexSet>& d);
bool is_covering(const EsAnalysis& a, EventId e, const std::vector<IndexSet>& d);

struct ConnectivityReport {
  bool holds = true;
  std::optional<EventId> failing_event;
  /// For local connectedness: per event, the covering of connected disjuncts.
  std::vector<std::vector<IndexSet>> witnesses;
};

ConnectivityReport check_connected_es(const EventStructure& es);
ConnectivityReport check_connected_es(const EsAnalysis& a);
ConnectivityReport check_locally_connected(const EventStructure& es);
ConnectivityReport check_locally_connected(const EsAnalysis& a);
inline bool is_connected_es(const EventStructure& es) {
  return check_connected_es(es).holds;
}
inline bool is_locally_connected(const EventStructure& es) {
  return check_locally_connected(es).holds;
}

/// Consistent events jointly enabled by some configuration.
bool concurrent_events(const EventStructure& es, EventId a, EventId b);

struct EsMorphism {
  std::shared_ptr<const EventStructure> source;
  std::shared_ptr<const EventStructure> target;
  std::vector<std::optional<EventId>> map;

  EsMorphism(std::shared_ptr<const EventStructure> source,
             std::shared_ptr<const EventStructure> target);
  IndexSet image(const IndexSet& x) const;
};

ValidationReport validate_es_morphism(
    const EsMorphism& m,
    std::size_t max_config = std::numeric_limits<std::size_t>::max());

HasseDiagram config_poset(
    const EventStructure& es,
    std::size_t max_size = std::numeric_limits<std::size_t>::max());

}  // namespace persnet
