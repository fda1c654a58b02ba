#pragma once

#include "persnet/iso.hpp"
#include "persnet/occnet.hpp"
#include "persnet/pnet.hpp"
#include "persnet/report.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace persnet {

/// An occurrence p-net together with an equivalence on its items (items
/// indexed as in OccNet: conditions first, then events).
class OccEq {
public:
  /// rep[x] is any member of x's class; it is normalised to the least id.
  OccEq(std::shared_ptr<const OccNet> occ, const std::vector<std::size_t>& rep);

  static OccEq identity(std::shared_ptr<const OccNet> occ);
  /// Least equivalence containing the named pairs.
  static OccEq from_pairs(std::shared_ptr<const OccNet> occ,
                          const std::vector<std::pair<std::string, std::string>>& pairs);

  const OccNet& occ() const noexcept { return *occ_; }
  const std::shared_ptr<const OccNet>& occ_ptr() const noexcept { return occ_; }
  const PNet& net() const noexcept { return occ_->net(); }

  /// Least member of the class of x.
  std::size_t rep(std::size_t x) const { return rep_.at(x); }
  bool equivalent(std::size_t x, std::size_t y) const { return rep(x) == rep(y); }
  /// Every class, ordered by representative.
  std::vector<std::vector<std::size_t>> classes() const;
  /// Pairs x < y in the same class.
  std::vector<std::pair<std::size_t, std::size_t>> equivalent_pairs() const;
  bool is_identity() const;

  /// Provenance when produced by pre_unfold: the origin net and, per item,
  /// the place or transition it is an instance of.
  std::shared_ptr<const PNet> origin;
  std::vector<std::size_t> origin_of;
  /// Events were only generated below this depth; missing events at or
  /// beyond it are not reported by validate_occ_eq.
  std::optional<std::size_t> depth_bound;

private:
  std::shared_ptr<const OccNet> occ_;
  std::vector<std::size_t> rep_;
};

/// Strong concurrency: co X and no two distinct members equivalent.
bool strongly_concurrent(const OccEq& oe, const IndexSet& conditions);

/// Clauses 1a-1d, 2 and 3 of occurrence p-nets with equivalence, plus the
/// occurrence axioms and absence of backward conflicts.
ValidationReport validate_occ_eq(const OccEq& oe);

struct Quotient {
  std::shared_ptr<const PNet> net;
  /// Item of the input (conditions then events) -> item of the quotient.
  std::vector<std::size_t> item_map;
};

/// Classes become items named after their representative. Throws
/// InvalidStructure if members of a class disagree on sort or, for events,
/// on the classes of their pre- and post-sets.
Quotient quotient(const OccEq& oe);

/// Depth-bounded pre-unfolding: only events of depth < depth_bound are
/// generated. Instances are named ORIGIN_k, numbered per origin in
/// creation order. Throws InvalidStructure on a net that is not
/// well-formed and BudgetExceeded past max_items.
OccEq pre_unfold(const PNet& n, std::size_t depth_bound,
                 std::size_t max_items = 20000);

struct UnfoldingResult {
  OccEq pre_unfolding;
  Quotient quotient;
  /// quotient.net -> original net.
  NetMorphism folding;
  std::size_t depth_bound = 0;
  /// True iff no event of depth >= depth_bound exists.
  bool complete = false;
};

UnfoldingResult unfold(const PNet& n, std::size_t depth_bound,
                       std::size_t max_items = 20000);

/// Pre-unfolding of a finite occurrence p-net, deep enough to be complete.
OccEq pre_unfold_of_occ(const OccNet& o);

struct RoundTripReport {
  /// The folding Q(preUnf(O)) -> O is a bijection preserving arcs, sorts
  /// and the initial marking.
  bool folding_is_iso = false;
  /// Independent isomorphism search between Q(preUnf(O)) and O.
  Verdict search = Verdict::Unknown;
  bool complete = false;
  std::string message;

  bool ok() const { return complete && folding_is_iso && search == Verdict::Yes; }
};

RoundTripReport round_trip_check(const OccNet& o, std::size_t iso_budget = 1000000);

}  // namespace persnet
