#pragma once

#include "persnet/pnet.hpp"
#include "persnet/report.hpp"

#include <cstddef>
#include <vector>

namespace persnet {

/// A bijection between two nets preserving sorts, arcs and the initial
/// marking. Names are ignored.
struct NetIsomorphism {
  std::vector<PlaceId> places;
  std::vector<TransId> transitions;
};

struct IsoResult {
  /// Yes with a witness, No if none exists, Unknown if the budget ran out.
  Verdict verdict = Verdict::No;
  NetIsomorphism witness;
};

/// Backtracking search over items, pruned by colour refinement classes.
/// The budget counts search nodes.
IsoResult iso_check(const PNet& a, const PNet& b, std::size_t budget = 1000000);

/// True iff the maps form an isomorphism a -> b.
bool is_isomorphism(const PNet& a, const PNet& b, const NetIsomorphism& f);

}  // namespace persnet
