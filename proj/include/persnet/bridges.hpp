#pragma once

#include "persnet/es.hpp"
#include "persnet/occnet.hpp"
#include "persnet/pnet.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace persnet {

/// Events of o, binary conflict of o, and as generators of e the minimal
/// event sets enabling e in o.
EventStructure es_of_occnet(const OccNet& o);

enum class SynthMode { Full, Reduced };

struct SynthesisResult {
  std::shared_ptr<const PNet> net;
  /// Per generated place, its tag "<X | Y>".
  std::map<std::string, std::string> tags;
};

/// Canonical occurrence p-net of a live, locally connected event
/// structure. Non-persistent places <X,Y> have |X| <= 1, X causing every
/// member of Y, and Y pairwise conflicting. Persistent places <X,Y> have
/// Y non-empty and X a connected disjunct of every member of Y. Reduced
/// mode keeps, per X, only the maximal Y. Throws InvalidStructure naming
/// the failing event if the structure is not live or not locally
/// connected, and BudgetExceeded past max_places.
SynthesisResult net_of_es(const EventStructure& es, SynthMode mode = SynthMode::Full,
                          std::size_t max_places = std::size_t{1} << 14);

struct UnitReport {
  /// isomorphic and the synthesized net is a well-formed occurrence p-net.
  bool ok = true;
  /// Events, conflict and enabling agree with the input.
  bool isomorphic = true;
  std::vector<std::string> discrepancies;
  /// The synthesized net and its occurrence and well-formedness report.
  std::shared_ptr<const PNet> net;
  ValidationReport occurrence;
};

/// Builds es_of_occnet(net_of_es(es)) and compares events, conflict and
/// enabling on every configuration of either side with the original. The
/// comparison still runs when the synthesized net fails validation, as
/// long as its causality is acyclic.
UnitReport unit_iso_check(const EventStructure& es, SynthMode mode = SynthMode::Full);

struct PNetEs {
  EventStructure es;
  /// False if the unfolding was cut by the depth bound: minimal enablings
  /// are then relative to that depth.
  bool complete = false;
};

PNetEs es_of_pnet(const PNet& n, std::size_t depth_bound);

}  // namespace persnet
