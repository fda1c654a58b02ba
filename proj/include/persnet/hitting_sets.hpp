#pragma once

#include "persnet/bitset.hpp"

#include <vector>

namespace persnet {

/// Keeps the inclusion-minimal members, canonically ordered.
std::vector<IndexSet> minimal_sets(std::vector<IndexSet> sets);

/// All minimal transversals of a hypergraph (Berge's algorithm). An empty
/// edge has no transversal; an empty edge list has the single transversal
/// {} (the empty set).
std::vector<IndexSet> minimal_hitting_sets(const std::vector<IndexSet>& edges,
                                           std::size_t universe);

}  // namespace persnet
