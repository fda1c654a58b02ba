#pragma once

#include "persnet/occnet.hpp"
#include "persnet/pnet.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace persnet {

/// Graphviz rendering of a net. Non-persistent places are circles,
/// persistent ones double circles, transitions boxes; each pair in `equiv`
/// (place or transition names) becomes a dotted undirected edge. Marked
/// places carry a filled dot in their label.
std::string net_to_dot(const PNet& n,
                       const std::vector<std::pair<std::string, std::string>>& equiv = {});

/// Hasse diagram of a family of sets, bottom to top.
std::string poset_to_dot(const std::string& name, const HasseDiagram& h,
                         const std::function<std::string(const IndexSet&)>& label);

}  // namespace persnet
