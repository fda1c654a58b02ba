#include "persnet/dot.hpp"

#include <sstream>

namespace persnet {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

// Places and transitions share the DOT namespace, so prefix them.
std::string place_node(PlaceId p) { return "p" + std::to_string(p); }
std::string trans_node(TransId t) { return "t" + std::to_string(t); }

}  // namespace

std::string net_to_dot(const PNet& n,
                       const std::vector<std::pair<std::string, std::string>>& equiv) {
  std::ostringstream os;
  os << "digraph " << quoted(n.name().empty() ? "net" : n.name()) << " {\n";
  os << "  rankdir=TB;\n";
  for (PlaceId p = 0; p < n.num_places(); ++p) {
    std::string label = n.place_name(p);
    if (n.initial().contains(p)) label += "\n\xE2\x97\x8F";
    os << "  " << place_node(p) << " [shape=" << (n.persistent(p) ? "doublecircle" : "circle")
       << ", label=" << quoted(label) << "];\n";
  }
  for (TransId t = 0; t < n.num_transitions(); ++t)
    os << "  " << trans_node(t) << " [shape=box, label=" << quoted(n.trans_name(t)) << "];\n";
  for (TransId t = 0; t < n.num_transitions(); ++t) {
    for (PlaceId p : n.pre(t)) os << "  " << place_node(p) << " -> " << trans_node(t) << ";\n";
    for (PlaceId p : n.post(t)) os << "  " << trans_node(t) << " -> " << place_node(p) << ";\n";
  }
  auto node = [&](const std::string& id) {
    if (auto p = n.find_place(id)) return place_node(*p);
    return trans_node(n.transition(id));
  };
  for (const auto& [x, y] : equiv)
    os << "  " << node(x) << " -> " << node(y)
       << " [dir=none, style=dotted, constraint=false];\n";
  os << "}\n";
  return os.str();
}

std::string poset_to_dot(const std::string& name, const HasseDiagram& h,
                         const std::function<std::string(const IndexSet&)>& label) {
  std::ostringstream os;
  os << "digraph " << quoted(name.empty() ? "poset" : name) << " {\n";
  os << "  rankdir=BT;\n  node [shape=plaintext];\n";
  for (std::size_t i = 0; i < h.nodes.size(); ++i)
    os << "  c" << i << " [label=" << quoted(label(h.nodes[i])) << "];\n";
  for (auto [lo, hi] : h.edges) os << "  c" << lo << " -> c" << hi << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace persnet
