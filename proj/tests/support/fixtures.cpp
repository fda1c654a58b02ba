#include "support/fixtures.hpp"

#include <sstream>

namespace fixtures {

std::string path(const std::string& name) { return std::string(PERSNET_DATA_DIR) + "/" + name; }

persnet::NetDocument doc(const std::string& name) {
  return persnet::parse_pnet_document(persnet::read_text_file(path(name)));
}

persnet::PNet net(const std::string& name) { return doc(name).net; }

std::shared_ptr<const persnet::PNet> net_ptr(const std::string& name) {
  return std::make_shared<const persnet::PNet>(net(name));
}

persnet::EventStructure es(const std::string& name) {
  return persnet::parse_es(persnet::read_text_file(path(name)));
}

persnet::Marking marking(const persnet::PNet& n, const std::string& terms) {
  std::istringstream in(terms);
  std::vector<std::string> names;
  for (std::string tok; in >> tok;) {
    if (tok == "+") continue;
    std::size_t k = 1;
    std::size_t i = 0;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
    if (i > 0 && i < tok.size()) {
      k = std::stoul(tok.substr(0, i));
      tok = tok.substr(i);
    }
    for (std::size_t j = 0; j < k; ++j) names.push_back(tok);
  }
  return n.marking(names);
}

}  // namespace fixtures
