#pragma once

#include "persnet/es.hpp"
#include "persnet/pnet.hpp"
#include "persnet/text_format.hpp"

#include <memory>
#include <string>

namespace fixtures {

std::string path(const std::string& name);
persnet::NetDocument doc(const std::string& name);
persnet::PNet net(const std::string& name);
std::shared_ptr<const persnet::PNet> net_ptr(const std::string& name);
persnet::EventStructure es(const std::string& name);

/// Name-based view of a marking, e.g. "q + r + s + o" in any order.
persnet::Marking marking(const persnet::PNet& n, const std::string& terms);

}  // namespace fixtures
