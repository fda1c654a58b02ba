#pragma once

#include "persnet/es.hpp"
#include "persnet/pnet.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace persnet {

/// A parsed `.pnet` document: the net plus the optional `equiv` block used
/// by occurrence nets with equivalence.
struct NetDocument {
  PNet net;
  std::vector<std::pair<std::string, std::string>> equiv;
};

/// Line-oriented grammar, `#` starts a comment:
///   net NAME
///   place ID...            pplace ID...
///   trans ID : ID[,ID...] -> [ID[,ID...]]
///   marking ID...
///   equiv ID ID
/// Throws ParseError with line and column.
NetDocument parse_pnet_document(std::string_view text);
PNet parse_pnet(std::string_view text);

/// Canonical form: places and transitions in id order. Places with an
/// entry in `comments` are printed one per line with the comment attached.
std::string print_pnet(const PNet& n,
                       const std::vector<std::pair<std::string, std::string>>& equiv = {},
                       const std::map<std::string, std::string>& comments = {});

///   es NAME
///   events ID...
///   conflict ID ID
///   enabling ID <- [ID...]      (one line per generator)
EventStructure parse_es(std::string_view text);
std::string print_es(const EventStructure& es);

///   place SRC -> [TGT...]      (empty or `0` for the empty image)
///   trans SRC -> TGT | _
/// Unlisted places map to the empty marking, unlisted transitions are
/// undefined.
NetMorphism parse_net_morphism(std::string_view text,
                               std::shared_ptr<const PNet> source,
                               std::shared_ptr<const PNet> target);
std::string print_net_morphism(const NetMorphism& m);

///   event SRC -> TGT | _
EsMorphism parse_es_morphism(std::string_view text,
                             std::shared_ptr<const EventStructure> source,
                             std::shared_ptr<const EventStructure> target);

std::string read_text_file(const std::string& path);

/// Structural equality of nets (names, order, sorts, arcs, marking).
bool same_net(const PNet& a, const PNet& b);

}  // namespace persnet
