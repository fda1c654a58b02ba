#include "persnet/text_format.hpp"

#include "persnet/error.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace persnet {

namespace {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool id_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '\'';
}

// Splits one line into identifiers and the punctuation tokens ":", "->",
// "<-". Commas and blanks separate; "#" ends the line.
std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
      continue;
    }
    const std::size_t col = i + 1;
    if (line.substr(i, 2) == "->" || line.substr(i, 2) == "<-") {
      out.push_back({std::string(line.substr(i, 2)), lineno, col});
      i += 2;
      continue;
    }
    if (c == ':' || c == '|') {
      out.push_back({std::string(1, c), lineno, col});
      ++i;
      continue;
    }
    if (!id_char(c))
      throw ParseError(lineno, col, std::string("unexpected character '") + c + "'");
    std::size_t j = i;
    while (j < line.size() && id_char(line[j])) ++j;
    out.push_back({std::string(line.substr(i, j - i)), lineno, col});
    i = j;
  }
  return out;
}

std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto toks = tokenize(line, lineno);
    if (!toks.empty()) lines.push_back(std::move(toks));
    start = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw ParseError(t.line, t.column, msg);
}

void expect_identifier(const Token& t) {
  if (t.text == ":" || t.text == "->" || t.text == "<-" || t.text == "|")
    fail(t, "expected an identifier, found '" + t.text + "'");
}

// Position just after the last token, for "missing ..." errors.
Token end_of(const std::vector<Token>& toks) {
  const Token& last = toks.back();
  return {"", last.line, last.column + last.text.size()};
}

}  // namespace

// ----------------------------------------------------------------- .pnet

NetDocument parse_pnet_document(std::string_view text) {
  struct TransDecl {
    Token id;
    std::vector<Token> pre, post;
  };
  std::optional<std::string> name;
  std::vector<std::pair<Token, bool>> places;
  std::vector<TransDecl> trans;
  std::vector<Token> marking;
  std::vector<std::pair<Token, Token>> equiv;

  for (const auto& toks : tokenize_lines(text)) {
    const Token& kw = toks[0];
    if (kw.text == "net") {
      if (name) fail(kw, "duplicate 'net' line");
      if (toks.size() != 2) fail(kw, "expected 'net NAME'");
      expect_identifier(toks[1]);
      name = toks[1].text;
    } else if (kw.text == "place" || kw.text == "pplace") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        expect_identifier(toks[i]);
        places.emplace_back(toks[i], kw.text == "pplace");
      }
    } else if (kw.text == "trans") {
      if (toks.size() < 2) fail(end_of(toks), "missing transition identifier");
      expect_identifier(toks[1]);
      TransDecl d{toks[1], {}, {}};
      if (toks.size() < 3 || toks[2].text != ":")
        fail(toks.size() < 3 ? end_of(toks) : toks[2], "expected ':'");
      std::size_t i = 3;
      while (i < toks.size() && toks[i].text != "->") {
        expect_identifier(toks[i]);
        d.pre.push_back(toks[i++]);
      }
      if (i == toks.size()) fail(end_of(toks), "expected '->'");
      for (++i; i < toks.size(); ++i) {
        expect_identifier(toks[i]);
        d.post.push_back(toks[i]);
      }
      trans.push_back(std::move(d));
    } else if (kw.text == "marking") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        expect_identifier(toks[i]);
        marking.push_back(toks[i]);
      }
    } else if (kw.text == "equiv") {
      if (toks.size() != 3) fail(kw, "expected 'equiv ID ID'");
      expect_identifier(toks[1]);
      expect_identifier(toks[2]);
      equiv.emplace_back(toks[1], toks[2]);
    } else {
      fail(kw, "unknown keyword '" + kw.text + "'");
    }
  }

  NetBuilder b(name.value_or(""));
  std::set<std::string> ids;
  for (const auto& [tok, persistent] : places) {
    if (!ids.insert(tok.text).second) fail(tok, "duplicate identifier '" + tok.text + "'");
    b.add_place(tok.text, persistent);
  }
  for (const auto& d : trans)
    if (!ids.insert(d.id.text).second)
      fail(d.id, "duplicate identifier '" + d.id.text + "'");
  const PNet places_only = b.build();
  auto resolve = [&](const std::vector<Token>& toks, const std::string& what) {
    std::vector<PlaceId> out;
    std::set<PlaceId> seen;
    for (const auto& t : toks) {
      auto p = places_only.find_place(t.text);
      if (!p) fail(t, "unknown place '" + t.text + "'");
      if (!seen.insert(*p).second) fail(t, "place '" + t.text + "' repeated in " + what);
      out.push_back(*p);
    }
    return out;
  };
  for (const auto& d : trans)
    b.add_transition_ids(d.id.text, resolve(d.pre, "pre-set"), resolve(d.post, "post-set"));
  for (PlaceId p : resolve(marking, "marking")) {
    if (places_only.persistent(p))
      for (const auto& t : marking)
        if (t.text == places_only.place_name(p))
          fail(t, "persistent place '" + t.text + "' in the initial marking");
    b.mark_id(p);
  }

  NetDocument doc{b.build(), {}};
  for (const auto& [x, y] : equiv) {
    for (const auto* t : {&x, &y})
      if (!ids.contains(t->text)) fail(*t, "unknown identifier '" + t->text + "'");
    doc.equiv.emplace_back(x.text, y.text);
  }
  return doc;
}

PNet parse_pnet(std::string_view text) { return parse_pnet_document(text).net; }

std::string print_pnet(const PNet& n,
                       const std::vector<std::pair<std::string, std::string>>& equiv,
                       const std::map<std::string, std::string>& comments) {
  std::ostringstream os;
  if (!n.name().empty()) os << "net " << n.name() << "\n";
  for (bool persistent : {false, true}) {
    const char* kw = persistent ? "pplace" : "place";
    std::vector<std::string> plain;
    for (PlaceId p = 0; p < n.num_places(); ++p) {
      if (n.persistent(p) != persistent) continue;
      auto it = comments.find(n.place_name(p));
      if (it == comments.end()) {
        plain.push_back(n.place_name(p));
      } else {
        os << kw << " " << n.place_name(p) << "  # " << it->second << "\n";
      }
    }
    if (!plain.empty()) {
      os << kw;
      for (const auto& s : plain) os << " " << s;
      os << "\n";
    }
  }
  for (TransId t = 0; t < n.num_transitions(); ++t) {
    os << "trans " << n.trans_name(t) << " :";
    const auto& pre = n.pre(t);
    for (std::size_t i = 0; i < pre.size(); ++i)
      os << (i ? "," : " ") << n.place_name(pre[i]);
    os << " ->";
    const auto& post = n.post(t);
    for (std::size_t i = 0; i < post.size(); ++i)
      os << (i ? "," : " ") << n.place_name(post[i]);
    os << "\n";
  }
  if (!n.initial().empty()) {
    os << "marking";
    for (auto [p, k] : n.initial().counts()) os << " " << n.place_name(p);
    os << "\n";
  }
  for (const auto& [x, y] : equiv) os << "equiv " << x << " " << y << "\n";
  return os.str();
}

bool same_net(const PNet& a, const PNet& b) {
  if (a.name() != b.name() || !(*a.universe() == *b.universe()) ||
      a.num_transitions() != b.num_transitions() || a.initial() != b.initial())
    return false;
  for (TransId t = 0; t < a.num_transitions(); ++t)
    if (a.trans_name(t) != b.trans_name(t) || a.pre(t) != b.pre(t) ||
        a.post(t) != b.post(t))
      return false;
  return true;
}

// ------------------------------------------------------------------- .es

EventStructure parse_es(std::string_view text) {
  std::optional<std::string> name;
  std::vector<Token> events;
  std::vector<std::pair<Token, Token>> conflicts;
  std::vector<std::pair<Token, std::vector<Token>>> enabling;
  for (const auto& toks : tokenize_lines(text)) {
    const Token& kw = toks[0];
    if (kw.text == "es") {
      if (name) fail(kw, "duplicate 'es' line");
      if (toks.size() != 2) fail(kw, "expected 'es NAME'");
      expect_identifier(toks[1]);
      name = toks[1].text;
    } else if (kw.text == "events") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        expect_identifier(toks[i]);
        events.push_back(toks[i]);
      }
    } else if (kw.text == "conflict") {
      if (toks.size() != 3) fail(kw, "expected 'conflict ID ID'");
      expect_identifier(toks[1]);
      expect_identifier(toks[2]);
      conflicts.emplace_back(toks[1], toks[2]);
    } else if (kw.text == "enabling") {
      if (toks.size() < 3 || toks[2].text != "<-")
        fail(toks.size() < 3 ? end_of(toks) : toks[2], "expected 'enabling ID <- [ID...]'");
      expect_identifier(toks[1]);
      std::vector<Token> gen;
      for (std::size_t i = 3; i < toks.size(); ++i) {
        expect_identifier(toks[i]);
        gen.push_back(toks[i]);
      }
      enabling.emplace_back(toks[1], std::move(gen));
    } else {
      fail(kw, "unknown keyword '" + kw.text + "'");
    }
  }
  EventStructure es(name.value_or(""));
  for (const auto& t : events) {
    if (es.find_event(t.text)) fail(t, "duplicate event '" + t.text + "'");
    es.add_event(t.text);
  }
  auto lookup = [&](const Token& t) {
    auto e = es.find_event(t.text);
    if (!e) fail(t, "unknown event '" + t.text + "'");
    return *e;
  };
  for (const auto& [a, b] : conflicts) es.add_conflict(lookup(a), lookup(b));
  for (const auto& [e, gen] : enabling) {
    IndexSet g = es.empty_set();
    for (const auto& t : gen) g.set(lookup(t));
    es.add_generator(lookup(e), g);
  }
  return es;
}

std::string print_es(const EventStructure& es) {
  std::ostringstream os;
  if (!es.name().empty()) os << "es " << es.name() << "\n";
  if (es.size() > 0) {
    os << "events";
    for (EventId e = 0; e < es.size(); ++e) os << " " << es.event_name(e);
    os << "\n";
  }
  for (EventId a = 0; a < es.size(); ++a)
    for (EventId b = a; b < es.size(); ++b)
      if (es.conflict(a, b))
        os << "conflict " << es.event_name(a) << " " << es.event_name(b) << "\n";
  for (EventId e = 0; e < es.size(); ++e)
    for (const auto& g : es.generators(e)) {
      os << "enabling " << es.event_name(e) << " <-";
      for (const auto& n : es.names_of(g)) os << " " << n;
      os << "\n";
    }
  return os.str();
}

// ------------------------------------------------------------- morphisms

NetMorphism parse_net_morphism(std::string_view text,
                               std::shared_ptr<const PNet> source,
                               std::shared_ptr<const PNet> target) {
  NetMorphism m(source, target);
  std::set<std::string> seen;
  for (const auto& toks : tokenize_lines(text)) {
    const Token& kw = toks[0];
    if (kw.text == "morphism") continue;
    if (kw.text != "place" && kw.text != "trans")
      fail(kw, "unknown keyword '" + kw.text + "'");
    if (toks.size() < 3 || toks[2].text != "->")
      fail(toks.size() < 3 ? end_of(toks) : toks[2], "expected 'SRC ->'");
    expect_identifier(toks[1]);
    if (!seen.insert(toks[1].text).second)
      fail(toks[1], "'" + toks[1].text + "' mapped twice");
    if (kw.text == "place") {
      auto p = source->find_place(toks[1].text);
      if (!p) fail(toks[1], "unknown source place '" + toks[1].text + "'");
      std::map<PlaceId, Count> counts;
      for (std::size_t i = 3; i < toks.size(); ++i) {
        if (toks[i].text == "0" && toks.size() == 4) break;
        expect_identifier(toks[i]);
        auto q = target->find_place(toks[i].text);
        if (!q) fail(toks[i], "unknown target place '" + toks[i].text + "'");
        counts[*q] += 1;
      }
      m.place_map[*p] = Marking(target->universe(), counts);
    } else {
      auto t = source->find_transition(toks[1].text);
      if (!t) fail(toks[1], "unknown source transition '" + toks[1].text + "'");
      if (toks.size() != 4) fail(end_of(toks), "expected one target transition or '_'");
      if (toks[3].text == "_") continue;
      auto u = target->find_transition(toks[3].text);
      if (!u) fail(toks[3], "unknown target transition '" + toks[3].text + "'");
      m.trans_map[*t] = *u;
    }
  }
  return m;
}

std::string print_net_morphism(const NetMorphism& m) {
  std::ostringstream os;
  for (PlaceId p = 0; p < m.source->num_places(); ++p) {
    os << "place " << m.source->place_name(p) << " ->";
    const auto& img = m.place_map[p];
    if (img.empty()) os << " 0";
    for (auto [q, k] : img.counts())
      for (Count i = 0; i < k; ++i) os << " " << m.target->place_name(q);
    os << "\n";
  }
  for (TransId t = 0; t < m.source->num_transitions(); ++t)
    os << "trans " << m.source->trans_name(t) << " -> "
       << (m.trans_map[t] ? m.target->trans_name(*m.trans_map[t]) : "_") << "\n";
  return os.str();
}

EsMorphism parse_es_morphism(std::string_view text,
                             std::shared_ptr<const EventStructure> source,
                             std::shared_ptr<const EventStructure> target) {
  EsMorphism m(source, target);
  std::set<std::string> seen;
  for (const auto& toks : tokenize_lines(text)) {
    const Token& kw = toks[0];
    if (kw.text == "morphism") continue;
    if (kw.text != "event") fail(kw, "unknown keyword '" + kw.text + "'");
    if (toks.size() != 4 || toks[2].text != "->")
      fail(kw, "expected 'event SRC -> TGT|_'");
    expect_identifier(toks[1]);
    if (!seen.insert(toks[1].text).second)
      fail(toks[1], "'" + toks[1].text + "' mapped twice");
    auto e = source->find_event(toks[1].text);
    if (!e) fail(toks[1], "unknown source event '" + toks[1].text + "'");
    if (toks[3].text == "_") continue;
    auto f = target->find_event(toks[3].text);
    if (!f) fail(toks[3], "unknown target event '" + toks[3].text + "'");
    m.map[*e] = *f;
  }
  return m;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace persnet
