#include "persnet/cli.hpp"

#include "persnet/bridges.hpp"
#include "persnet/dot.hpp"
#include "persnet/error.hpp"
#include "persnet/es.hpp"
#include "persnet/occnet.hpp"
#include "persnet/pnet.hpp"
#include "persnet/text_format.hpp"
#include "persnet/unfold.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace persnet::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  std::string file;
  std::string seq;
  std::size_t steps = 20;
  std::size_t cap = 10000;
  std::optional<std::size_t> depth;
  bool pre = false;
  bool dot = false;
  bool reduced = false;
  std::string property;
  std::string target;
  std::string map;
  std::size_t max = std::numeric_limits<std::size_t>::max();
};

struct Report {
  std::string command;
  std::string input;
  int code = kPass;
  std::vector<Violation> violations;
  std::map<std::string, bool> facts;
  json result = json::object();
  std::string text;
  std::optional<json> error;

  void violate(std::string rule, std::string message) {
    violations.push_back({std::move(rule), std::move(message)});
    code = kViolated;
  }
  void absorb(const ValidationReport& v) {
    for (const auto& x : v.violations) violate(x.rule, x.message);
    for (const auto& [k, b] : v.facts) facts[k] = b;
  }
};

// A document is an event structure iff its first keyword is `es` or
// `events`.
bool looks_like_es(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line.substr(0, line.find('#')));
    std::string first;
    if (words >> first) return first == "es" || first == "events";
  }
  return false;
}

NetDocument load_net(const std::string& path) {
  const auto text = read_text_file(path);
  if (looks_like_es(text)) throw UsageError("'" + path + "' is an event structure, not a net");
  return parse_pnet_document(text);
}

EventStructure load_es(const std::string& path) {
  const auto text = read_text_file(path);
  if (!looks_like_es(text)) throw UsageError("'" + path + "' is a net, not an event structure");
  return parse_es(text);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

json net_summary(const PNet& n) {
  return {{"name", n.name()},
          {"places", n.num_places()},
          {"persistent", n.num_persistent()},
          {"transitions", n.num_transitions()},
          {"initial", n.initial().to_string()}};
}

std::vector<std::pair<std::string, std::string>> named_pairs(const OccEq& oe) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto [x, y] : oe.equivalent_pairs())
    out.emplace_back(oe.occ().item_name(x), oe.occ().item_name(y));
  return out;
}

json pairs_json(const std::vector<std::pair<std::string, std::string>>& pairs) {
  json a = json::array();
  for (const auto& [x, y] : pairs) a.push_back({x, y});
  return a;
}

// Occurrence net of a document, or nullopt after recording why not.
std::shared_ptr<const OccNet> occurrence_of(const PNet& n, Report& r) {
  const auto v = validate_occurrence(n);
  r.facts["occurrence"] = v.ok();
  if (!v.ok()) {
    r.absorb(v);
    return nullptr;
  }
  return std::make_shared<const OccNet>(std::make_shared<const PNet>(n));
}

std::shared_ptr<const OccEq> occ_eq_of(const NetDocument& doc, Report& r) {
  auto occ = std::make_shared<const OccNet>(std::make_shared<const PNet>(doc.net));
  auto oe = std::make_shared<const OccEq>(OccEq::from_pairs(occ, doc.equiv));
  const auto v = validate_occ_eq(*oe);
  r.facts["occ-eq"] = v.ok();
  r.absorb(v);
  return v.ok() ? oe : nullptr;
}

// ------------------------------------------------------------- commands

void cmd_validate(const Options& o, Report& r) {
  const auto text = read_text_file(o.file);
  std::ostringstream os;
  if (looks_like_es(text)) {
    const auto es = parse_es(text);
    std::size_t conflicts = 0, generators = 0;
    for (EventId e = 0; e < es.size(); ++e) {
      conflicts += es.conflicts_of(e).count();
      generators += es.generators(e).size();
    }
    const auto live = check_live(es);
    r.facts["live"] = live.live;
    r.result = {{"kind", "es"},
                {"name", es.name()},
                {"events", es.size()},
                {"conflicts", conflicts / 2},
                {"generators", generators}};
    os << "es " << es.name() << ": " << es.size() << " events, " << conflicts / 2
       << " conflicts, " << generators << " generators\n";
    os << "live: " << yes_no(live.live) << "\n";
    r.text = os.str();
    return;
  }
  const auto doc = parse_pnet_document(text);
  const auto wf = validate_well_formed(doc.net);
  r.facts["well-formed"] = wf.ok();
  r.facts["occurrence"] = validate_occurrence(doc.net).ok();
  r.absorb(wf);
  r.result = net_summary(doc.net);
  r.result["kind"] = "net";
  os << "net " << doc.net.name() << ": " << doc.net.num_places() << " places ("
     << doc.net.num_persistent() << " persistent), " << doc.net.num_transitions()
     << " transitions\n";
  os << "initial marking: " << doc.net.initial().to_string() << "\n";
  os << "well-formed: " << yes_no(wf.ok()) << "\n";
  os << "occurrence net: " << yes_no(r.facts["occurrence"]) << "\n";
  r.text = os.str();
}

void cmd_fire(const Options& o, Report& r) {
  const auto doc = load_net(o.file);
  const PNet& n = doc.net;
  std::vector<TransId> seq;
  {
    std::string s = o.seq;
    for (char& c : s)
      if (c == ',') c = ' ';
    std::istringstream in(s);
    std::string id;
    while (in >> id) {
      const auto t = n.find_transition(id);
      if (!t) throw UsageError("unknown transition '" + id + "'");
      seq.push_back(*t);
    }
  }
  std::ostringstream os;
  Marking u = n.initial();
  json steps = json::array();
  os << "initial: " << u.to_string() << "\n";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    try {
      u = fire(n, u, seq[i]);
    } catch (const NotEnabled& e) {
      r.violate("enabled", "step " + std::to_string(i + 1) + ": transition '" +
                               n.trans_name(seq[i]) + "' is not enabled, place '" +
                               e.place() + "' lacks a token");
      r.result["failed_step"] = i + 1;
      break;
    }
    steps.push_back({{"transition", n.trans_name(seq[i])}, {"marking", u.to_string()}});
    os << n.trans_name(seq[i]) << ": " << u.to_string() << "\n";
  }
  r.result["initial"] = n.initial().to_string();
  r.result["steps"] = steps;
  r.result["final"] = u.to_string();
  r.text = os.str();
}

void cmd_reach(const Options& o, Report& r) {
  const auto doc = load_net(o.file);
  const auto res = reachable(doc.net, o.steps, o.cap);
  json ms = json::array();
  std::ostringstream os;
  bool safe = true;
  for (const auto& m : res.markings) {
    safe = safe && m.marking.is_set();
    std::vector<std::string> path;
    for (TransId t : m.path) path.push_back(doc.net.trans_name(t));
    ms.push_back({{"marking", m.marking.to_string()}, {"path", path}});
    os << m.marking.to_string() << "  via [" << format_sequence(doc.net, m.path) << "]\n";
  }
  r.facts["truncated"] = res.truncated;
  r.facts["safe"] = safe;
  r.result = {{"count", res.markings.size()}, {"markings", ms}};
  os << res.markings.size() << " markings" << (res.truncated ? " (truncated)" : "") << "\n";
  r.text = os.str();
}

void cmd_unfold(const Options& o, Report& r) {
  const auto doc = load_net(o.file);
  const auto u = unfold(doc.net, *o.depth);
  const auto pairs = named_pairs(u.pre_unfolding);
  const PNet& pre = u.pre_unfolding.net();
  const PNet& q = *u.quotient.net;
  r.facts["complete"] = u.complete;
  r.result = {{"depth", *o.depth},
              {"pre_unfolding",
               {{"conditions", pre.num_places()},
                {"events", pre.num_transitions()},
                {"equivalent_pairs", pairs_json(pairs)}}},
              {"quotient", net_summary(q)}};
  if (o.pre)
    r.text = o.dot ? net_to_dot(pre, pairs) : print_pnet(pre, pairs);
  else
    r.text = o.dot ? net_to_dot(q) : print_pnet(q);
}

void cmd_quotient(const Options& o, Report& r) {
  const auto doc = load_net(o.file);
  const auto oe = occ_eq_of(doc, r);
  if (!oe) return;
  const auto q = quotient(*oe);
  r.result = net_summary(*q.net);
  r.text = o.dot ? net_to_dot(*q.net) : print_pnet(*q.net);
}

void cmd_es(const Options& o, Report& r) {
  const auto doc = load_net(o.file);
  if (o.depth) {
    const auto pe = es_of_pnet(doc.net, *o.depth);
    r.facts["complete"] = pe.complete;
    r.result["events"] = pe.es.size();
    r.text = print_es(pe.es);
    return;
  }
  const auto occ = occurrence_of(doc.net, r);
  if (!occ) {
    r.violate("input", "not an occurrence p-net; pass --depth to unfold it first");
    return;
  }
  const auto es = es_of_occnet(*occ);
  r.result["events"] = es.size();
  r.text = print_es(es);
}

void check_es_property(const std::string& prop, const EventStructure& es, Report& r,
                       std::ostringstream& os) {
  if (prop == "live") {
    const auto lr = check_live(es);
    r.facts["live"] = lr.live;
    if (lr.self_conflict) r.result["self_conflict"] = es.event_name(*lr.self_conflict);
    if (lr.unrealised_pair)
      r.result["unrealised_pair"] = {es.event_name(lr.unrealised_pair->first),
                                     es.event_name(lr.unrealised_pair->second)};
    if (!lr.live) r.violate("live", lr.message);
    os << "live: " << yes_no(lr.live) << "\n";
    return;
  }
  const EsAnalysis a(es);
  const auto cr = prop == "connected" ? check_connected_es(a) : check_locally_connected(a);
  r.facts[prop] = cr.holds;
  os << prop << ": " << yes_no(cr.holds);
  if (cr.failing_event) {
    const auto& name = es.event_name(*cr.failing_event);
    r.result["failing_event"] = name;
    r.violate(prop, "fails at event '" + name + "'");
    os << " (event '" << name << "')";
  } else if (!cr.witnesses.empty()) {
    json w = json::object();
    for (EventId e = 0; e < es.size(); ++e) {
      json sets = json::array();
      for (const auto& x : cr.witnesses[e]) sets.push_back(es.names_of(x));
      w[es.event_name(e)] = sets;
    }
    r.result["coverings"] = w;
  }
  os << "\n";
}

void cmd_check(const Options& o, Report& r) {
  std::ostringstream os;
  const std::string& prop = o.property;
  r.result["property"] = prop;
  if (prop == "live" || prop == "connected" || prop == "locally-connected") {
    check_es_property(prop, load_es(o.file), r, os);
  } else if (prop == "occurrence") {
    const auto doc = load_net(o.file);
    const auto v = validate_occurrence(doc.net);
    r.facts["occurrence"] = v.ok();
    r.absorb(v);
    os << "occurrence: " << yes_no(v.ok()) << "\n";
  } else if (prop == "occ-eq") {
    const auto doc = load_net(o.file);
    const bool ok = occ_eq_of(doc, r) != nullptr;
    os << "occ-eq: " << yes_no(ok) << "\n";
  } else {
    if (o.target.empty() || o.map.empty())
      throw UsageError("check morphism needs --target and --map");
    const auto src_text = read_text_file(o.file);
    const auto map_text = read_text_file(o.map);
    ValidationReport v;
    if (looks_like_es(src_text)) {
      auto src = std::make_shared<const EventStructure>(parse_es(src_text));
      auto tgt = std::make_shared<const EventStructure>(load_es(o.target));
      v = validate_es_morphism(parse_es_morphism(map_text, src, tgt));
    } else {
      auto src = std::make_shared<const PNet>(parse_pnet(src_text));
      auto tgt = std::make_shared<const PNet>(load_net(o.target).net);
      v = validate_morphism(parse_net_morphism(map_text, src, tgt));
    }
    r.facts["morphism"] = v.ok();
    r.absorb(v);
    os << "morphism: " << yes_no(v.ok()) << "\n";
  }
  r.text = os.str();
}

void cmd_synth(const Options& o, Report& r) {
  const auto es = load_es(o.file);
  const auto s = net_of_es(es, o.reduced ? SynthMode::Reduced : SynthMode::Full);
  r.result = net_summary(*s.net);
  r.result["tags"] = s.tags;
  r.text = o.dot ? net_to_dot(*s.net) : print_pnet(*s.net, {}, s.tags);
}

void cmd_roundtrip(const Options& o, Report& r) {
  const auto text = read_text_file(o.file);
  std::ostringstream os;
  if (looks_like_es(text)) {
    const auto es = parse_es(text);
    const auto u = unit_iso_check(es, o.reduced ? SynthMode::Reduced : SynthMode::Full);
    r.facts["isomorphic"] = u.isomorphic;
    r.facts["occurrence"] = u.occurrence.ok();
    for (const auto& v : u.occurrence.violations) r.violate(v.rule, "synthesized net: " + v.message);
    for (const auto& d : u.discrepancies)
      if (d.rfind("synthesized net:", 0) != 0) r.violate("roundtrip", d);
    r.result = {{"places", u.net ? u.net->num_places() : 0}, {"ok", u.ok}};
    os << "event structure round trip: " << (u.ok ? "ok" : "failed") << "\n";
    os << "isomorphic: " << yes_no(u.isomorphic) << "\n";
    os << "synthesized net is an occurrence p-net: " << yes_no(u.occurrence.ok()) << "\n";
    r.text = os.str();
    return;
  }
  const auto doc = parse_pnet_document(text);
  const auto occ = occurrence_of(doc.net, r);
  if (!occ) return;
  const auto rt = round_trip_check(*occ);
  r.facts["folding-is-iso"] = rt.folding_is_iso;
  r.facts["complete"] = rt.complete;
  r.result = {{"search", to_string(rt.search)}, {"ok", rt.ok()}};
  if (!rt.ok())
    r.violate("roundtrip", rt.message.empty() ? "quotient of the pre-unfolding differs"
                                              : rt.message);
  os << "net round trip: " << (rt.ok() ? "ok" : "failed") << "\n";
  os << "folding is an isomorphism: " << yes_no(rt.folding_is_iso) << "\n";
  os << "isomorphism search: " << to_string(rt.search) << "\n";
  r.text = os.str();
}

void emit_poset(const std::string& name, const HasseDiagram& h,
                const std::function<std::vector<std::string>(const IndexSet&)>& names,
                Report& r) {
  json nodes = json::array();
  for (const auto& x : h.nodes) nodes.push_back(names(x));
  json edges = json::array();
  for (auto [lo, hi] : h.edges) edges.push_back({lo, hi});
  r.result = {{"configurations", nodes}, {"edges", edges}};
  r.text = poset_to_dot(name, h, [&](const IndexSet& x) {
    std::string s = "{";
    for (const auto& n : names(x)) s += (s.size() > 1 ? "," : "") + n;
    return s + "}";
  });
}

void poset_of_file(const std::string& path, std::size_t max, Report& r) {
  const auto text = read_text_file(path);
  if (looks_like_es(text)) {
    const auto es = parse_es(text);
    emit_poset(es.name(), config_poset(es, max),
               [&](const IndexSet& x) { return es.names_of(x); }, r);
    return;
  }
  const auto doc = parse_pnet_document(text);
  const auto occ = occurrence_of(doc.net, r);
  if (!occ) return;
  emit_poset(doc.net.name(), hasse_diagram(occ->configurations(max)),
             [&](const IndexSet& x) { return occ->event_names(x); }, r);
}

void cmd_poset(const Options& o, Report& r) { poset_of_file(o.file, o.max, r); }

void cmd_export_dot(const Options& o, Report& r) {
  const auto text = read_text_file(o.file);
  if (looks_like_es(text)) {
    poset_of_file(o.file, o.max, r);
    return;
  }
  const auto doc = parse_pnet_document(text);
  r.result = net_summary(doc.net);
  r.text = net_to_dot(doc.net, doc.equiv);
}

// ------------------------------------------------------------- output

json error_json(const std::string& kind, const std::string& message) {
  return {{"kind", kind}, {"message", message}};
}

void emit(const Options& o, const Report& r, std::ostream& out, std::ostream& err) {
  if (o.json) {
    json j;
    j["tool"] = "persnet";
    j["command"] = r.command;
    j["input"] = r.input;
    j["status"] = r.error ? "error" : r.code == kPass ? "pass" : "violated";
    j["exit_code"] = r.code;
    j["facts"] = r.facts;
    json vs = json::array();
    for (const auto& v : r.violations) vs.push_back({{"rule", v.rule}, {"message", v.message}});
    j["violations"] = vs;
    j["result"] = r.result;
    if (!r.text.empty()) j["output"] = r.text;
    if (r.error) j["error"] = *r.error;
    out << j.dump(2) << "\n";
    return;
  }
  out << r.text;
  for (const auto& v : r.violations) out << "violation [" << v.rule << "]: " << v.message << "\n";
  if (r.error) err << "persnet: " << (*r.error)["message"].get<std::string>() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Petri nets with persistent places: firing, unfolding and event structures",
               "persnet"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", o.json, "Print a machine-readable JSON report");
  auto file_arg = [&](CLI::App* sub) { sub->add_option("file", o.file, "Input document")->required(); };
  auto dot_flag = [&](CLI::App* sub) { sub->add_flag("--dot", o.dot, "Print Graphviz DOT"); };

  auto* validate = app.add_subcommand("validate", "Parse a document and check well-formedness");
  file_arg(validate);
  auto* fire = app.add_subcommand("fire", "Fire a sequence of transitions from the initial marking");
  file_arg(fire);
  fire->add_option("--seq", o.seq, "Transitions, separated by commas or blanks")->required();
  auto* reach = app.add_subcommand("reach", "Enumerate reachable markings breadth-first");
  file_arg(reach);
  reach->add_option("--steps", o.steps, "Firing depth bound")->capture_default_str();
  reach->add_option("--cap", o.cap, "Maximum number of markings")->capture_default_str();
  auto* unfold = app.add_subcommand("unfold", "Depth-bounded unfolding");
  file_arg(unfold);
  unfold->add_option("--depth", o.depth, "Only events of smaller depth are generated")->required();
  unfold->add_flag("--pre", o.pre, "Print the pre-unfolding with its equivalence");
  dot_flag(unfold);
  auto* quot = app.add_subcommand("quotient", "Quotient of an occurrence net with equivalence");
  file_arg(quot);
  dot_flag(quot);
  auto* es = app.add_subcommand("es", "Event structure of an occurrence net or of an unfolding");
  file_arg(es);
  es->add_option("--depth", o.depth, "Unfold to this depth first");
  auto* check = app.add_subcommand("check", "Check a structural property");
  check->add_option("property", o.property, "Property to check")
      ->required()
      ->check(CLI::IsMember({"occurrence", "occ-eq", "live", "connected", "locally-connected",
                             "morphism"}));
  file_arg(check);
  check->add_option("--target", o.target, "Target document of a morphism");
  check->add_option("--map", o.map, "Morphism document");
  auto* synth = app.add_subcommand("synth", "Canonical occurrence net of an event structure");
  file_arg(synth);
  synth->add_flag("--reduced", o.reduced, "Keep only maximal conflict sets per place");
  dot_flag(synth);
  auto* roundtrip = app.add_subcommand("roundtrip", "Check that a round trip gives back the input");
  file_arg(roundtrip);
  roundtrip->add_flag("--reduced", o.reduced, "Use reduced synthesis for event structures");
  auto* poset = app.add_subcommand("poset", "Configuration poset as DOT");
  file_arg(poset);
  poset->add_option("--max", o.max, "Largest configuration size");
  auto* export_dot = app.add_subcommand("export-dot", "Render a document as DOT");
  file_arg(export_dot);

  std::vector<std::string> argv_store{"persnet"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  Report r;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    if (!o.json) {
      app.exit(e, out, err);
      return kUsage;
    }
    r.command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    r.code = kUsage;
    r.error = error_json("usage", e.what());
    emit(o, r, out, err);
    return kUsage;
  }

  auto* sub = app.get_subcommands().front();
  r.command = sub->get_name();
  r.input = o.file;
  try {
    if (sub == validate) cmd_validate(o, r);
    else if (sub == fire) cmd_fire(o, r);
    else if (sub == reach) cmd_reach(o, r);
    else if (sub == unfold) cmd_unfold(o, r);
    else if (sub == quot) cmd_quotient(o, r);
    else if (sub == es) cmd_es(o, r);
    else if (sub == check) cmd_check(o, r);
    else if (sub == synth) cmd_synth(o, r);
    else if (sub == roundtrip) cmd_roundtrip(o, r);
    else if (sub == poset) cmd_poset(o, r);
    else cmd_export_dot(o, r);
  } catch (const ParseError& e) {
    Report fresh;
    fresh.command = r.command;
    fresh.input = r.input;
    r = std::move(fresh);
    r.code = kUsage;
    r.error = error_json("parse", e.what());
    (*r.error)["line"] = e.line();
    (*r.error)["column"] = e.column();
  } catch (const InvalidStructure& e) {
    r.violate("structure", e.what());
  } catch (const BudgetExceeded& e) {
    r.code = kUsage;
    r.error = error_json("budget", e.what());
  } catch (const UsageError& e) {
    r.code = kUsage;
    r.error = error_json("usage", e.what());
  } catch (const Error& e) {
    r.code = kUsage;
    r.error = error_json("input", e.what());
  }
  emit(o, r, out, err);
  return r.code;
}

}  // namespace persnet::cli
