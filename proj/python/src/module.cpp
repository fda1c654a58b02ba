#include "persnet/bridges.hpp"
#include "persnet/cli.hpp"
#include "persnet/dot.hpp"
#include "persnet/error.hpp"
#include "persnet/es.hpp"
#include "persnet/iso.hpp"
#include "persnet/occnet.hpp"
#include "persnet/pnet.hpp"
#include "persnet/text_format.hpp"
#include "persnet/unfold.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>

namespace py = pybind11;
using namespace persnet;

namespace {

// Nets are immutable and shared between results, so Python holds a handle.
struct Net {
  std::shared_ptr<const PNet> net;
};

Net wrap(PNet n) { return {std::make_shared<const PNet>(std::move(n))}; }

std::map<std::string, Count> to_dict(const Marking& u) {
  std::map<std::string, Count> out;
  for (auto [p, k] : u.counts()) out[u.universe()->name(p)] = k;
  return out;
}

std::vector<std::string> place_names(const PNet& n, const std::vector<PlaceId>& ps) {
  std::vector<std::string> out;
  for (PlaceId p : ps) out.push_back(n.place_name(p));
  return out;
}

std::vector<std::pair<std::string, std::string>> violations(const ValidationReport& r) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& v : r.violations) out.emplace_back(v.rule, v.message);
  return out;
}

std::vector<TransId> sequence(const PNet& n, const std::vector<std::string>& names) {
  std::vector<TransId> seq;
  for (const auto& s : names) seq.push_back(n.transition(s));
  return seq;
}

std::shared_ptr<const OccNet> occurrence(const Net& n) {
  const auto v = validate_occurrence(*n.net);
  if (!v.ok())
    throw InvalidStructure("not an occurrence p-net: [" + v.violations.front().rule + "] " +
                           v.violations.front().message);
  return std::make_shared<const OccNet>(n.net);
}

std::vector<std::vector<std::string>> names_of(const EventStructure& es,
                                               const std::vector<IndexSet>& sets) {
  std::vector<std::vector<std::string>> out;
  for (const auto& x : sets) out.push_back(es.names_of(x));
  return out;
}

struct UnfoldResult {
  Net pre_unfolding;
  std::vector<std::pair<std::string, std::string>> equivalent_pairs;
  Net quotient;
  bool complete;
  std::size_t depth;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Petri nets with persistent places";

  auto base = py::register_exception<Error>(m, "PersnetError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<NotEnabled>(m, "NotEnabled", base.ptr());
  py::register_exception<InvalidStructure>(m, "InvalidStructure", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<UnknownId>(m, "UnknownId", base.ptr());

  py::class_<Net>(m, "Net")
      .def_property_readonly("name", [](const Net& n) { return n.net->name(); })
      .def_property_readonly("places",
                             [](const Net& n) {
                               std::vector<std::string> out;
                               for (PlaceId p = 0; p < n.net->num_places(); ++p)
                                 out.push_back(n.net->place_name(p));
                               return out;
                             })
      .def_property_readonly("persistent_places",
                             [](const Net& n) {
                               std::vector<std::string> out;
                               for (PlaceId p = 0; p < n.net->num_places(); ++p)
                                 if (n.net->persistent(p)) out.push_back(n.net->place_name(p));
                               return out;
                             })
      .def_property_readonly("transitions",
                             [](const Net& n) {
                               std::vector<std::string> out;
                               for (TransId t = 0; t < n.net->num_transitions(); ++t)
                                 out.push_back(n.net->trans_name(t));
                               return out;
                             })
      .def_property_readonly("initial", [](const Net& n) { return to_dict(n.net->initial()); })
      .def("pre", [](const Net& n, const std::string& t) {
        return place_names(*n.net, n.net->pre(n.net->transition(t)));
      })
      .def("post", [](const Net& n, const std::string& t) {
        return place_names(*n.net, n.net->post(n.net->transition(t)));
      })
      .def("validate", [](const Net& n) { return violations(validate_well_formed(*n.net)); },
           "Well-formedness violations as (rule, message) pairs.")
      .def("validate_occurrence",
           [](const Net& n) { return violations(validate_occurrence(*n.net)); })
      .def("fire",
           [](const Net& n, const std::vector<std::string>& seq) {
             return to_dict(fire_sequence(*n.net, sequence(*n.net, seq)));
           },
           py::arg("sequence"), "Marking after firing the sequence from the initial marking.")
      .def("reachable",
           [](const Net& n, std::size_t steps, std::size_t cap) {
             std::vector<std::pair<std::map<std::string, Count>, std::vector<std::string>>> out;
             for (const auto& rm : reachable(*n.net, steps, cap).markings) {
               std::vector<std::string> path;
               for (TransId t : rm.path) path.push_back(n.net->trans_name(t));
               out.emplace_back(to_dict(rm.marking), path);
             }
             return out;
           },
           py::arg("steps") = 20, py::arg("cap") = 10000)
      .def("configurations",
           [](const Net& n, std::optional<std::size_t> max) {
             const auto o = occurrence(n);
             std::vector<std::vector<std::string>> out;
             for (const auto& c : o->configurations(max.value_or(OccNet::kInfinite)))
               out.push_back(o->event_names(c));
             return out;
           },
           py::arg("max_size") = py::none())
      .def("to_text", [](const Net& n) { return print_pnet(*n.net); })
      .def("to_dot", [](const Net& n) { return net_to_dot(*n.net); })
      .def("__repr__", [](const Net& n) {
        std::ostringstream os;
        os << "<Net '" << n.net->name() << "': " << n.net->num_places() << " places, "
           << n.net->num_transitions() << " transitions>";
        return os.str();
      });

  py::class_<EventStructure>(m, "EventStructure")
      .def_property_readonly("name", &EventStructure::name)
      .def_property_readonly("events",
                             [](const EventStructure& es) { return es.names_of(~es.empty_set()); })
      .def("conflict",
           [](const EventStructure& es, const std::string& a, const std::string& b) {
             return es.conflict(es.event(a), es.event(b));
           })
      .def("generators",
           [](const EventStructure& es, const std::string& e) {
             return names_of(es, es.generators(es.event(e)));
           })
      .def("enables",
           [](const EventStructure& es, const std::vector<std::string>& x, const std::string& e) {
             return es.enables(es.set_of(x), es.event(e));
           })
      .def("configurations",
           [](const EventStructure& es, std::optional<std::size_t> max) {
             return names_of(es, es_configurations(
                                     es, max.value_or(std::numeric_limits<std::size_t>::max())));
           },
           py::arg("max_size") = py::none())
      .def("to_text", [](const EventStructure& es) { return print_es(es); })
      .def("__repr__", [](const EventStructure& es) {
        return "<EventStructure '" + es.name() + "': " + std::to_string(es.size()) + " events>";
      });

  py::class_<UnfoldResult>(m, "UnfoldResult")
      .def_readonly("pre_unfolding", &UnfoldResult::pre_unfolding)
      .def_readonly("equivalent_pairs", &UnfoldResult::equivalent_pairs)
      .def_readonly("quotient", &UnfoldResult::quotient)
      .def_readonly("complete", &UnfoldResult::complete)
      .def_readonly("depth", &UnfoldResult::depth);

  m.def("parse_net", [](const std::string& text) { return wrap(parse_pnet(text)); });
  m.def("parse_es", [](const std::string& text) { return parse_es(text); });

  m.def("unfold",
        [](const Net& n, std::size_t depth) {
          const auto u = unfold(*n.net, depth);
          UnfoldResult r{Net{u.pre_unfolding.occ().net_ptr()}, {}, Net{u.quotient.net},
                         u.complete, depth};
          for (auto [x, y] : u.pre_unfolding.equivalent_pairs())
            r.equivalent_pairs.emplace_back(u.pre_unfolding.occ().item_name(x),
                                            u.pre_unfolding.occ().item_name(y));
          return r;
        },
        py::arg("net"), py::arg("depth"),
        "Depth-bounded unfolding: only events of depth below `depth` are generated.");

  m.def("iso_check",
        [](const Net& a, const Net& b, std::size_t budget) {
          return std::string(to_string(iso_check(*a.net, *b.net, budget).verdict));
        },
        py::arg("a"), py::arg("b"), py::arg("budget") = 1000000,
        "'yes', 'no' or 'unknown' if the search budget ran out.");

  m.def("round_trip", [](const Net& n) {
    const auto r = round_trip_check(*occurrence(n));
    return py::dict(py::arg("ok") = r.ok(), py::arg("folding_is_iso") = r.folding_is_iso,
                    py::arg("search") = std::string(to_string(r.search)),
                    py::arg("complete") = r.complete, py::arg("message") = r.message);
  });

  m.def("es_of_net", [](const Net& n) { return es_of_occnet(*occurrence(n)); },
        "Event structure of an occurrence p-net.");
  m.def("es_of_pnet",
        [](const Net& n, std::size_t depth) {
          auto r = es_of_pnet(*n.net, depth);
          return py::make_tuple(std::move(r.es), r.complete);
        },
        py::arg("net"), py::arg("depth"));
  m.def("net_of_es",
        [](const EventStructure& es, bool reduced) {
          const auto r = net_of_es(es, reduced ? SynthMode::Reduced : SynthMode::Full);
          return py::make_tuple(Net{r.net}, r.tags);
        },
        py::arg("es"), py::arg("reduced") = false);
  m.def("unit_iso_check",
        [](const EventStructure& es, bool reduced) {
          const auto r = unit_iso_check(es, reduced ? SynthMode::Reduced : SynthMode::Full);
          return py::dict(py::arg("ok") = r.ok, py::arg("isomorphic") = r.isomorphic,
                          py::arg("discrepancies") = r.discrepancies,
                          py::arg("net") = Net{r.net});
        },
        py::arg("es"), py::arg("reduced") = false);

  m.def("check_live", [](const EventStructure& es) { return check_live(es).live; });
  m.def("is_connected", [](const EventStructure& es) { return is_connected_es(es); });
  m.def("check_locally_connected",
        [](const EventStructure& es) -> std::optional<std::string> {
          const auto r = check_locally_connected(es);
          if (r.holds) return std::nullopt;
          return es.event_name(*r.failing_event);
        },
        "None if locally connected, else the first failing event.");

  m.def("run",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = cli::run(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command-line front end; returns (exit code, stdout, stderr).");
}
