#include "persnet/error.hpp"
#include "persnet/occnet.hpp"
#include "persnet/text_format.hpp"

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace persnet;
using fixtures::marking;

namespace {

std::vector<IndexSet> sorted(std::vector<IndexSet> v) {
  std::sort(v.begin(), v.end(), set_less);
  return v;
}

// Covering pairs of the inclusion order, by brute force.
std::size_t covering_pairs(const std::vector<IndexSet>& sets) {
  std::size_t count = 0;
  for (const auto& a : sets)
    for (const auto& b : sets) {
      if (a == b || !a.is_subset_of(b)) continue;
      bool direct = true;
      for (const auto& c : sets)
        if (c != a && c != b && a.is_subset_of(c) && c.is_subset_of(b)) direct = false;
      if (direct) ++count;
    }
  return count;
}

}  // namespace

TEST_SUITE("occnet") {
  TEST_CASE("non-binary conflict") {
    const OccNet o(fixtures::net("nonbinary-conflict.pnet"));
    const auto& n = o.net();
    CHECK(o.in_conflict({n.place("p"), n.place("q"), n.place("r")}, {}));
    CHECK_FALSE(o.in_conflict({n.place("p"), n.place("q")}, {}));
    CHECK_FALSE(o.in_conflict({n.place("q"), n.place("r")}, {}));
    CHECK_FALSE(o.in_conflict({n.place("p"), n.place("r")}, {}));
    CHECK(o.conflict(n.transition("a1"), n.transition("b1")));
    CHECK_FALSE(o.conflict(n.transition("a1"), n.transition("b2")));
    CHECK_FALSE(o.conflict(n.transition("a1"), n.transition("a2")));
    CHECK(o.concurrent(o.condition_set({"p", "q"})));
    CHECK_FALSE(o.concurrent(o.condition_set({"p", "q", "r"})));
    CHECK(validate_occurrence(n).ok());
  }

  TEST_CASE("concurrency needs the generators of persistent members") {
    const OccNet o(fixtures::net("config-domain.pnet"));
    const auto& n = o.net();
    const IndexSet pqo = o.condition_set({"p", "q", "o"});
    CHECK(o.concurrent_as_defined(pqo));
    CHECK_FALSE(o.concurrent(pqo));
    CHECK(oracle::coverable(n, fixtures::marking(n, "p + q + o")) == false);
    CHECK(o.concurrent(o.condition_set({"p", "o"})));
    CHECK(o.concurrent(o.condition_set({"o", "r"})));
    CHECK(o.concurrent(o.condition_set({"o", "t"})));
    CHECK(o.coverable(pqo) == Verdict::No);
  }

  TEST_CASE("concurrency matches coverability on random occurrence nets") {
    gen::Rng rng(22);
    for (int i = 0; i < 100; ++i) {
      const PNet n = gen::occnet(rng, 6);
      const OccNet o(n);
      const auto reach = oracle::reachable_markings(n);
      for (const auto& x : oracle::all_subsets(std::min<std::size_t>(n.num_places(), 10))) {
        IndexSet c(n.num_places());
        for (auto b = x.find_first(); b != IndexSet::npos; b = x.find_next(b)) c.set(b);
        const Marking m = Marking::of_ids(n.universe(), members(c));
        const bool cov =
            std::any_of(reach.begin(), reach.end(), [&](const Marking& u) { return covers(u, m); });
        CHECK(o.concurrent(c) == cov);
        if (o.concurrent(c)) CHECK(o.concurrent_as_defined(c));
      }
    }
  }

  TEST_CASE("conflict agrees with rule saturation on every item set") {
    const PNet n = fixtures::net("nonbinary-conflict.pnet");
    const OccNet o(n);
    const oracle::SaturatedConflict sat(n);
    for (const auto& x : oracle::all_subsets(o.num_items())) CHECK(o.in_conflict(x) == sat(x));
  }

  TEST_CASE("configurations of the running occurrence net") {
    const OccNet o = OccNet::validated(fixtures::net("config-domain.pnet"));
    const auto configs = o.configurations(OccNet::kInfinite);
    CHECK(configs.size() == 13);
    CHECK(std::is_sorted(configs.begin(), configs.end(), set_less));
    CHECK(o.is_configuration(o.event_set({"a", "d"})));
    CHECK(o.is_configuration(o.event_set({"b", "d", "e"})));
    CHECK_FALSE(o.is_configuration(o.event_set({"d"})));
    CHECK_FALSE(o.is_configuration(o.event_set({"d", "e"})));

    const auto h = hasse_diagram(configs);
    CHECK(h.nodes.size() == 13);
    CHECK(h.edges.size() == covering_pairs(configs));
    for (auto [lo, hi] : h.edges) {
      CHECK(h.nodes[lo].is_subset_of(h.nodes[hi]));
      CHECK(h.nodes[hi].count() == h.nodes[lo].count() + 1);
    }

    const auto small = o.configurations(1);
    CHECK(small.size() == 3);
  }

  TEST_CASE("securing sequences and depth") {
    const OccNet o(fixtures::net("config-domain.pnet"));
    const auto& n = o.net();
    const auto d = n.transition("d");
    const auto res = o.find_securing_sequence(d);
    REQUIRE(res.verdict == Verdict::Yes);
    CHECK(res.sequence.back() == d);
    CHECK(o.is_securing_sequence(res.sequence));
    CHECK_FALSE(o.is_securing_sequence({d}));
    CHECK(o.depth_of_event(n.transition("a")) == 1);
    CHECK(o.depth_of_event(d) == 2);
    CHECK(o.depth_of_condition(n.place("o")) == 1);
    CHECK(o.depth_of_condition(n.place("t")) == 2);
    // o has two generators, so neither is a cause of d.
    CHECK_FALSE(o.leq(o.item_of_event(n.transition("a")), o.item_of_event(d)));
    CHECK(o.leq(o.item_of_condition(n.place("r")), o.item_of_event(d)));
    CHECK_FALSE(o.leq(o.item_of_event(n.transition("e")), o.item_of_event(d)));
  }

  TEST_CASE("markings after configurations") {
    const OccNet o(fixtures::net("config-domain.pnet"));
    const auto& n = o.net();
    CHECK(o.mark_after(o.event_set({})) == n.initial());
    CHECK(o.mark_after(o.event_set({"a", "b", "d"})) == marking(n, "o + t + s"));
    CHECK(o.mark_after(o.event_set({"a", "b", "d", "e"})) == marking(n, "o + t + u"));
    CHECK_THROWS_AS((void)o.mark_after(o.event_set({"e"})), InvalidStructure);
    for (const auto& c : o.configurations(OccNet::kInfinite)) {
      const auto seq = o.config_to_firing(c);
      CHECK(o.firing_to_config(seq) == c);
      CHECK(fire_sequence(n, seq) == o.mark_after(c));
    }
  }

  TEST_CASE("axiom violations") {
    SUBCASE("cycle") {
      const auto r = validate_occurrence(parse_pnet(
          "place p x y\ntrans a : p, y -> x\ntrans b : x -> y\nmarking p\n"));
      CHECK(r.has("causality"));
    }
    SUBCASE("initial condition with a generator") {
      const auto r = validate_occurrence(
          parse_pnet("place p q\ntrans a : p -> q\nmarking p q\n"));
      CHECK(r.has("(1) initial marking"));
    }
    SUBCASE("non-persistent backward conflict") {
      const auto r = validate_occurrence(parse_pnet(
          "place x1 x2 y\ntrans a : x1 -> y\ntrans b : x2 -> y\nmarking x1 x2\n"));
      CHECK(r.has("(3) backward conflict"));
      CHECK_FALSE(r.facts.at("backward-conflict-free"));
    }
    SUBCASE("self-conflicting event") {
      const auto r = validate_occurrence(parse_pnet(
          "place x y1 y2 z\ntrans a : x -> y1\ntrans b : x -> y2\n"
          "trans c : y1, y2 -> z\nmarking x\n"));
      CHECK(r.has("(2) securing sequence"));
    }
    SUBCASE("generators split by conflict") {
      const auto r = validate_occurrence(parse_pnet(
          "place x z\npplace o\ntrans a : x -> o\ntrans b : x -> o\n"
          "trans c : o -> z\nmarking x\n"));
      CHECK(r.has("(4) connected generators"));
      CHECK_FALSE(r.has("(3) backward conflict"));
    }
    SUBCASE("persistent backward conflict is allowed") {
      const auto r = validate_occurrence(fixtures::net("config-domain.pnet"));
      CHECK(r.ok());
      CHECK_FALSE(r.facts.at("backward-conflict-free"));
    }
    CHECK_THROWS_AS((void)OccNet::validated(
                        parse_pnet("place p q\ntrans a : p -> q\nmarking p q\n")),
                    InvalidStructure);
  }

  TEST_CASE("random occurrence nets against the oracles") {
    gen::Rng rng(21);
    std::size_t compared = 0;
    for (int i = 0; i < 150; ++i) {
      const PNet n = gen::occnet(rng, 6, i % 3 != 0);
      const OccNet o(n);
      const auto configs = o.configurations(OccNet::kInfinite);
      const auto conf = [&](std::size_t a, std::size_t b) { return o.conflict(a, b); };
      CHECK(configs == sorted(oracle::secured_subsets(n, conf)));
      CHECK(configs == sorted(oracle::firing_supports(n)));
      for (const auto& c : configs) CHECK(o.mark_after(c) == fire_sequence(n, o.config_to_firing(c)));
      if (o.num_items() <= 18) {
        const oracle::SaturatedConflict sat(n);
        for (TransId e = 0; e < o.num_events(); ++e)
          for (TransId e2 = 0; e2 < o.num_events(); ++e2)
            CHECK(o.conflict(e, e2) == sat.events(e, e2));
        ++compared;
      }
    }
    CHECK(compared > 50);
  }
}
