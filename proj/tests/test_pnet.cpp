#include "persnet/error.hpp"
#include "persnet/pnet.hpp"
#include "persnet/text_format.hpp"

#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <algorithm>

using namespace persnet;
using fixtures::marking;

namespace {

PNet net_of(const std::string& text) { return parse_pnet(text); }

// t ~>^n s for n > 1, via the reflexive-transitive closure of the flow
// relation (Warshall).
bool longer_path(const PNet& n, TransId t, PlaceId s) {
  const std::size_t np = n.num_places(), k = np + n.num_transitions();
  std::vector<std::vector<char>> reach(k, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < k; ++i) reach[i][i] = 1;
  for (TransId x = 0; x < n.num_transitions(); ++x) {
    for (PlaceId p : n.pre(x)) reach[p][np + x] = 1;
    for (PlaceId p : n.post(x)) reach[np + x][p] = 1;
  }
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      if (reach[i][m])
        for (std::size_t j = 0; j < k; ++j)
          if (reach[m][j]) reach[i][j] = 1;
  for (PlaceId p : n.post(t))
    for (TransId t2 : n.consumers(p))
      if (reach[np + t2][s]) return true;
  return false;
}

}  // namespace

TEST_SUITE("pnet") {
  TEST_CASE("running example shape and well-formedness") {
    const PNet n = fixtures::net("running.pnet");
    CHECK(n.num_places() == 7);
    CHECK(n.num_persistent() == 1);
    CHECK(n.num_transitions() == 5);
    CHECK(validate_well_formed(n).ok());
  }

  TEST_CASE("t-restrictedness violation") {
    const auto r = validate_well_formed(net_of(
        "place p q\npplace o\ntrans a : p -> o\ntrans t : o -> q\nmarking p\n"));
    CHECK(r.has("t-restrictedness"));
    CHECK(r.violations.size() == 1);
  }

  TEST_CASE("irredundancy violation agrees with path enumeration") {
    const PNet n = net_of(
        "place p r\npplace o\ntrans a : p -> o, r\ntrans b : r -> o\nmarking p\n");
    const auto r = validate_well_formed(n);
    CHECK(r.has("irredundancy"));
    CHECK(longer_path(n, n.transition("a"), n.place("o")));
    CHECK_FALSE(longer_path(n, n.transition("b"), n.place("o")));
  }

  TEST_CASE("irredundancy matches path enumeration on random nets") {
    gen::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
      NetBuilder b("r");
      const std::size_t np = 3, pp = 2;
      for (std::size_t s = 0; s < np + pp; ++s) b.add_place("s" + std::to_string(s), s >= np);
      for (std::size_t t = 0; t < 4; ++t) {
        std::vector<PlaceId> pre{gen::uniform(rng, 0, np - 1)}, post;
        for (PlaceId s = 0; s < np + pp; ++s)
          if (gen::coin(rng, 0.35)) post.push_back(s);
        b.add_transition_ids("t" + std::to_string(t), pre, post);
      }
      const PNet n = b.build();
      bool expect = false;
      for (TransId t = 0; t < n.num_transitions(); ++t)
        for (PlaceId s : n.post(t))
          if (n.persistent(s) && longer_path(n, t, s)) expect = true;
      CHECK(validate_well_formed(n).has("irredundancy") == expect);
    }
  }

  TEST_CASE("persistent places may not be initially marked") {
    NetBuilder b;
    b.add_place("p");
    b.add_place("o", true);
    b.add_transition("a", {"p"}, {"o"});
    b.mark("p");
    b.mark("o");
    CHECK(validate_well_formed(b.build()).has("initial-marking"));
  }

  TEST_CASE("enabling") {
    const PNet n = fixtures::net("running.pnet");
    CHECK(enabled(n, n.initial(), n.transition("a")));
    CHECK_FALSE(enabled(n, n.initial(), n.transition("d")));
    CHECK(enabled(n, n.initial(), TransMultiset{}));
    CHECK(enabled(n, n.initial(), n.transitions({"a", "b"})));
    CHECK_FALSE(enabled(n, n.initial(), n.transitions({"a", "a"})));
    CHECK_THROWS_AS((void)n.transitions({"zz"}), UnknownId);
  }

  TEST_CASE("running example firing sequence") {
    const PNet n = fixtures::net("running.pnet");
    Marking u = n.initial();
    CHECK(u == marking(n, "p + q + r + s"));
    const std::vector<std::pair<std::string, std::string>> steps{
        {"a", "q + r + s + o"}, {"b", "r + s + o"}, {"c", "r + s + o"},
        {"d", "t + s + o"},     {"e", "t + u + o"}};
    for (const auto& [t, expect] : steps) {
      u = fire(n, u, n.transition(t));
      CHECK(u == marking(n, expect));
      CHECK(u.count(n.place("o")) == 1);
    }
  }

  TEST_CASE("firing the empty multiset is the identity") {
    const PNet n = fixtures::net("running.pnet");
    CHECK(fire(n, n.initial(), TransMultiset{}) == n.initial());
  }

  TEST_CASE("firing a disabled transition names the place") {
    const PNet n = fixtures::net("running.pnet");
    try {
      (void)fire(n, n.initial(), n.transition("d"));
      FAIL("expected NotEnabled");
    } catch (const NotEnabled& e) {
      CHECK(e.place() == "o");
    }
  }

  TEST_CASE("bounded reachability") {
    const PNet n = fixtures::net("running.pnet");
    const auto r5 = reachable(n, 5, 1000);
    CHECK(r5.contains(marking(n, "t + u + o")));
    const auto* w = r5.find(marking(n, "t + u + o"));
    REQUIRE(w != nullptr);
    CHECK(fire_sequence(n, w->path) == w->marking);

    const auto r0 = reachable(n, 0, 1000);
    CHECK(r0.markings.size() == 1);
    CHECK(r0.markings.front().marking == n.initial());

    const auto capped = reachable(n, 10, 2);
    CHECK(capped.truncated);
    CHECK(capped.markings.size() == 2);
  }

  TEST_CASE("reachable markings of the split net") {
    const PNet n = fixtures::net("split.pnet");
    const auto r = reachable(n, 3, 1000);
    std::vector<Marking> got;
    for (const auto& m : r.markings) got.push_back(m.marking);
    std::sort(got.begin(), got.end());
    std::vector<Marking> want{marking(n, "p + r + s"), marking(n, "r + s + o"),
                              marking(n, "t + s + o"), marking(n, "r + u + o"),
                              marking(n, "t + u + o")};
    std::sort(want.begin(), want.end());
    CHECK(got == want);
    CHECK_FALSE(r.any_covering(marking(n, "p + o")));
  }

  TEST_CASE("safety up to a bound") {
    CHECK(is_safe_up_to(fixtures::net("running.pnet"), 10));
    const PNet two = net_of(
        "place p1 p2 q\ntrans a : p1 -> q\ntrans b : p2 -> q\nmarking p1 p2\n");
    CHECK_FALSE(is_safe_up_to(two, 5));
    const PNet one = net_of("place p q\ntrans a : p -> q\nmarking p\n");
    CHECK(is_safe_up_to(one, 5));
  }

  TEST_CASE("identity morphism is valid and simulates") {
    const auto n = fixtures::net_ptr("running.pnet");
    const auto id = NetMorphism::identity(n);
    CHECK(validate_morphism(id).ok());
    const auto sim = check_simulation(id, 50, 1);
    CHECK(sim.passed);
    CHECK(sim.checked > 0);
  }

  TEST_CASE("folding of the split net") {
    const auto right = fixtures::net_ptr("split-unfolded.pnet");
    const auto left = fixtures::net_ptr("split.pnet");
    const auto f = parse_net_morphism(read_text_file(fixtures::path("split-folding.map")),
                                      right, left);
    CHECK(validate_morphism(f).ok());
    const auto sim = check_simulation(f, 100, 2);
    CHECK(sim.passed);
    CHECK(sim.checked >= 100);

    SUBCASE("dropping one place image breaks it") {
      auto g = f;
      g.place_map[right->place("t1")] = left->empty_marking();
      CHECK(validate_morphism(g).has("(2) post"));
      const auto bad = check_simulation(g, 200, 3);
      CHECK_FALSE(bad.passed);
      CHECK(bad.counterexample.find("d1") != std::string::npos);
    }
  }

  TEST_CASE("merging two places of one pre-set violates injectivity") {
    const auto src = std::make_shared<const PNet>(net_of(
        "place r x\npplace o1 o2\ntrans g1 : x -> o1\ntrans g2 : x -> o2\n"
        "trans t : r, o1, o2 ->\nmarking r x\n"));
    const auto tgt = std::make_shared<const PNet>(net_of(
        "place r x\npplace o\ntrans g : x -> o\ntrans t : r, o ->\nmarking r x\n"));
    const auto f = parse_net_morphism(
        "place r -> r\nplace x -> x\nplace o1 -> o\nplace o2 -> o\n"
        "trans g1 -> g\ntrans g2 -> g\ntrans t -> t\n",
        src, tgt);
    const auto r = validate_morphism(f);
    CHECK(r.has("(3) injectivity"));
    CHECK_FALSE(r.has("(2) pre"));
    CHECK_FALSE(r.has("(1) sorts"));
  }

  TEST_CASE("undefined transitions need empty images") {
    const auto n = fixtures::net_ptr("running.pnet");
    auto f = NetMorphism::identity(n);
    f.trans_map[n->transition("c")] = std::nullopt;
    CHECK(validate_morphism(f).has("(2) undefined"));
  }

  TEST_CASE("firing invariants on random nets") {
    gen::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const PNet n = gen::pnet(rng, {6, 2, 6, 2, 3, 0.6});
      Marking u = n.initial();
      for (int step = 0; step < 15; ++step) {
        std::vector<TransId> en;
        for (TransId t = 0; t < n.num_transitions(); ++t)
          if (enabled(n, u, t)) en.push_back(t);
        if (en.empty()) break;
        const TransId t = en[gen::uniform(rng, 0, en.size() - 1)];
        const Marking next = fire(n, u, t);
        for (PlaceId p = 0; p < n.num_places(); ++p) {
          if (!n.persistent(p)) continue;
          CHECK(next.count(p) <= 1);
          if (u.contains(p)) CHECK(next.contains(p));
        }
        u = next;
      }
    }
  }

  TEST_CASE("multiset firing agrees with any sequentialisation") {
    gen::Rng rng(6);
    std::size_t checked = 0;
    for (int i = 0; i < 300; ++i) {
      const PNet n = gen::pnet(rng, {6, 2, 5, 2, 2, 0.8});
      std::vector<TransId> ts;
      for (TransId t = 0; t < n.num_transitions(); ++t)
        if (gen::coin(rng, 0.5)) ts.push_back(t);
      TransMultiset v;
      for (TransId t : ts) v[t] = 1;
      if (!enabled(n, n.initial(), v)) continue;
      const Marking whole = fire(n, n.initial(), v);
      std::sort(ts.begin(), ts.end());
      do {
        Marking u = n.initial();
        bool ok = true;
        for (TransId t : ts) {
          if (!enabled(n, u, t)) {
            ok = false;
            break;
          }
          u = fire(n, u, t);
        }
        if (ok) {
          CHECK(u == whole);
          ++checked;
        }
      } while (std::next_permutation(ts.begin(), ts.end()));
    }
    CHECK(checked > 40);
  }
}
