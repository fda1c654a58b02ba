#include "persnet/error.hpp"
#include "persnet/marking.hpp"

#include <doctest.h>

#include <random>

using namespace persnet;

namespace {

// a non-persistent; b, c persistent.
UniversePtr abc() {
  auto u = std::make_shared<PlaceUniverse>();
  u->add("a", false);
  u->add("b", true);
  u->add("c", true);
  return u;
}

Marking m(const UniversePtr& u, std::map<PlaceId, Count> counts) { return Marking(u, counts); }

// Universe with the first `np` places non-persistent and the rest persistent.
UniversePtr mixed(std::size_t np, std::size_t pp) {
  auto u = std::make_shared<PlaceUniverse>();
  for (std::size_t i = 0; i < np + pp; ++i) u->add("s" + std::to_string(i), i >= np);
  return u;
}

// Every marking with non-persistent counts up to `bound`.
std::vector<Marking> all_markings(const UniversePtr& u, Count bound) {
  std::vector<std::map<PlaceId, Count>> acc{{}};
  for (PlaceId p = 0; p < u->size(); ++p) {
    std::vector<std::map<PlaceId, Count>> next;
    const Count hi = u->persistent(p) ? 1 : bound;
    for (const auto& c : acc)
      for (Count k = 0; k <= hi; ++k) {
        auto d = c;
        if (k) d[p] = k;
        next.push_back(d);
      }
    acc = std::move(next);
  }
  std::vector<Marking> out;
  for (const auto& c : acc) out.emplace_back(u, c);
  return out;
}

}  // namespace

TEST_SUITE("multiset") {
  TEST_CASE("addition saturates persistent places") {
    const auto u = abc();
    const auto lhs = add(m(u, {{0, 1}, {1, 1}}), m(u, {{0, 1}, {2, 1}}));
    CHECK(lhs == m(u, {{0, 2}, {1, 1}, {2, 1}}));
    CHECK(lhs.to_string() == "2a + b + c");
    CHECK(add(lhs, Marking(u)) == lhs);
    CHECK(add(m(u, {{1, 1}}), m(u, {{1, 1}})) == m(u, {{1, 1}}));
  }

  TEST_CASE("construction drops zeros and saturates") {
    const auto u = abc();
    const Marking x(u, {{0, 0}, {1, 5}});
    CHECK(x == m(u, {{1, 1}}));
    CHECK(x.counts().size() == 1);
    CHECK(Marking(u).to_string() == "0");
  }

  TEST_CASE("covering is componentwise") {
    auto u = std::make_shared<PlaceUniverse>();
    for (auto n : {"p", "q", "r", "s"}) u->add(n, false);
    CHECK(covers(Marking::of(u, {"p", "q", "r", "s"}), Marking::of(u, {"p", "q"})));
    const auto v = abc();
    CHECK_FALSE(covers(m(v, {{0, 2}, {1, 1}}), m(v, {{0, 1}, {1, 1}, {2, 1}})));
    CHECK(covers(m(v, {{0, 1}, {1, 1}}), m(v, {{1, 1}})));
  }

  TEST_CASE("subtraction keeps persistent tokens") {
    const auto u = abc();
    CHECK(subtract(m(u, {{0, 2}, {1, 1}, {2, 1}}), m(u, {{0, 1}, {1, 1}})) ==
          m(u, {{0, 1}, {1, 1}, {2, 1}}));
    const auto x = m(u, {{0, 3}, {2, 1}});
    CHECK(subtract(x, Marking(u)) == x);
    CHECK(subtract(m(u, {{0, 1}, {1, 1}}), m(u, {{0, 1}, {1, 1}})) == m(u, {{1, 1}}));
  }

  TEST_CASE("subtraction of an uncovered marking names the place") {
    const auto u = abc();
    try {
      (void)subtract(m(u, {{0, 1}}), m(u, {{0, 1}, {2, 1}}));
      FAIL("expected NotCovered");
    } catch (const NotCovered& e) {
      CHECK(e.place() == "c");
    }
  }

  TEST_CASE("meet is the pointwise minimum") {
    const auto u = abc();
    CHECK(meet(m(u, {{0, 2}, {1, 1}}), m(u, {{0, 1}, {2, 1}})) == m(u, {{0, 1}}));
    const auto x = m(u, {{0, 2}, {2, 1}});
    CHECK(meet(x, x) == x);
    CHECK(meet(m(u, {{0, 1}, {1, 1}}), Marking(u)).empty());
  }

  TEST_CASE("universe mismatch is rejected") {
    const auto u = abc(), v = mixed(1, 1);
    CHECK_THROWS_AS(add(Marking(u), Marking(v)), UniverseMismatch);
    CHECK_THROWS_AS((void)covers(Marking(u), Marking(v)), UniverseMismatch);
  }

  TEST_CASE("monoid laws with idempotency exactly on persistent places") {
    const auto u = mixed(2, 2);
    const auto all = all_markings(u, 2);
    for (const auto& x : all) {
      CHECK(add(x, Marking(u)) == x);
      for (const auto& y : all) {
        CHECK(add(x, y) == add(y, x));
        for (PlaceId p = 0; p < u->size(); ++p) {
          const auto px = Marking::of_ids(u, {p});
          CHECK((add(px, px) == px) == u->persistent(p));
        }
      }
    }
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int i = 0; i < 300; ++i) {
      const auto& x = all[pick(rng)];
      const auto& y = all[pick(rng)];
      const auto& z = all[pick(rng)];
      CHECK(add(add(x, y), z) == add(x, add(y, z)));
    }
  }

  TEST_CASE("subtraction is the greatest residual") {
    // Brute force over a universe of four places: for every covered pair,
    // v + (u - v) = u and u - v dominates every other residual.
    const auto u = mixed(2, 2);
    const auto all = all_markings(u, 2);
    std::size_t pairs = 0;
    for (const auto& x : all)
      for (const auto& v : all) {
        const bool residual_exists = std::any_of(all.begin(), all.end(), [&](const Marking& w) {
          return add(v, w) == x;
        });
        CHECK(covers(x, v) == residual_exists);
        if (!covers(x, v)) {
          CHECK_THROWS_AS((void)subtract(x, v), NotCovered);
          continue;
        }
        ++pairs;
        const auto top = subtract(x, v);
        CHECK(add(v, top) == x);
        for (const auto& w : all)
          if (add(v, w) == x) CHECK(covers(top, w));
      }
    CHECK(pairs > 50);
  }
}
