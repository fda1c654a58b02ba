#include "persnet/error.hpp"
#include "persnet/text_format.hpp"

#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <doctest.h>

using namespace persnet;

TEST_SUITE("text format") {
  TEST_CASE("every bundled net round-trips") {
    for (auto name : {"running.pnet", "nonbinary-conflict.pnet", "config-domain.pnet", "split.pnet",
                      "split-unfolded.pnet", "running-depth4.pnet", "occ-eq.pnet",
                      "occ-eq-quotient.pnet"}) {
      CAPTURE(name);
      const NetDocument d = fixtures::doc(name);
      const std::string text = print_pnet(d.net, d.equiv);
      const NetDocument back = parse_pnet_document(text);
      CHECK(same_net(d.net, back.net));
      CHECK(back.equiv == d.equiv);
      CHECK(print_pnet(back.net, back.equiv) == text);
    }
  }

  TEST_CASE("random nets round-trip") {
    gen::Rng rng(41);
    for (int i = 0; i < 100; ++i) {
      const PNet n = gen::pnet(rng, {5, 2, 5, 2, 2, 0.5});
      CHECK(same_net(parse_pnet(print_pnet(n)), n));
    }
  }

  TEST_CASE("comments attach to places") {
    const PNet n = fixtures::net("running.pnet");
    const std::string text = print_pnet(n, {}, {{"o", "<{a} | {d}>"}});
    CHECK(text.find("<{a} | {d}>") != std::string::npos);
    CHECK(same_net(parse_pnet(text), n));
  }

  TEST_CASE("parse errors carry a location") {
    auto location = [](const std::string& text) {
      try {
        (void)parse_pnet(text);
      } catch (const ParseError& e) {
        return std::make_pair(e.line(), e.column());
      }
      return std::make_pair(std::size_t{0}, std::size_t{0});
    };
    CHECK(location("place p\ntrans a : p => p\n").first == 2);
    CHECK(location("place p\nbogus p\n") == std::make_pair(std::size_t{2}, std::size_t{1}));
    CHECK(location("place p\ntrans a : zz -> p\n").first == 2);
    CHECK(location("place p p\n").first == 1);
    CHECK(location("place p\nmarking q\n").first == 2);
  }

  TEST_CASE("event structures round-trip") {
    for (auto name : {"e1.es", "e2.es", "example-2.es"}) {
      CAPTURE(name);
      const EventStructure es = fixtures::es(name);
      const EventStructure back = parse_es(print_es(es));
      CHECK(back == es);
      CHECK(back.name() == es.name());
    }
    gen::Rng rng(42);
    for (int i = 0; i < 100; ++i) {
      const EventStructure es = gen::es(rng, 5);
      CHECK(parse_es(print_es(es)) == es);
    }
    CHECK_THROWS_AS((void)parse_es("events a\nconflict a b\n"), ParseError);
  }

  TEST_CASE("net morphisms round-trip") {
    const auto right = fixtures::net_ptr("split-unfolded.pnet");
    const auto left = fixtures::net_ptr("split.pnet");
    const auto f =
        parse_net_morphism(read_text_file(fixtures::path("split-folding.map")), right, left);
    const auto g = parse_net_morphism(print_net_morphism(f), right, left);
    CHECK(g.place_map == f.place_map);
    CHECK(g.trans_map == f.trans_map);
    CHECK_THROWS_AS((void)parse_net_morphism("place zz -> p\n", right, left), ParseError);
  }

  TEST_CASE("missing files") {
    CHECK_THROWS_AS((void)read_text_file("/nonexistent/x.pnet"), Error);
  }
}
