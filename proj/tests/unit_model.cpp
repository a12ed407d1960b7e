#include <doctest.h>

#include <random>

#include "commusage/model.hpp"

using namespace commusage;

TEST_SUITE("model") {
  TEST_CASE("regular and large communities parse and print") {
    auto c = parse_community("3320:1000");
    REQUIRE(c);
    CHECK_FALSE(c->is_large());
    CHECK(c->upper_asn() == Asn{3320});
    CHECK(c->low() == 1000);
    CHECK(to_string(*c) == "3320:1000");

    auto l = parse_community("196608:12:0");
    REQUIRE(l);
    CHECK(l->is_large());
    CHECK(l->upper() == 196608);
    CHECK(l->mid() == 12);
    CHECK(to_string(*l) == "196608:12:0");
  }

  TEST_CASE("malformed communities are rejected") {
    for (const char* bad : {"", ":", "1:", ":1", "1:2:", "1::2", "a:b", "1:2:3:4", "65536:1",
                            "1:65536", "4294967296:1:1", "-1:2", "1 :2", "+1:2"}) {
      CAPTURE(bad);
      CHECK_FALSE(parse_community(bad));
    }
    CHECK(parse_community("4294967295:4294967295:4294967295"));
    CHECK(parse_community("65535:65535"));
  }

  TEST_CASE("community text round trip") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
      Community c = (rng() & 1)
                        ? Community::regular(static_cast<std::uint16_t>(rng()),
                                             static_cast<std::uint16_t>(rng()))
                        : Community::large(static_cast<std::uint32_t>(rng()),
                                           static_cast<std::uint32_t>(rng()),
                                           static_cast<std::uint32_t>(rng()));
      auto back = parse_community(to_string(c));
      REQUIRE(back);
      CHECK(*back == c);
    }
  }

  TEST_CASE("tag picks the community form by ASN width") {
    CHECK(Community::tag(Asn{3320}, 1) == Community::regular(3320, 1));
    CHECK(Community::tag(Asn{65535}, 2) == Community::regular(65535, 2));
    CHECK(Community::tag(Asn{65536}, 1) == Community::large(65536, 1, 0));
    CHECK(Community::tag(Asn{65536}, 1).upper_asn() == Asn{65536});
  }

  TEST_CASE("community set is sorted and duplicate free") {
    CommunitySet set{Community::regular(20, 1), Community::regular(10, 5),
                     Community::regular(20, 1), Community::large(5, 0, 0)};
    CHECK(set.size() == 3);
    CHECK(set.items()[0] == Community::regular(10, 5));
    CHECK(set.items()[2] == Community::large(5, 0, 0));
    CHECK(set.contains(Community::regular(20, 1)));
    CHECK_FALSE(set.contains(Community::regular(20, 2)));
    CHECK(set.has_upper(Asn{20}));
    CHECK(set.has_upper(Asn{5}));
    CHECK_FALSE(set.has_upper(Asn{30}));
    set.insert(Community::regular(10, 5));
    CHECK(set.size() == 3);
    set.insert(Community::regular(1, 1));
    CHECK(set.items().front() == Community::regular(1, 1));
  }

  TEST_CASE("path accessors") {
    AsPath p{Asn{10}, Asn{20}, Asn{30}};
    CHECK(p.peer() == Asn{10});
    CHECK(p.origin() == Asn{30});
    CHECK(p.contains(Asn{20}));
    CHECK_FALSE(p.contains(Asn{40}));
    CHECK(to_string(p) == "10 20 30");
  }

  TEST_CASE("class characters render and parse as a bijection") {
    for (auto t : {TaggingClass::Tagger, TaggingClass::Silent, TaggingClass::Undecided,
                   TaggingClass::None}) {
      auto back = parse_tagging_class(render(t));
      REQUIRE(back);
      CHECK(*back == t);
    }
    for (auto f : {ForwardingClass::Forward, ForwardingClass::Cleaner, ForwardingClass::Undecided,
                   ForwardingClass::None}) {
      auto back = parse_forwarding_class(render(f));
      REQUIRE(back);
      CHECK(*back == f);
    }
    CHECK(render_class(TaggingClass::Tagger, ForwardingClass::Cleaner) == "tc");
    CHECK(render_class(TaggingClass::None, ForwardingClass::Undecided) == "nu");
    CHECK_FALSE(parse_tagging_class('f'));
    CHECK_FALSE(parse_forwarding_class('t'));
  }

  TEST_CASE("threshold validation") {
    CHECK_NOTHROW(Thresholds::uniform(0.5).validate());
    CHECK_NOTHROW(Thresholds::uniform(1.0).validate());
    CHECK_THROWS_AS(Thresholds::uniform(0.49).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Thresholds::uniform(1.01).validate(), std::invalid_argument);
    Thresholds th;
    th.cleaner = 0.3;
    CHECK_THROWS_AS(th.validate(), std::invalid_argument);
    CHECK_THROWS_AS(Thresholds::uniform(0.9, 0).validate(), std::invalid_argument);
  }
}
