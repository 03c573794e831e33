#include <catch2/catch_amalgamated.hpp>

#include "selfloc/model.hpp"

using namespace selfloc;

namespace {

Scenario base() {
  Scenario s;
  s.name = "s";
  s.worlds = {{"a", Rat(1, 2)}, {"b", Rat(1, 2)}};
  s.times = {"t1", "t2"};
  s.centers = {{"a", "t1", {"x"}}, {"b", "t1", {"x"}}, {"b", "t2", {"y"}}};
  s.events = {{"ea", {"a"}}};
  return s;
}

Errc validation_error(Scenario s) {
  try {
    validate_scenario(std::move(s));
  } catch (const Error& e) {
    return e.code;
  }
  FAIL("expected validation to throw");
  return Errc::internal;
}

}  // namespace

TEST_CASE("valid scenario passes validation and derives stage count", "[model]") {
  const Scenario s = validate_scenario(base());
  CHECK(s.stage_count == 1);
  CHECK(s.worlds.size() == 2);

  Scenario two = base();
  for (auto& c : two.centers) c.signature.push_back("z");
  CHECK(validate_scenario(two).stage_count == 2);

  Scenario no_centers = base();
  no_centers.centers.clear();
  CHECK(validate_scenario(no_centers).stage_count == 1);
}

TEST_CASE("validation rejects structural defects", "[model]") {
  Scenario s = base();
  s.worlds.clear();
  CHECK(validation_error(s) == Errc::empty_scenario);

  s = base();
  s.worlds.push_back({"a", Rat(0)});
  CHECK(validation_error(s) == Errc::duplicate_id);

  s = base();
  s.worlds[0].prior = Rat(3, 2);
  CHECK(validation_error(s) == Errc::prior_range);

  s = base();
  s.worlds[0].prior = Rat(-1, 4);
  CHECK(validation_error(s) == Errc::prior_range);

  s = base();
  s.worlds[0].prior = Rat(1, 4);
  CHECK(validation_error(s) == Errc::prior_sum);

  s = base();
  s.times.push_back("t1");
  CHECK(validation_error(s) == Errc::duplicate_id);

  s = base();
  s.centers[0].world = "nope";
  CHECK(validation_error(s) == Errc::dangling_reference);

  s = base();
  s.centers[0].time = "nope";
  CHECK(validation_error(s) == Errc::dangling_reference);

  s = base();
  s.centers.push_back({"a", "t1", {"z"}});
  CHECK(validation_error(s) == Errc::duplicate_id);

  s = base();
  s.centers[1].signature = {"x", "y"};
  CHECK(validation_error(s) == Errc::ragged_signature);

  s = base();
  s.centers[0].signature.clear();
  CHECK(validation_error(s) == Errc::ragged_signature);

  s = base();
  s.events[0].members.insert("nope");
  CHECK(validation_error(s) == Errc::dangling_reference);

  s = base();
  s.events.push_back({"ea", {}});
  CHECK(validation_error(s) == Errc::duplicate_id);

  s = base();
  s.worlds[0].id = "has space";
  CHECK(validation_error(s) == Errc::bad_identifier);

  s = base();
  s.name = "";
  CHECK(validation_error(s) == Errc::bad_identifier);

  s = base();
  s.centers[0].signature[0] = "a,b";
  CHECK(validation_error(s) == Errc::bad_identifier);
}

TEST_CASE("identifier rules", "[model]") {
  CHECK(valid_identifier("seeH_mon"));
  CHECK(valid_identifier("two-coins"));
  CHECK(valid_identifier("w1"));
  CHECK_FALSE(valid_identifier(""));
  CHECK_FALSE(valid_identifier("a b"));
  CHECK_FALSE(valid_identifier("a\tb"));
  CHECK_FALSE(valid_identifier("a#b"));
  CHECK_FALSE(valid_identifier("a[b"));
  CHECK_FALSE(valid_identifier("{x}"));
  CHECK_FALSE(valid_identifier("a=b"));
  CHECK_FALSE(valid_identifier("a,b"));
}

TEST_CASE("scenario lookups", "[model]") {
  const Scenario s = validate_scenario(base());
  REQUIRE(s.find_world("a") != nullptr);
  CHECK(s.find_world("a")->prior == Rat(1, 2));
  CHECK(s.find_world("zz") == nullptr);
  CHECK(s.find_event("ea") != nullptr);
  CHECK(s.find_event("zz") == nullptr);
  CHECK_THROWS_AS(s.event_or_fail("zz"), Error);
  CHECK(s.prior_of("b") == Rat(1, 2));
  CHECK_THROWS_AS(s.prior_of("zz"), Error);

  CHECK(s.centers_of("b") == std::vector<std::size_t>{1, 2});
  CHECK(s.match_count("b", 1, "x") == 1);
  CHECK(s.match_count("b", 1, "y") == 1);
  CHECK(s.match_count("a", 1, "y") == 0);
  CHECK(s.realizable({1, "x"}));
  CHECK_FALSE(s.realizable({1, "zz"}));
}

TEST_CASE("evidence classes partition the centers", "[model]") {
  const Scenario s = validate_scenario(base());
  const auto classes = evidence_classes(s, 1);
  REQUIRE(classes.size() == 2);
  CHECK(classes.at("x") == std::vector<std::size_t>{0, 1});
  CHECK(classes.at("y") == std::vector<std::size_t>{2});
  CHECK_THROWS_AS(evidence_classes(s, 2), Error);
  CHECK_THROWS_AS(evidence_classes(s, 0), Error);
}

TEST_CASE("stage bounds", "[model]") {
  const Scenario s = validate_scenario(base());
  CHECK_NOTHROW(require_stage(s, 1));
  try {
    require_stage(s, 2);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code == Errc::stage_out_of_range);
  }
}

TEST_CASE("event probability sums exactly", "[model]") {
  const Scenario s = validate_scenario(base());
  const WorldDistribution d = prior_distribution(s);
  REQUIRE(d.size() == 2);
  CHECK(event_probability(d, s.events[0]) == Rat(1, 2));
  CHECK(event_probability(d, {"all", {"a", "b"}}) == 1);
  CHECK(event_probability(d, {"none", {}}) == 0);
  CHECK_THROWS_AS(event_probability(d, {"bad", {"zz"}}), Error);
}

TEST_CASE("distribution guard", "[model]") {
  WorldDistribution good = {{"a", Rat(1, 3)}, {"b", Rat(2, 3)}};
  CHECK_NOTHROW(check_distribution(good));
  WorldDistribution short_sum = {{"a", Rat(1, 3)}};
  CHECK_THROWS_AS(check_distribution(short_sum), Error);
  WorldDistribution negative = {{"a", Rat(4, 3)}, {"b", Rat(-1, 3)}};
  CHECK_THROWS_AS(check_distribution(negative), Error);
}
