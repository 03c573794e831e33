#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "selfloc/dsl.hpp"
#include "selfloc/dutchbook.hpp"
#include "selfloc/reference_checks.hpp"
#include "selfloc/rules.hpp"

using namespace selfloc;

namespace {

// Every found book must be a genuine sure loss at honestly quoted prices.
void audit(const Scenario& s, Rule r, const DutchBook& book) {
  REQUIRE(book.found);
  REQUIRE(!book.bets.empty());
  REQUIRE(book.guaranteed_loss > 0);
  for (const Bet& bet : book.bets) {
    REQUIRE(bet.stake != 0);
    REQUIRE(denominator(bet.stake) == 1);
    const Event& e = s.event_or_fail(bet.event);
    if (bet.stage == 0)
      REQUIRE(bet.price == event_probability(prior_distribution(s), e));
    else
      REQUIRE(bet.price == event_probability(update(s, r, {bet.stage, bet.label}), e));
  }
  const auto payoff = verify_book(s, book.bets);
  REQUIRE(payoff == book.per_world_payoff);
  for (const auto& [world, value] : payoff) REQUIRE(value <= -book.guaranteed_loss);
}

}  // namespace

TEST_CASE("payoff bookkeeping on fixed schedules", "[dutchbook]") {
  const Scenario s = builtin_scenario("lewis-sb");

  // no bets, no money moves
  CHECK(agent_payoff(s, {}, "Heads") == 0);
  CHECK(agent_payoff(s, {}, "Tails") == 0);

  // the textbook schedule against lewis: sell Heads up front at a half,
  // buy it back on revealed Mondays at two thirds
  const std::vector<Bet> schedule = {
      {0, "", "Heads", Rat(-6), Rat(1, 2)},
      {2, "awake_mon", "Heads", Rat(6), Rat(2, 3)},
  };
  CHECK(agent_payoff(s, schedule, "Heads") == -1);
  CHECK(agent_payoff(s, schedule, "Tails") == -1);
  const auto payoff = verify_book(s, schedule);
  REQUIRE(payoff.size() == 2);
  CHECK(payoff.at("Heads") == -1);
  CHECK(payoff.at("Tails") == -1);
}

TEST_CASE("per-center bets are struck once per matching center", "[dutchbook]") {
  const Scenario s = builtin_scenario("two-coins");
  const std::vector<Bet> schedule = {
      {0, "", "same", Rat(6), Rat(1, 2)},
      {1, "seeH", "same", Rat(-3), Rat(1, 3)},
      {1, "seeT", "same", Rat(-3), Rat(1, 3)},
  };
  for (const char* world : {"HH", "HT", "TH", "TT"})
    CHECK(agent_payoff(s, schedule, world) == -1);

  // HH strikes the seeH bet twice and the seeT bet never
  const Bet seeh = schedule[1];
  CHECK(bet_multiplicity(s, seeh, "HH") == 2);
  CHECK(bet_multiplicity(s, seeh, "HT") == 1);
  CHECK(bet_multiplicity(s, seeh, "TT") == 0);
  CHECK(bet_multiplicity(s, schedule[0], "TT") == 1);
}

TEST_CASE("payoff is linear in the stakes", "[dutchbook]") {
  const Scenario s = builtin_scenario("two-coins");
  std::vector<Bet> schedule = {
      {0, "", "same", Rat(6), Rat(1, 2)},
      {1, "seeH", "same", Rat(-3), Rat(1, 3)},
      {1, "seeT", "same", Rat(-3), Rat(1, 3)},
  };
  for (Bet& bet : schedule) bet.stake *= Rat(5, 7);
  for (const char* world : {"HH", "HT", "TH", "TT"})
    CHECK(agent_payoff(s, schedule, world) == Rat(-5, 7));
}

TEST_CASE("bets at price one or on full events move nothing at stake zero risk", "[dutchbook]") {
  const Scenario s = parse_scenario(
      "scenario tiny\n"
      "time t\n"
      "world a prior 1/2\n"
      "world b prior 1/2\n"
      "center a t obs [x]\n"
      "center b t obs [x]\n"
      "event all = { a, b }\n");
  const std::vector<Bet> schedule = {{0, "", "all", Rat(10), Rat(1)}};
  CHECK(agent_payoff(s, schedule, "a") == 0);
  CHECK(agent_payoff(s, schedule, "b") == 0);
}

TEST_CASE("malformed schedules are rejected", "[dutchbook]") {
  const Scenario s = builtin_scenario("two-coins");
  const auto expect_invalid = [&](const Bet& bet) {
    try {
      agent_payoff(s, {bet}, "HH");
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code == Errc::invalid_schedule);
    }
  };
  expect_invalid({2, "seeH", "same", Rat(1), Rat(1, 2)});   // stage past the end
  expect_invalid({-1, "", "same", Rat(1), Rat(1, 2)});      // negative stage
  expect_invalid({0, "seeH", "same", Rat(1), Rat(1, 2)});   // labeled prior bet
  expect_invalid({1, "seeX", "same", Rat(1), Rat(1, 2)});   // unrealizable point
  expect_invalid({1, "seeH", "nope", Rat(1), Rat(1, 2)});   // unknown event
}

TEST_CASE("synthesis finds the classic books", "[dutchbook]") {
  const Scenario lsb = builtin_scenario("lewis-sb");
  audit(lsb, Rule::lewis, build_dutch_book(lsb, Rule::lewis, "Heads", lsb.stage_count));

  const Scenario tc = builtin_scenario("two-coins");
  audit(tc, Rule::halfer, build_dutch_book(tc, Rule::halfer, "same", tc.stage_count));
}

TEST_CASE("thirder survives the original puzzle", "[dutchbook]") {
  const Scenario s = builtin_scenario("original-sb");
  const DutchBook single = build_dutch_book(s, Rule::thirder, "Heads", s.stage_count);
  CHECK_FALSE(single.found);
  CHECK(single.bets.empty());
  CHECK(single.guaranteed_loss == 0);

  // offering both events does not help
  const DutchBook joint =
      build_dutch_book(s, Rule::thirder, std::vector<std::string>{"Heads", "Tails"},
                       s.stage_count);
  CHECK_FALSE(joint.found);
}

TEST_CASE("halfer loses on the original puzzle too", "[dutchbook]") {
  // the double Tails awakening lets the bookie exploit the halfer as well;
  // for instance selling six Heads up front and buying four back per
  // awakening costs her one in either world
  const Scenario s = builtin_scenario("original-sb");
  const std::vector<Bet> manual = {
      {0, "", "Heads", Rat(-6), Rat(1, 2)},
      {1, "awake", "Heads", Rat(4), Rat(1, 2)},
  };
  CHECK(agent_payoff(s, manual, "Heads") == -1);
  CHECK(agent_payoff(s, manual, "Tails") == -1);

  audit(s, Rule::halfer, build_dutch_book(s, Rule::halfer, "Heads", s.stage_count));
}

TEST_CASE("joint synthesis over several events", "[dutchbook]") {
  const Scenario tc = builtin_scenario("two-coins");
  const DutchBook joint =
      build_dutch_book(tc, Rule::halfer, std::vector<std::string>{"same", "HH"}, tc.stage_count);
  audit(tc, Rule::halfer, joint);

  // duplicate event ids collapse to one column
  const DutchBook dup =
      build_dutch_book(tc, Rule::halfer, std::vector<std::string>{"same", "same"}, tc.stage_count);
  audit(tc, Rule::halfer, dup);
}

TEST_CASE("a bookie with no access cannot win", "[dutchbook]") {
  const Scenario s = builtin_scenario("two-coins");
  CHECK_FALSE(build_dutch_book(s, Rule::halfer, "same", 0).found);
  CHECK_FALSE(build_dutch_book(s, Rule::thirder, "HH", 0).found);
}

TEST_CASE("synthesis rejects bad arguments", "[dutchbook]") {
  const Scenario s = builtin_scenario("two-coins");
  try {
    build_dutch_book(s, Rule::halfer, "same", 2);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code == Errc::stage_out_of_range);
  }
  try {
    build_dutch_book(s, Rule::halfer, "same", -1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code == Errc::stage_out_of_range);
  }
  try {
    build_dutch_book(s, Rule::halfer, "nope", 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code == Errc::unknown_event);
  }
  try {
    build_dutch_book(s, Rule::halfer, std::vector<std::string>{}, 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code == Errc::unknown_event);
  }
}

TEST_CASE("every synthesized book on generated scenarios is sound", "[dutchbook]") {
  checkgen::Gen gen(47);
  int found = 0, checked = 0;
  for (int attempt = 0; attempt < 400; ++attempt) {
    const Scenario s = gen.scenario();
    if (s.events.empty()) continue;
    std::vector<std::string> ids;
    for (const auto& e : s.events) ids.push_back(e.id);
    for (Rule r : all_rules()) {
      DutchBook book;
      try {
        book = build_dutch_book(s, r, ids, s.stage_count);
      } catch (const Error& e) {
        // a rule can be unevaluable when every center of some reachable
        // class sits in zero-prior worlds
        REQUIRE(e.code == Errc::unrealizable_evidence);
        continue;
      }
      ++checked;
      if (book.found) {
        audit(s, r, book);
        ++found;
      } else {
        CHECK(book.bets.empty());
      }
    }
  }
  // the sweep must exercise both verdicts
  CHECK(checked > 300);
  CHECK(found > 20);
}
