#pragma once
// Diachronic Dutch book synthesis. A book is a schedule of bets on one
// event, each placed at a decision point where the rule fixes a fair price:
// the prior, or an evidence state (stage k, label L). A bet with stake x and
// price q pays the agent x * (1[event] - q); she accepts it because at that
// point her credence makes it fair. At an evidence-state point the bet is
// struck once per matching awakening, so in a world with several matching
// centers the stake multiplies.
//
// The synthesizer asks, with exact arithmetic: is there a stake vector whose
// total payoff is at most -1 in every positive-prior world? Feasible systems
// are scaled to the smallest integral stakes; the verifier recomputes every
// payoff from the scenario alone, without trusting the solver.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "selfloc/error.hpp"
#include "selfloc/model.hpp"
#include "selfloc/rational.hpp"
#include "selfloc/rules.hpp"
#include "selfloc/simplex.hpp"

namespace selfloc {

struct Bet {
  int stage = 0;      // 0 places the bet up front, before any evidence
  std::string label;  // empty for the prior point
  std::string event;
  Rat stake;  // agent pays stake * price, collects stake if the event holds
  Rat price;

  friend bool operator==(const Bet&, const Bet&) = default;
};

struct DutchBook {
  bool found = false;
  std::vector<Bet> bets;
  std::map<std::string, Rat> per_world_payoff;  // positive-prior worlds only
  Rat guaranteed_loss = 0;                      // min over those worlds of -payoff
};

// Times the bet is struck in the world: once for a prior bet, once per
// matching center otherwise.
inline int bet_multiplicity(const Scenario& s, const Bet& bet, const std::string& world_id) {
  if (bet.stage == 0) return 1;
  return s.match_count(world_id, bet.stage, bet.label);
}

// The agent's total payoff from the schedule if `world_id` is actual.
// Recomputed from bet terms and scenario structure only.
inline Rat agent_payoff(const Scenario& s, const std::vector<Bet>& bets,
                        const std::string& world_id) {
  Rat total = 0;
  for (const Bet& bet : bets) {
    if (bet.stage < 0 || bet.stage > s.stage_count)
      fail(Errc::invalid_schedule, "bet stage " + std::to_string(bet.stage) + " out of range");
    if (bet.stage == 0 && !bet.label.empty())
      fail(Errc::invalid_schedule, "prior bet carries label " + bet.label);
    if (bet.stage > 0 && !s.realizable({bet.stage, bet.label}))
      fail(Errc::invalid_schedule,
           "bet references unrealizable point " + bet.label + " at stage " +
               std::to_string(bet.stage));
    const Event* e = s.find_event(bet.event);
    if (!e) fail(Errc::invalid_schedule, "bet references unknown event " + bet.event);
    const int ind = e->members.count(world_id) ? 1 : 0;
    total += bet_multiplicity(s, bet, world_id) * bet.stake * (ind - bet.price);
  }
  return total;
}

inline std::map<std::string, Rat> verify_book(const Scenario& s, const std::vector<Bet>& bets) {
  std::map<std::string, Rat> payoff;
  for (const auto& w : s.worlds)
    if (w.prior > 0) payoff[w.id] = agent_payoff(s, bets, w.id);
  return payoff;
}

namespace detail {

// Divide out the common factor so stakes are coprime integers.
inline void scale_to_integral(std::vector<Rat>& stakes) {
  BigInt l = 1;
  for (const Rat& x : stakes)
    if (x != 0) l = lcm(l, denominator(x));
  BigInt g = 0;
  for (Rat& x : stakes) {
    x *= l;
    if (x != 0) g = gcd(g, abs(numerator(x)));
  }
  if (g == 0) fail(Errc::internal, "dutch book with all-zero stakes");
  for (Rat& x : stakes) x /= g;
}

}  // namespace detail

// Searches for a fair-bet schedule against `rule` over the listed events,
// with decision points up to max_stage. One stake variable per (point,
// event) pair, so a book may mix bets on several events. found == false
// means no such book exists, proven by the exact LP.
inline DutchBook build_dutch_book(const Scenario& s, Rule r,
                                  const std::vector<std::string>& event_ids, int max_stage,
                                  std::size_t max_bits = 4096) {
  std::vector<const Event*> events;
  for (const auto& id : event_ids) {
    const Event& e = s.event_or_fail(id);
    bool dup = false;
    for (const Event* seen : events) dup = dup || seen == &e;
    if (!dup) events.push_back(&e);
  }
  if (events.empty()) fail(Errc::unknown_event, "no events given");
  if (max_stage < 0 || max_stage > s.stage_count)
    fail(Errc::stage_out_of_range, "max stage " + std::to_string(max_stage) +
                                       " out of range [0, " + std::to_string(s.stage_count) + "]");

  struct Point {
    int stage;
    std::string label;
    WorldDistribution credence;
  };
  std::vector<Point> points;
  points.push_back({0, "", prior_distribution(s)});
  for (int k = 1; k <= max_stage; ++k) {
    for (const auto& [label, centers] : evidence_classes(s, k)) {
      Rat mass = 0;
      std::set<std::string> seen;
      for (std::size_t i : centers)
        if (seen.insert(s.centers[i].world).second) mass += s.prior_of(s.centers[i].world);
      if (mass == 0) continue;  // never reached, no bet can be struck
      points.push_back({k, label, update(s, r, {k, label})});
    }
  }

  // Candidate bets, one LP variable each.
  std::vector<Bet> candidates;
  for (const Point& p : points)
    for (const Event* e : events)
      candidates.push_back({p.stage, p.label, e->id, 1, event_probability(p.credence, *e)});

  std::vector<const World*> live;
  for (const auto& w : s.worlds)
    if (w.prior > 0) live.push_back(&w);

  std::vector<std::vector<Rat>> A(live.size(), std::vector<Rat>(candidates.size()));
  std::vector<Rat> b(live.size(), Rat(-1));
  for (std::size_t i = 0; i < live.size(); ++i)
    for (std::size_t j = 0; j < candidates.size(); ++j)
      A[i][j] = agent_payoff(s, {candidates[j]}, live[i]->id);

  const LpResult lp = feasible_point(A, b, max_bits);
  if (!lp.feasible) return {};

  std::vector<Rat> stakes = lp.x;
  detail::scale_to_integral(stakes);

  DutchBook book;
  book.found = true;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (stakes[j] == 0) continue;
    Bet bet = candidates[j];
    bet.stake = stakes[j];
    book.bets.push_back(bet);
  }
  book.per_world_payoff = verify_book(s, book.bets);
  bool first = true;
  for (const auto& [world, payoff] : book.per_world_payoff) {
    if (payoff >= 0)
      fail(Errc::internal, "synthesized book fails to lose in world " + world);
    if (first || -payoff < book.guaranteed_loss) book.guaranteed_loss = -payoff;
    first = false;
  }
  return book;
}

inline DutchBook build_dutch_book(const Scenario& s, Rule r, const std::string& event_id,
                                  int max_stage, std::size_t max_bits = 4096) {
  return build_dutch_book(s, r, std::vector<std::string>{event_id}, max_stage, max_bits);
}

}  // namespace selfloc
