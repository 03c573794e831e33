#pragma once
// The reproduction table: every numbered result the engine must reproduce,
// phrased as self-contained pass/fail rows. The CLI `check` subcommand runs
// and prints rows one by one; the acceptance binary groups them by
// criterion number. Analytic rows demand exact rational equality; Monte
// Carlo rows use a four-sigma bound at a pinned seed.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "selfloc/dsl.hpp"
#include "selfloc/dutchbook.hpp"
#include "selfloc/error.hpp"
#include "selfloc/model.hpp"
#include "selfloc/rational.hpp"
#include "selfloc/reflection.hpp"
#include "selfloc/rules.hpp"
#include "selfloc/simplex.hpp"
#include "selfloc/simulation.hpp"

namespace selfloc {

struct CheckRow {
  int criterion = 0;
  std::string name;
  std::function<bool(std::string& detail)> run;
};

// Deterministic generators for the randomized property rows. Only raw
// engine draws are used, so the case streams are identical everywhere.
namespace checkgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t below(std::uint64_t n) { return next() % n; }

  Rat small_rat(int max_num = 6, int max_den = 3) {
    const int p = static_cast<int>(below(static_cast<std::uint64_t>(2 * max_num + 1))) - max_num;
    const int q = 1 + static_cast<int>(below(static_cast<std::uint64_t>(max_den)));
    return Rat(p, q);
  }

  Scenario scenario() {
    Scenario s;
    s.name = "gen";
    const int nw = 1 + static_cast<int>(below(4));
    const int nt = 1 + static_cast<int>(below(3));
    const int stages = 1 + static_cast<int>(below(3));

    std::vector<int> weight(static_cast<std::size_t>(nw));
    int total = 0;
    for (int& w : weight) {
      w = static_cast<int>(below(5));
      total += w;
    }
    if (total == 0) {
      weight[0] = 1;
      total = 1;
    }
    for (int i = 0; i < nw; ++i)
      s.worlds.push_back({"w" + std::to_string(i), Rat(weight[static_cast<std::size_t>(i)], total)});
    for (int j = 0; j < nt; ++j) s.times.push_back("t" + std::to_string(j));

    const std::vector<std::string> alphabet = {"a", "b", "c"};
    for (const auto& w : s.worlds)
      for (const auto& t : s.times) {
        if (below(2) == 0) continue;
        Center c{w.id, t, {}};
        for (int k = 0; k < stages; ++k) c.signature.push_back(alphabet[below(3)]);
        s.centers.push_back(c);
      }

    const int ne = 1 + static_cast<int>(below(2));
    for (int i = 0; i < ne; ++i) {
      Event e{"e" + std::to_string(i), {}};
      for (const auto& w : s.worlds)
        if (below(2)) e.members.insert(w.id);
      s.events.push_back(e);
    }
    return validate_scenario(s);
  }

  // A query some center carries, hence structurally realizable.
  EvidenceQuery query(const Scenario& s) {
    const Center& c = s.centers[below(s.centers.size())];
    const int stage = 1 + static_cast<int>(below(static_cast<std::uint64_t>(s.stage_count)));
    return {stage, c.signature[static_cast<std::size_t>(stage - 1)]};
  }

  struct Lp {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
  };

  // b = A x0 + slack for a random x0 and nonnegative slack.
  Lp feasible_lp() {
    const std::size_t n = 1 + below(3);
    const std::size_t m = 1 + below(4);
    Lp lp;
    lp.A.assign(m, std::vector<Rat>(n));
    std::vector<Rat> x0(n);
    for (Rat& v : x0) v = small_rat();
    for (std::size_t i = 0; i < m; ++i) {
      Rat dot = 0;
      for (std::size_t j = 0; j < n; ++j) {
        lp.A[i][j] = small_rat();
        dot += lp.A[i][j] * x0[j];
      }
      lp.b.push_back(dot + Rat(static_cast<int>(below(7)), 1 + static_cast<int>(below(3))));
    }
    return lp;
  }

  // Rows rigged so that positive multipliers y cancel A and push b below
  // zero: y'A = 0 with y'b = -1, a Farkas certificate of infeasibility.
  Lp infeasible_lp() {
    const std::size_t n = 1 + below(3);
    const std::size_t m = 2 + below(3);
    Lp lp;
    lp.A.assign(m, std::vector<Rat>(n));
    std::vector<Rat> y(m);
    for (Rat& v : y) v = 1 + static_cast<int>(below(3));
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = 0; j < n; ++j) lp.A[i][j] = small_rat();
    for (std::size_t j = 0; j < n; ++j) {
      Rat sum = 0;
      for (std::size_t i = 0; i + 1 < m; ++i) sum += y[i] * lp.A[i][j];
      lp.A[m - 1][j] = -sum / y[m - 1];
    }
    lp.b.assign(m, Rat(0));
    Rat partial = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      lp.b[i] = small_rat();
      partial += y[i] * lp.b[i];
    }
    lp.b[m - 1] = (Rat(-1) - partial) / y[m - 1];
    return lp;
  }

 private:
  std::uint64_t state_;

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

}  // namespace checkgen

namespace checkdetail {

inline bool expect_rat(const Rat& got, const Rat& want, std::string& detail) {
  if (got == want) return true;
  detail = "got " + rat_to_string(got) + ", expected " + rat_to_string(want);
  return false;
}

inline CheckRow credence_row(int criterion, const std::string& builtin, Rule r, int stage,
                             const std::string& label, const std::string& event, const Rat& want) {
  const std::string name = rule_name(r) + " " + builtin + " stage " + std::to_string(stage) +
                           " " + label + ": " + event + " = " + rat_to_string(want);
  return {criterion, name, [=](std::string& detail) {
            const Scenario s = builtin_scenario(builtin);
            const Rat got = event_probability(update(s, r, {stage, label}), s.event_or_fail(event));
            return expect_rat(got, want, detail);
          }};
}

// Passes when some violation matches the transition shape and, where given,
// the before/after values; its flags must include `must_set` and avoid
// `must_unset`, with severity equal to the number of set flags.
inline CheckRow violation_row(int criterion, const std::string& name, const std::string& builtin,
                              Rule r, const std::string& event, int from_stage, int to_stage,
                              const Rat* before, const Rat* after, unsigned must_set,
                              unsigned must_unset) {
  const bool have_before = before != nullptr;
  const bool have_after = after != nullptr;
  const Rat before_v = have_before ? *before : Rat(0);
  const Rat after_v = have_after ? *after : Rat(0);
  return {criterion, name, [=](std::string& detail) {
            const Scenario s = builtin_scenario(builtin);
            const auto violations = find_violations(s, r, s.event_or_fail(event));
            for (const Violation& v : violations) {
              if (v.from_stage != from_stage || v.to_stage != to_stage) continue;
              if (have_before && v.before != before_v) continue;
              if (have_after && v.after != after_v) continue;
              if ((v.flags & must_set) != must_set) {
                detail = "flags " + flags_to_string(v.flags) + " missing required " +
                         flags_to_string(must_set & ~v.flags);
                return false;
              }
              if ((v.flags & must_unset) != 0) {
                detail = "flags " + flags_to_string(v.flags) + " wrongly include " +
                         flags_to_string(v.flags & must_unset);
                return false;
              }
              if (v.severity != std::popcount(v.flags)) {
                detail = "severity " + std::to_string(v.severity) + " does not count flags";
                return false;
              }
              return true;
            }
            detail = "no violation from stage " + std::to_string(from_stage) + " to stage " +
                     std::to_string(to_stage) + " (found " + std::to_string(violations.size()) +
                     " violations)";
            return false;
          }};
}

inline CheckRow book_row(int criterion, const std::string& builtin, Rule r,
                         const std::string& event, bool expect_found) {
  const std::string name = "dutch book " + builtin + " " + rule_name(r) + " " + event +
                           (expect_found ? " feasible" : " infeasible");
  return {criterion, name, [=](std::string& detail) {
            const Scenario s = builtin_scenario(builtin);
            const DutchBook book = build_dutch_book(s, r, event, s.stage_count);
            if (book.found != expect_found) {
              detail = book.found ? "unexpected book found" : "no book found";
              return false;
            }
            if (!expect_found) return true;
            if (!(book.guaranteed_loss > 0)) {
              detail = "guaranteed loss " + rat_to_string(book.guaranteed_loss) + " not positive";
              return false;
            }
            const auto payoff = verify_book(s, book.bets);
            for (const auto& [world, p] : payoff)
              if (!(p <= -book.guaranteed_loss)) {
                detail = "world " + world + " payoff " + rat_to_string(p) +
                         " above -" + rat_to_string(book.guaranteed_loss);
                return false;
              }
            for (const Bet& bet : book.bets) {
              const WorldDistribution at_point =
                  bet.stage == 0 ? prior_distribution(s) : update(s, r, {bet.stage, bet.label});
              if (event_probability(at_point, s.event_or_fail(event)) != bet.price) {
                detail = "bet at stage " + std::to_string(bet.stage) + " priced off-credence";
                return false;
              }
            }
            return true;
          }};
}

inline CheckRow monte_carlo_row(int criterion, const std::string& builtin, SimMode mode) {
  const std::string name = "monte carlo " + builtin + " " + sim_mode_name(mode);
  return {criterion, name, [=](std::string& detail) {
            const Scenario s = builtin_scenario(builtin);
            const Rule rule = analytic_counterpart(mode);
            for (const auto& [label, members] : evidence_classes(s, 1)) {
              for (const auto& e : s.events) {
                SimSpec spec;
                spec.query = {1, label};
                spec.event = e.id;
                spec.mode = mode;
                spec.trials = 200000;
                spec.seed = 42;
                const SimResult res = run_simulation_parallel(s, spec);
                const Rat analytic = event_probability(update(s, rule, {1, label}), e);
                const double bound = agreement_bound(analytic, res.denominator);
                const double err = std::fabs(res.estimate - rat_to_double(analytic));
                if (!(err <= bound)) {
                  std::string est = std::to_string(res.estimate);
                  detail = label + "/" + e.id + ": estimate " + est + " vs analytic " +
                           rat_to_string(analytic) + ", error " + std::to_string(err) +
                           " > bound " + std::to_string(bound);
                  return false;
                }
              }
            }
            return true;
          }};
}

}  // namespace checkdetail

inline std::vector<CheckRow> reference_checks() {
  using checkdetail::book_row;
  using checkdetail::credence_row;
  using checkdetail::monte_carlo_row;
  using checkdetail::violation_row;

  std::vector<CheckRow> rows;

  rows.push_back(credence_row(1, "two-coins", Rule::halfer, 1, "seeH", "same", Rat(1, 3)));
  rows.push_back(credence_row(1, "two-coins", Rule::halfer, 1, "seeT", "same", Rat(1, 3)));

  rows.push_back(credence_row(2, "two-coins", Rule::thirder, 1, "seeH", "same", Rat(1, 2)));
  rows.push_back(credence_row(2, "original-sb", Rule::thirder, 1, "awake", "Heads", Rat(1, 3)));

  rows.push_back(credence_row(3, "original-sb", Rule::halfer, 1, "awake", "Heads", Rat(1, 2)));

  rows.push_back(credence_row(4, "two-coins", Rule::selection, 1, "seeH", "HH", Rat(1, 2)));
  rows.push_back(credence_row(4, "cost-cutting", Rule::selection, 1, "seeH", "HH", Rat(1, 3)));

  rows.push_back(
      credence_row(5, "two-coins-disclosure", Rule::halfer, 2, "seeH_mon", "same", Rat(1, 2)));
  rows.push_back(
      credence_row(5, "two-coins-disclosure", Rule::thirder, 2, "seeH_mon", "same", Rat(1, 2)));

  rows.push_back(credence_row(6, "lewis-sb", Rule::lewis, 2, "awake_mon", "Heads", Rat(2, 3)));

  {
    const Rat half(1, 2), third(1, 3);
    rows.push_back(violation_row(7, "reflection halfer two-coins prior to stage 1", "two-coins",
                                 Rule::halfer, "same", 0, 1, &half, &third,
                                 reached_in_all_worlds | uniform_structure, agent_located));
    rows.push_back(violation_row(
        7, "reflection halfer two-coins-disclosure stage 1 to 2", "two-coins-disclosure",
        Rule::halfer, "same", 1, 2, &third, &half, no_memory_loss | agent_located, 0));
    rows.push_back(violation_row(7, "reflection thirder original-sb prior to stage 1",
                                 "original-sb", Rule::thirder, "Heads", 0, 1, &half, &third, 0,
                                 uniform_structure | agent_located));
    rows.push_back(violation_row(7, "reflection halfer shangri-la stage 1 to 2", "shangri-la",
                                 Rule::halfer, "Heads", 1, 2, nullptr, &half, 0, no_memory_loss));
  }

  rows.push_back(book_row(8, "lewis-sb", Rule::lewis, "Heads", true));
  rows.push_back(book_row(8, "two-coins", Rule::halfer, "same", true));
  rows.push_back(book_row(8, "original-sb", Rule::thirder, "Heads", false));

  for (const auto& name : builtin_names())
    for (SimMode mode : all_sim_modes()) rows.push_back(monte_carlo_row(9, name, mode));

  rows.push_back({10, "rule outputs are exact distributions", [](std::string& detail) {
                    checkgen::Gen gen(7);
                    int done = 0;
                    for (int attempt = 0; attempt < 20000 && done < 1000; ++attempt) {
                      const Scenario s = gen.scenario();
                      if (s.centers.empty()) continue;
                      const EvidenceQuery q = gen.query(s);
                      for (Rule r : all_rules()) {
                        WorldDistribution d;
                        try {
                          d = update(s, r, q);
                        } catch (const Error& e) {
                          if (e.code == Errc::unrealizable_evidence) continue;
                          throw;
                        }
                        Rat total = 0;
                        for (const auto& [world, v] : d) {
                          if (v < 0) {
                            detail = "negative credence from " + rule_name(r);
                            return false;
                          }
                          total += v;
                        }
                        if (total != 1) {
                          detail = rule_name(r) + " output sums to " + rat_to_string(total);
                          return false;
                        }
                        if (d.size() != s.worlds.size()) {
                          detail = rule_name(r) + " output misses worlds";
                          return false;
                        }
                        ++done;
                      }
                    }
                    if (done < 1000) {
                      detail = "only " + std::to_string(done) + " cases generated";
                      return false;
                    }
                    return true;
                  }});

  rows.push_back({10, "parser round-trip identity", [](std::string& detail) {
                    for (const auto& name : builtin_names()) {
                      const Scenario s = builtin_scenario(name);
                      if (parse_scenario(print_scenario(s)) != s) {
                        detail = "builtin " + name + " fails round-trip";
                        return false;
                      }
                    }
                    checkgen::Gen gen(11);
                    for (int i = 0; i < 200; ++i) {
                      const Scenario s = gen.scenario();
                      if (parse_scenario(print_scenario(s)) != s) {
                        detail = "generated scenario " + std::to_string(i) + " fails round-trip";
                        return false;
                      }
                    }
                    return true;
                  }});

  rows.push_back({10, "simplex soundness on generated systems", [](std::string& detail) {
                    checkgen::Gen gen(13);
                    auto satisfies = [](const checkgen::Gen::Lp& lp, const std::vector<Rat>& x) {
                      for (std::size_t i = 0; i < lp.A.size(); ++i) {
                        Rat dot = 0;
                        for (std::size_t j = 0; j < x.size(); ++j) dot += lp.A[i][j] * x[j];
                        if (dot > lp.b[i]) return false;
                      }
                      return true;
                    };
                    for (int i = 0; i < 100; ++i) {
                      const auto lp = gen.feasible_lp();
                      const LpResult res = feasible_point(lp.A, lp.b);
                      if (!res.feasible) {
                        detail = "feasible-by-construction system " + std::to_string(i) +
                                 " reported infeasible";
                        return false;
                      }
                      if (!satisfies(lp, res.x)) {
                        detail = "returned point violates system " + std::to_string(i);
                        return false;
                      }
                    }
                    for (int i = 0; i < 100; ++i) {
                      const auto lp = gen.infeasible_lp();
                      const LpResult res = feasible_point(lp.A, lp.b);
                      if (res.feasible) {
                        detail = "certified-infeasible system " + std::to_string(i) +
                                 " reported feasible";
                        return false;
                      }
                    }
                    return true;
                  }});

  rows.push_back({10, "simulation determinism and merge", [](std::string& detail) {
                    const Scenario s = builtin_scenario("original-sb");
                    SimSpec spec;
                    spec.query = {1, "awake"};
                    spec.event = "Heads";
                    spec.mode = SimMode::per_center;
                    spec.trials = 20000;
                    spec.seed = 7;
                    const SimResult a = run_simulation(s, spec);
                    const SimResult b = run_simulation(s, spec);
                    if (a.numerator != b.numerator || a.denominator != b.denominator) {
                      detail = "same seed, different counts";
                      return false;
                    }
                    const SimResult par = run_simulation_parallel(s, spec, 3);
                    if (par.numerator != a.numerator || par.denominator != a.denominator) {
                      detail = "parallel counts diverge from serial";
                      return false;
                    }
                    const SimResult lo = run_simulation_range(s, spec, 0, 12345);
                    const SimResult hi = run_simulation_range(s, spec, 12345, spec.trials);
                    if (lo.numerator + hi.numerator != a.numerator ||
                        lo.denominator + hi.denominator != a.denominator) {
                      detail = "split ranges do not merge to the full run";
                      return false;
                    }
                    return true;
                  }});

  return rows;
}

}  // namespace selfloc
