#pragma once
// Command-line surface. Subcommand output accumulates in a buffer that is
// flushed only on success, so failed invocations write nothing to stdout;
// diagnostics go to stderr. Exit codes: 0 success, 1 parse or validation
// error, 2 unrealizable query or unknown id, 3 internal failure (and a
// failed `check` run).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "selfloc/dsl.hpp"
#include "selfloc/dutchbook.hpp"
#include "selfloc/error.hpp"
#include "selfloc/model.hpp"
#include "selfloc/rational.hpp"
#include "selfloc/reference_checks.hpp"
#include "selfloc/reflection.hpp"
#include "selfloc/rules.hpp"
#include "selfloc/simulation.hpp"

namespace selfloc {
namespace clidetail {

inline std::string fmt_float(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

using Rows = std::vector<std::vector<std::string>>;

inline void write_table(std::ostream& os, const Rows& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (width.size() <= i) width.resize(i + 1, 0);
      if (row[i].size() > width[i]) width[i] = row[i].size();
    }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size(), ' ');
    }
    os << line << "\n";
  }
}

inline void write_csv(std::ostream& os, const Rows& rows) {
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
}

inline std::string point_str(int stage, const std::string& label) {
  return stage == 0 ? "prior" : std::to_string(stage) + ":" + label;
}

inline std::string yn(bool b) { return b ? "yes" : "no"; }

inline std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace clidetail

// Full CLI entry point over explicit streams; `args` excludes the program
// name. Returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using clidetail::Rows;

  CLI::App app{"engine for credence-update rules on self-locating evidence", "selfloc"};
  app.require_subcommand(1);

  const std::vector<std::string> rule_names = {"halfer", "thirder", "selection", "lewis"};
  const std::vector<std::string> mode_names = {"per-center", "per-trial", "random-center"};
  const std::vector<std::string> format_names = {"table", "csv"};

  std::string cr_scenario, cr_rule, cr_evidence, cr_event, cr_format = "table";
  int cr_stage = 1;
  CLI::App* credence_cmd = app.add_subcommand("credence", "posterior over worlds under a rule");
  credence_cmd->add_option("--scenario", cr_scenario, "scenario file or builtin:NAME")->required();
  credence_cmd->add_option("--rule", cr_rule, "update rule")
      ->required()
      ->check(CLI::IsMember(rule_names));
  credence_cmd->add_option("--stage", cr_stage, "evidence stage, 1-based")->required();
  credence_cmd->add_option("--evidence", cr_evidence, "observation label")->required();
  credence_cmd->add_option("--event", cr_event, "also report this event's credence");
  credence_cmd->add_option("--format", cr_format)->check(CLI::IsMember(format_names));

  std::string rf_scenario, rf_rule, rf_event, rf_format = "table";
  CLI::App* reflect_cmd = app.add_subcommand("reflect", "find reflection violations");
  reflect_cmd->add_option("--scenario", rf_scenario, "scenario file or builtin:NAME")->required();
  reflect_cmd->add_option("--rule", rf_rule, "update rule")
      ->required()
      ->check(CLI::IsMember(rule_names));
  reflect_cmd->add_option("--event", rf_event, "event to audit")->required();
  reflect_cmd->add_option("--format", rf_format)->check(CLI::IsMember(format_names));

  std::string db_scenario, db_rule, db_events, db_format = "table";
  int db_max_stage = 0;
  CLI::App* dutchbook_cmd = app.add_subcommand("dutchbook", "synthesize sure-loss bet schedules");
  dutchbook_cmd->add_option("--scenario", db_scenario, "scenario file or builtin:NAME")->required();
  dutchbook_cmd->add_option("--rule", db_rule, "update rule")
      ->required()
      ->check(CLI::IsMember(rule_names));
  dutchbook_cmd->add_option("--events", db_events, "comma-separated event ids")->required();
  dutchbook_cmd->add_option("--max-stage", db_max_stage, "latest stage bets may be placed at")
      ->required();
  dutchbook_cmd->add_option("--format", db_format)->check(CLI::IsMember(format_names));

  std::string si_scenario, si_mode, si_evidence, si_event, si_analytic, si_format = "table";
  int si_stage = 1;
  std::uint64_t si_trials = 0, si_seed = 0;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo frequency estimate");
  simulate_cmd->add_option("--scenario", si_scenario, "scenario file or builtin:NAME")->required();
  simulate_cmd->add_option("--mode", si_mode, "sampling mode")
      ->required()
      ->check(CLI::IsMember(mode_names));
  simulate_cmd->add_option("--stage", si_stage, "evidence stage, 1-based")->required();
  simulate_cmd->add_option("--evidence", si_evidence, "observation label")->required();
  simulate_cmd->add_option("--event", si_event, "event to estimate")->required();
  simulate_cmd->add_option("--trials", si_trials, "number of trials")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", si_seed, "PRNG seed")->required();
  simulate_cmd->add_option("--analytic", si_analytic, "compare against this rule's exact value")
      ->check(CLI::IsMember(rule_names));
  simulate_cmd->add_option("--format", si_format)->check(CLI::IsMember(format_names));

  std::string lb_format = "table";
  CLI::App* list_cmd = app.add_subcommand("list-builtins", "builtin scenario library");
  list_cmd->add_option("--format", lb_format)->check(CLI::IsMember(format_names));

  CLI::App* check_cmd =
      app.add_subcommand("check", "run the full reproduction table, PASS/FAIL per row");

  std::vector<const char*> argv;
  argv.push_back("selfloc");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  std::ostringstream buf;
  int rc = 0;
  try {
    if (app.got_subcommand(credence_cmd)) {
      const Scenario s = scenario_from_spec(cr_scenario);
      const Rule r = rule_from_name(cr_rule);
      const WorldDistribution d = update(s, r, {cr_stage, cr_evidence});
      const bool csv = cr_format == "csv";
      Rows rows;
      rows.push_back(csv ? std::vector<std::string>{"kind", "id", "credence"}
                         : std::vector<std::string>{"world", "credence"});
      for (const auto& w : s.worlds) {
        const std::string v = rat_to_string(d.at(w.id));
        rows.push_back(csv ? std::vector<std::string>{"world", w.id, v}
                           : std::vector<std::string>{w.id, v});
      }
      if (csv) {
        if (!cr_event.empty())
          rows.push_back({"event", cr_event,
                          rat_to_string(event_probability(d, s.event_or_fail(cr_event)))});
        clidetail::write_csv(buf, rows);
      } else {
        clidetail::write_table(buf, rows);
        if (!cr_event.empty())
          buf << "\n"
              << cr_event << " = "
              << rat_to_string(event_probability(d, s.event_or_fail(cr_event))) << "\n";
      }
    } else if (app.got_subcommand(reflect_cmd)) {
      const Scenario s = scenario_from_spec(rf_scenario);
      const Rule r = rule_from_name(rf_rule);
      const auto violations = find_violations(s, r, s.event_or_fail(rf_event));
      const bool csv = rf_format == "csv";
      if (violations.empty() && !csv) {
        buf << "no violations\n";
      } else {
        Rows rows;
        rows.push_back({"from", "to", "event", "before", "after", "reached_in_all_worlds",
                        "uniform_structure", "agent_located", "no_memory_loss", "severity"});
        for (const Violation& v : violations)
          rows.push_back({clidetail::point_str(v.from_stage, v.from_label),
                          std::to_string(v.to_stage), v.event, rat_to_string(v.before),
                          rat_to_string(v.after), clidetail::yn(v.flags & reached_in_all_worlds),
                          clidetail::yn(v.flags & uniform_structure),
                          clidetail::yn(v.flags & agent_located),
                          clidetail::yn(v.flags & no_memory_loss), std::to_string(v.severity)});
        csv ? clidetail::write_csv(buf, rows) : clidetail::write_table(buf, rows);
      }
    } else if (app.got_subcommand(dutchbook_cmd)) {
      const Scenario s = scenario_from_spec(db_scenario);
      const Rule r = rule_from_name(db_rule);
      const std::vector<std::string> ids = clidetail::split_ids(db_events);
      const DutchBook book = build_dutch_book(s, r, ids, db_max_stage);
      const bool csv = db_format == "csv";
      if (csv) {
        Rows rows;
        rows.push_back({"kind", "id", "event", "value", "price"});
        if (!book.found) {
          rows.push_back({"infeasible", "", "", "", ""});
        } else {
          for (const Bet& bet : book.bets)
            rows.push_back({"bet", clidetail::point_str(bet.stage, bet.label), bet.event,
                            rat_to_string(bet.stake), rat_to_string(bet.price)});
          for (const auto& [world, p] : book.per_world_payoff)
            rows.push_back({"payoff", world, "", rat_to_string(p), ""});
          rows.push_back({"loss", "", "", rat_to_string(book.guaranteed_loss), ""});
        }
        clidetail::write_csv(buf, rows);
      } else if (!book.found) {
        buf << "NO DUTCH BOOK (infeasible)\n";
      } else {
        Rows schedule;
        schedule.push_back({"point", "event", "stake", "price"});
        for (const Bet& bet : book.bets)
          schedule.push_back({clidetail::point_str(bet.stage, bet.label), bet.event,
                              rat_to_string(bet.stake), rat_to_string(bet.price)});
        clidetail::write_table(buf, schedule);
        buf << "\n";
        Rows payoffs;
        payoffs.push_back({"world", "payoff"});
        for (const auto& [world, p] : book.per_world_payoff)
          payoffs.push_back({world, rat_to_string(p)});
        clidetail::write_table(buf, payoffs);
        buf << "\nguaranteed loss = " << rat_to_string(book.guaranteed_loss) << "\n";
      }
    } else if (app.got_subcommand(simulate_cmd)) {
      const Scenario s = scenario_from_spec(si_scenario);
      SimSpec spec;
      spec.query = {si_stage, si_evidence};
      spec.event = si_event;
      spec.mode = sim_mode_from_name(si_mode);
      spec.trials = si_trials;
      spec.seed = si_seed;
      const SimResult res = run_simulation_parallel(s, spec);
      std::string analytic_str, abs_error_str;
      if (!si_analytic.empty()) {
        const Rat analytic =
            event_probability(update(s, rule_from_name(si_analytic), spec.query),
                              s.event_or_fail(si_event));
        analytic_str = rat_to_string(analytic);
        abs_error_str = clidetail::fmt_float(std::fabs(res.estimate - rat_to_double(analytic)));
      }
      const bool csv = si_format == "csv";
      if (csv) {
        Rows rows;
        rows.push_back({"mode", "trials", "seed", "numerator", "denominator", "estimate",
                        "analytic", "abs_error"});
        rows.push_back({si_mode, std::to_string(res.trials), std::to_string(si_seed),
                        std::to_string(res.numerator), std::to_string(res.denominator),
                        clidetail::fmt_float(res.estimate), analytic_str, abs_error_str});
        clidetail::write_csv(buf, rows);
      } else {
        Rows rows;
        rows.push_back({"mode", si_mode});
        rows.push_back({"trials", std::to_string(res.trials)});
        rows.push_back({"seed", std::to_string(si_seed)});
        rows.push_back({"numerator", std::to_string(res.numerator)});
        rows.push_back({"denominator", std::to_string(res.denominator)});
        rows.push_back({"estimate", clidetail::fmt_float(res.estimate)});
        if (!si_analytic.empty()) {
          rows.push_back({"analytic", analytic_str});
          rows.push_back({"abs_error", abs_error_str});
        }
        clidetail::write_table(buf, rows);
      }
    } else if (app.got_subcommand(list_cmd)) {
      Rows rows;
      rows.push_back({"name", "description"});
      for (const auto& [name, info] : builtin_library()) rows.push_back({name, info.description});
      lb_format == "csv" ? clidetail::write_csv(buf, rows) : clidetail::write_table(buf, rows);
    } else if (app.got_subcommand(check_cmd)) {
      bool all_pass = true;
      for (const CheckRow& row : reference_checks()) {
        std::string detail;
        bool ok = false;
        try {
          ok = row.run(detail);
        } catch (const std::exception& e) {
          ok = false;
          detail = e.what();
        }
        all_pass = all_pass && ok;
        buf << (ok ? "PASS" : "FAIL") << "  " << row.name;
        if (!ok && !detail.empty()) buf << ": " << detail;
        buf << "\n";
      }
      buf << (all_pass ? "all rows passed\n" : "some rows FAILED\n");
      rc = all_pass ? 0 : 3;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  out << buf.str();
  return rc;
}

}  // namespace selfloc
