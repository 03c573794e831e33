#pragma once
// Scenario text format: a line-oriented description language plus a canonical
// printer and a small library of builtin scenarios.
//
// Grammar (one directive per line, '#' starts a comment):
//   scenario <name>                       first directive, exactly once
//   time <id>                             declaration order = temporal order
//   world <id> prior <int|p/q>
//   center <world> <time> obs [<l>, ...]  one label per stage
//   event <id> = { <world>, ... }         empty set allowed
//
// parse_scenario yields a validated Scenario; syntax errors carry a 1-based
// line and column. print_scenario emits canonical text whose parse is
// field-for-field equal to the original model.

#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "selfloc/error.hpp"
#include "selfloc/model.hpp"
#include "selfloc/rational.hpp"

namespace selfloc {

namespace detail {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

inline bool is_punct(char c) {
  return c == '[' || c == ']' || c == '{' || c == '}' || c == '=' || c == ',';
}

// Tokens on one line: punctuation splits as single characters, everything
// else groups into maximal runs. '#' discards the rest of the line.
inline std::vector<Token> tokenize_line(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_punct(c)) {
      out.push_back({std::string(1, c), static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           !is_punct(line[i]) && line[i] != '#')
      ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

// Cursor over one line's tokens; all errors report the line and column.
struct LineCursor {
  const std::vector<Token>& toks;
  int line;
  int end_col;  // column just past the last character, for at-end errors
  std::size_t pos = 0;

  [[noreturn]] void fail_at(int col, const std::string& msg) const {
    throw Error(Errc::syntax, msg + " (line " + std::to_string(line) + ", col " +
                                  std::to_string(col) + ")",
                line, col);
  }

  bool done() const { return pos == toks.size(); }

  const Token& take(const std::string& what) {
    if (done()) fail_at(end_col, "expected " + what + " before end of line");
    return toks[pos++];
  }

  void expect(const std::string& literal) {
    const Token& t = take("'" + literal + "'");
    if (t.text != literal)
      fail_at(t.col, "expected '" + literal + "', found '" + t.text + "'");
  }

  void expect_end() const {
    if (!done()) fail_at(toks[pos].col, "unexpected trailing token '" + toks[pos].text + "'");
  }
};

}  // namespace detail

// Parses and validates scenario text. Throws Error; syntax problems include
// their source position.
inline Scenario parse_scenario(const std::string& text) {
  Scenario s;
  bool named = false;
  int line_no = 0;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<detail::Token> toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    detail::LineCursor cur{toks, line_no, static_cast<int>(line.size()) + 1};

    const detail::Token& head = cur.take("directive");
    if (head.text == "scenario") {
      if (named) cur.fail_at(head.col, "duplicate scenario directive");
      s.name = cur.take("scenario name").text;
      cur.expect_end();
      named = true;
      continue;
    }
    if (!named) cur.fail_at(head.col, "scenario directive must come first");

    if (head.text == "world") {
      World w;
      w.id = cur.take("world id").text;
      cur.expect("prior");
      const detail::Token& p = cur.take("prior value");
      try {
        w.prior = parse_rational(p.text);
      } catch (const Error& e) {
        cur.fail_at(p.col, e.what());
      }
      cur.expect_end();
      s.worlds.push_back(std::move(w));
    } else if (head.text == "time") {
      s.times.push_back(cur.take("time id").text);
      cur.expect_end();
    } else if (head.text == "center") {
      Center c;
      c.world = cur.take("world id").text;
      c.time = cur.take("time id").text;
      cur.expect("obs");
      cur.expect("[");
      for (;;) {
        const detail::Token& label = cur.take("observation label");
        if (detail::is_punct(label.text[0]))
          cur.fail_at(label.col, "expected observation label, found '" + label.text + "'");
        c.signature.push_back(label.text);
        const detail::Token& sep = cur.take("',' or ']'");
        if (sep.text == "]") break;
        if (sep.text != ",")
          cur.fail_at(sep.col, "expected ',' or ']', found '" + sep.text + "'");
      }
      cur.expect_end();
      s.centers.push_back(std::move(c));
    } else if (head.text == "event") {
      Event e;
      e.id = cur.take("event id").text;
      cur.expect("=");
      cur.expect("{");
      if (!cur.done() && cur.toks[cur.pos].text == "}") {
        ++cur.pos;
      } else {
        for (;;) {
          const detail::Token& member = cur.take("world id");
          if (detail::is_punct(member.text[0]))
            cur.fail_at(member.col, "expected world id, found '" + member.text + "'");
          e.members.insert(member.text);
          const detail::Token& sep = cur.take("',' or '}'");
          if (sep.text == "}") break;
          if (sep.text != ",")
            cur.fail_at(sep.col, "expected ',' or '}', found '" + sep.text + "'");
        }
      }
      cur.expect_end();
      s.events.push_back(std::move(e));
    } else {
      cur.fail_at(head.col, "unknown directive '" + head.text + "'");
    }
  }

  if (!named)
    throw Error(Errc::syntax, "missing scenario directive", line_no > 0 ? line_no : 1, 1);
  return validate_scenario(std::move(s));
}

// Canonical text: scenario, times, worlds, centers, events, one block each.
inline std::string print_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "scenario " << s.name << "\n";
  for (const auto& t : s.times) out << "time " << t << "\n";
  for (const auto& w : s.worlds) out << "world " << w.id << " prior " << rat_to_string(w.prior) << "\n";
  for (const auto& c : s.centers) {
    out << "center " << c.world << " " << c.time << " obs [";
    for (std::size_t i = 0; i < c.signature.size(); ++i)
      out << (i ? ", " : "") << c.signature[i];
    out << "]\n";
  }
  for (const auto& e : s.events) {
    out << "event " << e.id << " = {";
    bool first = true;
    for (const auto& m : e.members) {
      out << (first ? " " : ", ") << m;
      first = false;
    }
    out << " }\n";
  }
  return out.str();
}

struct BuiltinInfo {
  std::string description;  // one line for list-builtins
  std::string text;         // scenario source; the shipped .sbs files hold the same bytes
};

// Builtin scenarios, keyed by name.
inline const std::map<std::string, BuiltinInfo>& builtin_library() {
  static const std::map<std::string, BuiltinInfo> texts = {
      {"original-sb",
       {"one awakening on Heads, two on Tails, none distinguishable from inside",
       "# Original Sleeping Beauty: a fair coin decides whether she wakes once\n"
       "# (Heads, Monday) or twice (Tails, Monday and Tuesday) with the Monday\n"
       "# memory erased in between. All awakenings look alike from inside.\n"
       "scenario original-sb\n"
       "\n"
       "time monday\n"
       "time tuesday\n"
       "\n"
       "world Heads prior 1/2\n"
       "world Tails prior 1/2\n"
       "\n"
       "center Heads monday obs [awake]\n"
       "center Tails monday obs [awake]\n"
       "center Tails tuesday obs [awake]\n"
       "\n"
       "event Heads = { Heads }\n"
       "event Tails = { Tails }\n"}},
      {"two-coins",
       {"two coins tossed Sunday, coin one flipped nightly, its face shown daily",
       "# Two fair coins are tossed on Sunday. Beauty wakes Monday and Tuesday\n"
       "# with memory erasure in between. Each day she is shown the current\n"
       "# state of coin one, which elves secretly flip overnight in the two\n"
       "# mixed worlds, so she sees heads then heads (HH), heads then tails\n"
       "# (HT), tails then heads (TH), or tails then tails (TT).\n"
       "scenario two-coins\n"
       "\n"
       "time monday\n"
       "time tuesday\n"
       "\n"
       "world HH prior 1/4\n"
       "world HT prior 1/4\n"
       "world TH prior 1/4\n"
       "world TT prior 1/4\n"
       "\n"
       "center HH monday obs [seeH]\n"
       "center HH tuesday obs [seeH]\n"
       "center HT monday obs [seeH]\n"
       "center HT tuesday obs [seeT]\n"
       "center TH monday obs [seeT]\n"
       "center TH tuesday obs [seeH]\n"
       "center TT monday obs [seeT]\n"
       "center TT tuesday obs [seeT]\n"
       "\n"
       "event same = { HH, TT }\n"
       "event HH = { HH }\n"}},
      {"two-coins-disclosure",
       {"the two-coins setup with the day of the week revealed afterwards",
       "# The two-coins setup, except that after seeing the coin Beauty is also\n"
       "# told which day it is. Stage one is the bare coin observation; stage\n"
       "# two folds in the day.\n"
       "scenario two-coins-disclosure\n"
       "\n"
       "time monday\n"
       "time tuesday\n"
       "\n"
       "world HH prior 1/4\n"
       "world HT prior 1/4\n"
       "world TH prior 1/4\n"
       "world TT prior 1/4\n"
       "\n"
       "center HH monday obs [seeH, seeH_mon]\n"
       "center HH tuesday obs [seeH, seeH_tue]\n"
       "center HT monday obs [seeH, seeH_mon]\n"
       "center HT tuesday obs [seeT, seeT_tue]\n"
       "center TH monday obs [seeT, seeT_mon]\n"
       "center TH tuesday obs [seeH, seeH_tue]\n"
       "center TT monday obs [seeT, seeT_mon]\n"
       "center TT tuesday obs [seeT, seeT_tue]\n"
       "\n"
       "event same = { HH, TT }\n"
       "event HH = { HH }\n"}},
      {"cost-cutting",
       {"awakenings only while coin one shows heads; in TT Beauty sleeps through",
       "# Two coins again, but the lab only wakes Beauty when coin one\n"
       "# currently shows heads. In TT she never wakes; in the mixed worlds\n"
       "# she wakes on a single day. Every awakening shows heads.\n"
       "scenario cost-cutting\n"
       "\n"
       "time monday\n"
       "time tuesday\n"
       "\n"
       "world HH prior 1/4\n"
       "world HT prior 1/4\n"
       "world TH prior 1/4\n"
       "world TT prior 1/4\n"
       "\n"
       "center HH monday obs [seeH]\n"
       "center HH tuesday obs [seeH]\n"
       "center HT monday obs [seeH]\n"
       "center TH tuesday obs [seeH]\n"
       "\n"
       "event same = { HH, TT }\n"
       "event HH = { HH }\n"}},
      {"lewis-sb",
       {"original Sleeping Beauty where Monday awakenings end with a reveal",
       "# Original Sleeping Beauty with a second stage: each Monday awakening\n"
       "# ends with the experimenters revealing that it is Monday, while a\n"
       "# Tuesday awakening is told nothing.\n"
       "scenario lewis-sb\n"
       "\n"
       "time monday\n"
       "time tuesday\n"
       "\n"
       "world Heads prior 1/2\n"
       "world Tails prior 1/2\n"
       "\n"
       "center Heads monday obs [awake, awake_mon]\n"
       "center Tails monday obs [awake, awake_mon]\n"
       "center Tails tuesday obs [awake, awake_untold]\n"
       "\n"
       "event Heads = { Heads }\n"
       "event Tails = { Tails }\n"}},
      {"shangri-la",
       {"two paths to the same place, sea memories replaced on arrival",
       "# The traveler reaches Shangri-La by the path a fair coin picks: by\n"
       "# the mountains (Heads) or by the sea (Tails). The guardians replace\n"
       "# any sea memories with mountain memories on arrival, so stage two\n"
       "# looks the same either way.\n"
       "scenario shangri-la\n"
       "\n"
       "time journey\n"
       "\n"
       "world Heads prior 1/2\n"
       "world Tails prior 1/2\n"
       "\n"
       "center Heads journey obs [expA, memA]\n"
       "center Tails journey obs [expB, memA]\n"
       "\n"
       "event Heads = { Heads }\n"
       "event Tails = { Tails }\n"}}};
  return texts;
}

inline std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, info] : builtin_library()) names.push_back(name);
  return names;
}

inline Scenario builtin_scenario(const std::string& name) {
  const auto& lib = builtin_library();
  const auto it = lib.find(name);
  if (it == lib.end()) fail(Errc::unknown_builtin, "unknown builtin scenario " + name);
  return parse_scenario(it->second.text);
}

inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// Resolves a scenario reference as the CLI sees it: either `builtin:NAME`
// or a path to scenario text.
inline Scenario scenario_from_spec(const std::string& ref) {
  const std::string prefix = "builtin:";
  if (ref.rfind(prefix, 0) == 0) return builtin_scenario(ref.substr(prefix.size()));
  return parse_scenario_file(ref);
}

}  // namespace selfloc
