#pragma once
// Reflection audit: find transitions where a rule makes the agent certain,
// in advance, that her own later credence in an event will differ from her
// current one.
//
// A transition runs from a source evidence state (the prior, or a realizable
// stage-j class) to a later stage k. Its destination labels are the stage-k
// labels of the source class. A violation is recorded when every destination
// label maps the event to one common posterior value different from the
// source value: the agent can name her future credence and still refuses to
// adopt it now.
//
// Each violation carries structural flags describing how benign the
// transition is; severity counts the flags that hold. A violation with all
// flags set is the alarming kind: no world where the step is skipped, no
// asymmetric awakening pattern, no self-locating ambiguity, no forgetting.

#include <bit>
#include <cstddef>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "selfloc/error.hpp"
#include "selfloc/model.hpp"
#include "selfloc/rational.hpp"
#include "selfloc/rules.hpp"

namespace selfloc {

enum ReflectionFlag : unsigned {
  reached_in_all_worlds = 1u << 0,  // every positive-prior world awakes at all
  uniform_structure = 1u << 1,      // same awake time slots in every such world
  agent_located = 1u << 2,          // each destination label pins down one time slot
  no_memory_loss = 1u << 3,         // stage-k evidence refines stage-j evidence
};

inline const std::vector<std::pair<ReflectionFlag, std::string>>& reflection_flag_names() {
  static const std::vector<std::pair<ReflectionFlag, std::string>> names = {
      {reached_in_all_worlds, "REACHED_IN_ALL_WORLDS"},
      {uniform_structure, "UNIFORM_STRUCTURE"},
      {agent_located, "AGENT_LOCATED"},
      {no_memory_loss, "NO_MEMORY_LOSS"},
  };
  return names;
}

inline std::string flags_to_string(unsigned flags) {
  if (flags == 0) return "-";
  std::string out;
  for (const auto& [bit, name] : reflection_flag_names())
    if (flags & bit) {
      if (!out.empty()) out += "|";
      out += name;
    }
  return out;
}

struct Violation {
  int from_stage = 0;      // 0 means the prior
  std::string from_label;  // empty for the prior
  int to_stage = 1;
  std::string event;
  Rat before;
  Rat after;  // the unanimously anticipated posterior
  unsigned flags = 0;
  int severity = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace detail {

inline std::set<std::string> awake_times(const Scenario& s, const std::string& world_id) {
  std::set<std::string> times;
  for (const auto& c : s.centers)
    if (c.world == world_id) times.insert(c.time);
  return times;
}

// Structural flags for a (j -> k) transition with the given destination
// labels. Independent of rule and event.
inline unsigned transition_flags(const Scenario& s, int from_stage, int to_stage,
                                 const std::set<std::string>& dest_labels) {
  unsigned flags = 0;

  bool reached = true;
  for (const auto& w : s.worlds)
    if (w.prior > 0 && s.centers_of(w.id).empty()) reached = false;
  if (reached) flags |= reached_in_all_worlds;

  bool uniform = true;
  bool have_ref = false;
  std::set<std::string> ref;
  for (const auto& w : s.worlds) {
    if (w.prior == 0) continue;
    const std::set<std::string> times = awake_times(s, w.id);
    if (!have_ref) {
      ref = times;
      have_ref = true;
    } else if (times != ref) {
      uniform = false;
    }
  }
  if (uniform) flags |= uniform_structure;

  bool located = true;
  for (const auto& label : dest_labels) {
    std::set<std::string> times;
    for (const auto& c : s.centers)
      if (c.signature[static_cast<std::size_t>(to_stage - 1)] == label) times.insert(c.time);
    if (times.size() != 1) located = false;
  }
  if (located) flags |= agent_located;

  if (from_stage >= 1) {
    // Forgetting means two centers distinguishable at stage j collapse into
    // the same stage-k evidence state.
    std::map<std::string, std::set<std::string>> preimages;
    for (const auto& c : s.centers)
      preimages[c.signature[static_cast<std::size_t>(to_stage - 1)]].insert(
          c.signature[static_cast<std::size_t>(from_stage - 1)]);
    bool refines = true;
    for (const auto& [label, sources] : preimages)
      if (sources.size() > 1) refines = false;
    if (refines) flags |= no_memory_loss;
  }

  return flags;
}

}  // namespace detail

// All reflection violations the rule commits in the scenario for one event.
// Transitions are scanned prior -> k and (j, L) -> k for every j < k; output
// order is by source stage, then source label, then destination stage.
inline std::vector<Violation> find_violations(const Scenario& s, Rule r, const Event& e) {
  std::vector<Violation> out;

  struct Source {
    int stage;
    std::string label;
    std::vector<std::size_t> centers;  // class members; empty means "all"
  };
  std::vector<Source> sources;
  sources.push_back({0, "", {}});
  for (int j = 1; j < s.stage_count; ++j) {
    for (const auto& [label, centers] : evidence_classes(s, j)) {
      Rat mass = 0;
      std::set<std::string> seen;
      for (std::size_t i : centers)
        if (seen.insert(s.centers[i].world).second) mass += s.prior_of(s.centers[i].world);
      if (mass > 0) sources.push_back({j, label, centers});
    }
  }

  for (const auto& src : sources) {
    const WorldDistribution before_dist =
        src.stage == 0 ? prior_distribution(s) : update(s, r, {src.stage, src.label});
    const Rat before = event_probability(before_dist, e);

    for (int k = src.stage + 1; k <= s.stage_count; ++k) {
      std::set<std::string> dest;
      if (src.stage == 0) {
        for (const auto& c : s.centers) dest.insert(c.signature[static_cast<std::size_t>(k - 1)]);
      } else {
        for (std::size_t i : src.centers)
          dest.insert(s.centers[i].signature[static_cast<std::size_t>(k - 1)]);
      }
      // Labels only zero-prior worlds can produce are never observed.
      for (auto it = dest.begin(); it != dest.end();) {
        Rat mass = 0;
        for (const auto& w : s.worlds)
          if (s.match_count(w.id, k, *it) > 0) mass += w.prior;
        it = mass == 0 ? dest.erase(it) : std::next(it);
      }
      if (dest.empty()) continue;

      bool unanimous = true;
      bool first = true;
      Rat after;
      for (const auto& label : dest) {
        const Rat v = event_probability(update(s, r, {k, label}), e);
        if (first) {
          after = v;
          first = false;
        } else if (v != after) {
          unanimous = false;
        }
      }
      if (!unanimous || after == before) continue;

      Violation violation;
      violation.from_stage = src.stage;
      violation.from_label = src.label;
      violation.to_stage = k;
      violation.event = e.id;
      violation.before = before;
      violation.after = after;
      violation.flags = detail::transition_flags(s, src.stage, k, dest);
      violation.severity = std::popcount(violation.flags);
      out.push_back(violation);
    }
  }
  return out;
}

inline std::vector<Violation> find_violations(const Scenario& s, Rule r,
                                              const std::string& event_id) {
  return find_violations(s, r, s.event_or_fail(event_id));
}

// Violations across every declared event, in declaration order.
inline std::vector<Violation> find_violations(const Scenario& s, Rule r) {
  std::vector<Violation> out;
  for (const auto& e : s.events) {
    const std::vector<Violation> vs = find_violations(s, r, e);
    out.insert(out.end(), vs.begin(), vs.end());
  }
  return out;
}

}  // namespace selfloc
