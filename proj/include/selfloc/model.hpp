#pragma once
// Domain model: finite possible-worlds scenarios with awakening centers,
// staged observation signatures, named uncentered events, and exact credence
// distributions over worlds. Everything is an immutable value; operations
// are pure functions.

#include <cctype>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "selfloc/error.hpp"
#include "selfloc/rational.hpp"

namespace selfloc {

struct World {
  std::string id;
  Rat prior;

  friend bool operator==(const World&, const World&) = default;
};

// One awakening of the agent at (world, time). signature[k] is her total
// evidence state during stage k+1 of that awakening; a sleeping moment has
// no center at all.
struct Center {
  std::string world;
  std::string time;
  std::vector<std::string> signature;

  friend bool operator==(const Center&, const Center&) = default;
};

// An uncentered event: a set of worlds.
struct Event {
  std::string id;
  std::set<std::string> members;

  friend bool operator==(const Event&, const Event&) = default;
};

// The agent's total centered evidence at a moment: a stage index (1-based)
// plus the observation label she carries there.
struct EvidenceQuery {
  int stage = 1;
  std::string label;
};

struct Scenario {
  std::string name;
  std::vector<World> worlds;
  std::vector<std::string> times;  // declaration order = temporal order
  std::vector<Center> centers;
  std::vector<Event> events;
  int stage_count = 1;

  friend bool operator==(const Scenario&, const Scenario&) = default;

  const World* find_world(const std::string& id) const {
    for (const auto& w : worlds)
      if (w.id == id) return &w;
    return nullptr;
  }

  const Event* find_event(const std::string& id) const {
    for (const auto& e : events)
      if (e.id == id) return &e;
    return nullptr;
  }

  const Event& event_or_fail(const std::string& id) const {
    if (const Event* e = find_event(id)) return *e;
    fail(Errc::unknown_event, "unknown event " + id);
  }

  Rat prior_of(const std::string& world_id) const {
    if (const World* w = find_world(world_id)) return w->prior;
    fail(Errc::unknown_world, "unknown world " + world_id);
  }

  // Center indices belonging to a world, in declaration order.
  std::vector<std::size_t> centers_of(const std::string& world_id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < centers.size(); ++i)
      if (centers[i].world == world_id) out.push_back(i);
    return out;
  }

  // How many of the world's centers carry `label` at `stage`.
  int match_count(const std::string& world_id, int stage, const std::string& label) const {
    int n = 0;
    for (const auto& c : centers)
      if (c.world == world_id && c.signature[static_cast<std::size_t>(stage - 1)] == label) ++n;
    return n;
  }

  bool realizable(const EvidenceQuery& q) const {
    for (const auto& c : centers)
      if (c.signature[static_cast<std::size_t>(q.stage - 1)] == q.label) return true;
    return false;
  }
};

// Exact credence over worlds. Covers every world of its scenario (zeros
// included); entries are >= 0 and sum to exactly 1.
using WorldDistribution = std::map<std::string, Rat>;

inline WorldDistribution prior_distribution(const Scenario& s) {
  WorldDistribution d;
  for (const auto& w : s.worlds) d[w.id] = w.prior;
  return d;
}

// Identifiers are nonempty and carry no whitespace, control characters, or
// scenario-text punctuation.
inline bool valid_identifier(const std::string& id) {
  if (id.empty()) return false;
  const std::string reserved = "#[]{}=,";
  for (char ch : id) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || std::iscntrl(c)) return false;
    if (reserved.find(ch) != std::string::npos) return false;
  }
  return true;
}

inline void require_stage(const Scenario& s, int stage) {
  if (stage < 1 || stage > s.stage_count)
    fail(Errc::stage_out_of_range, "stage " + std::to_string(stage) + " out of range [1, " +
                                       std::to_string(s.stage_count) + "]");
}

// Checks every structural invariant and returns the scenario with its stage
// count filled in from the signatures. Total: malformed input yields an
// Error, never undefined behavior.
inline Scenario validate_scenario(Scenario raw) {
  auto need_id = [](const std::string& id, const char* what) {
    if (!valid_identifier(id))
      fail(Errc::bad_identifier, std::string(what) + " id '" + id + "' is not a valid identifier");
  };

  if (raw.worlds.empty()) fail(Errc::empty_scenario, "scenario declares no worlds");
  need_id(raw.name, "scenario");

  std::set<std::string> world_ids, time_ids, event_ids;
  for (const auto& w : raw.worlds) {
    need_id(w.id, "world");
    if (!world_ids.insert(w.id).second) fail(Errc::duplicate_id, "duplicate world id " + w.id);
    if (!in_unit_interval(w.prior))
      fail(Errc::prior_range,
           "world " + w.id + " prior " + rat_to_string(w.prior) + " outside [0, 1]");
  }
  Rat total = 0;
  for (const auto& w : raw.worlds) total += w.prior;
  if (total != 1)
    fail(Errc::prior_sum, "world priors sum to " + rat_to_string(total) + ", expected 1");

  for (const auto& t : raw.times) {
    need_id(t, "time");
    if (!time_ids.insert(t).second) fail(Errc::duplicate_id, "duplicate time id " + t);
  }

  std::set<std::pair<std::string, std::string>> cells;
  std::size_t sig_len = 0;
  bool have_len = false;
  for (const auto& c : raw.centers) {
    if (!world_ids.count(c.world))
      fail(Errc::dangling_reference, "center references unknown world " + c.world);
    if (!time_ids.count(c.time))
      fail(Errc::dangling_reference, "center references unknown time " + c.time);
    if (!cells.insert({c.world, c.time}).second)
      fail(Errc::duplicate_id, "duplicate center " + c.world + "/" + c.time);
    if (c.signature.empty())
      fail(Errc::ragged_signature, "center " + c.world + "/" + c.time + " has an empty signature");
    for (const auto& label : c.signature) need_id(label, "observation label");
    if (!have_len) {
      sig_len = c.signature.size();
      have_len = true;
    } else if (c.signature.size() != sig_len) {
      fail(Errc::ragged_signature, "center " + c.world + "/" + c.time + " has signature length " +
                                       std::to_string(c.signature.size()) + ", expected " +
                                       std::to_string(sig_len));
    }
  }

  for (const auto& e : raw.events) {
    need_id(e.id, "event");
    if (!event_ids.insert(e.id).second) fail(Errc::duplicate_id, "duplicate event id " + e.id);
    for (const auto& m : e.members)
      if (!world_ids.count(m))
        fail(Errc::dangling_reference, "event " + e.id + " references unknown world " + m);
  }

  raw.stage_count = have_len ? static_cast<int>(sig_len) : 1;
  return raw;
}

// Partition of all centers by their stage-th signature label. Keys are the
// labels realizable at that stage; values index into s.centers.
inline std::map<std::string, std::vector<std::size_t>> evidence_classes(const Scenario& s,
                                                                        int stage) {
  require_stage(s, stage);
  std::map<std::string, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < s.centers.size(); ++i)
    classes[s.centers[i].signature[static_cast<std::size_t>(stage - 1)]].push_back(i);
  return classes;
}

// Exact sum of d over the event's members.
inline Rat event_probability(const WorldDistribution& d, const Event& e) {
  Rat p = 0;
  for (const auto& m : e.members) {
    const auto it = d.find(m);
    if (it == d.end())
      fail(Errc::unknown_event,
           "event " + e.id + " references world " + m + " absent from the distribution");
    p += it->second;
  }
  return p;
}

// Internal invariant guard: nonnegative entries, exact sum 1.
inline void check_distribution(const WorldDistribution& d) {
  Rat total = 0;
  for (const auto& [id, v] : d) {
    if (v < 0) fail(Errc::internal, "negative credence for world " + id);
    total += v;
  }
  if (total != 1)
    fail(Errc::internal, "distribution sums to " + rat_to_string(total) + ", expected 1");
}

}  // namespace selfloc
