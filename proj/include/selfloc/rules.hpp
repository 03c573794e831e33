#pragma once
// The four credence-update rules for centered evidence. Each maps a scenario
// plus an evidence query (stage, label) to an exact posterior over worlds.
//
//   halfer     keep worlds with at least one matching center, renormalize
//              the priors (strict conditionalization on the uncentered
//              proposition "some center matches")
//   thirder    weight each world by its number of matching centers
//              (self-indication: more awakenings, more credence)
//   selection  likelihood = fraction of the world's centers that match,
//              as if one awakening were sampled at random per world
//   lewis      spread prior evenly over each world's compatible centers,
//              then conditionalize centers stage by stage and marginalize
//
// A query whose label no center carries at that stage, or whose matching
// worlds all have prior 0, is unrealizable and throws.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "selfloc/error.hpp"
#include "selfloc/model.hpp"
#include "selfloc/rational.hpp"

namespace selfloc {

enum class Rule { halfer, thirder, selection, lewis };

inline const std::vector<Rule>& all_rules() {
  static const std::vector<Rule> rules = {Rule::halfer, Rule::thirder, Rule::selection,
                                          Rule::lewis};
  return rules;
}

inline std::string rule_name(Rule r) {
  switch (r) {
    case Rule::halfer: return "halfer";
    case Rule::thirder: return "thirder";
    case Rule::selection: return "selection";
    case Rule::lewis: return "lewis";
  }
  fail(Errc::internal, "bad rule tag");
}

inline Rule rule_from_name(const std::string& name) {
  for (Rule r : all_rules())
    if (rule_name(r) == name) return r;
  fail(Errc::syntax, "unknown rule " + name);
}

namespace detail {

[[noreturn]] inline void unrealizable(const EvidenceQuery& q, const std::string& extra = "") {
  fail(Errc::unrealizable_evidence,
       "unrealizable evidence " + q.label + " at stage " + std::to_string(q.stage) + extra);
}

inline WorldDistribution normalized(const Scenario& s, const std::map<std::string, Rat>& weight,
                                    const EvidenceQuery& q) {
  Rat total = 0;
  for (const auto& [id, w] : weight) total += w;
  if (total == 0) unrealizable(q, ": matching worlds have zero prior mass");
  WorldDistribution d;
  for (const auto& w : s.worlds) {
    const auto it = weight.find(w.id);
    d[w.id] = it == weight.end() ? Rat(0) : it->second / total;
  }
  check_distribution(d);
  return d;
}

inline WorldDistribution update_lewis(const Scenario& s, const EvidenceQuery& q) {
  // Centers consistent with carrying q.label at q.stage.
  std::vector<std::size_t> cls;
  for (std::size_t i = 0; i < s.centers.size(); ++i)
    if (s.centers[i].signature[static_cast<std::size_t>(q.stage - 1)] == q.label)
      cls.push_back(i);
  if (cls.empty()) unrealizable(q);

  // The labels the agent could have seen at each earlier stage on her way
  // to this evidence.
  std::vector<std::set<std::string>> allowed(static_cast<std::size_t>(q.stage));
  for (std::size_t i : cls)
    for (int k = 0; k < q.stage; ++k)
      allowed[static_cast<std::size_t>(k)].insert(s.centers[i].signature[static_cast<std::size_t>(k)]);

  // Stage 1: each world's prior splits evenly over its compatible centers.
  std::vector<Rat> mass(s.centers.size(), Rat(0));
  for (const auto& w : s.worlds) {
    std::vector<std::size_t> compatible;
    for (std::size_t i = 0; i < s.centers.size(); ++i)
      if (s.centers[i].world == w.id && allowed[0].count(s.centers[i].signature[0]))
        compatible.push_back(i);
    for (std::size_t i : compatible) mass[i] = w.prior / static_cast<int>(compatible.size());
  }
  auto renormalize = [&] {
    Rat total = 0;
    for (const Rat& m : mass) total += m;
    if (total == 0) unrealizable(q, ": matching worlds have zero prior mass");
    for (Rat& m : mass) m /= total;
  };
  renormalize();

  // Later stages: conditionalize the centered credence on the allowed
  // labels, one stage at a time.
  for (int k = 2; k <= q.stage; ++k) {
    for (std::size_t i = 0; i < s.centers.size(); ++i)
      if (!allowed[static_cast<std::size_t>(k - 1)].count(
              s.centers[i].signature[static_cast<std::size_t>(k - 1)]))
        mass[i] = 0;
    renormalize();
  }

  WorldDistribution d;
  for (const auto& w : s.worlds) d[w.id] = 0;
  for (std::size_t i = 0; i < s.centers.size(); ++i) d[s.centers[i].world] += mass[i];
  check_distribution(d);
  return d;
}

}  // namespace detail

// Posterior over worlds after updating on the query under the given rule.
inline WorldDistribution update(const Scenario& s, Rule r, const EvidenceQuery& q) {
  require_stage(s, q.stage);
  if (!s.realizable(q)) detail::unrealizable(q);
  if (r == Rule::lewis) return detail::update_lewis(s, q);

  std::map<std::string, Rat> weight;
  for (const auto& w : s.worlds) {
    const int match = s.match_count(w.id, q.stage, q.label);
    if (match == 0) continue;
    switch (r) {
      case Rule::halfer:
        weight[w.id] = w.prior;
        break;
      case Rule::thirder:
        weight[w.id] = w.prior * match;
        break;
      case Rule::selection:
        weight[w.id] = w.prior * match / static_cast<int>(s.centers_of(w.id).size());
        break;
      case Rule::lewis:
        break;
    }
  }
  return detail::normalized(s, weight, q);
}

// Every posterior the rule can produce in the scenario, prior first. Stage 0
// with an empty label stands for the prior; labels whose matching worlds all
// have prior 0 can never be observed and are left out.
struct ProfileEntry {
  int stage = 0;
  std::string label;
  WorldDistribution credence;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

inline std::vector<ProfileEntry> posterior_profile(const Scenario& s, Rule r) {
  std::vector<ProfileEntry> out;
  out.push_back({0, "", prior_distribution(s)});
  for (int stage = 1; stage <= s.stage_count; ++stage) {
    for (const auto& [label, centers] : evidence_classes(s, stage)) {
      Rat mass = 0;
      std::set<std::string> seen;
      for (std::size_t i : centers)
        if (seen.insert(s.centers[i].world).second) mass += s.prior_of(s.centers[i].world);
      if (mass == 0) continue;
      out.push_back({stage, label, update(s, r, {stage, label})});
    }
  }
  return out;
}

}  // namespace selfloc
