#pragma once
// Seeded Monte Carlo cross-check for the analytic rules. Worlds are drawn
// from the exact prior by inverse CDF on 64-bit fixed-point thresholds, so
// sampling honors the rationals to within 2^-64 per world.
//
// Each trial owns a counter-based SplitMix64 substream at `seed + 2t*gamma`
// (at most two draws per trial), so any contiguous partition of the trial
// range, run on any number of workers, merges to byte-identical counts.
//
// Three estimators, one per analytic rule:
//   per-center    count every matching awakening          (thirder)
//   per-trial     count trials with at least one match    (halfer)
//   random-center sample one awakening uniformly per trial (selection)

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "selfloc/error.hpp"
#include "selfloc/model.hpp"
#include "selfloc/rational.hpp"
#include "selfloc/rules.hpp"

namespace selfloc {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

inline constexpr std::uint64_t splitmix_gamma = 0x9E3779B97F4A7C15ULL;

// Inverse-CDF lookup over exact rational weights. Bucket i covers the
// 64-bit integers in [floor(cum_{i-1} * 2^64), floor(cum_i * 2^64)); a
// saturated flag stands in for the unrepresentable threshold 2^64.
class RationalCdfSampler {
 public:
  explicit RationalCdfSampler(const std::vector<Rat>& probs) {
    Rat cum = 0;
    for (const Rat& p : probs) {
      if (p < 0) fail(Errc::internal, "negative sampling weight");
      cum += p;
      const BigInt scaled = (numerator(cum) << 64) / denominator(cum);
      const bool sat = scaled >> 64 != 0;
      sat_.push_back(sat);
      upper_.push_back(sat ? 0 : scaled.convert_to<std::uint64_t>());
    }
    if (cum != 1) fail(Errc::internal, "sampling weights do not sum to 1");
  }

  std::size_t sample(std::uint64_t u) const {
    for (std::size_t i = 0; i < upper_.size(); ++i)
      if (sat_[i] || u < upper_[i]) return i;
    return upper_.size() - 1;
  }

 private:
  std::vector<std::uint64_t> upper_;
  std::vector<bool> sat_;
};

enum class SimMode { per_center, per_trial, random_center };

inline const std::vector<SimMode>& all_sim_modes() {
  static const std::vector<SimMode> modes = {SimMode::per_center, SimMode::per_trial,
                                             SimMode::random_center};
  return modes;
}

inline std::string sim_mode_name(SimMode m) {
  switch (m) {
    case SimMode::per_center: return "per-center";
    case SimMode::per_trial: return "per-trial";
    case SimMode::random_center: return "random-center";
  }
  fail(Errc::internal, "bad simulation mode tag");
}

inline SimMode sim_mode_from_name(const std::string& name) {
  for (SimMode m : all_sim_modes())
    if (sim_mode_name(m) == name) return m;
  fail(Errc::syntax, "unknown simulation mode " + name);
}

// The rule whose posterior the estimator converges to.
inline Rule analytic_counterpart(SimMode m) {
  switch (m) {
    case SimMode::per_center: return Rule::thirder;
    case SimMode::per_trial: return Rule::halfer;
    case SimMode::random_center: return Rule::selection;
  }
  fail(Errc::internal, "bad simulation mode tag");
}

struct SimSpec {
  EvidenceQuery query;
  std::string event;
  SimMode mode = SimMode::per_center;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct SimResult {
  std::uint64_t trials = 0;
  std::uint64_t numerator = 0;    // counted samples inside the event
  std::uint64_t denominator = 0;  // counted samples matching the evidence
  double estimate = std::numeric_limits<double>::quiet_NaN();

  void finish() {
    if (denominator > 0)
      estimate = static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

// Runs trials [begin, end) of the substream family. Summing the counters of
// adjacent ranges reproduces the single-range run exactly.
inline SimResult run_simulation_range(const Scenario& s, const SimSpec& spec, std::uint64_t begin,
                                      std::uint64_t end) {
  require_stage(s, spec.query.stage);
  if (!s.realizable(spec.query))
    fail(Errc::unrealizable_evidence, "unrealizable evidence " + spec.query.label + " at stage " +
                                          std::to_string(spec.query.stage));
  const Event& event = s.event_or_fail(spec.event);

  const std::size_t nw = s.worlds.size();
  std::vector<Rat> priors(nw);
  std::vector<int> match(nw);
  std::vector<char> in_event(nw);
  std::vector<std::vector<char>> center_matches(nw);
  std::vector<RationalCdfSampler> center_pick;
  std::vector<int> center_pick_index(nw, -1);
  for (std::size_t i = 0; i < nw; ++i) {
    const World& w = s.worlds[i];
    priors[i] = w.prior;
    match[i] = s.match_count(w.id, spec.query.stage, spec.query.label);
    in_event[i] = event.members.count(w.id) ? 1 : 0;
    for (std::size_t c : s.centers_of(w.id))
      center_matches[i].push_back(
          s.centers[c].signature[static_cast<std::size_t>(spec.query.stage - 1)] ==
          spec.query.label);
    const std::size_t n = center_matches[i].size();
    if (spec.mode == SimMode::random_center && n > 0) {
      center_pick_index[i] = static_cast<int>(center_pick.size());
      center_pick.emplace_back(std::vector<Rat>(n, Rat(1) / static_cast<int>(n)));
    }
  }
  const RationalCdfSampler world_pick(priors);

  SimResult res;
  res.trials = end - begin;
  for (std::uint64_t t = begin; t < end; ++t) {
    SplitMix64 rng(spec.seed + 2 * t * splitmix_gamma);
    const std::size_t w = world_pick.sample(rng.next());
    switch (spec.mode) {
      case SimMode::per_center:
        res.denominator += static_cast<std::uint64_t>(match[w]);
        if (in_event[w]) res.numerator += static_cast<std::uint64_t>(match[w]);
        break;
      case SimMode::per_trial:
        if (match[w] > 0) {
          res.denominator += 1;
          if (in_event[w]) res.numerator += 1;
        }
        break;
      case SimMode::random_center: {
        if (center_pick_index[w] < 0) break;  // dreamless world, nobody to ask
        const std::size_t c =
            center_pick[static_cast<std::size_t>(center_pick_index[w])].sample(rng.next());
        if (center_matches[w][c]) {
          res.denominator += 1;
          if (in_event[w]) res.numerator += 1;
        }
        break;
      }
    }
  }
  res.finish();
  return res;
}

inline SimResult run_simulation(const Scenario& s, const SimSpec& spec) {
  return run_simulation_range(s, spec, 0, spec.trials);
}

// Same counts as run_simulation, computed on `workers` threads over a
// contiguous partition of the trial range.
inline SimResult run_simulation_parallel(const Scenario& s, const SimSpec& spec,
                                         unsigned workers = 0) {
  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
  }
  if (static_cast<std::uint64_t>(workers) > spec.trials && spec.trials > 0)
    workers = static_cast<unsigned>(spec.trials);
  if (workers <= 1 || spec.trials == 0) return run_simulation(s, spec);

  // Surface validation errors on the calling thread before spawning.
  run_simulation_range(s, spec, 0, 0);

  std::vector<SimResult> parts(workers);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = spec.trials / workers;
  const std::uint64_t extra = spec.trials % workers;
  std::uint64_t begin = 0;
  for (unsigned i = 0; i < workers; ++i) {
    const std::uint64_t end = begin + chunk + (i < extra ? 1 : 0);
    pool.emplace_back([&s, &spec, &parts, i, begin, end] {
      parts[i] = run_simulation_range(s, spec, begin, end);
    });
    begin = end;
  }
  for (auto& th : pool) th.join();

  SimResult total;
  for (const SimResult& part : parts) {
    total.trials += part.trials;
    total.numerator += part.numerator;
    total.denominator += part.denominator;
  }
  total.finish();
  return total;
}

// Four-sigma half-width for comparing the estimate against an analytic
// value v, treating the denominator as the effective sample count.
inline double agreement_bound(const Rat& analytic, std::uint64_t denominator) {
  if (denominator == 0) return std::numeric_limits<double>::infinity();
  const double v = rat_to_double(analytic);
  return 4.0 * std::sqrt(v * (1.0 - v) / static_cast<double>(denominator));
}

}  // namespace selfloc
