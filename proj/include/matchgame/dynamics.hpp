// Copyright 2026 The matchgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MATCHGAME_DYNAMICS_HPP_
#define MATCHGAME_DYNAMICS_HPP_

// Best-response dynamics that start at the truthful profile and stop at a
// pure Nash equilibrium, plus equilibrium checks and a small exhaustive NE
// enumerator.
//
// Push-up dynamics (accomplice game): each step applies the best no-regret
// inconspicuous push-up of some strategic pair. Every step strictly improves
// at least one woman, so there are at most n^2 steps.
//
// Inconspicuous dynamics (woman game): each step applies the best
// inconspicuous self-manipulation of some strategic woman, measured at the
// current profile. Every step strictly worsens at least one man.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matchgame/core.hpp"
#include "matchgame/da.hpp"
#include "matchgame/gen.hpp"
#include "matchgame/manipulation.hpp"

namespace matchgame {

// Which eligible player moves next.
//   kFixedOrder: scan players in ascending order and restart from the first
//                one after every applied step.
//   kRandom:     scan players in a fresh seeded random order at every step.
struct SelectionPolicy {
  enum class Kind { kFixedOrder, kRandom };
  Kind kind = Kind::kFixedOrder;
  std::uint64_t seed = 0;

  static SelectionPolicy fixed_order() { return {}; }
  static SelectionPolicy random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
};

struct DynamicsStep {
  std::size_t step_index;   // 0-based
  AgentId actor;            // manipulating man, or the manipulating woman
  AgentId beneficiary;      // helped woman; equals actor in the woman game
  AgentId moved;            // pushed woman / promoted man
  int position;             // where `moved` now sits in the actor's list
  StrategyProfile profile_after;
  Matching matching_after;  // da_on_profile(profile_after)
};

struct DynamicsTrace {
  std::shared_ptr<const Instance> instance;
  Side side;                 // kMenReport: accomplice; kWomenReport: woman game
  StrategicPairs pairs;      // accomplice game players
  std::vector<AgentId> women;  // woman game players
  Matching truthful_matching;
  std::vector<DynamicsStep> steps;
  StrategyProfile fixed_point;
  Matching fixed_point_matching;

  std::size_t converged_at() const { return steps.size(); }
};

namespace detail {

inline void check_step_budget(std::size_t steps, std::size_t n) {
  if (steps >= n * n) {
    throw InvariantViolation("dynamics did not converge within n^2 = " +
                             std::to_string(n * n) + " steps");
  }
}

}  // namespace detail

inline DynamicsTrace run_pushup_dynamics(
    std::shared_ptr<const Instance> inst, const StrategicPairs& p,
    SelectionPolicy policy = SelectionPolicy::fixed_order()) {
  const auto n = inst->n();
  for (const auto& [m, w] : p) {
    detail::check_id(m, n, "strategic man");
    detail::check_id(w, n, "strategic woman");
  }
  StrategyProfile sp = StrategyProfile::truthful(inst, Side::kMenReport);
  Matching mu = da_on_profile(sp);
  DynamicsTrace trace{inst, Side::kMenReport, p, {}, mu, {}, sp, mu};
  std::vector<Pair> order(p.begin(), p.end());
  Rng rng(policy.seed);

  while (true) {
    if (policy.kind == SelectionPolicy::Kind::kRandom) rng.shuffle(order);
    // Push-up outcomes depend on the man only, so compute them once per step.
    std::map<AgentId, std::vector<PushUpOutcome>> outcomes;
    std::optional<ManipulationResult> applied;
    for (const auto& [m, w] : order) {
      auto it = outcomes.find(m);
      if (it == outcomes.end()) it = outcomes.emplace(m, pushup_outcomes(sp, m, mu)).first;
      auto r = detail::select_accomplice(*inst, m, w, mu, it->second, SearchMode::kBest);
      if (r.found) {
        applied = std::move(r);
        break;
      }
    }
    if (!applied) break;
    detail::check_step_budget(trace.steps.size(), n);

    const AgentId m = applied->manipulator;
    // The manipulator must not lose even when measured on his previous
    // reported list; the true-list check alone would not guarantee this.
    const auto& prev = sp.report(m);
    if (prev.rank_unchecked(applied->resulting_matching.woman_of(m)) >
        prev.rank_unchecked(mu.woman_of(m))) {
      throw InvariantViolation("push-up step left the manipulator worse off "
                               "on his current reported list");
    }
    sp = sp.with_report(m, applied->new_list);
    mu = applied->resulting_matching;
    trace.steps.push_back({trace.steps.size(), m, applied->beneficiary,
                           applied->moved, applied->position, sp, mu});
  }
  trace.fixed_point = sp;
  trace.fixed_point_matching = mu;
  return trace;
}

inline DynamicsTrace run_inconspicuous_dynamics(
    std::shared_ptr<const Instance> inst, const std::set<AgentId>& pw,
    SelectionPolicy policy = SelectionPolicy::fixed_order()) {
  const auto n = inst->n();
  for (AgentId w : pw) detail::check_id(w, n, "strategic woman");
  StrategyProfile sp = StrategyProfile::truthful(inst, Side::kWomenReport);
  Matching mu = da_on_profile(sp);
  std::vector<AgentId> order(pw.begin(), pw.end());
  DynamicsTrace trace{inst, Side::kWomenReport, {}, order, mu, {}, sp, mu};
  Rng rng(policy.seed);

  while (true) {
    if (policy.kind == SelectionPolicy::Kind::kRandom) rng.shuffle(order);
    std::optional<ManipulationResult> applied;
    for (AgentId w : order) {
      auto r = find_self_manipulation(sp, w, SearchMode::kBest);
      if (r.found) {
        applied = std::move(r);
        break;
      }
    }
    if (!applied) break;
    detail::check_step_budget(trace.steps.size(), n);
    const AgentId w = applied->manipulator;
    sp = sp.with_report(w, applied->new_list);
    mu = applied->resulting_matching;
    trace.steps.push_back({trace.steps.size(), w, w, applied->moved,
                           applied->position, sp, mu});
  }
  trace.fixed_point = sp;
  trace.fixed_point_matching = mu;
  return trace;
}

// First accomplice manipulation available at `sp`, scanning pairs in order.
inline std::optional<ManipulationResult> find_accomplice_deviation(
    const StrategyProfile& sp, const StrategicPairs& p) {
  detail::require_side(sp, Side::kMenReport, "verify_ne_accomplice");
  const Matching mu = da_on_profile(sp);
  std::map<AgentId, std::vector<PushUpOutcome>> outcomes;
  for (const auto& [m, w] : p) {
    detail::check_id(m, sp.n(), "strategic man");
    detail::check_id(w, sp.n(), "strategic woman");
    auto it = outcomes.find(m);
    if (it == outcomes.end()) it = outcomes.emplace(m, pushup_outcomes(sp, m, mu)).first;
    auto r = detail::select_accomplice(sp.base(), m, w, mu, it->second, SearchMode::kFirst);
    if (r.found) return r;
  }
  return std::nullopt;
}

// O(n |P_m|) DA runs.
inline bool verify_ne_accomplice(const StrategyProfile& sp, const StrategicPairs& p) {
  return !find_accomplice_deviation(sp, p).has_value();
}

inline std::optional<ManipulationResult> find_one_for_many_deviation(
    const StrategyProfile& sp, const std::set<AgentId>& pm,
    const std::map<AgentId, std::set<AgentId>>& pw_by_m) {
  for (AgentId m : pm) {
    const auto it = pw_by_m.find(m);
    if (it == pw_by_m.end() || it->second.empty()) continue;
    auto r = find_one_for_many_manipulation(sp, m, it->second);
    if (r.found) return r;
  }
  return std::nullopt;
}

inline bool verify_ne_one_for_many(const StrategyProfile& sp,
                                   const std::set<AgentId>& pm,
                                   const std::map<AgentId, std::set<AgentId>>& pw_by_m) {
  detail::require_side(sp, Side::kMenReport, "verify_ne_one_for_many");
  return !find_one_for_many_deviation(sp, pm, pw_by_m).has_value();
}

// Only inconspicuous misreports against the current profile are tried. That
// is complete at fixed points of the inconspicuous dynamics.
inline std::optional<ManipulationResult> find_woman_deviation(
    const StrategyProfile& sp, const std::set<AgentId>& pw) {
  for (AgentId w : pw) {
    auto r = find_self_manipulation(sp, w, SearchMode::kFirst);
    if (r.found) return r;
  }
  return std::nullopt;
}

inline bool verify_ne_woman(const StrategyProfile& sp, const std::set<AgentId>& pw) {
  detail::require_side(sp, Side::kWomenReport, "verify_ne_woman");
  return !find_woman_deviation(sp, pw).has_value();
}

struct NashProfile {
  StrategyProfile profile;
  Matching matching;
};

inline constexpr std::size_t kNeOracleMaxN = 4;
inline constexpr std::size_t kNeOracleMaxMen = 2;

// Every accomplice-game NE, by brute force over all reported lists of the
// strategic men (everyone else truthful). Ordered lexicographically by the
// strategic men's lists, lowest-index man outermost.
inline std::vector<NashProfile> enumerate_all_ne(std::shared_ptr<const Instance> inst,
                                                 const StrategicPairs& p) {
  const auto n = inst->n();
  const auto men = p.men();
  if (n > kNeOracleMaxN || men.size() > kNeOracleMaxMen) {
    throw OracleBoundError("enumerate_all_ne: needs n <= " + std::to_string(kNeOracleMaxN) +
                           " and at most " + std::to_string(kNeOracleMaxMen) +
                           " strategic men (got n=" + std::to_string(n) + ", " +
                           std::to_string(men.size()) + " men)");
  }
  std::vector<std::vector<AgentId>> current(men.size(), std::vector<AgentId>(n));
  for (auto& v : current) std::iota(v.begin(), v.end(), 0);

  std::vector<NashProfile> out;
  const StrategyProfile truth = StrategyProfile::truthful(inst, Side::kMenReport);
  // Odometer over (n!)^|men| profiles; the last man's list spins fastest.
  while (true) {
    StrategyProfile sp = truth;
    for (std::size_t i = 0; i < men.size(); ++i) {
      sp = sp.with_report(men[i], PreferenceList(current[i]));
    }
    if (verify_ne_accomplice(sp, p)) {
      Matching mu = da_on_profile(sp);
      out.push_back({std::move(sp), std::move(mu)});
    }
    std::size_t k = men.size();
    while (k > 0 && !std::next_permutation(current[k - 1].begin(), current[k - 1].end())) {
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

}  // namespace matchgame

#endif  // MATCHGAME_DYNAMICS_HPP_
