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

#ifndef MATCHGAME_MANIPULATION_HPP_
#define MATCHGAME_MANIPULATION_HPP_

// Single-step manipulation search.
//
// Accomplice and one-for-many searches only try inconspicuous push-ups: one
// woman from below the man's current partner moved to the very top of his
// list. Any accomplice manipulation can be realised that way, and the order
// inside the blocks above and below his partner never changes the DA outcome,
// so the first place is as good as any other slot.
//
// Self-manipulation by a woman tries every inconspicuous misreport of her
// current list: one man promoted to any higher position.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matchgame/core.hpp"
#include "matchgame/da.hpp"

namespace matchgame {

enum class SearchMode { kBest, kFirst };

struct ManipulationResult {
  bool found = false;
  AgentId manipulator = -1;
  AgentId beneficiary = -1;  // the helped woman (accomplice / one-for-many)
                             // or the manipulating woman herself
  AgentId moved = -1;        // pushed woman or promoted man
  int position = -1;         // new position of `moved` in `new_list`
  PreferenceList new_list;
  // Rank improvement of the beneficiary's partner under her true list.
  int beneficiary_gain = 0;
  Matching resulting_matching;
};

// Rewrites `list` as (X, L, match, R \ X) where L and R are the agents above
// and below `match`. X keeps its original relative order.
inline PreferenceList push_up(const PreferenceList& list, AgentId match,
                              const std::set<AgentId>& x) {
  const int split = list.rank_of(match);
  for (AgentId a : x) {
    const int r = list.rank_of(a);
    if (r <= split) {
      throw InputError(InputErrorKind::kInvalidArgument,
                       "push_up: agent " + std::to_string(a) +
                           " is not ranked below the current match");
    }
  }
  std::vector<AgentId> out;
  out.reserve(list.size());
  for (std::size_t pos = split + 1; pos < list.size(); ++pos) {
    if (x.count(list[pos])) out.push_back(list[pos]);
  }
  for (int pos = 0; pos <= split; ++pos) out.push_back(list[pos]);
  for (std::size_t pos = split + 1; pos < list.size(); ++pos) {
    if (!x.count(list[pos])) out.push_back(list[pos]);
  }
  return PreferenceList(std::move(out));
}

// Moves `agent` up to `position`; everything between shifts down by one.
inline PreferenceList promote(const PreferenceList& list, AgentId agent,
                              int position) {
  const int from = list.rank_of(agent);
  if (position < 0 || position >= from) {
    throw InputError(InputErrorKind::kInvalidArgument,
                     "promote: target position must be above the current one");
  }
  std::vector<AgentId> out(list.begin(), list.end());
  out.erase(out.begin() + from);
  out.insert(out.begin() + position, agent);
  return PreferenceList(std::move(out));
}

// DA outcome of one inconspicuous push-up.
struct PushUpOutcome {
  AgentId pushed;
  PreferenceList list;
  Matching matching;
};

// Every single-woman push-up available to man `m` at `sp`, in the order the
// women appear below his partner. `current` must be da_on_profile(sp).
inline std::vector<PushUpOutcome> pushup_outcomes(const StrategyProfile& sp,
                                                  AgentId m,
                                                  const Matching& current) {
  const PreferenceList& reported = sp.report(m);
  const AgentId partner = current.woman_of(m);
  std::vector<PushUpOutcome> out;
  for (std::size_t pos = reported.rank_of(partner) + 1; pos < reported.size();
       ++pos) {
    const AgentId x = reported[pos];
    PreferenceList list = push_up(reported, partner, {x});
    Matching mu = da_with_report(sp, m, list);
    out.push_back({x, std::move(list), std::move(mu)});
  }
  return out;
}

namespace detail {

inline void require_side(const StrategyProfile& sp, Side side, const char* op) {
  if (sp.side() != side) {
    throw InputError(InputErrorKind::kInvalidArgument,
                     std::string(op) + ": profile reports the wrong side");
  }
}

// Picks the accomplice manipulation for (m, w) among precomputed push-ups.
// (i) w strictly improves, (ii) m does not lose, both under true lists.
inline ManipulationResult select_accomplice(const Instance& truth, AgentId m,
                                            AgentId w, const Matching& current,
                                            const std::vector<PushUpOutcome>& outcomes,
                                            SearchMode mode) {
  const auto& wl = truth.woman(w);
  const auto& ml = truth.man(m);
  const int w_before = wl.rank_unchecked(current.man_of(w));
  const int m_before = ml.rank_unchecked(current.woman_of(m));
  const PushUpOutcome* chosen = nullptr;
  int chosen_rank = 0;
  for (const auto& o : outcomes) {
    const int w_after = wl.rank_unchecked(o.matching.man_of(w));
    const int m_after = ml.rank_unchecked(o.matching.woman_of(m));
    if (w_after >= w_before || m_after > m_before) continue;
    const bool better = chosen == nullptr || w_after < chosen_rank ||
                        (w_after == chosen_rank && o.pushed < chosen->pushed);
    if (better) {
      chosen = &o;
      chosen_rank = w_after;
    }
    if (mode == SearchMode::kFirst) break;
  }
  ManipulationResult r;
  r.manipulator = m;
  r.beneficiary = w;
  if (chosen == nullptr) return r;
  r.found = true;
  r.moved = chosen->pushed;
  r.position = 0;
  r.new_list = chosen->list;
  r.beneficiary_gain = w_before - chosen_rank;
  r.resulting_matching = chosen->matching;
  return r;
}

}  // namespace detail

// Accomplice manipulation for strategic pair (m, w) at men-side profile `sp`.
// kBest maximises w's new partner (ties: smallest pushed index); kFirst stops
// at the first valid push-up in list order.
inline ManipulationResult find_accomplice_manipulation(const StrategyProfile& sp,
                                                       Pair pair,
                                                       SearchMode mode) {
  detail::require_side(sp, Side::kMenReport, "find_accomplice_manipulation");
  const auto [m, w] = pair;
  detail::check_id(m, sp.n(), "accomplice man");
  detail::check_id(w, sp.n(), "beneficiary woman");
  const Matching current = da_on_profile(sp);
  return detail::select_accomplice(sp.base(), m, w, current,
                                   pushup_outcomes(sp, m, current), mode);
}

// Inconspicuous self-manipulation by woman `w` at women-side profile `sp`.
// Improvement is judged on her true list. kBest maximises her new partner
// (ties: smallest promoted man, then smallest target position); kFirst returns
// the first hit in that same order.
inline ManipulationResult find_self_manipulation(const StrategyProfile& sp,
                                                 AgentId w, SearchMode mode) {
  detail::require_side(sp, Side::kWomenReport, "find_self_manipulation");
  detail::check_id(w, sp.n(), "manipulating woman");
  const Matching current = da_on_profile(sp);
  const auto& truth = sp.base().woman(w);
  const int before = truth.rank_unchecked(current.man_of(w));

  ManipulationResult r;
  r.manipulator = w;
  r.beneficiary = w;
  int best_rank = before;
  const PreferenceList& reported = sp.report(w);
  const auto n = static_cast<AgentId>(sp.n());
  for (AgentId a = 0; a < n; ++a) {
    const int from = reported.rank_unchecked(a);
    for (int j = 0; j < from; ++j) {
      PreferenceList list = promote(reported, a, j);
      Matching mu = da_with_report(sp, w, list);
      const int after = truth.rank_unchecked(mu.man_of(w));
      if (after >= best_rank) continue;
      best_rank = after;
      r.found = true;
      r.moved = a;
      r.position = j;
      r.new_list = std::move(list);
      r.resulting_matching = std::move(mu);
      r.beneficiary_gain = before - after;
      if (mode == SearchMode::kFirst || after == 0) return r;
    }
  }
  return r;
}

// Flattens a one-for-many game into the accomplice game whose equilibria are
// also equilibria of the one-for-many game.
inline StrategicPairs one_for_many_to_accomplice(
    std::size_t n, const std::set<AgentId>& pm,
    const std::map<AgentId, std::set<AgentId>>& pw_by_m) {
  std::vector<Pair> pairs;
  for (AgentId m : pm) {
    const auto it = pw_by_m.find(m);
    if (it == pw_by_m.end()) continue;
    for (AgentId w : it->second) pairs.emplace_back(m, w);
  }
  return StrategicPairs(n, std::move(pairs));
}

// Better response for man `m` helping the set `pw`: every woman in pw weakly
// improves, one strictly, and m does not lose (true lists). Returns the
// first valid push-up in list order; `beneficiary` is the smallest-index
// woman who strictly improves.
inline ManipulationResult find_one_for_many_manipulation(
    const StrategyProfile& sp, AgentId m, const std::set<AgentId>& pw) {
  detail::require_side(sp, Side::kMenReport, "find_one_for_many_manipulation");
  detail::check_id(m, sp.n(), "manipulating man");
  for (AgentId w : pw) detail::check_id(w, sp.n(), "beneficiary woman");
  const Instance& truth = sp.base();
  const Matching current = da_on_profile(sp);
  const int m_before = truth.man(m).rank_unchecked(current.woman_of(m));

  ManipulationResult r;
  r.manipulator = m;
  for (auto& o : pushup_outcomes(sp, m, current)) {
    if (truth.man(m).rank_unchecked(o.matching.woman_of(m)) > m_before) continue;
    bool worse = false;
    AgentId strict = -1;
    int gain = 0;
    for (AgentId w : pw) {
      const auto& wl = truth.woman(w);
      const int before = wl.rank_unchecked(current.man_of(w));
      const int after = wl.rank_unchecked(o.matching.man_of(w));
      if (after > before) {
        worse = true;
        break;
      }
      if (after < before && strict < 0) {
        strict = w;
        gain = before - after;
      }
    }
    if (worse || strict < 0) continue;
    r.found = true;
    r.beneficiary = strict;
    r.beneficiary_gain = gain;
    r.moved = o.pushed;
    r.position = 0;
    r.new_list = std::move(o.list);
    r.resulting_matching = std::move(o.matching);
    return r;
  }
  return r;
}

}  // namespace matchgame

#endif  // MATCHGAME_MANIPULATION_HPP_
