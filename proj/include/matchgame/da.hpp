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

#ifndef MATCHGAME_DA_HPP_
#define MATCHGAME_DA_HPP_

// Man-proposing deferred acceptance.

#include <deque>
#include <span>
#include <vector>

#include "matchgame/core.hpp"

namespace matchgame {

// Order in which free men are taken off the pending set. The outcome is the
// same for every order; kLifo exists so tests can check that.
enum class ProposalOrder { kFifo, kLifo };

namespace detail {

// `man_list(m)` and `woman_list(w)` return the PreferenceList used for that
// agent. Templated so manipulation search can override a single list without
// copying the whole profile.
template <class ManLists, class WomanLists>
Matching deferred_acceptance(std::size_t n, const ManLists& man_list,
                             const WomanLists& woman_list,
                             ProposalOrder order = ProposalOrder::kFifo) {
  std::vector<std::size_t> next(n, 0);  // next index each man proposes to
  std::vector<AgentId> fiance(n, -1);   // per woman
  std::deque<AgentId> free_men;
  for (std::size_t m = 0; m < n; ++m) free_men.push_back(static_cast<AgentId>(m));

  std::size_t proposals = 0;
  while (!free_men.empty()) {
    AgentId m;
    if (order == ProposalOrder::kFifo) {
      m = free_men.front();
      free_men.pop_front();
    } else {
      m = free_men.back();
      free_men.pop_back();
    }
    const PreferenceList& ml = man_list(m);
    if (next[m] >= n) {
      throw InvariantViolation("deferred acceptance: man exhausted his list");
    }
    const AgentId w = ml[next[m]++];
    ++proposals;
    const AgentId held = fiance[w];
    if (held < 0) {
      fiance[w] = m;
    } else if (woman_list(w).rank_unchecked(m) < woman_list(w).rank_unchecked(held)) {
      fiance[w] = m;
      free_men.push_back(held);
    } else {
      free_men.push_back(m);
    }
  }
  if (proposals > n * n) {
    throw InvariantViolation("deferred acceptance exceeded n^2 proposals");
  }
  std::vector<AgentId> man_to_woman(n);
  for (std::size_t w = 0; w < n; ++w) man_to_woman[fiance[w]] = static_cast<AgentId>(w);
  return Matching(std::move(man_to_woman));
}

inline void check_profile_sizes(std::span<const PreferenceList> men,
                                std::span<const PreferenceList> women) {
  const auto n = men.size();
  if (n == 0 || women.size() != n) {
    throw InputError(InputErrorKind::kSizeMismatch,
                     "DA needs n >= 1 lists on each side");
  }
  for (const auto side : {men, women}) {
    for (const auto& l : side) {
      if (l.size() != n) {
        throw InputError(InputErrorKind::kSizeMismatch,
                         "DA list length differs from n");
      }
    }
  }
}

}  // namespace detail

inline Matching run_da(std::span<const PreferenceList> men,
                       std::span<const PreferenceList> women,
                       ProposalOrder order = ProposalOrder::kFifo) {
  detail::check_profile_sizes(men, women);
  return detail::deferred_acceptance(
      men.size(), [&](AgentId m) -> const PreferenceList& { return men[m]; },
      [&](AgentId w) -> const PreferenceList& { return women[w]; }, order);
}

inline Matching run_da(const Instance& inst,
                       ProposalOrder order = ProposalOrder::kFifo) {
  return run_da(inst.men(), inst.women(), order);
}

inline Matching da_on_profile(const StrategyProfile& sp) {
  return run_da(sp.men_lists(), sp.women_lists());
}

// DA on `sp` with the reporting agent's list replaced by `list`.
inline Matching da_with_report(const StrategyProfile& sp, AgentId agent,
                               const PreferenceList& list) {
  const auto& men = sp.men_lists();
  const auto& women = sp.women_lists();
  if (sp.side() == Side::kMenReport) {
    return detail::deferred_acceptance(
        sp.n(),
        [&](AgentId m) -> const PreferenceList& {
          return m == agent ? list : men[m];
        },
        [&](AgentId w) -> const PreferenceList& { return women[w]; });
  }
  return detail::deferred_acceptance(
      sp.n(), [&](AgentId m) -> const PreferenceList& { return men[m]; },
      [&](AgentId w) -> const PreferenceList& {
        return w == agent ? list : women[w];
      });
}

}  // namespace matchgame

#endif  // MATCHGAME_DA_HPP_
