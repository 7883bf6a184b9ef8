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

#ifndef MATCHGAME_CORE_HPP_
#define MATCHGAME_CORE_HPP_

// Domain types for one-to-one two-sided markets with complete strict lists.
// Men and women are indexed separately from 0; which side an id refers to is
// always clear from context.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchgame {

using AgentId = std::int32_t;

enum class InputErrorKind {
  kMalformed,       // unparsable or wrongly shaped input
  kNotPermutation,  // a preference list is not a permutation of 0..n-1
  kSizeMismatch,    // sizes of lists / matchings / profiles disagree
  kOutOfRange,      // an agent id outside [0, n)
  kInvalidArgument, // anything else the caller got wrong
};

class InputError : public std::invalid_argument {
 public:
  InputError(InputErrorKind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  InputErrorKind kind() const { return kind_; }

 private:
  InputErrorKind kind_;
};

// An exhaustive oracle was asked to run above its size bound.
class OracleBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a proven property of the algorithms does not hold at runtime.
// Always an implementation bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void check_id(AgentId id, std::size_t n, const char* what) {
  if (id < 0 || static_cast<std::size_t>(id) >= n) {
    throw InputError(InputErrorKind::kOutOfRange,
                     std::string(what) + " id " + std::to_string(id) +
                         " out of range [0, " + std::to_string(n) + ")");
  }
}

}  // namespace detail

// A strict complete ranking, most preferred first. Keeps the inverse
// permutation so rank lookups are O(1).
class PreferenceList {
 public:
  PreferenceList() = default;

  explicit PreferenceList(std::vector<AgentId> ranking)
      : ranking_(std::move(ranking)), rank_(ranking_.size(), -1) {
    const auto n = ranking_.size();
    for (std::size_t pos = 0; pos < n; ++pos) {
      const AgentId id = ranking_[pos];
      if (id < 0 || static_cast<std::size_t>(id) >= n || rank_[id] != -1) {
        throw InputError(InputErrorKind::kNotPermutation,
                         "preference list is not a permutation of 0.." +
                             std::to_string(n == 0 ? 0 : n - 1));
      }
      rank_[id] = static_cast<int>(pos);
    }
  }

  static PreferenceList identity(std::size_t n) {
    std::vector<AgentId> r(n);
    std::iota(r.begin(), r.end(), 0);
    return PreferenceList(std::move(r));
  }

  std::size_t size() const { return ranking_.size(); }
  AgentId operator[](std::size_t pos) const { return ranking_[pos]; }
  std::span<const AgentId> ranking() const { return ranking_; }
  auto begin() const { return ranking_.begin(); }
  auto end() const { return ranking_.end(); }

  int rank_of(AgentId target) const {
    detail::check_id(target, size(), "ranked");
    return rank_[target];
  }

  // Unchecked; for hot loops whose ids are already validated.
  int rank_unchecked(AgentId target) const { return rank_[target]; }

  bool prefers(AgentId a, AgentId b) const { return rank_of(a) < rank_of(b); }

  friend bool operator==(const PreferenceList& a, const PreferenceList& b) {
    return a.ranking_ == b.ranking_;
  }
  friend auto operator<=>(const PreferenceList& a, const PreferenceList& b) {
    return a.ranking_ <=> b.ranking_;
  }

 private:
  std::vector<AgentId> ranking_;
  std::vector<int> rank_;
};

inline int rank_of(const PreferenceList& list, AgentId target) {
  return list.rank_of(target);
}

inline bool prefers(const PreferenceList& list, AgentId a, AgentId b) {
  return list.prefers(a, b);
}

// True preference profile <M, W, >>, |M| = |W| = n.
class Instance {
 public:
  Instance(std::vector<PreferenceList> men, std::vector<PreferenceList> women)
      : men_(std::move(men)), women_(std::move(women)) {
    if (men_.empty()) {
      throw InputError(InputErrorKind::kSizeMismatch, "instance needs n >= 1");
    }
    const auto n = men_.size();
    if (women_.size() != n) {
      throw InputError(InputErrorKind::kSizeMismatch,
                       "men and women counts differ");
    }
    for (const auto* side : {&men_, &women_}) {
      for (const auto& l : *side) {
        if (l.size() != n) {
          throw InputError(InputErrorKind::kSizeMismatch,
                           "preference list length differs from n=" +
                               std::to_string(n));
        }
      }
    }
  }

  static Instance from_rankings(const std::vector<std::vector<AgentId>>& men,
                                const std::vector<std::vector<AgentId>>& women) {
    std::vector<PreferenceList> m, w;
    m.reserve(men.size());
    w.reserve(women.size());
    for (const auto& r : men) m.emplace_back(r);
    for (const auto& r : women) w.emplace_back(r);
    return Instance(std::move(m), std::move(w));
  }

  std::size_t n() const { return men_.size(); }
  const std::vector<PreferenceList>& men() const { return men_; }
  const std::vector<PreferenceList>& women() const { return women_; }
  const PreferenceList& man(AgentId m) const { return men_[m]; }
  const PreferenceList& woman(AgentId w) const { return women_[w]; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<PreferenceList> men_;
  std::vector<PreferenceList> women_;
};

// Every agent ranks the same-index agent first, then the rest ascending.
// DA and every stable matching give the identity.
inline Instance identity_top_instance(std::size_t n) {
  std::vector<std::vector<AgentId>> lists(n);
  for (std::size_t i = 0; i < n; ++i) {
    lists[i].push_back(static_cast<AgentId>(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) lists[i].push_back(static_cast<AgentId>(j));
    }
  }
  return Instance::from_rankings(lists, lists);
}

class Matching {
 public:
  Matching() = default;

  explicit Matching(std::vector<AgentId> man_to_woman)
      : man_to_woman_(std::move(man_to_woman)),
        woman_to_man_(man_to_woman_.size(), -1) {
    const auto n = man_to_woman_.size();
    for (std::size_t m = 0; m < n; ++m) {
      const AgentId w = man_to_woman_[m];
      if (w < 0 || static_cast<std::size_t>(w) >= n || woman_to_man_[w] != -1) {
        throw InputError(InputErrorKind::kNotPermutation,
                         "matching is not a bijection");
      }
      woman_to_man_[w] = static_cast<AgentId>(m);
    }
  }

  static Matching identity(std::size_t n) {
    std::vector<AgentId> r(n);
    std::iota(r.begin(), r.end(), 0);
    return Matching(std::move(r));
  }

  std::size_t size() const { return man_to_woman_.size(); }
  AgentId woman_of(AgentId m) const { return man_to_woman_[m]; }
  AgentId man_of(AgentId w) const { return woman_to_man_[w]; }
  std::span<const AgentId> man_to_woman() const { return man_to_woman_; }
  std::span<const AgentId> woman_to_man() const { return woman_to_man_; }

  friend bool operator==(const Matching& a, const Matching& b) {
    return a.man_to_woman_ == b.man_to_woman_;
  }
  friend auto operator<=>(const Matching& a, const Matching& b) {
    return a.man_to_woman_ <=> b.man_to_woman_;
  }

 private:
  std::vector<AgentId> man_to_woman_;
  std::vector<AgentId> woman_to_man_;
};

enum class Side { kMenReport, kWomenReport };

// Reported lists of one side laid over a true instance. The other side is
// always read from the instance.
class StrategyProfile {
 public:
  static StrategyProfile truthful(std::shared_ptr<const Instance> base,
                                  Side side) {
    auto reports = side == Side::kMenReport ? base->men() : base->women();
    return StrategyProfile(std::move(base), side, std::move(reports));
  }

  StrategyProfile(std::shared_ptr<const Instance> base, Side side,
                  std::vector<PreferenceList> reports)
      : base_(std::move(base)), side_(side), reports_(std::move(reports)) {
    if (!base_) {
      throw InputError(InputErrorKind::kInvalidArgument, "null instance");
    }
    if (reports_.size() != base_->n()) {
      throw InputError(InputErrorKind::kSizeMismatch,
                       "profile must carry one report per agent");
    }
    for (const auto& l : reports_) {
      if (l.size() != base_->n()) {
        throw InputError(InputErrorKind::kSizeMismatch,
                         "reported list length differs from n");
      }
    }
  }

  const Instance& base() const { return *base_; }
  const std::shared_ptr<const Instance>& base_ptr() const { return base_; }
  std::size_t n() const { return base_->n(); }
  Side side() const { return side_; }
  const std::vector<PreferenceList>& reports() const { return reports_; }
  const PreferenceList& report(AgentId a) const { return reports_[a]; }

  // Lists actually fed to DA.
  const std::vector<PreferenceList>& men_lists() const {
    return side_ == Side::kMenReport ? reports_ : base_->men();
  }
  const std::vector<PreferenceList>& women_lists() const {
    return side_ == Side::kWomenReport ? reports_ : base_->women();
  }

  StrategyProfile with_report(AgentId agent, PreferenceList list) const {
    detail::check_id(agent, n(), "reporting agent");
    if (list.size() != n()) {
      throw InputError(InputErrorKind::kSizeMismatch,
                       "reported list length differs from n");
    }
    StrategyProfile copy = *this;
    copy.reports_[agent] = std::move(list);
    return copy;
  }

  bool is_truthful() const {
    return reports_ == (side_ == Side::kMenReport ? base_->men() : base_->women());
  }

  // Same base contents, side and reports.
  friend bool operator==(const StrategyProfile& a, const StrategyProfile& b) {
    return a.side_ == b.side_ && a.reports_ == b.reports_ &&
           (a.base_ == b.base_ || *a.base_ == *b.base_);
  }

 private:
  std::shared_ptr<const Instance> base_;
  Side side_;
  std::vector<PreferenceList> reports_;
};

// Full 2n-list profile with the reported side substituted in.
inline Instance effective_profile(const StrategyProfile& sp) {
  return Instance(sp.men_lists(), sp.women_lists());
}

using Pair = std::pair<AgentId, AgentId>;  // (man, woman)

// The game's player set P; kept sorted lexicographically, duplicates merged.
class StrategicPairs {
 public:
  StrategicPairs() = default;

  StrategicPairs(std::size_t n, std::vector<Pair> pairs) {
    for (const auto& [m, w] : pairs) {
      detail::check_id(m, n, "strategic man");
      detail::check_id(w, n, "strategic woman");
      pairs_.insert({m, w});
    }
  }

  static StrategicPairs all_pairs(std::size_t n) {
    std::vector<Pair> v;
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t w = 0; w < n; ++w)
        v.emplace_back(static_cast<AgentId>(m), static_cast<AgentId>(w));
    return StrategicPairs(n, std::move(v));
  }

  const std::set<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(AgentId m, AgentId w) const { return pairs_.count({m, w}) > 0; }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  std::vector<AgentId> men() const {
    std::set<AgentId> s;
    for (const auto& p : pairs_) s.insert(p.first);
    return {s.begin(), s.end()};
  }
  std::vector<AgentId> women() const {
    std::set<AgentId> s;
    for (const auto& p : pairs_) s.insert(p.second);
    return {s.begin(), s.end()};
  }

  friend bool operator==(const StrategicPairs&, const StrategicPairs&) = default;

 private:
  std::set<Pair> pairs_;
};

}  // namespace matchgame

#endif  // MATCHGAME_CORE_HPP_
