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

#ifndef MATCHGAME_STABILITY_HPP_
#define MATCHGAME_STABILITY_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "matchgame/core.hpp"

namespace matchgame {

struct StabilityReport {
  std::vector<Pair> blocking_pairs;  // lexicographic
  std::size_t nsp = 0;               // n^2 - |blocking_pairs|

  bool stable() const { return blocking_pairs.empty(); }
};

namespace detail {

inline void check_matching(const Instance& inst, const Matching& mu) {
  if (mu.size() != inst.n()) {
    throw InputError(InputErrorKind::kSizeMismatch,
                     "matching size " + std::to_string(mu.size()) +
                         " differs from n=" + std::to_string(inst.n()));
  }
}

inline bool has_blocking_pair(const Instance& inst, const Matching& mu) {
  const auto n = static_cast<AgentId>(inst.n());
  for (AgentId m = 0; m < n; ++m) {
    const auto& ml = inst.man(m);
    const int cur = ml.rank_unchecked(mu.woman_of(m));
    for (int pos = 0; pos < cur; ++pos) {
      const AgentId w = ml[pos];
      const auto& wl = inst.woman(w);
      if (wl.rank_unchecked(m) < wl.rank_unchecked(mu.man_of(w))) return true;
    }
  }
  return false;
}

}  // namespace detail

// Pairs blocking `mu` under the lists of `inst`. Pass effective_profile(sp)
// to measure against a reported profile instead of the truth.
inline StabilityReport blocking_pairs(const Instance& inst, const Matching& mu) {
  detail::check_matching(inst, mu);
  StabilityReport report;
  const auto n = static_cast<AgentId>(inst.n());
  for (AgentId m = 0; m < n; ++m) {
    const auto& ml = inst.man(m);
    for (AgentId w = 0; w < n; ++w) {
      if (!ml.prefers(w, mu.woman_of(m))) continue;
      if (inst.woman(w).prefers(m, mu.man_of(w))) report.blocking_pairs.emplace_back(m, w);
    }
  }
  report.nsp = inst.n() * inst.n() - report.blocking_pairs.size();
  return report;
}

inline bool is_stable(const Instance& inst, const Matching& mu) {
  detail::check_matching(inst, mu);
  return !detail::has_blocking_pair(inst, mu);
}

// Every blocking pair of `mu` lies in `x`.
inline bool is_x_stable(const Instance& inst, const Matching& mu,
                        const StrategicPairs& x) {
  for (const auto& [m, w] : blocking_pairs(inst, mu).blocking_pairs) {
    if (!x.contains(m, w)) return false;
  }
  return true;
}

inline constexpr std::size_t kDefaultStableOracleBound = 8;

// All stable matchings by exhaustive search over the n! perfect matchings.
// Result is sorted lexicographically by man_to_woman.
inline std::vector<Matching> enumerate_stable(
    const Instance& inst, std::size_t bound = kDefaultStableOracleBound) {
  const auto n = inst.n();
  if (n > bound) {
    throw OracleBoundError("enumerate_stable: n=" + std::to_string(n) +
                           " exceeds oracle bound " + std::to_string(bound));
  }
  std::vector<AgentId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matching> out;
  do {
    Matching mu(perm);
    if (!detail::has_blocking_pair(inst, mu)) out.push_back(std::move(mu));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Exact non-negative fraction in lowest terms.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) {
      throw InputError(InputErrorKind::kInvalidArgument, "zero denominator");
    }
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const auto g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

struct PriceOfAnarchy {
  Rational poa;
  Rational pos;
  std::size_t min_nsp = 0;
  std::size_t max_nsp = 0;
  // False when the NE set was a sample; poa is then a lower bound and pos an
  // upper bound on the true values.
  bool exhaustive = false;
};

// PoA = n^2 / min NSP and PoS = n^2 / max NSP over the supplied NE matchings.
// Every supplied matching must have no blocking pair inside `p`, which every
// NE matching of the accomplice game satisfies.
inline PriceOfAnarchy poa_pos(const Instance& inst,
                              const std::vector<Matching>& ne_matchings,
                              const StrategicPairs& p, bool exhaustive = false) {
  if (ne_matchings.empty()) {
    throw InputError(InputErrorKind::kInvalidArgument,
                     "poa_pos needs at least one NE matching");
  }
  PriceOfAnarchy out;
  out.exhaustive = exhaustive;
  out.min_nsp = inst.n() * inst.n();
  out.max_nsp = 0;
  for (const auto& mu : ne_matchings) {
    const auto report = blocking_pairs(inst, mu);
    for (const auto& [m, w] : report.blocking_pairs) {
      if (p.contains(m, w)) {
        throw InputError(InputErrorKind::kInvalidArgument,
                         "matching is blocked by strategic pair (" +
                             std::to_string(m) + "," + std::to_string(w) +
                             "); it cannot come from an NE profile");
      }
    }
    out.min_nsp = std::min(out.min_nsp, report.nsp);
    out.max_nsp = std::max(out.max_nsp, report.nsp);
  }
  if (out.min_nsp == 0) {
    throw InputError(InputErrorKind::kInvalidArgument,
                     "matching with zero non-blocking pairs");
  }
  const auto n2 = static_cast<std::int64_t>(inst.n() * inst.n());
  out.poa = Rational(n2, static_cast<std::int64_t>(out.min_nsp));
  out.pos = Rational(n2, static_cast<std::int64_t>(out.max_nsp));
  return out;
}

}  // namespace matchgame

#endif  // MATCHGAME_STABILITY_HPP_
