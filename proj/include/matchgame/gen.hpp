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

#ifndef MATCHGAME_GEN_HPP_
#define MATCHGAME_GEN_HPP_

/// \file
/// Seeded preference generators.
///
/// Randomness comes from std::mt19937_64, whose output sequence is fixed by
/// the standard. The standard distributions are not, so bounded integers and
/// unit reals are drawn with the helpers below; output is identical on every
/// platform for a given seed.
///
/// Batch runs give sample k of a run with master seed s its own stream,
/// seeded with derive_seed(s, k). Samples can therefore be generated in any
/// order or in parallel without changing results.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "matchgame/core.hpp"

namespace matchgame {

/// SplitMix64 finaliser.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `k` under master seed `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(master ^ splitmix64(k));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Number of discordant pairs between two rankings of the same items, i.e.
/// the fewest adjacent swaps turning one into the other.
inline std::int64_t kendall_tau(const PreferenceList& u, const PreferenceList& v) {
  if (u.size() != v.size()) {
    throw InputError(InputErrorKind::kSizeMismatch,
                     "kendall_tau: rankings have different lengths");
  }
  const auto n = u.size();
  // Positions in v of u's items, read in u's order; count inversions.
  std::vector<int> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = v.rank_unchecked(u[i]);
  std::int64_t d = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pos[i] > pos[j]) ++d;
  return d;
}

inline PreferenceList uniform_ranking(std::size_t n, Rng& rng) {
  std::vector<AgentId> r(n);
  std::iota(r.begin(), r.end(), 0);
  rng.shuffle(r);
  return PreferenceList(std::move(r));
}

struct MallowsParams {
  PreferenceList center;
  double phi = 1.0;
};

namespace detail {

inline void check_phi(double phi) {
  if (!(phi >= 0.0 && phi <= 1.0)) {
    throw InputError(InputErrorKind::kInvalidArgument,
                     "Mallows dispersion must lie in [0, 1], got " +
                         std::to_string(phi));
  }
}

}  // namespace detail

/// One exact draw from the Mallows distribution P(v) ~ phi^dist(center, v).
///
/// Repeated insertion: the i-th item of the center (1-based) is inserted at
/// slot j in [1, i] of the partial ranking with probability
/// phi^(i-j) / (1 + phi + ... + phi^(i-1)). With 0^0 = 1, phi = 0 always
/// appends and reproduces the center.
inline PreferenceList mallows_sample(const MallowsParams& params, Rng& rng) {
  detail::check_phi(params.phi);
  const auto n = params.center.size();
  std::vector<AgentId> out;
  out.reserve(n);
  std::vector<double> weight;  // weight[k] = phi^k
  weight.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    weight.push_back(k == 0 ? 1.0 : weight.back() * params.phi);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < i; ++k) total += weight[k];
    // Walk from the last slot (k = i - j = 0) upwards.
    double u = rng.unit() * total;
    std::size_t slot = i - 1;  // 0-based insertion index
    for (std::size_t k = 0; k < i; ++k) {
      u -= weight[k];
      if (u < 0.0) {
        slot = i - 1 - k;
        break;
      }
    }
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(slot), params.center[i - 1]);
  }
  return PreferenceList(std::move(out));
}

struct Model {
  enum class Kind { kImpartial, kMallows, kIdentityTop };
  Kind kind = Kind::kImpartial;
  double phi_m = 1.0;
  double phi_w = 1.0;

  static Model impartial() { return {}; }
  static Model mallows(double phi_m, double phi_w) {
    detail::check_phi(phi_m);
    detail::check_phi(phi_w);
    return {Kind::kMallows, phi_m, phi_w};
  }
  /// Degenerate model returning identity_top_instance(n); for pipeline checks.
  static Model identity_top() { return {Kind::kIdentityTop, 0.0, 0.0}; }
};

struct CentralRankings {
  PreferenceList men;
  PreferenceList women;
};

/// Impartial culture: all 2n lists i.i.d. uniform, men first.
/// Mallows: one uniform central ranking per side (men's, then women's), then
/// n draws for the men and n for the women. The centers are written to
/// `centers` when given.
inline Instance generate_instance(std::size_t n, const Model& model, Rng& rng,
                                  CentralRankings* centers = nullptr) {
  if (n == 0) {
    throw InputError(InputErrorKind::kInvalidArgument, "generate_instance: n >= 1");
  }
  std::vector<PreferenceList> men, women;
  men.reserve(n);
  women.reserve(n);
  switch (model.kind) {
    case Model::Kind::kIdentityTop:
      return identity_top_instance(n);
    case Model::Kind::kImpartial:
      for (std::size_t i = 0; i < n; ++i) men.push_back(uniform_ranking(n, rng));
      for (std::size_t i = 0; i < n; ++i) women.push_back(uniform_ranking(n, rng));
      break;
    case Model::Kind::kMallows: {
      detail::check_phi(model.phi_m);
      detail::check_phi(model.phi_w);
      MallowsParams pm{uniform_ranking(n, rng), model.phi_m};
      MallowsParams pw{uniform_ranking(n, rng), model.phi_w};
      for (std::size_t i = 0; i < n; ++i) men.push_back(mallows_sample(pm, rng));
      for (std::size_t i = 0; i < n; ++i) women.push_back(mallows_sample(pw, rng));
      if (centers) *centers = {pm.center, pw.center};
      break;
    }
  }
  return Instance(std::move(men), std::move(women));
}

}  // namespace matchgame

#endif  // MATCHGAME_GEN_HPP_
