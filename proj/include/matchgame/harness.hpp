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

#ifndef MATCHGAME_HARNESS_HPP_
#define MATCHGAME_HARNESS_HPP_

/// \file
/// Experiment driver: length of the dynamics and welfare at equilibrium,
/// swept over instance sizes or over a (phi_m, phi_w) Mallows grid.
///
/// Each cell draws `samples_per_cell` instances. Sample s of cell c uses the
/// stream derive_seed(derive_seed(master_seed, c), s) for generation and
/// derive_seed(that, 1) for a random selection policy, so the output depends
/// only on the config, never on thread count or scheduling.
///
/// CSV header (fixed):
///   game,n,phi_m,phi_w,samples,seed,avg_len,max_len,avg_women_gain,
///   avg_men_loss,best_woman_gain,worst_man_loss,net_welfare
/// phi columns are empty for non-Mallows cells. Welfare columns are in rank
/// units and averaged over samples.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "matchgame/core.hpp"
#include "matchgame/da.hpp"
#include "matchgame/dynamics.hpp"
#include "matchgame/gen.hpp"
#include "matchgame/io.hpp"

namespace matchgame {

enum class Game { kAccomplice, kWoman };

enum class StrategicRule { kAllPairs, kAllWomen, kExplicit };

struct ExperimentConfig {
  Game game = Game::kAccomplice;
  // Size sweep, used when `grid` is empty.
  std::vector<std::size_t> sizes;
  Model model = Model::impartial();
  // Mallows grid at fixed size: every (phi_m, phi_w) in grid x grid.
  std::vector<double> grid;
  std::size_t grid_n = 30;
  std::size_t samples_per_cell = 200;
  std::uint64_t master_seed = 0;
  StrategicRule rule = StrategicRule::kAllPairs;
  std::vector<Pair> explicit_pairs;  // kExplicit; the woman game uses their women
  SelectionPolicy::Kind policy = SelectionPolicy::Kind::kFixedOrder;
  unsigned threads = 1;
  std::string trace_dir;  // per-sample trace dumps when non-empty

  void validate() const {
    if (samples_per_cell < 1) {
      throw InputError(InputErrorKind::kInvalidArgument, "samples_per_cell must be >= 1");
    }
    if (grid.empty() && sizes.empty()) {
      throw InputError(InputErrorKind::kInvalidArgument, "config needs sizes or grid");
    }
    for (double phi : grid) detail::check_phi(phi);
    for (auto n : sizes) {
      if (n == 0) throw InputError(InputErrorKind::kInvalidArgument, "sizes must be >= 1");
    }
    if (!grid.empty() && grid_n == 0) {
      throw InputError(InputErrorKind::kInvalidArgument, "grid n must be >= 1");
    }
    if (game == Game::kAccomplice && rule == StrategicRule::kAllWomen) {
      throw InputError(InputErrorKind::kInvalidArgument,
                       "all_women is a woman-game rule; use all_pairs");
    }
  }
};

// Rank deltas between the truthful DA matching and an equilibrium matching,
// under true lists. Positive numbers are improvements for women and losses
// for men.
struct WelfareRecord {
  std::vector<int> women_gain;
  std::vector<int> men_loss;
  double women_avg_gain = 0;
  double men_avg_loss = 0;
  double best_off_woman_gain = 0;
  double worst_off_man_loss = 0;
  double net_welfare = 0;  // sum of gains minus sum of losses
};

inline WelfareRecord compute_welfare(const Instance& inst, const Matching& truthful,
                                     const Matching& equilibrium) {
  const auto n = inst.n();
  WelfareRecord r;
  r.women_gain.resize(n);
  r.men_loss.resize(n);
  long gains = 0, losses = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<AgentId>(i);
    const auto& wl = inst.woman(a);
    const auto& ml = inst.man(a);
    r.women_gain[i] = wl.rank_of(truthful.man_of(a)) - wl.rank_of(equilibrium.man_of(a));
    r.men_loss[i] = ml.rank_of(equilibrium.woman_of(a)) - ml.rank_of(truthful.woman_of(a));
    gains += r.women_gain[i];
    losses += r.men_loss[i];
  }
  r.women_avg_gain = static_cast<double>(gains) / static_cast<double>(n);
  r.men_avg_loss = static_cast<double>(losses) / static_cast<double>(n);
  r.best_off_woman_gain = *std::max_element(r.women_gain.begin(), r.women_gain.end());
  r.worst_off_man_loss = *std::max_element(r.men_loss.begin(), r.men_loss.end());
  r.net_welfare = static_cast<double>(gains - losses);
  return r;
}

struct CellResult {
  Game game;
  std::size_t n;
  Model model;
  std::size_t samples;
  std::uint64_t seed;
  double avg_len = 0;
  std::size_t max_len = 0;
  double avg_women_gain = 0;
  double avg_men_loss = 0;
  double best_woman_gain = 0;
  double worst_man_loss = 0;
  double net_welfare = 0;
};

// Raised when an equilibrium reached inside an experiment fails verification.
class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Cell {
  std::size_t n;
  Model model;
};

inline std::vector<Cell> experiment_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  if (!cfg.grid.empty()) {
    for (double pm : cfg.grid)
      for (double pw : cfg.grid) cells.push_back({cfg.grid_n, Model::mallows(pm, pw)});
  } else {
    for (auto n : cfg.sizes) cells.push_back({n, cfg.model});
  }
  return cells;
}

struct SampleResult {
  std::size_t length = 0;
  WelfareRecord welfare;
};

inline SampleResult run_sample(const ExperimentConfig& cfg, const Cell& cell,
                               std::size_t cell_index, std::size_t sample) {
  const std::uint64_t seed = derive_seed(derive_seed(cfg.master_seed, cell_index), sample);
  Rng rng(seed);
  CentralRankings centers;
  auto inst = std::make_shared<const Instance>(generate_instance(cell.n, cell.model, rng, &centers));
  SelectionPolicy policy{cfg.policy, derive_seed(seed, 1)};

  const auto context = [&] {
    return "cell " + std::to_string(cell_index) + " sample " + std::to_string(sample) +
           " (n=" + std::to_string(cell.n) + ")";
  };

  std::optional<DynamicsTrace> trace;
  if (cfg.game == Game::kAccomplice) {
    StrategicPairs p = cfg.rule == StrategicRule::kExplicit
                           ? StrategicPairs(cell.n, cfg.explicit_pairs)
                           : StrategicPairs::all_pairs(cell.n);
    trace = run_pushup_dynamics(inst, p, policy);
    if (!verify_ne_accomplice(trace->fixed_point, p)) {
      throw ExperimentError("push-up fixed point is not an NE at " + context());
    }
  } else {
    std::set<AgentId> pw;
    if (cfg.rule == StrategicRule::kExplicit) {
      for (AgentId w : StrategicPairs(cell.n, cfg.explicit_pairs).women()) pw.insert(w);
    } else {
      for (std::size_t w = 0; w < cell.n; ++w) pw.insert(static_cast<AgentId>(w));
    }
    trace = run_inconspicuous_dynamics(inst, pw, policy);
    if (!verify_ne_woman(trace->fixed_point, pw)) {
      throw ExperimentError("inconspicuous fixed point is not an NE at " + context());
    }
  }

  if (!cfg.trace_dir.empty()) {
    Json dump = trace_to_json(*trace);
    dump["instance"] = instance_to_json(*inst);
    dump["seed"] = seed;
    if (cell.model.kind == Model::Kind::kMallows) {
      dump["central_rankings"] = {
          {"men", std::vector<AgentId>(centers.men.begin(), centers.men.end())},
          {"women", std::vector<AgentId>(centers.women.begin(), centers.women.end())}};
    }
    write_file(cfg.trace_dir + "/trace_c" + std::to_string(cell_index) + "_s" +
                   std::to_string(sample) + ".json",
               dump.dump());
  }

  return {trace->converged_at(),
          compute_welfare(*inst, trace->truthful_matching, trace->fixed_point_matching)};
}

inline std::vector<CellResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto cells = experiment_cells(cfg);
  const std::size_t per = cfg.samples_per_cell;
  const std::size_t total = cells.size() * per;
  std::vector<SampleResult> results(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (failure) return;
      }
      try {
        results[job] = run_sample(cfg, cells[job / per], job / per, job % per);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const unsigned threads = std::max(1u, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Sums run in sample order so the output is independent of scheduling.
  std::vector<CellResult> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult row{cfg.game, cells[c].n, cells[c].model, per, cfg.master_seed};
    double len = 0;
    for (std::size_t s = 0; s < per; ++s) {
      const auto& r = results[c * per + s];
      len += static_cast<double>(r.length);
      row.max_len = std::max(row.max_len, r.length);
      row.avg_women_gain += r.welfare.women_avg_gain;
      row.avg_men_loss += r.welfare.men_avg_loss;
      row.best_woman_gain += r.welfare.best_off_woman_gain;
      row.worst_man_loss += r.welfare.worst_off_man_loss;
      row.net_welfare += r.welfare.net_welfare;
    }
    const auto k = static_cast<double>(per);
    row.avg_len = len / k;
    row.avg_women_gain /= k;
    row.avg_men_loss /= k;
    row.best_woman_gain /= k;
    row.worst_man_loss /= k;
    row.net_welfare /= k;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

// Both experiments emit the full CSV schema; they differ in intent only.
inline std::vector<CellResult> run_length_experiment(const ExperimentConfig& cfg) {
  return detail::run_experiment(cfg);
}

inline std::vector<CellResult> run_welfare_experiment(const ExperimentConfig& cfg) {
  return detail::run_experiment(cfg);
}

inline constexpr const char* kCsvHeader =
    "game,n,phi_m,phi_w,samples,seed,avg_len,max_len,avg_women_gain,"
    "avg_men_loss,best_woman_gain,worst_man_loss,net_welfare";

inline std::string to_csv(const std::vector<CellResult>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[512];
  for (const auto& r : rows) {
    std::string pm, pw;
    if (r.model.kind == Model::Kind::kMallows) {
      std::snprintf(buf, sizeof buf, "%.4g", r.model.phi_m);
      pm = buf;
      std::snprintf(buf, sizeof buf, "%.4g", r.model.phi_w);
      pw = buf;
    }
    std::snprintf(buf, sizeof buf, "%s,%zu,%s,%s,%zu,%llu,%.6f,%zu,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  r.game == Game::kAccomplice ? "accomplice" : "woman", r.n, pm.c_str(),
                  pw.c_str(), r.samples, static_cast<unsigned long long>(r.seed), r.avg_len,
                  r.max_len, r.avg_women_gain, r.avg_men_loss, r.best_woman_gain,
                  r.worst_man_loss, r.net_welfare);
    out += buf;
  }
  return out;
}

// Config JSON:
//   {"game": "accomplice" | "woman",
//    "sizes": [5, 10], "model": "impartial" | "mallows" | "identity_top",
//    "phi_m": 0.5, "phi_w": 0.5,           (model "mallows" only)
//    "grid": [0, 0.2, ...], "n": 30,       (instead of sizes/model)
//    "samples": 200, "seed": 1,
//    "strategic": "all_pairs" | "all_women" | "explicit", "pairs": [[m, w], ...],
//    "policy": "fixed" | "random", "threads": 1, "trace_dir": "dir"}
inline ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  auto str = [&](const char* key, const char* def) {
    return j.contains(key) ? j.at(key).get<std::string>() : std::string(def);
  };
  try {
    const auto game = str("game", "accomplice");
    if (game == "accomplice") {
      cfg.game = Game::kAccomplice;
    } else if (game == "woman") {
      cfg.game = Game::kWoman;
    } else {
      detail::malformed("config: unknown game \"" + game + "\"");
    }
    if (j.contains("grid")) {
      cfg.grid = j.at("grid").get<std::vector<double>>();
      cfg.grid_n = j.value("n", std::size_t{30});
    } else {
      cfg.sizes = detail::field(j, "sizes", "config").get<std::vector<std::size_t>>();
      const auto model = str("model", "impartial");
      if (model == "impartial") {
        cfg.model = Model::impartial();
      } else if (model == "mallows") {
        cfg.model = Model::mallows(j.value("phi_m", 1.0), j.value("phi_w", 1.0));
      } else if (model == "identity_top") {
        cfg.model = Model::identity_top();
      } else {
        detail::malformed("config: unknown model \"" + model + "\"");
      }
    }
    cfg.samples_per_cell = j.value("samples", std::size_t{200});
    cfg.master_seed = j.value("seed", std::uint64_t{0});
    const auto rule = str("strategic", cfg.game == Game::kWoman ? "all_women" : "all_pairs");
    if (rule == "all_pairs") {
      cfg.rule = StrategicRule::kAllPairs;
    } else if (rule == "all_women") {
      cfg.rule = StrategicRule::kAllWomen;
    } else if (rule == "explicit") {
      cfg.rule = StrategicRule::kExplicit;
      for (const auto& p : detail::field(j, "pairs", "config")) {
        auto ids = detail::id_array(p, "pair");
        if (ids.size() != 2) detail::malformed("config: each pair must be [man, woman]");
        cfg.explicit_pairs.emplace_back(ids[0], ids[1]);
      }
    } else {
      detail::malformed("config: unknown strategic rule \"" + rule + "\"");
    }
    const auto policy = str("policy", "fixed");
    if (policy == "fixed") {
      cfg.policy = SelectionPolicy::Kind::kFixedOrder;
    } else if (policy == "random") {
      cfg.policy = SelectionPolicy::Kind::kRandom;
    } else {
      detail::malformed("config: unknown policy \"" + policy + "\"");
    }
    cfg.threads = j.value("threads", 1u);
    cfg.trace_dir = str("trace_dir", "");
  } catch (const Json::exception& e) {
    detail::malformed(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(std::string_view text) {
  return config_from_json(detail::parse_json(text, "config"));
}

}  // namespace matchgame

#endif  // MATCHGAME_HARNESS_HPP_
