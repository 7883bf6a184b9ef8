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

// Command-line front end. Every subcommand prints JSON on stdout.
// Exit codes: 0 ok, 1 "no" answer (verify-ne found a deviation), 2 bad input,
// 3 internal failure (including an experiment NE failing verification).

#include <cstdint>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "matchgame/matchgame.hpp"

namespace mg = matchgame;

namespace {

std::shared_ptr<const mg::Instance> load_instance_ptr(const std::string& path) {
  return std::make_shared<const mg::Instance>(mg::load_instance_file(path));
}

mg::StrategyProfile load_profile_or_truth(const std::shared_ptr<const mg::Instance>& inst,
                                          const std::string& path, mg::Side side) {
  if (path.empty()) return mg::StrategyProfile::truthful(inst, side);
  return mg::load_profile(mg::read_file(path), inst);
}

mg::Pair parse_pair(const std::string& text) {
  std::istringstream in(text);
  long m = -1, w = -1;
  char comma = 0;
  if (!(in >> m >> comma >> w) || comma != ',' || !in.eof()) {
    throw mg::InputError(mg::InputErrorKind::kMalformed, "--pair must look like m,w");
  }
  return {static_cast<mg::AgentId>(m), static_cast<mg::AgentId>(w)};
}

mg::SearchMode parse_mode(const std::string& mode) {
  return mode == "first" ? mg::SearchMode::kFirst : mg::SearchMode::kBest;
}

// Pairs file read as a one-for-many game: P_m = men, P_w^m = their women.
void split_one_for_many(const mg::StrategicPairs& p, std::set<mg::AgentId>& pm,
                        std::map<mg::AgentId, std::set<mg::AgentId>>& pw_by_m) {
  for (const auto& [m, w] : p) {
    pm.insert(m);
    pw_by_m[m].insert(w);
  }
}

std::set<mg::AgentId> women_of(const mg::StrategicPairs& p) {
  const auto w = p.women();
  return {w.begin(), w.end()};
}

void print(const mg::Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Manipulation games on stable matching markets"};
  app.require_subcommand(1);

  std::string instance_path, profile_path, pairs_path, matching_path, out_path, trace_path;
  std::string pair_text, mode = "best", game = "accomplice", policy = "fixed";
  std::uint64_t seed = 0;

  auto* da = app.add_subcommand("da", "Run man-proposing deferred acceptance");
  da->add_option("--instance", instance_path)->required();
  da->add_option("--profile", profile_path);

  auto* stab = app.add_subcommand("stability", "Blocking pairs of a matching under the true lists");
  stab->add_option("--instance", instance_path)->required();
  stab->add_option("--matching", matching_path)->required();
  stab->add_option("--pairs", pairs_path, "report X-stability for this pair set");

  auto* manip = app.add_subcommand("manipulate", "Search one manipulation");
  manip->add_option("--instance", instance_path)->required();
  manip->add_option("--profile", profile_path, "defaults to the truthful men-side profile");
  manip->add_option("--pair", pair_text, "m,w; a women-side profile uses w only")->required();
  manip->add_option("--mode", mode)->check(CLI::IsMember({"best", "first"}));

  auto* dyn = app.add_subcommand("dynamics", "Best-response dynamics from the truthful profile");
  dyn->add_option("--instance", instance_path)->required();
  dyn->add_option("--pairs", pairs_path)->required();
  dyn->add_option("--game", game)->check(CLI::IsMember({"accomplice", "one-for-many", "woman"}));
  dyn->add_option("--policy", policy)->check(CLI::IsMember({"fixed", "random"}));
  dyn->add_option("--seed", seed);
  dyn->add_option("--trace", trace_path, "write the full trace JSON here");

  auto* ver = app.add_subcommand("verify-ne", "Exit 0 iff the profile is a Nash equilibrium");
  ver->add_option("--instance", instance_path)->required();
  ver->add_option("--profile", profile_path)->required();
  ver->add_option("--pairs", pairs_path)->required();
  ver->add_option("--game", game)->check(CLI::IsMember({"accomplice", "one-for-many", "woman"}));

  std::size_t gen_n = 0;
  std::string model = "impartial";
  double phi_m = 1.0, phi_w = 1.0;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", gen_n)->required()->check(CLI::PositiveNumber);
  gen->add_option("--model", model)->check(CLI::IsMember({"impartial", "mallows"}));
  gen->add_option("--phi-m", phi_m)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--phi-w", phi_w)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path, "defaults to stdout");

  std::string kind, config_path;
  unsigned threads = 0;
  auto* exp = app.add_subcommand("experiment", "Run a length or welfare experiment");
  exp->add_option("kind", kind)->required()->check(CLI::IsMember({"length", "welfare"}));
  exp->add_option("--config", config_path)->required();
  exp->add_option("--out", out_path)->required();
  exp->add_option("--threads", threads, "overrides the config's thread count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*da) {
      auto inst = load_instance_ptr(instance_path);
      auto sp = load_profile_or_truth(inst, profile_path, mg::Side::kMenReport);
      print(mg::matching_to_json(mg::da_on_profile(sp)));
    } else if (*stab) {
      auto inst = load_instance_ptr(instance_path);
      auto mu = mg::load_matching(mg::read_file(matching_path), inst->n());
      auto j = mg::stability_to_json(mg::blocking_pairs(*inst, mu));
      if (!pairs_path.empty()) {
        j["x_stable"] = mg::is_x_stable(*inst, mu, mg::load_pairs(mg::read_file(pairs_path), inst->n()));
      }
      print(j);
    } else if (*manip) {
      auto inst = load_instance_ptr(instance_path);
      auto sp = load_profile_or_truth(inst, profile_path, mg::Side::kMenReport);
      const auto pair = parse_pair(pair_text);
      if (sp.side() == mg::Side::kMenReport) {
        print(mg::manipulation_to_json(mg::find_accomplice_manipulation(sp, pair, parse_mode(mode))));
      } else {
        print(mg::manipulation_to_json(mg::find_self_manipulation(sp, pair.second, parse_mode(mode))));
      }
    } else if (*dyn) {
      auto inst = load_instance_ptr(instance_path);
      auto p = mg::load_pairs(mg::read_file(pairs_path), inst->n());
      const auto pol = policy == "random" ? mg::SelectionPolicy::random(seed)
                                          : mg::SelectionPolicy::fixed_order();
      mg::DynamicsTrace trace = game == "woman"
                                    ? mg::run_inconspicuous_dynamics(inst, women_of(p), pol)
                                    : mg::run_pushup_dynamics(inst, p, pol);
      bool verified = false;
      if (game == "woman") {
        verified = mg::verify_ne_woman(trace.fixed_point, women_of(p));
      } else if (game == "one-for-many") {
        std::set<mg::AgentId> pm;
        std::map<mg::AgentId, std::set<mg::AgentId>> pw_by_m;
        split_one_for_many(p, pm, pw_by_m);
        verified = mg::verify_ne_one_for_many(trace.fixed_point, pm, pw_by_m);
      } else {
        verified = mg::verify_ne_accomplice(trace.fixed_point, p);
      }
      if (!trace_path.empty()) mg::write_file(trace_path, mg::trace_to_json(trace).dump(2));
      mg::Json j = {{"game", game},
                    {"steps", trace.converged_at()},
                    {"truthful_matching", mg::matching_to_json(trace.truthful_matching)["matching"]},
                    {"matching", mg::matching_to_json(trace.fixed_point_matching)["matching"]},
                    {"fixed_point", mg::profile_to_json(trace.fixed_point)},
                    {"verified_ne", verified},
                    {"stable", mg::is_stable(*inst, trace.fixed_point_matching)}};
      print(j);
      if (!verified) return 3;
    } else if (*ver) {
      auto inst = load_instance_ptr(instance_path);
      auto sp = mg::load_profile(mg::read_file(profile_path), inst);
      auto p = mg::load_pairs(mg::read_file(pairs_path), inst->n());
      std::optional<mg::ManipulationResult> witness;
      if (game == "woman") {
        if (sp.side() != mg::Side::kWomenReport) {
          throw mg::InputError(mg::InputErrorKind::kInvalidArgument, "woman game needs a women-side profile");
        }
        witness = mg::find_woman_deviation(sp, women_of(p));
      } else if (sp.side() != mg::Side::kMenReport) {
        throw mg::InputError(mg::InputErrorKind::kInvalidArgument, "this game needs a men-side profile");
      } else if (game == "one-for-many") {
        std::set<mg::AgentId> pm;
        std::map<mg::AgentId, std::set<mg::AgentId>> pw_by_m;
        split_one_for_many(p, pm, pw_by_m);
        witness = mg::find_one_for_many_deviation(sp, pm, pw_by_m);
      } else {
        witness = mg::find_accomplice_deviation(sp, p);
      }
      mg::Json j = {{"nash_equilibrium", !witness.has_value()}};
      if (witness) j["witness"] = mg::manipulation_to_json(*witness);
      print(j);
      return witness ? 1 : 0;
    } else if (*gen) {
      mg::Rng rng(seed);
      const auto m = model == "mallows" ? mg::Model::mallows(phi_m, phi_w) : mg::Model::impartial();
      const auto text = mg::instance_to_json(mg::generate_instance(gen_n, m, rng)).dump() + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        mg::write_file(out_path, text);
      }
    } else if (*exp) {
      auto cfg = mg::load_config(mg::read_file(config_path));
      if (threads > 0) cfg.threads = threads;
      const auto rows = kind == "length" ? mg::run_length_experiment(cfg)
                                         : mg::run_welfare_experiment(cfg);
      mg::write_file(out_path, mg::to_csv(rows));
      std::cout << mg::Json{{"rows", rows.size()}, {"out", out_path}}.dump() << "\n";
    }
  } catch (const mg::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const mg::OracleBoundError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
