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

#ifndef MATCHGAME_IO_HPP_
#define MATCHGAME_IO_HPP_

// JSON formats. All ids are 0-based; lists are most-preferred-first.
//
//   instance:  {"n": 3, "men": [[...], ...], "women": [[...], ...]}
//   pairs:     {"pairs": [[m, w], ...]}
//   profile:   {"side": "men" | "women", "reports": [[...], ...]}
//   matching:  {"matching": [woman of man 0, woman of man 1, ...]}

#include <fstream>
#include <istream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "matchgame/core.hpp"
#include "matchgame/dynamics.hpp"
#include "matchgame/manipulation.hpp"
#include "matchgame/stability.hpp"

namespace matchgame {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) {
  throw InputError(InputErrorKind::kMalformed, what);
}

inline Json parse_json(std::string_view text, const char* what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    malformed(std::string(what) + ": malformed JSON: " + e.what());
  }
}

inline const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    malformed(std::string(what) + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

inline std::vector<AgentId> id_array(const Json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + ": expected an array of ids");
  std::vector<AgentId> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer()) malformed(std::string(what) + ": ids must be integers");
    out.push_back(v.get<AgentId>());
  }
  return out;
}

inline std::vector<std::vector<AgentId>> id_matrix(const Json& j, std::size_t n,
                                                   const char* what) {
  if (!j.is_array()) malformed(std::string(what) + ": expected an array of lists");
  if (j.size() != n) {
    throw InputError(InputErrorKind::kSizeMismatch,
                     std::string(what) + ": expected " + std::to_string(n) +
                         " lists, got " + std::to_string(j.size()));
  }
  std::vector<std::vector<AgentId>> out;
  for (const auto& row : j) {
    auto ids = id_array(row, what);
    if (ids.size() != n) {
      throw InputError(InputErrorKind::kSizeMismatch,
                       std::string(what) + ": list of length " +
                           std::to_string(ids.size()) + ", expected " + std::to_string(n));
    }
    out.push_back(std::move(ids));
  }
  return out;
}

inline Json lists_to_json(const std::vector<PreferenceList>& lists) {
  Json out = Json::array();
  for (const auto& l : lists) out.push_back(std::vector<AgentId>(l.begin(), l.end()));
  return out;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

// ---- instance ----

inline Instance instance_from_json(const Json& j) {
  const Json& jn = detail::field(j, "n", "instance");
  if (!jn.is_number_integer()) detail::malformed("instance: \"n\" must be an integer");
  const auto n = jn.get<std::int64_t>();
  if (n <= 0) {
    throw InputError(InputErrorKind::kSizeMismatch, "instance: n must be >= 1");
  }
  const auto un = static_cast<std::size_t>(n);
  return Instance::from_rankings(detail::id_matrix(detail::field(j, "men", "instance"), un, "men"),
                                 detail::id_matrix(detail::field(j, "women", "instance"), un, "women"));
}

inline Instance load_instance(std::string_view text) {
  return instance_from_json(detail::parse_json(text, "instance"));
}

inline Instance load_instance(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  return load_instance(ss.str());
}

inline Instance load_instance_file(const std::string& path) {
  return load_instance(read_file(path));
}

inline Json instance_to_json(const Instance& inst) {
  return {{"n", inst.n()},
          {"men", detail::lists_to_json(inst.men())},
          {"women", detail::lists_to_json(inst.women())}};
}

inline std::string serialize_instance(const Instance& inst) {
  return instance_to_json(inst).dump();
}

// ---- strategic pairs ----

inline StrategicPairs pairs_from_json(const Json& j, std::size_t n) {
  const Json& arr = detail::field(j, "pairs", "pairs");
  if (!arr.is_array()) detail::malformed("pairs: expected an array");
  std::vector<Pair> pairs;
  for (const auto& p : arr) {
    auto ids = detail::id_array(p, "pair");
    if (ids.size() != 2) detail::malformed("pairs: each pair must be [man, woman]");
    pairs.emplace_back(ids[0], ids[1]);
  }
  return StrategicPairs(n, std::move(pairs));
}

inline StrategicPairs load_pairs(std::string_view text, std::size_t n) {
  return pairs_from_json(detail::parse_json(text, "pairs"), n);
}

inline Json pairs_to_json(const StrategicPairs& p) {
  Json arr = Json::array();
  for (const auto& [m, w] : p) arr.push_back({m, w});
  return {{"pairs", arr}};
}

// ---- strategy profile ----

inline StrategyProfile profile_from_json(const Json& j,
                                         std::shared_ptr<const Instance> inst) {
  const Json& side = detail::field(j, "side", "profile");
  Side s;
  if (side == "men") {
    s = Side::kMenReport;
  } else if (side == "women") {
    s = Side::kWomenReport;
  } else {
    detail::malformed("profile: side must be \"men\" or \"women\"");
  }
  const auto rows = detail::id_matrix(detail::field(j, "reports", "profile"), inst->n(), "reports");
  std::vector<PreferenceList> reports;
  for (const auto& r : rows) reports.emplace_back(r);
  return StrategyProfile(std::move(inst), s, std::move(reports));
}

inline StrategyProfile load_profile(std::string_view text,
                                    std::shared_ptr<const Instance> inst) {
  return profile_from_json(detail::parse_json(text, "profile"), std::move(inst));
}

inline Json profile_to_json(const StrategyProfile& sp) {
  return {{"side", sp.side() == Side::kMenReport ? "men" : "women"},
          {"reports", detail::lists_to_json(sp.reports())}};
}

// ---- matching ----

inline Json matching_to_json(const Matching& mu) {
  return {{"matching", std::vector<AgentId>(mu.man_to_woman().begin(), mu.man_to_woman().end())}};
}

inline Matching matching_from_json(const Json& j, std::size_t n) {
  auto ids = detail::id_array(detail::field(j, "matching", "matching"), "matching");
  if (ids.size() != n) {
    throw InputError(InputErrorKind::kSizeMismatch,
                     "matching: expected " + std::to_string(n) + " entries");
  }
  return Matching(std::move(ids));
}

inline Matching load_matching(std::string_view text, std::size_t n) {
  return matching_from_json(detail::parse_json(text, "matching"), n);
}

// ---- reports ----

inline Json stability_to_json(const StabilityReport& r) {
  Json bp = Json::array();
  for (const auto& [m, w] : r.blocking_pairs) bp.push_back({m, w});
  return {{"blocking_pairs", bp}, {"nsp", r.nsp}, {"stable", r.stable()}};
}

inline Json manipulation_to_json(const ManipulationResult& r) {
  Json j = {{"found", r.found}, {"manipulator", r.manipulator}};
  if (r.beneficiary >= 0) j["beneficiary"] = r.beneficiary;
  if (r.found) {
    j["moved"] = r.moved;
    j["position"] = r.position;
    j["new_list"] = std::vector<AgentId>(r.new_list.begin(), r.new_list.end());
    j["beneficiary_gain"] = r.beneficiary_gain;
    j["resulting_matching"] = matching_to_json(r.resulting_matching)["matching"];
  }
  return j;
}

inline Json trace_to_json(const DynamicsTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"step", s.step_index},
                     {"actor", s.actor},
                     {"beneficiary", s.beneficiary},
                     {"moved", s.moved},
                     {"position", s.position},
                     {"profile_after", profile_to_json(s.profile_after)},
                     {"matching_after", matching_to_json(s.matching_after)["matching"]}});
  }
  Json j = {{"game", t.side == Side::kMenReport ? "accomplice" : "woman"},
            {"n", t.instance->n()},
            {"truthful_matching", matching_to_json(t.truthful_matching)["matching"]},
            {"steps", steps},
            {"converged_at", t.converged_at()},
            {"fixed_point", profile_to_json(t.fixed_point)},
            {"fixed_point_matching", matching_to_json(t.fixed_point_matching)["matching"]}};
  if (t.side == Side::kMenReport) {
    j["pairs"] = pairs_to_json(t.pairs)["pairs"];
  } else {
    j["women"] = t.women;
  }
  return j;
}

}  // namespace matchgame

#endif  // MATCHGAME_IO_HPP_
