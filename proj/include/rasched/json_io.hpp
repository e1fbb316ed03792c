/*
Copyright 2026 The rasched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "rasched/config_lp.hpp"
#include "rasched/dual_witness.hpp"
#include "rasched/errors.hpp"
#include "rasched/estimate.hpp"
#include "rasched/instance.hpp"
#include "rasched/local_search.hpp"

// Wire formats. Machine indices are 0-based; every job index or job-aligned
// array in external output refers to original input positions. Rationals
// travel as reduced "a" / "a/b" strings.

namespace rasched {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Instance files: {"machines": M, "jobs": [{"p": "a/b", "allowed": [i,...]}]}

inline Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed instance JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("machines") || !doc.contains("jobs"))
    throw ParseError("instance must be an object with 'machines' and 'jobs'");
  if (!doc["machines"].is_number_integer())
    throw ParseError("'machines' must be an integer");
  const int machines = doc["machines"].get<int>();
  if (!doc["jobs"].is_array()) throw ParseError("'jobs' must be an array");

  std::vector<Job> jobs;
  int pos = 0;
  for (const json& item : doc["jobs"]) {
    const std::string where = "job " + std::to_string(pos);
    if (!item.is_object() || !item.contains("p") || !item.contains("allowed"))
      throw ParseError(where + ": expected an object with 'p' and 'allowed'");
    if (!item["p"].is_string())
      throw ParseError(where + ": 'p' must be a rational string");
    Job j;
    j.original_index = pos;
    try {
      j.p = parse_rational(item["p"].get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!item["allowed"].is_array())
      throw ParseError(where + ": 'allowed' must be an array");
    for (const json& v : item["allowed"]) {
      if (!v.is_number_integer()) throw ParseError(where + ": machine indices must be integers");
      j.allowed.push_back(v.get<int>());
    }
    jobs.push_back(std::move(j));
    ++pos;
  }
  return make_instance(machines, std::move(jobs));
}

// Emits jobs at their original positions, so parse -> serialize -> parse is
// the identity.
inline json instance_to_json(const Instance& inst) {
  std::vector<const Job*> by_input(inst.jobs.size(), nullptr);
  for (const Job& j : inst.jobs) by_input[static_cast<std::size_t>(j.original_index)] = &j;
  json jobs = json::array();
  for (const Job* j : by_input) {
    jobs.push_back(json{{"p", to_string(j->p)}, {"allowed", j->allowed}});
  }
  return json{{"machines", inst.machine_count}, {"jobs", std::move(jobs)}};
}

inline std::string serialize_instance(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

namespace detail {

inline std::vector<int> to_original(const Instance& inst, const std::vector<int>& canonical) {
  std::vector<int> orig;
  orig.reserve(canonical.size());
  for (int j : canonical)
    orig.push_back(inst.jobs[static_cast<std::size_t>(j)].original_index);
  std::sort(orig.begin(), orig.end());
  return orig;
}

template <typename T>
inline std::vector<T> original_order(const Instance& inst, const std::vector<T>& canonical) {
  std::vector<T> out(canonical.size());
  for (std::size_t j = 0; j < canonical.size(); ++j)
    out[static_cast<std::size_t>(inst.jobs[j].original_index)] = canonical[j];
  return out;
}

inline json rationals_to_json(const std::vector<Rational>& v) {
  json arr = json::array();
  for (const Rational& q : v) arr.push_back(to_string(q));
  return arr;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// LP results: {"T", "feasible", "primal": [{"machine", "config", "x"}]}

inline json lp_result_to_json(const Instance& inst, const LPResult& res) {
  json primal = json::array();
  if (res.primal) {
    for (const PrimalEntry& e : res.primal->entries) {
      primal.push_back(json{{"machine", e.machine},
                            {"config", detail::to_original(inst, e.jobs)},
                            {"x", to_string(e.weight)}});
    }
  }
  return json{{"T", to_string(res.T)}, {"feasible", res.feasible}, {"primal", std::move(primal)}};
}

inline json dual_to_json(const Instance& inst, const DualSolution& d) {
  return json{{"y", detail::rationals_to_json(d.y)},
              {"z", detail::rationals_to_json(detail::original_order(inst, d.z))}};
}

// ---------------------------------------------------------------------------
// Schedules: {"assignment", "makespan", "T", "ratio_bound"}

inline json schedule_to_json(const Instance& inst, const local_search::RunResult& run) {
  return json{
      {"assignment", detail::original_order(inst, run.schedule.assignment)},
      {"makespan", to_string(run.makespan)},
      {"T", to_string(run.T)},
      {"ratio_bound", "11/6"},
  };
}

struct ScheduleFile {
  std::vector<int> assignment;  // original input positions
  Rational makespan;
  Rational T;
};

inline ScheduleFile parse_schedule(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed schedule JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("assignment") || !doc.contains("makespan") ||
      !doc.contains("T"))
    throw ParseError("schedule must contain 'assignment', 'makespan' and 'T'");
  ScheduleFile out;
  for (const json& v : doc["assignment"]) {
    if (!v.is_number_integer()) throw ParseError("assignment entries must be integers");
    out.assignment.push_back(v.get<int>());
  }
  out.makespan = parse_rational(doc["makespan"].get<std::string>());
  out.T = parse_rational(doc["T"].get<std::string>());
  return out;
}

// ---------------------------------------------------------------------------
// Certificates: {"T", "z", "y", "objective", "claim1", "claim2"}
// z and y refer to the instance scaled by 1/T (target makespan 1).

inline json certificate_to_json(const Instance& inst, const dual_witness::Witness& w,
                                bool claim_negative, bool claim_feasible) {
  return json{{"T", to_string(w.scale_T)},
              {"z", detail::rationals_to_json(detail::original_order(inst, w.dual.z))},
              {"y", detail::rationals_to_json(w.dual.y)},
              {"objective", to_string(w.objective)},
              {"claim1", claim_negative},
              {"claim2", claim_feasible}};
}

inline json estimate_to_json(const Instance& inst, const EstimateResult& res) {
  json out{{"T_lo", res.T_lo ? json(to_string(*res.T_lo)) : json(nullptr)},
           {"T_hi", to_string(res.T_hi)},
           {"estimate", to_string(res.estimate)},
           {"schedule", schedule_to_json(inst, res.schedule_run)}};
  out["certificate"] = res.certificate
                           ? certificate_to_json(inst, *res.certificate, res.certificate_negative,
                                                 res.certificate_feasible)
                           : json(nullptr);
  return out;
}

// ---------------------------------------------------------------------------
// Trace events, one JSON object per line.

inline json trace_event_to_json(const Instance& inst, const local_search::TraceEvent& ev) {
  using Kind = local_search::TraceEvent::Kind;
  json out;
  switch (ev.kind) {
    case Kind::AddBlocker:
      out["event"] = "add_blocker";
      break;
    case Kind::PerformMove:
      out["event"] = "perform_move";
      break;
    case Kind::Stuck:
      out["event"] = "stuck";
      break;
  }
  out["iteration"] = ev.iteration;
  if (ev.kind != Kind::Stuck) {
    out["job"] = inst.jobs[static_cast<std::size_t>(ev.job)].original_index;
    out["machine"] = ev.machine;
  }
  if (ev.kind == Kind::AddBlocker) {
    out["type"] = local_search::to_string(ev.type);
    out["value"] = json::array({ev.value.rank, ev.value.tiebreak});
    out["activator"] = ev.activator < 0 ? json(nullptr) : json(ev.activator);
    out["position"] = ev.position;
  }
  if (ev.kind == Kind::PerformMove) {
    out["deleted_from"] = ev.deleted_from < 0 ? json(nullptr) : json(ev.deleted_from);
    out["done"] = ev.done;
  }
  out["tree_size"] = ev.tree_size;
  return out;
}

}  // namespace rasched
