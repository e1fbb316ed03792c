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

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rasched/config_lp.hpp"
#include "rasched/dual_witness.hpp"
#include "rasched/errors.hpp"
#include "rasched/estimate.hpp"
#include "rasched/instance.hpp"
#include "rasched/json_io.hpp"
#include "rasched/local_search.hpp"
#include "rasched/oracle.hpp"

namespace rasched::cli {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<Rational> parse_size_grid(const std::string& text) {
  std::vector<Rational> grid;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) grid.push_back(parse_rational(item));
  return grid;
}

inline local_search::RunOptions parse_order(const std::string& text) {
  local_search::RunOptions opts;
  if (text == "desc") {
    opts.order = local_search::InsertionOrder::DescendingSize;
  } else if (text == "input") {
    opts.order = local_search::InsertionOrder::InputOrder;
  } else if (text.rfind("shuffle:", 0) == 0) {
    opts.order = local_search::InsertionOrder::Shuffle;
    opts.shuffle_seed = std::stoull(text.substr(8));
  } else {
    throw ParseError("unknown insertion order '" + text + "' (desc|input|shuffle:SEED)");
  }
  return opts;
}

struct BenchRow {
  std::string path;
  std::string csv;
  Rational ratio{0};
  bool has_ratio = false;
};

inline BenchRow bench_one(const std::string& path, int guard, std::ostream& err,
                          std::mutex& err_mutex) {
  BenchRow row;
  row.path = path;
  const Instance inst = parse_instance(read_file(path));
  std::string opt_star_s, opt_integral_s, makespan_s, ratio_s, iters_s, blockers_s;
  try {
    const Rational star = opt_star(inst, guard);
    opt_star_s = to_string(star);
    const local_search::RunResult run = local_search::run(inst, star);
    if (!run.completed)
      throw InvariantViolation("local search stuck at the LP optimum on " + path);
    makespan_s = to_string(run.makespan);
    row.ratio = run.makespan / star;
    if (row.ratio > Rational(11, 6))
      throw InvariantViolation("makespan ratio above 11/6 at the LP optimum on " + path);
    row.has_ratio = true;
    ratio_s = to_string(row.ratio);
    iters_s = std::to_string(run.stats.iterations);
    blockers_s = std::to_string(run.stats.blockers_added);
  } catch (const GuardExceeded& e) {
    std::lock_guard<std::mutex> lock(err_mutex);
    err << "note: " << path << ": " << e.what() << "\n";
  }
  try {
    opt_integral_s = to_string(oracle::brute_force_opt(inst).opt);
  } catch (const GuardExceeded&) {
    // blank column for oversized instances
  }
  std::ostringstream line;
  line << path << "," << inst.machine_count << "," << inst.job_count() << "," << opt_star_s
       << "," << opt_integral_s << "," << makespan_s << "," << ratio_s << "," << iters_s << ","
       << blockers_s;
  row.csv = line.str();
  return row;
}

}  // namespace detail

// Runs one subcommand; returns the process exit code. All primary output
// goes to `out`, diagnostics to `err`.
inline int command_dispatch(const std::vector<std::string>& args, std::ostream& out,
                            std::ostream& err) {
  CLI::App app{"restricted-assignment scheduling via the configuration mixture LP"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  int gen_machines = 0, gen_jobs = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_density = "1/2";
  std::string gen_sizes = "1/6,1/3,1/2,2/3,5/6,1";
  gen->add_option("--machines", gen_machines)->required();
  gen->add_option("--jobs", gen_jobs)->required();
  gen->add_option("--seed", gen_seed)->required();
  gen->add_option("--density", gen_density, "inclusion probability a/b for non-anchor machines");
  gen->add_option("--sizes", gen_sizes, "comma-separated rational size grid");

  // lp
  auto* lp = app.add_subcommand("lp", "configuration-LP feasibility / optimum");
  std::string lp_input;
  std::string lp_T;
  int lp_guard = kDefaultEnumerationGuard;
  lp->add_option("--input", lp_input)->required();
  lp->add_option("--T", lp_T, "target makespan; omit to compute the LP optimum");
  lp->add_option("--guard", lp_guard, "per-machine enumeration guard");

  // schedule
  auto* sched = app.add_subcommand("schedule", "run the local search at a target makespan");
  std::string sched_input, sched_T, sched_order = "desc", sched_trace;
  bool sched_debug = false;
  std::int64_t sched_cap = 1'000'000;
  sched->add_option("--input", sched_input)->required();
  sched->add_option("--T", sched_T)->required();
  sched->add_option("--order", sched_order, "desc|input|shuffle:SEED");
  sched->add_flag("--debug-invariants", sched_debug, "check loop invariants every iteration");
  sched->add_option("--trace", sched_trace, "write one JSON event per loop iteration");
  sched->add_option("--max-iterations", sched_cap, "per-extension iteration cap");

  // estimate
  auto* est = app.add_subcommand("estimate", "bracket the optimum makespan with certificates");
  std::string est_input;
  int est_guard = kDefaultEnumerationGuard;
  est->add_option("--input", est_input)->required();
  est->add_option("--guard", est_guard, "per-machine enumeration guard");

  // verify
  auto* ver = app.add_subcommand("verify", "check a schedule file against its instance");
  std::string ver_input, ver_schedule;
  bool ver_exact = false;
  ver->add_option("--input", ver_input)->required();
  ver->add_option("--schedule", ver_schedule)->required();
  ver->add_flag("--exact", ver_exact, "also compare against the brute-force optimum");

  // bench
  auto* bench = app.add_subcommand("bench", "CSV summary over a directory of instances");
  std::string bench_corpus;
  int bench_parallel = 1;
  int bench_guard = kDefaultEnumerationGuard;
  bench->add_option("--corpus", bench_corpus)->required();
  bench->add_option("--parallel", bench_parallel, "worker threads");
  bench->add_option("--guard", bench_guard, "per-machine enumeration guard");

  std::vector<const char*> argv;
  argv.push_back("rasched");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_code::success;
    }
    err << "error: " << e.what() << "\n";
    return exit_code::validation;
  }

  try {
    if (gen->parsed()) {
      const Instance inst =
          generate_random(gen_machines, gen_jobs, detail::parse_size_grid(gen_sizes),
                          parse_rational(gen_density), gen_seed);
      out << serialize_instance(inst);
      return exit_code::success;
    }

    if (lp->parsed()) {
      const Instance inst = parse_instance(detail::read_file(lp_input));
      const Rational T = lp_T.empty() ? opt_star(inst, lp_guard) : parse_rational(lp_T);
      const LPResult res = lp_feasible(inst, T, lp_guard);
      out << lp_result_to_json(inst, res).dump(2) << "\n";
      return exit_code::success;
    }

    if (sched->parsed()) {
      const Instance inst = parse_instance(detail::read_file(sched_input));
      local_search::RunOptions opts = detail::parse_order(sched_order);
      opts.debug_invariants = sched_debug;
      opts.iteration_cap = sched_cap;
      std::ofstream trace_file;
      if (!sched_trace.empty()) {
        trace_file.open(sched_trace);
        if (!trace_file) throw ParseError("cannot write trace file: " + sched_trace);
        opts.trace = [&](const local_search::TraceEvent& ev) {
          trace_file << trace_event_to_json(inst, ev).dump() << "\n";
        };
      }
      const local_search::RunResult res = local_search::run(inst, parse_rational(sched_T), opts);
      if (res.completed) {
        out << schedule_to_json(inst, res).dump(2) << "\n";
        return exit_code::success;
      }
      const dual_witness::Witness w = dual_witness::build_witness(*res.stuck);
      const dual_witness::CertifyResult claims = dual_witness::certify(*res.stuck);
      if (!claims.claim_negative_objective || !claims.claim_dual_feasible)
        throw InvariantViolation("stuck-state certificate failed verification");
      out << certificate_to_json(inst, w, claims.claim_negative_objective,
                                 claims.claim_dual_feasible)
                 .dump(2)
          << "\n";
      return exit_code::infeasible;
    }

    if (est->parsed()) {
      const Instance inst = parse_instance(detail::read_file(est_input));
      const EstimateResult res = estimate(inst, est_guard);
      out << estimate_to_json(inst, res).dump(2) << "\n";
      return exit_code::success;
    }

    if (ver->parsed()) {
      const Instance inst = parse_instance(detail::read_file(ver_input));
      const ScheduleFile file = parse_schedule(detail::read_file(ver_schedule));
      std::vector<std::string> problems;
      if (static_cast<int>(file.assignment.size()) != inst.job_count()) {
        problems.push_back("assignment length " + std::to_string(file.assignment.size()) +
                           " does not match job count " + std::to_string(inst.job_count()));
      } else {
        std::vector<Rational> loads(static_cast<std::size_t>(inst.machine_count), Rational(0));
        for (const Job& j : inst.jobs) {
          const int a = file.assignment[static_cast<std::size_t>(j.original_index)];
          if (a < 0 || a >= inst.machine_count) {
            problems.push_back("job " + std::to_string(j.original_index) +
                               ": machine index out of range");
          } else if (!job_allowed_on(j, a)) {
            problems.push_back("job " + std::to_string(j.original_index) +
                               ": assigned outside its allowed set");
          } else {
            loads[static_cast<std::size_t>(a)] += j.p;
          }
        }
        if (problems.empty()) {
          Rational makespan(0);
          for (const Rational& l : loads)
            if (l > makespan) makespan = l;
          if (makespan != file.makespan)
            problems.push_back("makespan field is " + to_string(file.makespan) +
                               " but the loads give " + to_string(makespan));
        }
      }
      if (!problems.empty()) {
        for (const std::string& p : problems) err << "invalid: " << p << "\n";
        return exit_code::validation;
      }
      json report{{"valid", true}, {"makespan", to_string(file.makespan)}};
      if (ver_exact) {
        const oracle::OracleResult o = oracle::brute_force_opt(inst);
        if (file.makespan < o.opt)
          throw InvariantViolation("schedule beats the exhaustive optimum");
        report["opt"] = to_string(o.opt);
        report["ratio"] = to_string(file.makespan / o.opt);
      }
      out << report.dump(2) << "\n";
      return exit_code::success;
    }

    if (bench->parsed()) {
      std::vector<std::string> paths;
      for (const auto& entry : std::filesystem::directory_iterator(bench_corpus))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
          paths.push_back(entry.path().string());
      std::sort(paths.begin(), paths.end());

      std::vector<detail::BenchRow> rows(paths.size());
      std::mutex err_mutex;
      std::atomic<std::size_t> next{0};
      std::exception_ptr failure;
      std::mutex failure_mutex;
      auto worker = [&]() {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= paths.size()) return;
          try {
            rows[k] = detail::bench_one(paths[k], bench_guard, err, err_mutex);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      };
      const int threads = std::max(1, bench_parallel);
      std::vector<std::thread> pool;
      for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
      worker();
      for (std::thread& t : pool) t.join();
      if (failure) std::rethrow_exception(failure);

      std::sort(rows.begin(), rows.end(),
                [](const detail::BenchRow& a, const detail::BenchRow& b) { return a.path < b.path; });
      out << "instance_path,machines,jobs,opt_star,opt_integral,ls_makespan,ratio,iterations,"
             "blockers_added\n";
      Rational max_ratio(0);
      bool any_ratio = false;
      for (const detail::BenchRow& r : rows) {
        out << r.csv << "\n";
        if (r.has_ratio && (!any_ratio || r.ratio > max_ratio)) {
          max_ratio = r.ratio;
          any_ratio = true;
        }
      }
      if (any_ratio) err << "max ratio makespan/opt_star: " << to_string(max_ratio) << "\n";
      return exit_code::success;
    }
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::size_guard;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::validation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::validation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::validation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::internal_error;
  }
  return exit_code::validation;
}

}  // namespace rasched::cli
