#include "divstab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "divstab/io.hpp"
#include "divstab/solver_bipartite.hpp"
#include "divstab/solver_general.hpp"
#include "divstab/solver_hypergraph.hpp"
#include "divstab/stability.hpp"
#include "divstab/tooling.hpp"
#include "json.hpp"

namespace divstab {
namespace {

using nlohmann::ordered_json;

/// Carries an exit code up to run_cli together with its diagnostic.
struct CliFailure {
  int code;
  std::string message;
  std::vector<std::string> violations;
};

void diagnose(std::ostream& err, const CliFailure& f) {
  ordered_json line;
  line["level"] = "error";
  line["exit"] = f.code;
  line["message"] = f.message;
  if (!f.violations.empty()) line["violations"] = f.violations;
  err << line.dump() << "\n";
}

Instance load_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const ParseError& ex) {
    throw CliFailure{kExitUsage, path + ": " + ex.what(), {}};
  } catch (const ValidationError& ex) {
    throw CliFailure{kExitInvalidInstance, path + ": invalid instance", ex.violations()};
  }
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

Rational parse_flag_rational(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& ex) {
    throw CliFailure{kExitUsage, flag + ": " + ex.what(), {}};
  }
}

ordered_json trace_json(const SolverTrace& trace) {
  ordered_json doc;
  doc["iterations"] = trace.total_iterations;
  doc["plain_iterations"] = trace.plain_iterations;
  doc["big_iterations"] = trace.big_iterations;
  doc["positive_iterations"] = trace.positive_iterations;
  doc["skipped_aggregations"] = trace.skipped_aggregations;
  std::map<std::string, std::size_t> histogram;
  ordered_json xi = ordered_json::array();
  ordered_json records = ordered_json::array();
  for (const auto& rec : trace.iterations) {
    ++histogram[std::string(to_string(rec.cls))];
    ordered_json r;
    r["index"] = rec.index;
    r["class"] = std::string(to_string(rec.cls));
    if (rec.big) {
      r["xi"] = to_string(*rec.xi);
      r["binding"] = rec.binding;
      xi.push_back(to_string(*rec.xi));
    } else {
      r["phase2_decrement"] = to_string(rec.decrement);
    }
    r["locked"] = rec.locked_total;
    r["filled_workers"] = rec.filled_workers;
    r["saturated_tail_edges"] = rec.bound_tail_edges;
    records.push_back(std::move(r));
  }
  ordered_json hist = ordered_json::object();
  for (const auto& [k, v] : histogram) hist[k] = v;
  doc["class_histogram"] = std::move(hist);
  doc["xi"] = std::move(xi);
  doc["records"] = std::move(records);
  return doc;
}

ordered_json report_json(const StabilityReport& report) {
  ordered_json doc;
  doc["rational"] = report.rational;
  doc["stable"] = report.stable;
  doc["irrational_vertices"] = report.irrational_vertices;
  ordered_json blocking = ordered_json::array();
  for (const auto& b : report.blocking) {
    ordered_json edge;
    edge["edge"] = b.id;
    ordered_json ends = ordered_json::array();
    for (const auto& ev : b.ends) {
      ordered_json end;
      end["vertex"] = ev.vertex;
      end["fully_filling"] = ev.fully_filling;
      end["in_tail"] = ev.in_tail;
      end["below_capacity"] = ev.below_capacity;
      ends.push_back(std::move(end));
    }
    edge["ends"] = std::move(ends);
    blocking.push_back(std::move(edge));
  }
  doc["blocking_edges"] = std::move(blocking);
  return doc;
}

ordered_json values_json(const Instance& inst, const SolverOutcome& o) {
  ordered_json values = ordered_json::object();
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    if (o.exact) values[inst.edge(e).id] = to_string((*o.exact)[e]);
    if (o.approx) values[inst.edge(e).id] = format_double((*o.approx)[e]);
  }
  return values;
}

ordered_json compare_json(const std::string& path, const Instance& inst, const CompareReport& report) {
  ordered_json doc;
  doc["instance"] = path;
  doc["verdict"] = report.agree ? "AGREE" : "DISAGREE";
  ordered_json solvers = ordered_json::array();
  for (const auto& o : report.outcomes) {
    ordered_json s;
    s["solver"] = o.solver;
    s["stable"] = o.stable;
    s["iterations"] = o.iterations;
    if (o.approx) s["converged"] = o.converged;
    if (!o.error.empty()) s["error"] = o.error;
    if (!report.agree) s["values"] = values_json(inst, o);
    solvers.push_back(std::move(s));
  }
  doc["solvers"] = std::move(solvers);
  if (report.max_float_deviation) doc["max_float_deviation"] = *report.max_float_deviation;
  if (!report.agree) {
    doc["problems"] = report.problems;
    doc["dump"] = ordered_json::parse(serialize_instance(inst));
  }
  return doc;
}

struct SolveArgs {
  std::string instance;
  std::string output;
  std::string mode = "exact";
  double tol = 1e-13;
  std::size_t max_iter = 1000000;
  std::string trace;
  std::optional<std::uint64_t> pivot_seed;
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  if (args.mode == "float") {
    if (!(args.tol > 0)) throw CliFailure{kExitUsage, "float mode needs --tol > 0", {}};
    if (inst.kind() != Kind::bipartite) {
      throw CliFailure{kExitUsage, "float mode is only available for bipartite instances", {}};
    }
    const FloatSolveResult r = reference_solve_float(inst, args.tol, args.max_iter);
    if (!r.converged) {
      throw CliFailure{kExitDisagreement,
                       "float reference did not converge within " + std::to_string(args.max_iter) + " iterations",
                       {}};
    }
    emit(out, args.output, serialize_float_assignment(inst, r.x));
    return kExitOk;
  }

  Assignment x;
  std::optional<SolverTrace> trace;
  SolverOptions options;
  options.record_trace = !args.trace.empty();
  switch (inst.kind()) {
    case Kind::bipartite: {
      auto r = solve_bipartite(inst, options);
      x = std::move(r.x);
      trace = std::move(r.trace);
      break;
    }
    case Kind::graph: {
      auto r = solve_general(inst, options);
      x = std::move(r.x);
      trace = std::move(r.trace);
      break;
    }
    case Kind::hypergraph: {
      PivotOptions pivot_options;
      pivot_options.seed = args.pivot_seed;
      x = solve_hypergraph(inst, pivot_options).x;
      break;
    }
  }
  emit(out, args.output, serialize_assignment(inst, x));
  if (!args.trace.empty()) {
    ordered_json doc = trace ? trace_json(*trace) : ordered_json::object();
    if (!trace) doc["iterations"] = inst.num_edges();
    write_file(args.trace, doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_check(const std::string& instance_path, const std::string& assignment_path, double tol, std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  AssignmentDocument doc;
  try {
    doc = parse_assignment(read_file(assignment_path));
  } catch (const ParseError& ex) {
    throw CliFailure{kExitUsage, assignment_path + ": " + ex.what(), {}};
  } catch (const ValidationError& ex) {
    throw CliFailure{kExitInvalidInstance, assignment_path + ": invalid assignment", ex.violations()};
  }
  if (doc.instance_sha256 && *doc.instance_sha256 != instance_sha256(inst)) {
    throw CliFailure{kExitUsage, assignment_path + ": instance_sha256 does not match " + instance_path, {}};
  }
  Assignment x;
  try {
    x = Assignment::from_map(inst, doc.values);
  } catch (const ValidationError& ex) {
    throw CliFailure{kExitInvalidInstance, assignment_path + ": inadmissible assignment", ex.violations()};
  }
  StabilityReport report;
  if (doc.mode == NumericMode::exact) {
    report = check_stability(inst, x);
  } else {
    std::vector<double> approx;
    for (const auto& v : x.values()) approx.push_back(to_double(v));
    report = check_stability_float(inst, approx, tol);
  }
  ordered_json json = report_json(report);
  json["mode"] = std::string(to_string(doc.mode));
  out << json.dump() << "\n";
  return report.stable ? kExitOk : kExitUnstable;
}

int cmd_compare(const std::vector<std::string>& paths, std::size_t jobs, const CompareOptions& options,
                std::ostream& out) {
  std::vector<Instance> instances;
  for (const auto& p : paths) instances.push_back(load_instance(p));
  std::vector<CompareReport> reports(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < instances.size(); k = next++) reports[k] = compare(instances[k], options);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::max<std::size_t>(jobs, 1); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool all_agree = true;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    out << compare_json(paths[k], instances[k], reports[k]).dump() << "\n";
    all_agree = all_agree && reports[k].agree;
  }
  return all_agree ? kExitOk : kExitDisagreement;
}

int cmd_enumerate(const std::string& path, const std::string& step_text, std::ostream& out) {
  const Instance inst = load_instance(path);
  const Rational step = parse_flag_rational(step_text, "--step");
  std::vector<Assignment> found;
  try {
    found = enumerate_stable_grid(inst, step);
  } catch (const std::invalid_argument& ex) {
    throw CliFailure{kExitUsage, ex.what(), {}};
  }
  ordered_json doc;
  doc["step"] = to_string(step);
  doc["count"] = found.size();
  ordered_json list = ordered_json::array();
  for (const auto& x : found) {
    ordered_json values = ordered_json::object();
    for (std::size_t e = 0; e < inst.num_edges(); ++e) values[inst.edge(e).id] = to_string(x[e]);
    list.push_back(std::move(values));
  }
  doc["stable"] = std::move(list);
  out << doc.dump() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact solvers and checks for diversifying stable assignments", "divstab"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute the stable assignment of an instance");
  solve_cmd->add_option("instance", solve.instance, "Instance JSON file")->required();
  solve_cmd->add_option("-o,--output", solve.output, "Assignment output file (default: stdout)");
  solve_cmd->add_option("--mode", solve.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  solve_cmd->add_option("--tol", solve.tol, "Float-mode convergence tolerance");
  solve_cmd->add_option("--max-iter", solve.max_iter, "Float-mode iteration cap");
  solve_cmd->add_option("--trace", solve.trace, "Write the solver trace JSON to this file");
  solve_cmd->add_option("--pivot-seed", solve.pivot_seed, "Random pivot tie-breaking for hypergraphs");

  std::string check_instance;
  std::string check_assignment;
  double check_tol = 1e-9;
  auto* check_cmd = app.add_subcommand("check", "Check stability of an assignment");
  check_cmd->add_option("instance", check_instance, "Instance JSON file")->required();
  check_cmd->add_option("assignment", check_assignment, "Assignment JSON file")->required();
  check_cmd->add_option("--tol", check_tol, "Tolerance for float-mode assignments");

  GenSpec gen;
  std::string gen_kind = "bipartite";
  std::string gen_output;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--kind", gen_kind, "bipartite, graph or hypergraph")
      ->check(CLI::IsMember({"bipartite", "graph", "hypergraph"}));
  gen_cmd->add_option("--firms", gen.firms);
  gen_cmd->add_option("--workers", gen.workers);
  gen_cmd->add_option("--vertices", gen.vertices);
  gen_cmd->add_option("--density", gen.density);
  gen_cmd->add_option("--hyperedges", gen.hyperedges);
  gen_cmd->add_option("--max-arity", gen.max_arity);
  gen_cmd->add_option("--parallel", gen.parallel, "Probability of a parallel copy per edge");
  gen_cmd->add_option("--denominator", gen.denominator);
  gen_cmd->add_option("--cap-min", gen.cap_min);
  gen_cmd->add_option("--cap-max", gen.cap_max);
  gen_cmd->add_option("--quota-min", gen.quota_min);
  gen_cmd->add_option("--quota-max", gen.quota_max);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("-o,--output", gen_output, "Output file (default: stdout)");

  std::vector<std::string> compare_paths;
  std::size_t jobs = 1;
  CompareOptions compare_options;
  auto* compare_cmd = app.add_subcommand("compare", "Cross-check all applicable solvers");
  compare_cmd->add_option("instances", compare_paths, "Instance JSON files")->required();
  compare_cmd->add_option("--jobs", jobs, "Instances compared in parallel");
  compare_cmd->add_option("--tol", compare_options.float_tol, "Float reference convergence tolerance");
  compare_cmd->add_option("--max-iter", compare_options.max_iter, "Float reference iteration cap");

  std::string enum_instance;
  std::string enum_step = "1";
  auto* enum_cmd = app.add_subcommand("enumerate", "List all stable assignments on a grid (|E| <= 4)");
  enum_cmd->add_option("instance", enum_instance, "Instance JSON file")->required();
  enum_cmd->add_option("--step", enum_step, "Grid step, e.g. 1/4");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    diagnose(err, CliFailure{kExitUsage, ex.what(), {}});
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*check_cmd) return cmd_check(check_instance, check_assignment, check_tol, out);
    if (*gen_cmd) {
      gen.kind = *parse_kind(gen_kind);
      Instance inst = [&] {
        try {
          return generate(gen);
        } catch (const std::invalid_argument& ex) {
          throw CliFailure{kExitUsage, ex.what(), {}};
        }
      }();
      emit(out, gen_output, serialize_instance(inst) + "\n");
      return kExitOk;
    }
    if (*compare_cmd) return cmd_compare(compare_paths, jobs, compare_options, out);
    if (*enum_cmd) return cmd_enumerate(enum_instance, enum_step, out);
  } catch (const CliFailure& f) {
    diagnose(err, f);
    return f.code;
  } catch (const InvariantViolation& ex) {
    diagnose(err, CliFailure{kExitDisagreement, std::string("internal invariant violation: ") + ex.what(), {}});
    return kExitDisagreement;
  } catch (const std::exception& ex) {
    diagnose(err, CliFailure{kExitUsage, ex.what(), {}});
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace divstab
