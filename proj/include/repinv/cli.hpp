#pragma once

#include <CLI11.hpp>
#include <iostream>

#include "repinv/bench.hpp"
#include "repinv/cegis.hpp"
#include "repinv/predicate_io.hpp"

namespace repinv::cli {

struct CommonFlags {
  std::string mode = "hanoi";
  double timeout = 1800;
  bool no_synth_cache = false;
  bool no_cexlist_cache = false;
  bool higher_order = false;
  bool debug_rank = false;
  long fuel = 100000;
  int synth_size_cap = 40;
  // section 4.3 verifier constants
  int budget_nodes_single = 30;
  long budget_count_single = 3000;
  long budget_total_single = 3000;
  int budget_nodes_multi = 15;
  long budget_count_multi = 3000;
  long budget_total_multi = 30000;
};

inline void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--mode", f.mode, "inference mode")
      ->check(CLI::IsMember({"hanoi", "conjstr", "la", "oneshot"}));
  cmd->add_option("--timeout", f.timeout, "per-run timeout in seconds");
  cmd->add_flag("--no-synth-cache", f.no_synth_cache,
                "disable synthesis result caching");
  cmd->add_flag("--no-cexlist-cache", f.no_cexlist_cache,
                "disable counterexample list caching");
  cmd->add_flag("--ho", f.higher_order,
                "accept higher-order interfaces (contract mode)");
  cmd->add_flag("--debug-rank", f.debug_rank,
                "assert the rank function decreases on every recursion");
  cmd->add_option("--fuel", f.fuel, "evaluation step budget per call");
  cmd->add_option("--synth-size-cap", f.synth_size_cap,
                  "synthesizer term-size budget");
  cmd->add_option("--budget-nodes-single", f.budget_nodes_single,
                  "node cap, single-quantifier queries");
  cmd->add_option("--budget-count-single", f.budget_count_single,
                  "structure cap, single-quantifier queries");
  cmd->add_option("--budget-total-single", f.budget_total_single,
                  "tuple cap, single-quantifier queries");
  cmd->add_option("--budget-nodes-multi", f.budget_nodes_multi,
                  "node cap, multi-quantifier queries");
  cmd->add_option("--budget-count-multi", f.budget_count_multi,
                  "structure cap per quantifier, multi-quantifier queries");
  cmd->add_option("--budget-total-multi", f.budget_total_multi,
                  "tuple cap, multi-quantifier queries");
}

inline EngineOptions to_options(const CommonFlags& f) {
  EngineOptions o;
  o.mode = *mode_from_string(f.mode);
  o.timeout_s = f.timeout;
  o.synth_cache = !f.no_synth_cache;
  o.cexlist_cache = !f.no_cexlist_cache;
  o.debug_rank = f.debug_rank;
  o.fuel = f.fuel;
  o.synth.size_cap = f.synth_size_cap;
  o.budget_single =
      VerifBudget{f.budget_nodes_single, f.budget_count_single,
                  f.budget_total_single};
  o.budget_multi = VerifBudget{f.budget_nodes_multi, f.budget_count_multi,
                               f.budget_total_multi};
  o.induct.alpha_nodes = f.budget_nodes_single;
  o.induct.alpha_count = f.budget_count_single;
  o.induct.base_nodes = f.budget_nodes_single;
  o.induct.base_count = f.budget_count_single;
  o.induct.multi_slot_total = f.budget_total_multi;
  return o;
}

inline int exit_code(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::Invariant: return 0;
    case Outcome::Kind::SpecViolation: return 2;
    case Outcome::Kind::SynthFailure: return 3;
    case Outcome::Kind::Timeout: return 4;
    case Outcome::Kind::Unsupported: return 1;
  }
  return 1;
}

inline void print_outcome(std::ostream& out, const Outcome& o,
                          const RunStats& stats) {
  switch (o.kind) {
    case Outcome::Kind::Invariant:
      out << "invariant (size " << o.invariant->ast_size
          << ", bounded-validity):\n";
      out << "  " << predicate_to_def_string(*o.invariant) << "\n";
      break;
    case Outcome::Kind::SpecViolation: {
      out << "Counterexample: the module violates its specification.\n";
      if (!o.violation_tuple.empty()) {
        out << "  spec instantiation:";
        for (const Value& v : o.violation_tuple)
          out << " " << value_to_string(v);
        out << "\n";
      }
      out << "  constructible witnesses:";
      for (const Value& v : o.violation) out << " " << value_to_string(v);
      out << "\n";
      if (!o.replay.empty()) {
        out << "  replay:\n";
        for (const std::string& line : o.replay)
          out << "    " << line << "\n";
      }
      break;
    }
    case Outcome::Kind::SynthFailure:
      out << "synthesis failure: " << o.message << "\n";
      break;
    case Outcome::Kind::Timeout:
      out << "timeout: " << o.message << "\n";
      break;
    case Outcome::Kind::Unsupported:
      out << "unsupported: " << o.message << "\n";
      break;
  }
  std::cerr << "stats: TVC=" << stats.tvc << " TSC=" << stats.tsc
            << " TVT=" << stats.tvt_s << "s TST=" << stats.tst_s
            << "s time=" << stats.time_s << "s\n";
}

inline int cmd_infer(const std::string& file, const CommonFlags& flags,
                     std::ostream& out) {
  BenchFile bf = load_bench_file(file);
  bf.higher_order = bf.higher_order || flags.higher_order;
  BenchRun run = run_bench_file(bf, to_options(flags));
  print_outcome(out, run.outcome, run.stats);
  return exit_code(run.outcome.kind);
}

inline int cmd_bench(const std::vector<std::string>& paths,
                     const CommonFlags& flags, int repeat,
                     const std::string& csv_path, std::ostream& out) {
  std::vector<BenchFile> files;
  for (const std::string& p : paths) {
    if (std::filesystem::is_directory(p)) {
      for (auto& bf : load_corpus(p)) files.push_back(std::move(bf));
    } else {
      files.push_back(load_bench_file(p));
    }
  }
  std::ostringstream csv;
  csv << csv_header() << "\n";
  for (const BenchFile& bf : files) {
    BenchFile with_flags = bf;
    with_flags.higher_order = bf.higher_order || flags.higher_order;
    BenchRow row = bench_row(with_flags, to_options(flags), repeat);
    csv << csv_row(row) << "\n";
    std::cerr << "bench: " << row.name << " -> " << row.outcome << "\n";
  }
  if (csv_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(csv_path);
    f << csv.str();
  }
  return 0;
}

inline int cmd_check(const std::string& file, const std::string& inv_path,
                     const CommonFlags& flags, std::ostream& out) {
  BenchFile bf = load_bench_file(file);
  bf.higher_order = bf.higher_order || flags.higher_order;
  auto prog = parse_program({bf.text, bf.path});
  ElaboratedProgram elab = elaborate(prog, bf.higher_order);

  std::ifstream in(inv_path);
  if (!in.good()) throw std::runtime_error("cannot open " + inv_path);
  std::ostringstream ss;
  ss << in.rdbuf();

  EngineOptions opts = to_options(flags);
  InferenceEngine engine(elab, opts);
  Predicate inv = parse_predicate(elab, engine.ctx(), ss.str(), inv_path);

  bool ok = true;
  if (auto pos = engine.closed_positives(ValueSet{}, inv)) {
    out << "closed-positives check failed: constructible value";
    for (const Value& v : pos->values) out << " " << value_to_string(v);
    out << " falls outside the invariant\n";
    ok = false;
  }
  if (ok) {
    if (auto neg = engine.no_negatives(inv)) {
      if (neg->from_sufficiency) {
        out << "sufficiency check failed on:";
      } else {
        out << "inductiveness check failed on:";
      }
      for (const Value& v : neg->values) out << " " << value_to_string(v);
      out << "\n";
      ok = false;
    }
  }
  if (ok) out << "invariant passes both checks (bounded)\n";
  return ok ? 0 : 2;
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{
      "repinv: representation invariant inference for small functional "
      "modules"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string infer_file;
  CLI::App* infer = app.add_subcommand(
      "infer", "infer a representation invariant for one benchmark");
  infer->add_option("file", infer_file, "benchmark file")->required();
  add_common_flags(infer, flags);

  CommonFlags bench_flags;
  std::vector<std::string> bench_paths;
  int repeat = 10;
  std::string csv_path;
  CLI::App* bench = app.add_subcommand(
      "bench", "run a corpus and emit measurement rows as CSV");
  bench->add_option("paths", bench_paths, "benchmark files or directories")
      ->required();
  bench->add_option("--repeat", repeat, "repetitions per benchmark");
  bench->add_option("--csv", csv_path, "write CSV here instead of stdout");
  add_common_flags(bench, bench_flags);

  CommonFlags check_flags;
  std::string check_file, check_inv;
  CLI::App* check = app.add_subcommand(
      "check", "re-check a user-supplied invariant against a benchmark");
  check->add_option("file", check_file, "benchmark file")->required();
  check->add_option("--invariant", check_inv, "invariant definition file")
      ->required();
  add_common_flags(check, check_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (infer->parsed()) return cmd_infer(infer_file, flags, std::cout);
    if (bench->parsed())
      return cmd_bench(bench_paths, bench_flags, repeat, csv_path, std::cout);
    if (check->parsed())
      return cmd_check(check_file, check_inv, check_flags, std::cout);
  } catch (const LangError& e) {
    std::cerr << "error";
    if (e.span.line > 0) std::cerr << " at " << e.span.to_string();
    std::cerr << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace repinv::cli
