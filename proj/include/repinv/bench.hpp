#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "repinv/cegis.hpp"

namespace repinv {

struct BenchFile {
  std::string path;
  std::string name;     // stem of the file name
  std::string expect;   // expected outcome annotation, may be empty
  bool higher_order = false;
  std::string text;
};

// Reads `(* expect: ... *)` and `(* flags: ... *)` annotations from the
// leading comments of a benchmark file.
inline BenchFile load_bench_file(const std::string& path) {
  BenchFile bf;
  bf.path = path;
  bf.name = std::filesystem::path(path).stem().string();
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  bf.text = ss.str();
  auto find_annotation = [&](const std::string& key) -> std::string {
    std::string marker = "(* " + key + ":";
    std::size_t at = bf.text.find(marker);
    if (at == std::string::npos) return "";
    std::size_t end = bf.text.find("*)", at);
    if (end == std::string::npos) return "";
    std::string body = bf.text.substr(at + marker.size(),
                                      end - at - marker.size());
    std::string trimmed;
    for (char c : body)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    return trimmed;
  };
  bf.expect = find_annotation("expect");
  std::string flags = find_annotation("flags");
  bf.higher_order = flags.find("ho") != std::string::npos;
  return bf;
}

inline std::vector<BenchFile> load_corpus(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".inv")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  std::vector<BenchFile> out;
  for (const auto& p : paths) out.push_back(load_bench_file(p));
  return out;
}

struct BenchRow {
  std::string name;
  int size = 0;
  double time = 0, tvt = 0, mvt = 0, tst = 0, mst = 0;
  long tvc = 0, tsc = 0;
  std::string outcome;
  std::string mode;
};

inline const char* csv_header() {
  return "Name,Size,Time,TVT,TVC,MVT,TST,TSC,MST,Outcome,Mode";
}

inline std::string csv_row(const BenchRow& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << r.name << ',' << r.size << ',' << r.time << ',' << r.tvt << ','
      << r.tvc << ',' << r.mvt << ',' << r.tst << ',' << r.tsc << ','
      << r.mst << ',' << r.outcome << ',' << r.mode;
  return out.str();
}

// One benchmark run; keeps the elaborated program alive so the outcome's
// values and expressions stay valid.
struct BenchRun {
  std::shared_ptr<ElaboratedProgram> program;
  Outcome outcome;
  RunStats stats;
};

inline BenchRun run_bench_file(const BenchFile& bf, EngineOptions opts) {
  BenchRun run;
  auto prog = parse_program({bf.text, bf.path});
  run.program =
      std::make_shared<ElaboratedProgram>(elaborate(prog, bf.higher_order));
  InferenceEngine engine(*run.program, opts);
  run.outcome = engine.run();
  run.stats = engine.stats();
  run.stats.name = bf.name;
  run.stats.flags = opts.flag_string();
  return run;
}

// Repeats a benchmark; timing columns are averaged, counts come from the
// first run, and a single timed-out repeat marks the whole row timed out.
inline BenchRow bench_row(const BenchFile& bf, EngineOptions opts,
                          int repeat) {
  BenchRow row;
  row.name = bf.name;
  row.mode = mode_name(opts.mode);
  bool any_timeout = false;
  std::vector<RunStats> runs;
  for (int i = 0; i < repeat; ++i) {
    try {
      BenchRun run = run_bench_file(bf, opts);
      if (run.outcome.kind == Outcome::Kind::Timeout) any_timeout = true;
      runs.push_back(run.stats);
    } catch (const std::exception& e) {
      row.outcome = "error";
      return row;
    }
  }
  if (runs.empty()) {
    row.outcome = "error";
    return row;
  }
  row.size = runs.front().invariant_size;
  row.outcome = any_timeout ? "timeout" : runs.front().outcome;
  row.tvc = runs.front().tvc;
  row.tsc = runs.front().tsc;
  for (const RunStats& s : runs) {
    row.time += s.time_s;
    row.tvt += s.tvt_s;
    row.tst += s.tst_s;
  }
  row.time /= runs.size();
  row.tvt /= runs.size();
  row.tst /= runs.size();
  row.mvt = row.tvc > 0 ? row.tvt / row.tvc : 0;
  row.mst = row.tsc > 0 ? row.tst / row.tsc : 0;
  return row;
}

}  // namespace repinv
