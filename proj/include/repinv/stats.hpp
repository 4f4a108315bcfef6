#pragma once

#include <chrono>
#include <string>

namespace repinv {

// One measurement row: verification and synthesis call counts and times,
// plus the run outcome. Mean columns derive from the totals.
struct RunStats {
  std::string name;
  std::string mode = "hanoi";
  std::string flags;
  int invariant_size = 0;
  double time_s = 0;
  double tvt_s = 0;  // total verification time
  long tvc = 0;      // verification calls
  double tst_s = 0;  // total synthesis time
  long tsc = 0;      // synthesis calls
  std::string outcome;

  double mvt_s() const { return tvc > 0 ? tvt_s / tvc : 0.0; }
  double mst_s() const { return tsc > 0 ? tst_s / tsc : 0.0; }
};

class StatsSink {
 public:
  void record_verify(double seconds) {
    ++stats_.tvc;
    stats_.tvt_s += seconds;
  }
  void record_synth(double seconds) {
    ++stats_.tsc;
    stats_.tst_s += seconds;
  }
  RunStats& stats() { return stats_; }
  const RunStats& stats() const { return stats_; }

 private:
  RunStats stats_;
};

class ScopedTimer {
 public:
  explicit ScopedTimer(double* acc)
      : acc_(acc), start_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  ~ScopedTimer() {
    if (acc_) *acc_ += elapsed();
  }

 private:
  double* acc_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace repinv
