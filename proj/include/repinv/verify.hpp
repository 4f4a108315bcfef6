#pragma once

#include <algorithm>
#include <cassert>
#include <functional>

#include "repinv/enumerate.hpp"
#include "repinv/eval.hpp"
#include "repinv/stats.hpp"

namespace repinv {

struct VerifBudget {
  int max_nodes = 30;        // per-structure node cap
  long per_quantifier = 3000;  // structures drawn per quantifier
  long total = 3000;         // tuples evaluated in all
};

// One quantifier: (30, 3000, 3000). Two or more: structures shrink to 15
// nodes and the global cap rises to 30000 tuples.
inline VerifBudget default_budget(int num_quantifiers) {
  assert(num_quantifiers >= 1);
  if (num_quantifiers == 1) return VerifBudget{30, 3000, 3000};
  return VerifBudget{15, 3000, 30000};
}

struct QVar {
  Symbol name;
  Type type;  // arrow-free concrete type
};

struct Query {
  std::vector<QVar> vars;
  // Total boolean predicate over one instantiation of the quantifiers.
  std::function<bool(EvalContext&, const std::vector<Value>&)> body;
  VerifBudget budget;
  std::string label;
};

struct VerifOutcome {
  bool valid = false;
  std::vector<Value> counterexample;  // empty iff valid
  bool bounded = true;  // always: this verifier only ever tests
  long tuples_checked = 0;
};

// Size-bounded enumerative testing. Tuples are visited in nondecreasing
// total-size order; ties iterate the leftmost quantifier first. The first
// falsifying tuple is returned. One VerifCall is recorded per invocation.
inline VerifOutcome verify(EnumCache& cache, EvalContext& ctx, const Query& q,
                           StatsSink* stats = nullptr) {
  ScopedTimer timer(nullptr);
  VerifOutcome out;

  std::vector<std::vector<Value>> columns;
  columns.reserve(q.vars.size());
  for (const auto& var : q.vars)
    columns.push_back(
        enum_values(cache, var.type, q.budget.max_nodes, q.budget.per_quantifier)
            .take_all());

  // Per-column cumulative minimum suffix sizes for pruning.
  std::size_t n = columns.size();
  std::vector<int> min_size(n, 0), max_size(n, 0);
  bool any_empty = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (columns[i].empty()) {
      any_empty = true;
      continue;
    }
    min_size[i] = value_size(columns[i].front());
    max_size[i] = value_size(columns[i].back());
  }
  if (any_empty) {
    out.valid = true;  // vacuously: nothing to instantiate
    if (stats) stats->record_verify(timer.elapsed());
    return out;
  }
  std::vector<int> suffix_min(n + 1, 0), suffix_max(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    suffix_min[i] = suffix_min[i + 1] + min_size[i];
    suffix_max[i] = suffix_max[i + 1] + max_size[i];
  }
  std::vector<std::vector<int>> sizes(n);
  for (std::size_t i = 0; i < n; ++i) {
    sizes[i].reserve(columns[i].size());
    for (const Value& v : columns[i]) sizes[i].push_back(value_size(v));
  }

  std::vector<Value> tuple(n);
  bool found = false;
  long checked = 0;

  // Assigns column `i` onward so sizes sum to exactly `remaining`.
  auto assign = [&](auto&& self, std::size_t i, int remaining) -> bool {
    if (checked >= q.budget.total) return true;  // budget exhausted: stop
    if (i == n) {
      ++checked;
      if (!q.body(ctx, tuple)) {
        found = true;
        return true;
      }
      return false;
    }
    int lo = remaining - suffix_max[i + 1];
    auto start = std::lower_bound(sizes[i].begin(), sizes[i].end(), lo);
    for (std::size_t j = start - sizes[i].begin(); j < columns[i].size();
         ++j) {
      int rest = remaining - sizes[i][j];
      if (rest < suffix_min[i + 1]) break;  // sizes ascend; no fit further
      tuple[i] = columns[i][j];
      if (self(self, i + 1, rest)) return true;
    }
    return false;
  };

  for (int total = suffix_min[0]; total <= suffix_max[0]; ++total) {
    if (assign(assign, 0, total)) break;
    if (checked >= q.budget.total) break;
  }

  out.tuples_checked = checked;
  if (found) {
    out.counterexample = tuple;
    // a returned counterexample always re-evaluates the body to false
    if (q.body(ctx, tuple))
      throw std::logic_error("verifier returned a non-falsifying tuple");
  } else {
    out.valid = true;
  }
  if (stats) stats->record_verify(timer.elapsed());
  return out;
}

}  // namespace repinv
