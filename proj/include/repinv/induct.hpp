#pragma once

#include <cassert>
#include <optional>

#include "repinv/contract.hpp"
#include "repinv/fn_enumerate.hpp"
#include "repinv/program.hpp"
#include "repinv/relation.hpp"
#include "repinv/stats.hpp"
#include "repinv/verify.hpp"

namespace repinv {

// The module-op application that produced a counterexample; replaying it
// (op applied to args) reproduces the value in V.
struct OpApplication {
  Symbol op;
  std::vector<Value> args;
};

// Outcome of a conditional-inductiveness check. On a counterexample,
// every element of S satisfies P, every element of V falsifies Q, and V
// is nonempty.
struct CexReport {
  bool valid = true;
  std::vector<Value> S;
  std::vector<Value> V;
  std::optional<OpApplication> witness;
};

// Abstract-positioned subvalues of v at 0-type sigma: nothing at base
// types, {v} at the abstract type, the union of both sides for products.
inline void collect_v(const Type& sigma, const Value& v,
                      std::vector<Value>& out) {
  switch (sigma.kind()) {
    case TypeKind::Named:
      return;
    case TypeKind::Abstract:
      out.push_back(v);
      return;
    case TypeKind::Product:
      collect_v(sigma.left(), v.kid(0), out);
      collect_v(sigma.right(), v.kid(1), out);
      return;
    case TypeKind::Arrow:
      return;  // function values carry no collectable occurrences here
  }
}

inline std::vector<Value> collect_v(const Type& sigma, const Value& v) {
  std::vector<Value> out;
  collect_v(sigma, v, out);
  return out;
}

struct InductBudget {
  int alpha_nodes = 30;    // candidate cap for abstract argument slots
  long alpha_count = 3000;
  int base_nodes = 30;     // candidate cap for base argument slots
  long base_count = 3000;
  long multi_slot_total = 30000;  // application cap for ops with >= 2 slots
  FnGrammar fn_grammar{3, 200};   // higher-order candidate functions
  // bounded check that a candidate function meets its inverted judgment
  int fn_filter_nodes = 12;
  long fn_filter_count = 60;
};

// Executes the conditional-inductiveness judgments by bounded enumeration.
// P governs abstract values the client supplies, Q the values the module
// must deliver.
class InductChecker {
 public:
  InductChecker(const ElaboratedProgram& prog, EnumCache& cache,
                EvalContext& ctx, InductBudget budget = {},
                StatsSink* stats = nullptr, bool use_contracts = false)
      : prog_(prog),
        cache_(cache),
        ctx_(ctx),
        budget_(budget),
        stats_(stats),
        use_contracts_(use_contracts) {}

  // Judgment over the whole operations record: ops are checked in
  // declaration order and the first counterexample wins. The whole
  // judgment counts as one verifier consultation.
  CexReport cond_inductive(const Relation& P, const Relation& Q) {
    ScopedTimer timer(nullptr);
    CexReport out;
    for (const OpInfo& op : prog_.ops) {
      CexReport r = check_op_unrecorded(P, Q, op);
      if (!r.valid) {
        out = r;
        break;
      }
    }
    if (stats_) stats_->record_verify(timer.elapsed());
    return out;
  }

  // Judgment for one operation, recorded as its own verifier call (the
  // per-function constraint style).
  CexReport check_op(const Relation& P, const Relation& Q, const OpInfo& op) {
    ScopedTimer timer(nullptr);
    CexReport r = check_op_unrecorded(P, Q, op);
    if (stats_) stats_->record_verify(timer.elapsed());
    return r;
  }

  CexReport check_op_unrecorded(const Relation& P, const Relation& Q,
                                const OpInfo& op) {
    if (!has_positive_abstract(op.iface)) return CexReport{};  // cannot fail
    CexReport r =
        needs_contracts(op.iface) || use_contracts_
            ? contract_check(P, Q, op.value, op.iface)
            : direct_check(P, Q, op.value, op.iface);
    if (!r.valid) {
      r.witness->op = op.name;
      validate(P, Q, r);
    }
    return r;
  }

  // Direct execution of the inference rules (first-order types only).
  CexReport check_value(const Relation& P, const Relation& Q, const Value& v,
                        const Type& tau) {
    if (needs_contracts(tau)) return contract_check(P, Q, v, tau);
    CexReport r = direct_check(P, Q, v, tau);
    if (!r.valid) validate(P, Q, r);
    return r;
  }

  // Candidate arguments for a 0-type slot whose abstract positions are
  // governed by `rel`: the governing set itself when finite, otherwise a
  // budget-capped stream filtered by the relation.
  std::vector<Value> slot_candidates(const Type& sigma, const Relation& rel) {
    switch (sigma.kind()) {
      case TypeKind::Named:
        return enum_values(cache_, sigma, budget_.base_nodes,
                           budget_.base_count)
            .take_all();
      case TypeKind::Abstract: {
        if (rel.is_set()) return rel.values().items();
        std::vector<Value> out;
        ValueStream vs = enum_values(cache_, prog_.concrete,
                                     budget_.alpha_nodes, budget_.alpha_count);
        while (auto v = vs.next())
          if (rel.holds(ctx_, *v)) out.push_back(*v);
        return out;
      }
      case TypeKind::Product: {
        std::vector<Value> left = slot_candidates(sigma.left(), rel);
        std::vector<Value> right = slot_candidates(sigma.right(), rel);
        std::vector<Value> out;
        long cap = std::max(budget_.alpha_count, budget_.base_count);
        for (const Value& a : left) {
          for (const Value& b : right) {
            out.push_back(Value::pair(a, b));
            if (static_cast<long>(out.size()) >= cap) return out;
          }
        }
        return out;
      }
      case TypeKind::Arrow:
        break;
    }
    return {};
  }

 private:
  bool needs_contracts(const Type& tau) const {
    Type result;
    for (const Type& slot : curried_slots(tau, &result))
      if (contains_arrow(slot)) return true;
    return contains_arrow(result);
  }

  // Counterexample well-formedness, checked on every report: S satisfies
  // P, V falsifies Q, V nonempty.
  void validate(const Relation& P, const Relation& Q, const CexReport& r) {
    if (r.V.empty())
      throw std::logic_error("inductiveness counterexample with empty V");
    for (const Value& s : r.S)
      if (!P.holds(ctx_, s))
        throw std::logic_error("counterexample S contains a non-P value");
    for (const Value& v : r.V)
      if (Q.holds(ctx_, v))
        throw std::logic_error("counterexample V contains a Q value");
  }

  // Iteration order over slots: abstract-bearing slots vary outermost,
  // then function slots, then base slots; within a class, curried order.
  static std::vector<std::size_t> slot_iteration_order(
      const std::vector<Type>& slots) {
    std::vector<std::size_t> order;
    auto add_class = [&](auto pred) {
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (pred(slots[i])) order.push_back(i);
    };
    add_class([](const Type& t) {
      return !contains_arrow(t) && contains_abstract(t);
    });
    add_class([](const Type& t) {
      return contains_arrow(t) && contains_abstract(t);
    });
    add_class([](const Type& t) { return !contains_abstract(t); });
    return order;
  }

  CexReport direct_check(const Relation& P, const Relation& Q, const Value& v,
                         const Type& tau) {
    switch (tau.kind()) {
      case TypeKind::Named:
        return CexReport{};  // I-B
      case TypeKind::Abstract: {
        if (Q.holds(ctx_, v)) return CexReport{};  // I-A
        CexReport r;  // I-A-CEx
        r.valid = false;
        r.V.push_back(v);
        r.witness = OpApplication{};
        return r;
      }
      case TypeKind::Product: {
        CexReport r = direct_check(P, Q, v.kid(0), tau.left());
        if (!r.valid) return r;  // I-Prod-CEx1
        return direct_check(P, Q, v.kid(1), tau.right());  // I-Prod-CEx2
      }
      case TypeKind::Arrow:
        return arrow_check(P, Q, v, tau, /*contracts=*/false);
    }
    return CexReport{};
  }

  CexReport contract_check(const Relation& P, const Relation& Q,
                           const Value& v, const Type& tau) {
    if (tau.kind() != TypeKind::Arrow) {
      // No arguments to enumerate: run the wrapper over the bare value.
      auto log = std::make_shared<ContractLog>();
      try {
        wrap_contract(ctx_, v, tau, P, Q, log);
      } catch (const ModuleContractViolation& e) {
        return report_from_log(*log, e.value, {});
      }
      return CexReport{};
    }
    return arrow_check(P, Q, v, tau, /*contracts=*/true);
  }

  // I-Fun. Enumerates argument tuples for the curried slots, applies the
  // operation, and checks the result; with contracts, checks happen at
  // every boundary crossing instead.
  CexReport arrow_check(const Relation& P, const Relation& Q, const Value& v,
                        const Type& tau, bool contracts) {
    Type result;
    std::vector<Type> slots = curried_slots(tau, &result);
    std::vector<std::vector<Value>> candidates(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (contains_arrow(slots[i]))
        candidates[i] = fn_candidates(P, Q, slots[i]);
      else
        candidates[i] = slot_candidates(slots[i], P);
      if (candidates[i].empty()) return CexReport{};  // vacuously valid
    }
    std::vector<std::size_t> order = slot_iteration_order(slots);
    long cap = slots.size() >= 2 ? budget_.multi_slot_total
                                 : budget_.alpha_count;
    long applications = 0;

    std::vector<std::size_t> idx(slots.size(), 0);
    std::vector<Value> args(slots.size());
    for (;;) {
      ctx_.check_deadline();
      for (std::size_t i = 0; i < slots.size(); ++i)
        args[i] = candidates[i][idx[i]];
      if (applications++ >= cap) return CexReport{};
      CexReport r = contracts ? apply_with_contracts(P, Q, v, tau, args)
                              : apply_direct(P, Q, v, slots, result, args);
      if (!r.valid) return r;
      // odometer over `order`, last entry fastest
      std::size_t pos = order.size();
      bool done = false;
      for (;;) {
        if (pos == 0) {
          done = true;
          break;
        }
        --pos;
        std::size_t slot = order[pos];
        if (++idx[slot] < candidates[slot].size()) break;
        idx[slot] = 0;
      }
      if (done) break;
    }
    return CexReport{};
  }

  CexReport apply_direct(const Relation& P, const Relation& Q, const Value& v,
                         const std::vector<Type>& slots, const Type& result,
                         const std::vector<Value>& args) {
    ctx_.reset_fuel();
    Value out = apply_all(ctx_, v, args);
    CexReport r = direct_check(P, Q, out, result);
    if (r.valid) return r;
    // S accumulates the abstract-positioned argument components in
    // curried order, then whatever the result-side recursion gathered.
    std::vector<Value> S;
    for (std::size_t i = 0; i < slots.size(); ++i)
      collect_v(slots[i], args[i], S);
    for (const Value& s : r.S) S.push_back(s);
    r.S = dedup(S);
    r.witness = OpApplication{Symbol(), args};
    return r;
  }

  CexReport apply_with_contracts(const Relation& P, const Relation& Q,
                                 const Value& v, const Type& tau,
                                 const std::vector<Value>& args) {
    auto log = std::make_shared<ContractLog>();
    ctx_.reset_fuel();
    try {
      Value wrapped = wrap_contract(ctx_, v, tau, P, Q, log);
      apply_all(ctx_, wrapped, args);
    } catch (const ModuleContractViolation& e) {
      return report_from_log(*log, e.value, args);
    } catch (const ClientContractViolation&) {
      // The candidate function broke its own obligation on this run; the
      // run carries no counterexample.
    }
    return CexReport{};
  }

  CexReport report_from_log(const ContractLog& log, const Value& violating,
                            const std::vector<Value>& args) {
    CexReport r;
    r.valid = false;
    std::vector<Value> S;
    for (const ContractEntry& e : log.entries)
      if (!e.module_to_client && e.held) S.push_back(e.value);
    r.S = dedup(S);
    r.V.push_back(violating);
    r.witness = OpApplication{Symbol(), args};
    return r;
  }

  // Candidate client functions for a higher-order slot: enumerated from
  // the function grammar, kept only when a bounded check of the inverted
  // judgment (arguments satisfying Q must map to results satisfying P)
  // accepts them. Slots without abstract occurrences skip the filter.
  std::vector<Value> fn_candidates(const Relation& P, const Relation& Q,
                                   const Type& sigma) {
    Type cod;
    std::vector<Type> doms_iface = curried_slots(sigma, &cod);
    std::vector<Type> doms;
    for (const Type& d : doms_iface)
      doms.push_back(substitute_abstract(d, prog_.concrete));
    Type cod_concrete = substitute_abstract(cod, prog_.concrete);
    std::vector<Value> fns =
        enum_functions(cache_, ctx_, doms, cod_concrete, budget_.fn_grammar);
    if (!contains_abstract(sigma)) return fns;

    InductBudget small = budget_;
    small.alpha_nodes = budget_.fn_filter_nodes;
    small.alpha_count = budget_.fn_filter_count;
    small.base_nodes = budget_.fn_filter_nodes;
    small.base_count = budget_.fn_filter_count;
    small.multi_slot_total = budget_.fn_filter_count * budget_.fn_filter_count;
    InductChecker filter(prog_, cache_, ctx_, small, nullptr, false);
    std::vector<Value> out;
    for (const Value& f : fns) {
      CexReport r = filter.direct_check(Q, P, f, sigma);
      if (r.valid) out.push_back(f);
    }
    return out;
  }

  static std::vector<Value> dedup(const std::vector<Value>& in) {
    ValueSet set;
    for (const Value& v : in) set.insert(v);
    return set.items();
  }

  const ElaboratedProgram& prog_;
  EnumCache& cache_;
  EvalContext& ctx_;
  InductBudget budget_;
  StatsSink* stats_;
  bool use_contracts_;

  friend class InductCheckerTestPeer;
};

}  // namespace repinv
