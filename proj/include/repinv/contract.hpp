#pragma once

#include <memory>

#include "repinv/relation.hpp"

namespace repinv {

// Record of one value crossing the module boundary under instrumentation.
struct ContractEntry {
  bool module_to_client;  // direction of the crossing
  Value value;
  bool held;  // verdict of the relation checked at this crossing
};

struct ContractLog {
  std::vector<ContractEntry> entries;
};

// Thrown when the module delivers an abstract value that falsifies Q.
struct ModuleContractViolation {
  Value value;
};
// Thrown when an enumerated client function breaks its own P obligation;
// the surrounding enumeration skips such runs.
struct ClientContractViolation {
  Value value;
};

// Type-directed instrumentation: every abstract-typed value crossing the
// boundary is checked against Q in positive positions (module to client)
// and P in negative ones (client to module), and logged. Function types
// without abstract occurrences are left untouched.
inline Value wrap_contract(EvalContext& ctx, const Value& v, const Type& tau,
                           const Relation& P, const Relation& Q,
                           std::shared_ptr<ContractLog> log,
                           bool positive = true) {
  switch (tau.kind()) {
    case TypeKind::Named:
      return v;
    case TypeKind::Abstract: {
      const Relation& rel = positive ? Q : P;
      bool ok = rel.holds(ctx, v);
      log->entries.push_back(ContractEntry{positive, v, ok});
      if (!ok) {
        if (positive) throw ModuleContractViolation{v};
        throw ClientContractViolation{v};
      }
      return v;
    }
    case TypeKind::Product: {
      if (!contains_abstract(tau)) return v;
      if (v.kind() != ValueKind::Pair)
        throw EvalError("contract expected a pair value", {});
      Value a = wrap_contract(ctx, v.kid(0), tau.left(), P, Q, log, positive);
      Value b = wrap_contract(ctx, v.kid(1), tau.right(), P, Q, log, positive);
      return Value::pair(std::move(a), std::move(b));
    }
    case TypeKind::Arrow: {
      if (!contains_abstract(tau)) return v;  // cannot carry counterexamples
      auto native = std::make_shared<NativeFn>();
      native->label = "contract";
      Type dom = tau.dom(), cod = tau.cod();
      native->fn = [v, dom, cod, P, Q, log, positive](
                       const Value& arg, EvalContext& inner) -> Value {
        Value warg = wrap_contract(inner, arg, dom, P, Q, log, !positive);
        Value result = apply(inner, v, warg);
        return wrap_contract(inner, result, cod, P, Q, log, positive);
      };
      return Value::native(std::move(native));
    }
  }
  return v;
}

}  // namespace repinv
