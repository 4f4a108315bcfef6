#pragma once

#include <optional>
#include <string>

#include "repinv/eval.hpp"
#include "repinv/pretty.hpp"
#include "repinv/value.hpp"

namespace repinv {

// A closed object-language predicate over the concrete type. Synthesized
// invariants, candidate invariants, and user-supplied invariants all have
// this shape. `source` is absent for host-implemented predicates (the
// pluggable synthesizer used by the finite-domain suites).
struct Predicate {
  Value fn;
  Expr source;
  int ast_size = 1;
  std::string label;

  bool holds(EvalContext& ctx, const Value& v) const {
    ctx.reset_fuel();
    return value_to_bool(apply(ctx, fn, v));
  }

  std::string to_string() const {
    if (source.defined()) return expr_to_string(source);
    return label.empty() ? std::string("<native predicate>") : label;
  }
};

inline Predicate make_predicate(EvalContext& ctx, const Expr& closed,
                                std::string label = "") {
  Predicate p;
  ctx.reset_fuel();
  p.fn = eval(ctx, nullptr, closed);
  p.source = closed;
  p.ast_size = closed.size();
  p.label = std::move(label);
  return p;
}

inline Predicate make_native_predicate(
    std::function<bool(EvalContext&, const Value&)> fn, std::string label,
    int ast_size = 1) {
  auto native = std::make_shared<NativeFn>();
  native->label = label;
  native->fn = [fn = std::move(fn)](const Value& v, EvalContext& ctx) {
    return make_bool(*ctx.decls, fn(ctx, v));
  };
  Predicate p;
  p.fn = Value::native(std::move(native));
  p.ast_size = ast_size;
  p.label = std::move(label);
  return p;
}

// Definition-form text of an invariant, re-ingestible by the check
// subcommand. Recursive predicates print as `let rec`, others as `let`.
inline std::string predicate_to_def_string(const Predicate& p,
                                           const std::string& name = "inv") {
  if (!p.source.defined()) return p.to_string();
  Expr e = p.source;
  bool is_rec = false;
  if (e.kind() == ExprKind::LetRec) {
    is_rec = true;
    e = e.kid(0);
  }
  if (e.kind() != ExprKind::Lambda) return expr_to_string(p.source);
  std::string s = is_rec ? "let rec " : "let ";
  s += name + " (" + e.param().str() + " : " + e.param_type().to_string() +
       ") : bool = " + expr_to_string(e.kid(0));
  return s;
}

// The P and Q of a conditional-inductiveness check: either membership in
// a finite set of known values or an object-language predicate test.
class Relation {
 public:
  static Relation membership(ValueSet set) {
    Relation r;
    r.set_ = std::move(set);
    r.is_set_ = true;
    return r;
  }
  static Relation membership(const std::vector<Value>& values) {
    ValueSet s;
    for (const auto& v : values) s.insert(v);
    return membership(std::move(s));
  }
  static Relation predicate(Predicate p) {
    Relation r;
    r.pred_ = std::move(p);
    r.is_set_ = false;
    return r;
  }

  bool is_set() const { return is_set_; }
  const ValueSet& values() const { return set_; }
  const Predicate& pred() const { return *pred_; }

  bool holds(EvalContext& ctx, const Value& v) const {
    if (is_set_) return set_.contains(v);
    return pred_->holds(ctx, v);
  }

  std::string to_string() const {
    if (is_set_) {
      std::string s = "{";
      for (std::size_t i = 0; i < set_.items().size(); ++i) {
        if (i) s += ", ";
        s += value_to_string(set_.items()[i]);
      }
      return s + "}";
    }
    return pred_->to_string();
  }

 private:
  ValueSet set_;
  std::optional<Predicate> pred_;
  bool is_set_ = false;
};

}  // namespace repinv
