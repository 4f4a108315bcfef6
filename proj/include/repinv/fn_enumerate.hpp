#pragma once

#include <algorithm>
#include <set>
#include <string>

#include "repinv/enumerate.hpp"
#include "repinv/eval.hpp"
#include "repinv/pretty.hpp"

namespace repinv {

inline Expr value_to_expr(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Ctor: {
      std::vector<Expr> args;
      for (const auto& k : v.kids()) args.push_back(value_to_expr(k));
      return Expr::ctor_app(v.ctor_info(), std::move(args));
    }
    case ValueKind::Pair:
      return Expr::pair(value_to_expr(v.kid(0)), value_to_expr(v.kid(1)));
    case ValueKind::Closure:
      if (v.closure_data().source.defined()) return v.closure_data().source;
      [[fallthrough]];
    case ValueKind::Native:
      throw EvalError("cannot convert a function value to an expression", {});
  }
  throw EvalError("malformed value", {});
}

// Restricted function grammar: constants, parameter references and
// projections, constructor application, one structural match on a
// parameter, and structurally decreasing self-calls inside its branches.
struct FnGrammar {
  int depth = 3;         // node budget for generated bodies and constants
  long max_count = 256;  // cap on yielded functions
};

namespace fn_detail {

struct Term {
  Expr expr;
  bool uses_rec = false;
};

struct Scope {
  std::vector<std::pair<Symbol, Type>> vars;
};

inline void plain_terms(EnumCache& cache, const Type& ty, int budget,
                        const Scope& scope, const std::vector<Expr>& rec_calls,
                        std::vector<Term>& out) {
  if (budget < 1) return;
  for (const auto& [name, vty] : scope.vars) {
    if (vty == ty) out.push_back({Expr::var(name), false});
    if (budget >= 2 && vty.kind() == TypeKind::Product) {
      if (vty.left() == ty)
        out.push_back({Expr::proj(1, Expr::var(name)), false});
      if (vty.right() == ty)
        out.push_back({Expr::proj(2, Expr::var(name)), false});
    }
  }
  if (!contains_arrow(ty) && !contains_abstract(ty)) {
    ValueStream vs = enum_values(cache, ty, budget, 64);
    while (auto v = vs.next()) out.push_back({value_to_expr(*v), false});
  }
  for (const Expr& rc : rec_calls)
    if (rc.size() <= budget) out.push_back({rc, true});
  if (ty.kind() != TypeKind::Named) return;
  const AdtInfo* adt = cache.decls().adt(ty.name());
  if (!adt) return;
  for (const auto& ctor : adt->ctors) {
    if (ctor.fields.empty()) continue;  // nullary covered by constants
    int arity = static_cast<int>(ctor.fields.size());
    if (1 + arity > budget) continue;
    std::vector<std::vector<Term>> child_terms(ctor.fields.size());
    for (std::size_t i = 0; i < ctor.fields.size(); ++i)
      plain_terms(cache, ctor.fields[i], budget - arity, scope, rec_calls,
                  child_terms[i]);
    std::vector<Expr> args;
    auto emit = [&](auto&& self, std::size_t level, int remaining,
                    bool rec) -> void {
      if (level == ctor.fields.size()) {
        std::vector<Expr> copy = args;
        out.push_back({Expr::ctor_app(&ctor, std::move(copy)), rec});
        return;
      }
      int fields_left = arity - static_cast<int>(level) - 1;
      for (const Term& t : child_terms[level]) {
        if (t.expr.size() > remaining - fields_left) continue;
        args.push_back(t.expr);
        self(self, level + 1, remaining - t.expr.size(), rec || t.uses_rec);
        args.pop_back();
      }
    };
    emit(emit, 0, budget - 1, false);
  }
}

}  // namespace fn_detail

// Enumerates total functions of type doms[0] -> ... -> cod. Deterministic;
// ordered by body size with generation order breaking ties. Every constant
// function returning a value of size <= depth is included.
inline std::vector<Value> enum_functions(EnumCache& cache, EvalContext& ctx,
                                         const std::vector<Type>& doms,
                                         const Type& cod,
                                         const FnGrammar& grammar) {
  using fn_detail::Scope;
  using fn_detail::Term;

  Scope scope;
  std::vector<Symbol> params;
  for (std::size_t i = 0; i < doms.size(); ++i) {
    Symbol p(std::string("a") + std::to_string(i));
    params.push_back(p);
    scope.vars.emplace_back(p, doms[i]);
  }
  Symbol self("self");
  Type fn_type = cod;
  for (auto it = doms.rbegin(); it != doms.rend(); ++it)
    fn_type = Type::arrow(*it, fn_type);

  std::vector<Term> bodies;
  fn_detail::plain_terms(cache, cod, grammar.depth, scope, {}, bodies);

  // One structural match on a parameter of data type.
  for (std::size_t pi = 0; pi < doms.size(); ++pi) {
    if (doms[pi].kind() != TypeKind::Named) continue;
    const AdtInfo* adt = cache.decls().adt(doms[pi].name());
    if (!adt || adt->ctors.empty()) continue;
    std::vector<std::vector<Term>> branch_terms;
    std::vector<std::vector<Symbol>> branch_binders;
    bool usable = true;
    for (const auto& ctor : adt->ctors) {
      Scope bscope = scope;
      std::vector<Symbol> binders;
      std::vector<Expr> rec_calls;
      for (std::size_t fi = 0; fi < ctor.fields.size(); ++fi) {
        Symbol b(std::string("b") + std::to_string(fi));
        binders.push_back(b);
        bscope.vars.emplace_back(b, ctor.fields[fi]);
      }
      for (std::size_t fi = 0; fi < ctor.fields.size(); ++fi) {
        if (ctor.fields[fi] != doms[pi]) continue;
        Expr call = Expr::var(self);
        for (std::size_t ai = 0; ai < params.size(); ++ai)
          call = Expr::app(call, ai == pi ? Expr::var(binders[fi])
                                          : Expr::var(params[ai]));
        rec_calls.push_back(call);
      }
      std::vector<Term> terms;
      fn_detail::plain_terms(cache, cod, grammar.depth + 1, bscope, rec_calls,
                             terms);
      if (terms.empty()) usable = false;
      branch_terms.push_back(std::move(terms));
      branch_binders.push_back(std::move(binders));
    }
    if (!usable) continue;
    long combos = 0;
    std::vector<std::size_t> idx(adt->ctors.size(), 0);
    auto build = [&](auto&& self_fn, std::size_t bi, bool rec) -> void {
      if (combos > 4 * grammar.max_count) return;
      if (bi == adt->ctors.size()) {
        std::vector<MatchBranch> branches;
        for (std::size_t j = 0; j < adt->ctors.size(); ++j) {
          MatchBranch br;
          br.ctor = &adt->ctors[j];
          br.binders = branch_binders[j];
          br.body = branch_terms[j][idx[j]].expr.node();
          branches.push_back(std::move(br));
        }
        bodies.push_back(
            {Expr::match(Expr::var(params[pi]), std::move(branches)), rec});
        ++combos;
        return;
      }
      for (std::size_t k = 0; k < branch_terms[bi].size(); ++k) {
        idx[bi] = k;
        self_fn(self_fn, bi + 1, rec || branch_terms[bi][k].uses_rec);
        if (combos > 4 * grammar.max_count) return;
      }
    };
    build(build, 0, false);
  }

  // Assemble lambdas, dedup, order by size then generation index.
  std::stable_sort(bodies.begin(), bodies.end(),
                   [](const Term& a, const Term& b) {
                     return a.expr.size() < b.expr.size();
                   });
  std::vector<Value> out;
  std::set<std::string> seen;
  for (const Term& body : bodies) {
    if (static_cast<long>(out.size()) >= grammar.max_count) break;
    Expr fn = body.expr;
    for (std::size_t i = doms.size(); i-- > 0;)
      fn = Expr::lambda(params[i], doms[i], fn);
    Expr closed =
        body.uses_rec ? Expr::let_rec(self, fn_type, fn, Expr::var(self)) : fn;
    std::string key = expr_to_string(closed);
    if (!seen.insert(key).second) continue;
    ctx.reset_fuel();
    out.push_back(eval(ctx, nullptr, closed));
  }
  return out;
}

inline std::vector<Value> enum_functions(EnumCache& cache, EvalContext& ctx,
                                         const Type& dom, const Type& cod,
                                         const FnGrammar& grammar) {
  return enum_functions(cache, ctx, std::vector<Type>{dom}, cod, grammar);
}

}  // namespace repinv
