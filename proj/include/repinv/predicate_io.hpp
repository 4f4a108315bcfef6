#pragma once

#include "repinv/parser.hpp"
#include "repinv/program.hpp"
#include "repinv/relation.hpp"

namespace repinv {

// Builds a predicate over the concrete type from a parsed definition.
// The definition takes one parameter (written at `t` or the concrete
// type), returns bool, and may call prelude functions and module ops.
inline Predicate predicate_from_def(const ElaboratedProgram& prog,
                                    EvalContext& ctx, const Def& def_in) {
  Def def = def_in;
  if (def.params.size() != 1)
    throw TypeError(TypeErrorKind::TypeMismatch,
                    "an invariant takes exactly one parameter", def.span);
  for (auto& p : def.params)
    p.second = substitute_abstract(p.second, prog.concrete);
  if (def.result_type)
    def.result_type = substitute_abstract(*def.result_type, prog.concrete);
  def.body = expr_substitute_abstract(def.body, prog.concrete);

  const DeclTable& decls = *prog.decls;
  if (def.params[0].second != prog.concrete)
    throw TypeError(TypeErrorKind::TypeMismatch,
                    "invariant parameter must have the module's concrete type",
                    def.span);

  Expr fn = Expr::lambda(def.params[0].first, def.params[0].second, def.body,
                         def.span);
  Type fn_ty = Type::arrow(prog.concrete, decls.bool_type());
  Expr closed = fn;
  if (def.is_rec)
    closed = Expr::let_rec(def.name, fn_ty, fn, Expr::var(def.name), def.span);

  TypeCtx tctx;
  for (const auto& [name, ty] : prog.env_types) tctx.push(name, ty);
  Type actual = typecheck(decls, tctx, closed);
  if (actual != fn_ty)
    throw TypeError(TypeErrorKind::TypeMismatch,
                    "invariant must have type t -> bool, got " +
                        actual.to_string(),
                    def.span);

  Predicate p;
  ctx.reset_fuel();
  p.fn = eval(ctx, prog.full_env, closed);
  p.source = closed;
  p.ast_size = closed.size();
  p.label = def.name.str();
  return p;
}

inline Predicate parse_predicate(const ElaboratedProgram& prog,
                                 EvalContext& ctx, const std::string& text,
                                 const std::string& path = "<invariant>") {
  Def def = parse_def({text, path}, prog.decls, /*allow_abstract=*/true);
  return predicate_from_def(prog, ctx, def);
}

}  // namespace repinv
