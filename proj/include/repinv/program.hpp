#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "repinv/adt.hpp"
#include "repinv/eval.hpp"
#include "repinv/expr.hpp"
#include "repinv/typecheck.hpp"

namespace repinv {

struct Def {
  Symbol name;
  bool is_rec = false;
  std::vector<std::pair<Symbol, Type>> params;
  std::optional<Type> result_type;
  Expr body;
  Span span;
};

struct ModuleDecl {
  Symbol name;
  Type concrete;  // tau_c
  std::vector<Def> ops;
  Span span;
};

struct SpecDecl {
  std::vector<std::pair<Symbol, Type>> quantifiers;
  Expr body;
  Span span;
};

// Parsed program: prelude declarations and definitions, one module, and
// the final universally quantified specification.
struct Program {
  DeclTablePtr decls;
  std::vector<Def> prelude;
  ModuleDecl module;
  SpecDecl spec;
  std::string path;
};

// Rebuilds an expression with the abstract type replaced by `concrete`
// inside lambda parameter and let-rec annotations.
inline Expr expr_substitute_abstract(const Expr& e, const Type& concrete) {
  auto subst = [&](const Expr& k) {
    return expr_substitute_abstract(k, concrete);
  };
  switch (e.kind()) {
    case ExprKind::Var:
      return e;
    case ExprKind::CtorApp: {
      std::vector<Expr> args;
      for (std::size_t i = 0; i < e.num_kids(); ++i)
        args.push_back(subst(e.kid(i)));
      return Expr::ctor_app(e.ctor(), std::move(args), e.span());
    }
    case ExprKind::Lambda:
      return Expr::lambda(e.param(),
                          substitute_abstract(e.param_type(), concrete),
                          subst(e.kid(0)), e.span());
    case ExprKind::App:
      return Expr::app(subst(e.kid(0)), subst(e.kid(1)), e.span());
    case ExprKind::Pair:
      return Expr::pair(subst(e.kid(0)), subst(e.kid(1)), e.span());
    case ExprKind::Proj:
      return Expr::proj(e.proj_index(), subst(e.kid(0)), e.span());
    case ExprKind::Match: {
      std::vector<MatchBranch> branches;
      for (const auto& br : e.branches()) {
        MatchBranch nb = br;
        nb.body = subst(Expr(br.body)).node();
        branches.push_back(std::move(nb));
      }
      return Expr::match(subst(e.kid(0)), std::move(branches), e.span());
    }
    case ExprKind::LetRec:
      return Expr::let_rec(e.name(), substitute_abstract(e.fn_type(), concrete),
                           subst(e.kid(0)), subst(e.kid(1)), e.span());
    case ExprKind::Eq:
      return Expr::eq(subst(e.kid(0)), subst(e.kid(1)), e.span());
  }
  return e;
}

struct OpInfo {
  Symbol name;
  Type iface;       // interface type, abstract positions intact
  Type concrete;    // iface with the abstract type substituted
  Value value;
  std::vector<Type> slots;  // curried argument types (iface form)
  Type result;              // final result type (iface form)
};

// Typechecked and evaluated program: the module's operations as values,
// prelude bindings, and the spec with its quantifier layout.
struct ElaboratedProgram {
  DeclTablePtr decls;
  Env globals;    // prelude definitions
  Env full_env;   // globals + module operations
  Symbol module_name;
  Type concrete;  // tau_c
  std::vector<OpInfo> ops;
  SpecDecl spec;
  std::vector<std::size_t> abstract_quantifiers;
  bool higher_order = false;
  std::shared_ptr<const Program> source;
  // prelude + op names with their concrete types, for typechecking
  // predicates written against this program
  std::vector<std::pair<Symbol, Type>> env_types;

  const OpInfo* op(Symbol name) const {
    for (const auto& o : ops)
      if (o.name == name) return &o;
    return nullptr;
  }

  // phi with quantifiers instantiated by `tuple` (one value per
  // quantifier, in declaration order).
  bool spec_holds(EvalContext& ctx, const std::vector<Value>& tuple) const {
    Env env = full_env;
    for (std::size_t i = 0; i < spec.quantifiers.size(); ++i)
      env = env_bind(env, spec.quantifiers[i].first, tuple[i]);
    ctx.reset_fuel();
    return value_to_bool(eval(ctx, env, spec.body));
  }
};

namespace detail {

inline Type def_declared_type(const Def& def, Span sp) {
  if (!def.result_type)
    throw TypeError(TypeErrorKind::TypeMismatch,
                    "definition of " + def.name.str() +
                        " needs a result type annotation",
                    sp);
  Type t = *def.result_type;
  for (auto it = def.params.rbegin(); it != def.params.rend(); ++it)
    t = Type::arrow(it->second, t);
  return t;
}

inline Expr def_to_lambda(const Def& def) {
  Expr e = def.body;
  for (auto it = def.params.rbegin(); it != def.params.rend(); ++it)
    e = Expr::lambda(it->first, it->second, e, def.span);
  return e;
}

// Evaluates one definition in `env`, returning its value and type.
inline std::pair<Value, Type> elaborate_def(const DeclTable& decls,
                                            EvalContext& ctx, TypeCtx& tctx,
                                            const Env& env, const Def& def,
                                            bool require_annot) {
  Expr fn = def_to_lambda(def);
  Type declared;
  if (def.is_rec || require_annot || def.result_type) {
    declared = def_declared_type(def, def.span);
  }
  Expr closed = fn;
  if (def.is_rec) {
    if (def.params.empty())
      throw TypeError(TypeErrorKind::TypeMismatch,
                      "let rec " + def.name.str() + " must take parameters",
                      def.span);
    closed = Expr::let_rec(def.name, declared, fn, Expr::var(def.name),
                           def.span);
  }
  Type actual = typecheck(decls, tctx, closed);
  if (declared.defined() && actual != declared)
    throw TypeError(TypeErrorKind::TypeMismatch,
                    def.name.str() + " has type " + actual.to_string() +
                        " but was declared " + declared.to_string(),
                    def.span);
  ctx.reset_fuel();
  Value v = eval(ctx, env, closed);
  return {v, declared.defined() ? declared : actual};
}

}  // namespace detail

inline std::vector<Type> curried_slots(const Type& t, Type* result) {
  std::vector<Type> slots;
  Type cur = t;
  while (cur.kind() == TypeKind::Arrow) {
    slots.push_back(cur.dom());
    cur = cur.cod();
  }
  if (result) *result = cur;
  return slots;
}

// Typechecks the whole program, verifies interface conformance, and
// evaluates prelude and module definitions to values.
inline ElaboratedProgram elaborate(std::shared_ptr<const Program> prog,
                                   bool higher_order_mode = false) {
  const DeclTable& decls = *prog->decls;
  ElaboratedProgram out;
  out.decls = prog->decls;
  out.source = prog;
  out.module_name = prog->module.name;
  out.higher_order = higher_order_mode;

  if (contains_abstract(prog->module.concrete) ||
      contains_arrow(prog->module.concrete))
    throw TypeError(TypeErrorKind::TypeMismatch,
                    "module concrete type must be a concrete data type",
                    prog->module.span);
  out.concrete = prog->module.concrete;

  EvalContext ctx(&decls);
  TypeCtx tctx;
  Env env;

  for (const Def& def : prog->prelude) {
    auto [v, ty] = detail::elaborate_def(decls, ctx, tctx, env, def, false);
    env = env_bind(env, def.name, v);
    tctx.push(def.name, ty);
    out.env_types.emplace_back(def.name, ty);
  }
  out.globals = env;

  // Module operations: declared types with `t` read back as the abstract
  // type form the implicit interface; bodies are checked at the
  // substituted concrete type.
  for (const Def& def : prog->module.ops) {
    Def concrete_def = def;
    for (auto& p : concrete_def.params)
      p.second = substitute_abstract(p.second, out.concrete);
    if (concrete_def.result_type)
      concrete_def.result_type =
          substitute_abstract(*concrete_def.result_type, out.concrete);
    concrete_def.body = expr_substitute_abstract(def.body, out.concrete);

    OpInfo op;
    op.name = def.name;
    op.iface = detail::def_declared_type(def, def.span);
    if (!higher_order_mode && !is_first_order(op.iface))
      throw TypeError(TypeErrorKind::InterfaceMismatch,
                      "operation " + def.name.str() + " has type " +
                          op.iface.to_string() +
                          " outside the first-order interface grammar "
                          "(enable higher-order mode)",
                      def.span);
    op.concrete = substitute_abstract(op.iface, out.concrete);
    auto [v, ty] =
        detail::elaborate_def(decls, ctx, tctx, env, concrete_def, true);
    if (ty != op.concrete)
      throw TypeError(TypeErrorKind::InterfaceMismatch,
                      "operation " + def.name.str() +
                          " does not implement its interface type",
                      def.span);
    op.value = v;
    op.slots = curried_slots(op.iface, &op.result);
    out.ops.push_back(op);
    env = env_bind(env, def.name, v);
    tctx.push(def.name, op.concrete);
    out.env_types.emplace_back(def.name, op.concrete);
  }
  out.full_env = env;

  // Spec: quantifiers over the abstract type or 0-types; body is closed
  // except for quantifier and operation names and must be boolean.
  out.spec = prog->spec;
  TypeCtx spec_ctx;
  for (const auto& op : out.ops) spec_ctx.push(op.name, op.concrete);
  for (std::size_t i = 0; i < out.spec.quantifiers.size(); ++i) {
    const auto& [name, ty] = out.spec.quantifiers[i];
    if (!is_zero_order(ty))
      throw TypeError(TypeErrorKind::TypeMismatch,
                      "spec quantifier " + name.str() +
                          " must range over a 0-type",
                      out.spec.span);
    if (contains_abstract(ty)) {
      if (ty != Type::abstract())
        throw TypeError(TypeErrorKind::TypeMismatch,
                        "spec quantifier " + name.str() +
                            " must be the abstract type or a concrete 0-type",
                        out.spec.span);
      out.abstract_quantifiers.push_back(i);
      spec_ctx.push(name, out.concrete);
    } else {
      spec_ctx.push(name, ty);
    }
  }
  Expr spec_body = expr_substitute_abstract(prog->spec.body, out.concrete);
  out.spec.body = spec_body;
  Type spec_ty = typecheck(decls, spec_ctx, spec_body);
  if (spec_ty != decls.bool_type())
    throw TypeError(TypeErrorKind::TypeMismatch,
                    "spec body must have type bool, got " +
                        spec_ty.to_string(),
                    prog->spec.span);
  return out;
}

}  // namespace repinv
