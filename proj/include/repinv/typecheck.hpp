#pragma once

#include <algorithm>
#include <vector>

#include "repinv/adt.hpp"
#include "repinv/expr.hpp"
#include "repinv/type.hpp"

namespace repinv {

// Mutable scope stack; callers push/pop around binders.
class TypeCtx {
 public:
  void push(Symbol name, Type ty) { stack_.emplace_back(name, ty); }
  void pop(std::size_t n = 1) { stack_.resize(stack_.size() - n); }
  const Type* lookup(Symbol name) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
  std::size_t size() const { return stack_.size(); }

 private:
  std::vector<std::pair<Symbol, Type>> stack_;
};

namespace detail {
[[noreturn]] inline void type_fail(TypeErrorKind k, std::string msg, Span sp) {
  throw TypeError(k, std::move(msg), sp);
}
}  // namespace detail

// Returns the unique type of `e` in `ctx` or throws a TypeError carrying
// the offending span.
inline Type typecheck(const DeclTable& decls, TypeCtx& ctx, const Expr& e) {
  using detail::type_fail;
  switch (e.kind()) {
    case ExprKind::Var: {
      const Type* t = ctx.lookup(e.name());
      if (!t)
        type_fail(TypeErrorKind::UnboundVariable,
                  "unbound variable: " + e.name().str(), e.span());
      return *t;
    }
    case ExprKind::CtorApp: {
      const CtorInfo* c = e.ctor();
      if (e.num_kids() != c->fields.size())
        type_fail(TypeErrorKind::ConstructorArityMismatch,
                  "constructor " + c->name.str() + " expects " +
                      std::to_string(c->fields.size()) + " arguments, got " +
                      std::to_string(e.num_kids()),
                  e.span());
      for (std::size_t i = 0; i < e.num_kids(); ++i) {
        Type at = typecheck(decls, ctx, e.kid(i));
        if (at != c->fields[i])
          type_fail(TypeErrorKind::TypeMismatch,
                    "constructor " + c->name.str() + " field " +
                        std::to_string(i + 1) + " expects " +
                        c->fields[i].to_string() + ", got " + at.to_string(),
                    e.kid(i).span());
      }
      return Type::named(c->adt->name);
    }
    case ExprKind::Lambda: {
      ctx.push(e.param(), e.param_type());
      Type body = typecheck(decls, ctx, e.kid(0));
      ctx.pop();
      return Type::arrow(e.param_type(), body);
    }
    case ExprKind::App: {
      Type ft = typecheck(decls, ctx, e.kid(0));
      if (ft.kind() != TypeKind::Arrow)
        type_fail(TypeErrorKind::TypeMismatch,
                  "application of non-function of type " + ft.to_string(),
                  e.kid(0).span());
      Type at = typecheck(decls, ctx, e.kid(1));
      if (at != ft.dom())
        type_fail(TypeErrorKind::TypeMismatch,
                  "argument type " + at.to_string() + " does not match " +
                      ft.dom().to_string(),
                  e.kid(1).span());
      return ft.cod();
    }
    case ExprKind::Pair: {
      Type a = typecheck(decls, ctx, e.kid(0));
      Type b = typecheck(decls, ctx, e.kid(1));
      return Type::product(a, b);
    }
    case ExprKind::Proj: {
      Type t = typecheck(decls, ctx, e.kid(0));
      if (t.kind() != TypeKind::Product)
        type_fail(TypeErrorKind::TypeMismatch,
                  "projection of non-pair of type " + t.to_string(),
                  e.span());
      return e.proj_index() == 1 ? t.left() : t.right();
    }
    case ExprKind::Match: {
      Type st = typecheck(decls, ctx, e.kid(0));
      const AdtInfo* adt = decls.adt(st);
      if (!adt)
        type_fail(TypeErrorKind::TypeMismatch,
                  "match scrutinee has non-data type " + st.to_string(),
                  e.kid(0).span());
      std::vector<bool> seen(adt->ctors.size(), false);
      Type result;
      for (const auto& br : e.branches()) {
        if (br.ctor->adt != adt)
          type_fail(TypeErrorKind::TypeMismatch,
                    "branch constructor " + br.ctor->name.str() +
                        " does not belong to type " + adt->name.str(),
                    br.span);
        if (seen[br.ctor->index])
          type_fail(TypeErrorKind::TypeMismatch,
                    "duplicate branch for constructor " + br.ctor->name.str(),
                    br.span);
        seen[br.ctor->index] = true;
        if (br.binders.size() != br.ctor->fields.size())
          type_fail(TypeErrorKind::ConstructorArityMismatch,
                    "pattern for " + br.ctor->name.str() + " binds " +
                        std::to_string(br.binders.size()) + " of " +
                        std::to_string(br.ctor->fields.size()) + " fields",
                    br.span);
        for (std::size_t i = 0; i < br.binders.size(); ++i)
          ctx.push(br.binders[i], br.ctor->fields[i]);
        Type bt = typecheck(decls, ctx, Expr(br.body));
        ctx.pop(br.binders.size());
        if (!result.defined())
          result = bt;
        else if (bt != result)
          type_fail(TypeErrorKind::TypeMismatch,
                    "branch type " + bt.to_string() +
                        " differs from earlier branches of type " +
                        result.to_string(),
                    br.span);
      }
      for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
          type_fail(TypeErrorKind::NonExhaustiveMatch,
                    "non-exhaustive match: missing constructor " +
                        adt->ctors[i].name.str(),
                    e.span());
      if (e.branches().empty())
        type_fail(TypeErrorKind::NonExhaustiveMatch,
                  "match with no branches", e.span());
      return result;
    }
    case ExprKind::LetRec: {
      if (e.kid(0).kind() != ExprKind::Lambda)
        type_fail(TypeErrorKind::TypeMismatch,
                  "let rec must bind a function literal", e.span());
      ctx.push(e.name(), e.fn_type());
      Type ft = typecheck(decls, ctx, e.kid(0));
      if (ft != e.fn_type())
        type_fail(TypeErrorKind::TypeMismatch,
                  "let rec body has type " + ft.to_string() +
                      " but was declared " + e.fn_type().to_string(),
                  e.span());
      Type bt = typecheck(decls, ctx, e.kid(1));
      ctx.pop();
      return bt;
    }
    case ExprKind::Eq: {
      Type a = typecheck(decls, ctx, e.kid(0));
      Type b = typecheck(decls, ctx, e.kid(1));
      if (a != b)
        type_fail(TypeErrorKind::TypeMismatch,
                  "equality operands have different types " + a.to_string() +
                      " and " + b.to_string(),
                  e.span());
      if (contains_arrow(a))
        type_fail(TypeErrorKind::TypeMismatch,
                  "equality is not defined on functions", e.span());
      return decls.bool_type();
    }
  }
  detail::type_fail(TypeErrorKind::TypeMismatch, "malformed expression",
                    e.span());
}

inline Type typecheck_closed(const DeclTable& decls, const Expr& e) {
  TypeCtx ctx;
  return typecheck(decls, ctx, e);
}

}  // namespace repinv
