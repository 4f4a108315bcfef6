#pragma once

#include <chrono>
#include <cstdint>

#include "repinv/adt.hpp"
#include "repinv/expr.hpp"
#include "repinv/value.hpp"

namespace repinv {

// Shared evaluation state: step budget, recursion depth guard, wall-clock
// deadline. One context is threaded through a whole inference run.
struct EvalContext {
  const DeclTable* decls = nullptr;
  std::int64_t fuel = 100000;
  std::int64_t fuel_limit = 100000;
  int depth = 0;
  int max_depth = 8192;
  bool has_deadline = false;
  std::chrono::steady_clock::time_point deadline{};
  unsigned tick = 0;

  explicit EvalContext(const DeclTable* d, std::int64_t fuel_limit = 100000)
      : decls(d), fuel(fuel_limit), fuel_limit(fuel_limit) {}

  void consume_fuel(const Span& sp) {
    if (--fuel < 0) throw FuelExhausted(sp);
    if ((++tick & 0x3ffu) == 0) check_deadline();
  }
  void check_deadline() const {
    if (has_deadline && std::chrono::steady_clock::now() > deadline)
      throw TimeoutError();
  }
  void reset_fuel() { fuel = fuel_limit; }
  void set_timeout(double seconds) {
    has_deadline = true;
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(seconds));
  }
};

namespace detail {
struct DepthGuard {
  EvalContext& ctx;
  DepthGuard(EvalContext& c, const Span& sp) : ctx(c) {
    if (++ctx.depth > ctx.max_depth) {
      --ctx.depth;
      throw FuelExhausted(sp);
    }
  }
  ~DepthGuard() { --ctx.depth; }
};
}  // namespace detail

inline Value make_bool(const DeclTable& decls, bool b) {
  return Value::ctor(b ? decls.bool_true() : decls.bool_false(), {});
}

inline bool value_to_bool(const Value& v) {
  if (v.kind() != ValueKind::Ctor || v.ctor_info()->adt->name != Symbol("bool"))
    throw EvalError("expected a boolean value, got " + value_to_string(v), {});
  return v.ctor_info()->name == Symbol("True");
}

inline Value make_nat(const DeclTable& decls, long n) {
  Value v = Value::ctor(decls.nat_z(), {});
  for (long i = 0; i < n; ++i) v = Value::ctor(decls.nat_s(), {v});
  return v;
}

// Call-by-value, fuel-bounded, deterministic. Tail positions (match
// branches, let-rec bodies, saturated closure calls) loop instead of
// recursing so self-recursive object programs cannot blow the C++ stack.
inline Value eval(EvalContext& ctx, Env env, Expr e) {
  detail::DepthGuard guard(ctx, e.span());
  for (;;) {
    switch (e.kind()) {
      case ExprKind::Var: {
        const Value* v = env_lookup(env, e.name());
        if (!v)
          throw EvalError("unbound variable at runtime: " + e.name().str(),
                          e.span());
        return *v;
      }
      case ExprKind::CtorApp: {
        std::vector<Value> args;
        args.reserve(e.num_kids());
        for (std::size_t i = 0; i < e.num_kids(); ++i)
          args.push_back(eval(ctx, env, e.kid(i)));
        return Value::ctor(e.ctor(), std::move(args));
      }
      case ExprKind::Lambda: {
        auto data = std::make_shared<ClosureData>();
        data->param = e.param();
        data->param_type = e.param_type();
        data->body = e.kid(0);
        data->env = env;
        data->source = e;
        return Value::closure(std::move(data));
      }
      case ExprKind::App: {
        Value f = eval(ctx, env, e.kid(0));
        Value a = eval(ctx, env, e.kid(1));
        ctx.consume_fuel(e.span());
        if (f.kind() == ValueKind::Closure) {
          const ClosureData& c = f.closure_data();
          Env callee = c.env;
          if (!c.rec_name.empty()) callee = env_bind(callee, c.rec_name, f);
          env = env_bind(callee, c.param, a);
          e = c.body;
          continue;
        }
        if (f.kind() == ValueKind::Native) return f.native_fn().fn(a, ctx);
        throw EvalError("application of non-function value", e.span());
      }
      case ExprKind::Pair: {
        Value a = eval(ctx, env, e.kid(0));
        Value b = eval(ctx, env, e.kid(1));
        return Value::pair(std::move(a), std::move(b));
      }
      case ExprKind::Proj: {
        Value p = eval(ctx, env, e.kid(0));
        if (p.kind() != ValueKind::Pair)
          throw EvalError("projection of non-pair value", e.span());
        return p.kid(e.proj_index() - 1);
      }
      case ExprKind::Match: {
        Value s = eval(ctx, env, e.kid(0));
        ctx.consume_fuel(e.span());
        if (s.kind() != ValueKind::Ctor)
          throw MatchFailure("match on non-constructor value", e.span());
        const MatchBranch* hit = nullptr;
        for (const auto& br : e.branches())
          if (br.ctor->name == s.ctor_info()->name) {
            hit = &br;
            break;
          }
        if (!hit)
          throw MatchFailure(
              "no branch for constructor " + s.ctor_info()->name.str(),
              e.span());
        for (std::size_t i = 0; i < hit->binders.size(); ++i)
          env = env_bind(env, hit->binders[i], s.kid(i));
        e = Expr(hit->body);
        continue;
      }
      case ExprKind::LetRec: {
        Expr fn = e.kid(0);
        auto data = std::make_shared<ClosureData>();
        data->param = fn.param();
        data->param_type = fn.param_type();
        data->body = fn.kid(0);
        data->env = env;
        data->rec_name = e.name();
        data->source = e;
        env = env_bind(env, e.name(), Value::closure(std::move(data)));
        e = e.kid(1);
        continue;
      }
      case ExprKind::Eq: {
        Value a = eval(ctx, env, e.kid(0));
        Value b = eval(ctx, env, e.kid(1));
        ctx.consume_fuel(e.span());
        return make_bool(*ctx.decls, structural_equal(a, b));
      }
    }
  }
}

// Applies a function value. Fuel is shared with the enclosing evaluation.
inline Value apply(EvalContext& ctx, const Value& fn, const Value& arg,
                   Span sp = {}) {
  ctx.consume_fuel(sp);
  if (fn.kind() == ValueKind::Closure) {
    const ClosureData& c = fn.closure_data();
    Env env = c.env;
    if (!c.rec_name.empty()) env = env_bind(env, c.rec_name, fn);
    env = env_bind(env, c.param, arg);
    return eval(ctx, env, c.body);
  }
  if (fn.kind() == ValueKind::Native) return fn.native_fn().fn(arg, ctx);
  throw EvalError("application of non-function value", sp);
}

inline Value apply_all(EvalContext& ctx, Value fn,
                       const std::vector<Value>& args, Span sp = {}) {
  for (const auto& a : args) fn = apply(ctx, fn, a, sp);
  return fn;
}

// Fresh step budget per top-level evaluation.
inline Value eval_top(EvalContext& ctx, const Env& env, const Expr& e) {
  ctx.reset_fuel();
  return eval(ctx, env, e);
}

}  // namespace repinv
