#pragma once

#include <sstream>
#include <string>

#include "repinv/program.hpp"

namespace repinv {

namespace pretty_detail {

// Precedence levels used when printing expressions, mirroring the parser.
enum Level {
  LvlExpr = 0,   // fun
  LvlOr = 1,
  LvlAnd = 2,
  LvlCmp = 3,
  LvlUnary = 4,
  LvlApp = 5,
  LvlPostfix = 6,
  LvlAtom = 7,
};

inline bool is_bool_ctor(const Expr& e, const char* name) {
  return e.kind() == ExprKind::CtorApp && e.num_kids() == 0 &&
         e.ctor()->name == Symbol(name);
}

// Detects Z/S chains that can print as decimal literals.
inline bool as_nat_literal(const Expr& e, long* out) {
  long n = 0;
  Expr cur = e;
  for (;;) {
    if (cur.kind() != ExprKind::CtorApp) return false;
    if (cur.ctor()->name == Symbol("Z") && cur.num_kids() == 0) {
      *out = n;
      return true;
    }
    if (cur.ctor()->name == Symbol("S") && cur.num_kids() == 1) {
      ++n;
      cur = cur.kid(0);
      continue;
    }
    return false;
  }
}

struct BoolMatch {
  Expr cond, on_true, on_false;
};

inline bool as_bool_match(const Expr& e, BoolMatch* out) {
  if (e.kind() != ExprKind::Match || e.branches().size() != 2) return false;
  const auto& b0 = e.branches()[0];
  const auto& b1 = e.branches()[1];
  if (b0.ctor->name != Symbol("True") || b1.ctor->name != Symbol("False"))
    return false;
  out->cond = e.kid(0);
  out->on_true = Expr(b0.body);
  out->on_false = Expr(b1.body);
  return true;
}

inline std::string print(const Expr& e, int level);

inline std::string wrap(const std::string& s, bool need) {
  return need ? "(" + s + ")" : s;
}

inline std::string print(const Expr& e, int level) {
  long lit = 0;
  if (as_nat_literal(e, &lit)) return std::to_string(lit);

  BoolMatch bm;
  if (as_bool_match(e, &bm)) {
    // Resugar the parser's boolean desugarings: not, &&, ||, if.
    if (is_bool_ctor(bm.on_true, "False") && is_bool_ctor(bm.on_false, "True"))
      return wrap("not " + print(bm.cond, LvlPostfix), level > LvlUnary);
    if (is_bool_ctor(bm.on_false, "False"))
      return wrap(print(bm.cond, LvlCmp) + " && " + print(bm.on_true, LvlAnd),
                  level > LvlAnd);
    if (is_bool_ctor(bm.on_true, "True"))
      return wrap(print(bm.cond, LvlAnd) + " || " + print(bm.on_false, LvlOr),
                  level > LvlOr);
    return wrap("if " + print(bm.cond, LvlExpr) + " then " +
                    print(bm.on_true, LvlExpr) + " else " +
                    print(bm.on_false, LvlExpr),
                level > LvlExpr);
  }

  switch (e.kind()) {
    case ExprKind::Var:
      return e.name().str();
    case ExprKind::CtorApp: {
      std::string s = e.ctor()->name.str();
      if (e.num_kids() > 0) {
        s += " (";
        for (std::size_t i = 0; i < e.num_kids(); ++i) {
          if (i) s += ", ";
          s += print(e.kid(i), LvlExpr);
        }
        s += ")";
      }
      return s;
    }
    case ExprKind::Lambda:
      return wrap("fun (" + e.param().str() + " : " +
                      e.param_type().to_string() + ") -> " +
                      print(e.kid(0), LvlExpr),
                  level > LvlExpr);
    case ExprKind::App:
      return wrap(print(e.kid(0), LvlApp) + " " + print(e.kid(1), LvlPostfix),
                  level > LvlApp);
    case ExprKind::Pair:
      return "(" + print(e.kid(0), LvlExpr) + ", " + print(e.kid(1), LvlExpr) +
             ")";
    case ExprKind::Proj:
      return wrap(print(e.kid(0), LvlPostfix) + "." +
                      std::to_string(e.proj_index()),
                  level > LvlPostfix);
    case ExprKind::Match: {
      std::string s = "match " + print(e.kid(0), LvlExpr) + " with";
      for (const auto& br : e.branches()) {
        s += " | " + br.ctor->name.str();
        if (!br.binders.empty()) {
          s += " (";
          for (std::size_t i = 0; i < br.binders.size(); ++i) {
            if (i) s += ", ";
            s += br.binders[i].str();
          }
          s += ")";
        }
        s += " -> " + print(Expr(br.body), LvlExpr);
      }
      return s + " end";
    }
    case ExprKind::LetRec:
      // Only appears standalone (synthesized predicates); printed in
      // definition form by predicate_to_string.
      return wrap("let rec " + e.name().str() + " = " +
                      print(e.kid(0), LvlExpr) + " in " +
                      print(e.kid(1), LvlExpr),
                  level > LvlExpr);
    case ExprKind::Eq:
      return wrap(print(e.kid(0), LvlUnary) + " = " + print(e.kid(1), LvlUnary),
                  level > LvlCmp);
  }
  return "<expr>";
}

}  // namespace pretty_detail

inline std::string expr_to_string(const Expr& e) {
  return pretty_detail::print(e, pretty_detail::LvlExpr);
}

inline std::string def_to_string(const Def& def) {
  std::string s = "let ";
  if (def.is_rec) s += "rec ";
  s += def.name.str();
  for (const auto& [pname, pty] : def.params)
    s += " (" + pname.str() + " : " + pty.to_string() + ")";
  if (def.result_type) s += " : " + def.result_type->to_string();
  s += " = " + expr_to_string(def.body);
  return s;
}

inline std::string program_to_string(const Program& prog) {
  std::ostringstream out;
  for (const auto& adt : prog.decls->adts()) {
    if (adt.name == Symbol("bool") || adt.name == Symbol("nat")) continue;
    out << "type " << adt.name.str() << " =";
    bool first = true;
    for (const auto& c : adt.ctors) {
      out << (first ? " " : " | ") << c.name.str();
      first = false;
      if (!c.fields.empty()) {
        out << " of ";
        for (std::size_t i = 0; i < c.fields.size(); ++i) {
          if (i) out << " * ";
          Type f = c.fields[i];
          bool paren = f.kind() == TypeKind::Product ||
                       f.kind() == TypeKind::Arrow;
          out << (paren ? "(" + f.to_string() + ")" : f.to_string());
        }
      }
    }
    out << "\n";
  }
  for (const auto& def : prog.prelude) out << def_to_string(def) << "\n";
  out << "module " << prog.module.name.str() << " = struct\n";
  out << "  type t = " << prog.module.concrete.to_string() << "\n";
  for (const auto& def : prog.module.ops)
    out << "  " << def_to_string(def) << "\n";
  out << "end\n";
  out << "spec forall";
  for (const auto& [qname, qty] : prog.spec.quantifiers)
    out << " (" << qname.str() << " : " << qty.to_string() << ")";
  out << " . " << expr_to_string(prog.spec.body) << "\n";
  return out.str();
}

// Structural equality of expression trees (spans ignored).
inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind() || a.num_kids() != b.num_kids()) return false;
  switch (a.kind()) {
    case ExprKind::Var:
      if (a.name() != b.name()) return false;
      break;
    case ExprKind::CtorApp:
      if (a.ctor()->name != b.ctor()->name) return false;
      break;
    case ExprKind::Lambda:
      if (a.param() != b.param() || a.param_type() != b.param_type())
        return false;
      break;
    case ExprKind::Proj:
      if (a.proj_index() != b.proj_index()) return false;
      break;
    case ExprKind::Match: {
      if (a.branches().size() != b.branches().size()) return false;
      for (std::size_t i = 0; i < a.branches().size(); ++i) {
        const auto& ba = a.branches()[i];
        const auto& bb = b.branches()[i];
        if (ba.ctor->name != bb.ctor->name || ba.binders != bb.binders ||
            !expr_equal(Expr(ba.body), Expr(bb.body)))
          return false;
      }
      break;
    }
    case ExprKind::LetRec:
      if (a.name() != b.name() || a.fn_type() != b.fn_type()) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.num_kids(); ++i)
    if (!expr_equal(a.kid(i), b.kid(i))) return false;
  return true;
}

}  // namespace repinv
