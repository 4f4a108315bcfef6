#pragma once

#include <memory>
#include <vector>

#include "repinv/adt.hpp"
#include "repinv/basic.hpp"
#include "repinv/type.hpp"

namespace repinv {

enum class ExprKind {
  Var,      // name
  CtorApp,  // ctor, args
  Lambda,   // param, param_type, kids[0] = body
  App,      // kids[0] = fn, kids[1] = arg
  Pair,     // kids[0], kids[1]
  Proj,     // proj_index (1 or 2), kids[0]
  Match,    // kids[0] = scrutinee, branches
  LetRec,   // name, fn_type, kids[0] = fn (Lambda), kids[1] = body
  Eq,       // kids[0], kids[1]; structural equality on arrow-free values
};

class Expr;

struct MatchBranch {
  const CtorInfo* ctor = nullptr;
  std::vector<Symbol> binders;
  std::shared_ptr<const struct ExprNode> body;
  Span span;
};

struct ExprNode {
  ExprKind kind;
  Span span;
  Symbol name;
  const CtorInfo* ctor = nullptr;
  std::vector<std::shared_ptr<const ExprNode>> kids;
  Symbol param;
  Type param_type;
  Type fn_type;  // LetRec: declared type of the bound function
  int proj_index = 0;
  std::vector<MatchBranch> branches;
  int size = 1;  // node count, precomputed
};

// Immutable expression tree with shared subtrees.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

  static Expr var(Symbol name, Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Var;
    n->name = name;
    n->span = span;
    return Expr(std::move(n));
  }
  static Expr ctor_app(const CtorInfo* ctor, std::vector<Expr> args,
                       Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::CtorApp;
    n->ctor = ctor;
    n->span = span;
    for (auto& a : args) {
      n->size += a.size();
      n->kids.push_back(a.node());
    }
    return Expr(std::move(n));
  }
  static Expr lambda(Symbol param, Type param_type, Expr body, Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Lambda;
    n->param = param;
    n->param_type = param_type;
    n->span = span;
    n->size = 1 + body.size();
    n->kids.push_back(body.node());
    return Expr(std::move(n));
  }
  static Expr app(Expr fn, Expr arg, Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::App;
    n->span = span;
    n->size = 1 + fn.size() + arg.size();
    n->kids.push_back(fn.node());
    n->kids.push_back(arg.node());
    return Expr(std::move(n));
  }
  static Expr pair(Expr a, Expr b, Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Pair;
    n->span = span;
    n->size = 1 + a.size() + b.size();
    n->kids.push_back(a.node());
    n->kids.push_back(b.node());
    return Expr(std::move(n));
  }
  static Expr proj(int index, Expr e, Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Proj;
    n->proj_index = index;
    n->span = span;
    n->size = 1 + e.size();
    n->kids.push_back(e.node());
    return Expr(std::move(n));
  }
  static Expr match(Expr scrutinee, std::vector<MatchBranch> branches,
                    Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Match;
    n->span = span;
    n->size = 1 + scrutinee.size();
    for (const auto& b : branches) n->size += 1 + b.body->size;
    n->kids.push_back(scrutinee.node());
    n->branches = std::move(branches);
    return Expr(std::move(n));
  }
  static Expr let_rec(Symbol name, Type fn_type, Expr fn, Expr body,
                      Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::LetRec;
    n->name = name;
    n->fn_type = fn_type;
    n->span = span;
    n->size = 1 + fn.size() + body.size();
    n->kids.push_back(fn.node());
    n->kids.push_back(body.node());
    return Expr(std::move(n));
  }
  static Expr eq(Expr a, Expr b, Span span = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Eq;
    n->span = span;
    n->size = 1 + a.size() + b.size();
    n->kids.push_back(a.node());
    n->kids.push_back(b.node());
    return Expr(std::move(n));
  }

  bool defined() const { return node_ != nullptr; }
  ExprKind kind() const { return node_->kind; }
  Span span() const { return node_->span; }
  Symbol name() const { return node_->name; }
  const CtorInfo* ctor() const { return node_->ctor; }
  Symbol param() const { return node_->param; }
  Type param_type() const { return node_->param_type; }
  Type fn_type() const { return node_->fn_type; }
  int proj_index() const { return node_->proj_index; }
  const std::vector<MatchBranch>& branches() const { return node_->branches; }
  Expr kid(std::size_t i) const { return Expr(node_->kids[i]); }
  std::size_t num_kids() const { return node_->kids.size(); }
  int size() const { return node_ ? node_->size : 0; }
  const std::shared_ptr<const ExprNode>& node() const { return node_; }

 private:
  std::shared_ptr<const ExprNode> node_;
};

}  // namespace repinv
