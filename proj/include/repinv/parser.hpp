#pragma once

#include <memory>
#include <string>
#include <vector>

#include "repinv/adt.hpp"
#include "repinv/lexer.hpp"
#include "repinv/program.hpp"

namespace repinv {

struct SourceFile {
  std::string text;
  std::string path;
};

// Recursive-descent parser for the benchmark file format:
//
//   prelude    := (type-decl | let-def)*
//   type-decl  := "type" lident "=" ["|"] ctor ("|" ctor)*
//   ctor       := UIdent ["of" ty ("*" ty)*]
//   let-def    := "let" ["rec"] lident param* [":" ty] "=" expr
//   param      := "(" lident ":" ty ")"
//   module     := "module" UIdent "=" "struct" "type" "t" "=" ty
//                 let-def* "end"
//   spec       := "spec" "forall" quant+ "." expr
//
// Inside the module and spec, the type name `t` denotes the abstract type.
class Parser {
 public:
  explicit Parser(const SourceFile& src)
      : toks_(Lexer(src.text).run()), path_(src.path) {
    decls_mut_ = std::make_shared<DeclTable>();
    decls_ = decls_mut_;
  }

  // Parses one definition against an existing declaration table, e.g. a
  // user-supplied invariant for the check subcommand.
  Parser(const SourceFile& src, DeclTablePtr decls, bool allow_abstract)
      : toks_(Lexer(src.text).run()),
        path_(src.path),
        decls_(std::move(decls)),
        allow_abstract_(allow_abstract) {}

  Def parse_single_def() {
    if (!at(Tok::KwLet))
      throw ParseError("expected a let definition", cur().span);
    Def def = parse_let_def(true);
    expect(Tok::Eof);
    return def;
  }

  std::shared_ptr<Program> parse_program() {
    auto prog = std::make_shared<Program>();
    prog->path = path_;
    while (at(Tok::KwType) || at(Tok::KwLet)) {
      if (at(Tok::KwType))
        parse_type_decl();
      else
        prog->prelude.push_back(parse_let_def(false));
    }
    if (!at(Tok::KwModule))
      throw ParseError("missing module block", cur().span);
    prog->module = parse_module();
    if (!at(Tok::KwSpec))
      throw ParseError("missing spec block", cur().span);
    prog->spec = parse_spec();
    expect(Tok::Eof);
    prog->decls = decls_;
    return prog;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  Token advance() { return toks_[pos_++]; }
  Token expect(Tok k) {
    if (!at(k))
      throw ParseError(std::string("expected ") + tok_name(k) + ", got " +
                           tok_name(cur().kind),
                       cur().span);
    return advance();
  }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }

  // --- types -----------------------------------------------------------

  Type parse_type_atom() {
    if (accept(Tok::LParen)) {
      Type t = parse_type();
      expect(Tok::RParen);
      return t;
    }
    Token name = expect(Tok::LIdent);
    if (name.text == "t") {
      if (!allow_abstract_)
        throw ParseError("the abstract type t is only available inside the "
                         "module and spec blocks",
                         name.span);
      return Type::abstract();
    }
    return Type::named(Symbol(name.text));
  }

  Type parse_type_prod() {
    Type t = parse_type_atom();
    if (accept(Tok::Star)) return Type::product(t, parse_type_prod());
    return t;
  }

  Type parse_type() {
    Type t = parse_type_prod();
    if (accept(Tok::Arrow)) return Type::arrow(t, parse_type());
    return t;
  }

  void check_type_names(const Type& t, Span sp) {
    switch (t.kind()) {
      case TypeKind::Named:
        if (!decls_->adt(t.name()))
          throw ParseError("unknown type: " + t.name().str(), sp);
        return;
      case TypeKind::Abstract:
        return;
      case TypeKind::Product:
      case TypeKind::Arrow:
        check_type_names(t.left(), sp);
        check_type_names(t.right(), sp);
        return;
    }
  }

  // --- declarations ----------------------------------------------------

  void parse_type_decl() {
    Span sp = expect(Tok::KwType).span;
    Token name = expect(Tok::LIdent);
    if (name.text == "t")
      throw ParseError("the type name t is reserved for the abstract type",
                       name.span);
    expect(Tok::Eq);
    accept(Tok::Bar);
    std::vector<DeclTable::CtorSpec> ctors;
    do {
      Token cname = expect(Tok::UIdent);
      DeclTable::CtorSpec spec;
      spec.name = Symbol(cname.text);
      if (accept(Tok::KwOf)) {
        spec.fields.push_back(parse_type_atom());
        while (accept(Tok::Star)) spec.fields.push_back(parse_type_atom());
      }
      ctors.push_back(std::move(spec));
    } while (accept(Tok::Bar));
    const AdtInfo* adt =
        decls_mut_->declare(Symbol(name.text), std::move(ctors), sp);
    for (const auto& c : adt->ctors)
      for (const auto& f : c.fields) check_type_names(f, sp);
  }

  Def parse_let_def(bool in_module) {
    Span sp = expect(Tok::KwLet).span;
    Def def;
    def.span = sp;
    def.is_rec = accept(Tok::KwRec);
    def.name = Symbol(expect(Tok::LIdent).text);
    while (at(Tok::LParen)) {
      expect(Tok::LParen);
      Token pname = expect(Tok::LIdent);
      expect(Tok::Colon);
      Type pty = parse_type();
      check_type_names(pty, pname.span);
      expect(Tok::RParen);
      def.params.emplace_back(Symbol(pname.text), pty);
    }
    if (accept(Tok::Colon)) {
      Type rty = parse_type();
      check_type_names(rty, sp);
      def.result_type = rty;
    }
    expect(Tok::Eq);
    def.body = parse_expr();
    (void)in_module;
    return def;
  }

  ModuleDecl parse_module() {
    ModuleDecl m;
    m.span = expect(Tok::KwModule).span;
    m.name = Symbol(expect(Tok::UIdent).text);
    expect(Tok::Eq);
    expect(Tok::KwStruct);
    expect(Tok::KwType);
    Token tname = expect(Tok::LIdent);
    if (tname.text != "t")
      throw ParseError("module must declare its abstract type as 'type t'",
                       tname.span);
    expect(Tok::Eq);
    m.concrete = parse_type();
    check_type_names(m.concrete, tname.span);
    allow_abstract_ = true;
    while (at(Tok::KwLet)) m.ops.push_back(parse_let_def(true));
    expect(Tok::KwEnd);
    allow_abstract_ = false;
    return m;
  }

  SpecDecl parse_spec() {
    SpecDecl s;
    s.span = expect(Tok::KwSpec).span;
    expect(Tok::KwForall);
    allow_abstract_ = true;
    while (at(Tok::LParen)) {
      expect(Tok::LParen);
      Token qname = expect(Tok::LIdent);
      expect(Tok::Colon);
      Type qty = parse_type();
      check_type_names(qty, qname.span);
      expect(Tok::RParen);
      for (const auto& q : s.quantifiers)
        if (q.first == Symbol(qname.text))
          throw ParseError("duplicate quantifier: " + qname.text, qname.span);
      s.quantifiers.emplace_back(Symbol(qname.text), qty);
    }
    if (s.quantifiers.empty())
      throw ParseError("spec needs at least one quantifier", s.span);
    expect(Tok::Dot);
    s.body = parse_expr();
    allow_abstract_ = false;
    return s;
  }

  // --- expressions -------------------------------------------------------

  Expr parse_expr() {
    if (at(Tok::KwIf)) {
      Span sp = advance().span;
      Expr cond = parse_expr();
      expect(Tok::KwThen);
      Expr then_e = parse_expr();
      expect(Tok::KwElse);
      Expr else_e = parse_expr();
      return make_if(cond, then_e, else_e, sp);
    }
    if (at(Tok::KwFun)) {
      Span sp = advance().span;
      expect(Tok::LParen);
      Token pname = expect(Tok::LIdent);
      expect(Tok::Colon);
      Type pty = parse_type();
      check_type_names(pty, pname.span);
      expect(Tok::RParen);
      expect(Tok::Arrow);
      Expr body = parse_expr();
      return Expr::lambda(Symbol(pname.text), pty, body, sp);
    }
    return parse_or();
  }

  Expr parse_or() {
    Expr lhs = parse_and();
    if (accept(Tok::OrOr)) {
      Expr rhs = parse_or();
      // a || b  ~>  match a with True -> True | False -> b end
      return make_bool_match(lhs, make_true(lhs.span()), rhs, lhs.span());
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_cmp();
    if (accept(Tok::AndAnd)) {
      Expr rhs = parse_and();
      // a && b  ~>  match a with True -> b | False -> False end
      return make_bool_match(lhs, rhs, make_false(lhs.span()), lhs.span());
    }
    return lhs;
  }

  Expr parse_cmp() {
    Expr lhs = parse_unary();
    if (at(Tok::Eq) || at(Tok::Neq)) {
      bool neq = advance().kind == Tok::Neq;
      Expr rhs = parse_unary();
      Expr eq = Expr::eq(lhs, rhs, lhs.span());
      return neq ? make_not(eq, lhs.span()) : eq;
    }
    return lhs;
  }

  Expr parse_unary() {
    if (at(Tok::KwNot)) {
      Span sp = advance().span;
      return make_not(parse_unary(), sp);
    }
    return parse_app();
  }

  bool starts_atom() const {
    switch (cur().kind) {
      case Tok::LIdent:
      case Tok::UIdent:
      case Tok::Int:
      case Tok::LParen:
      case Tok::KwMatch:
        return true;
      default:
        return false;
    }
  }

  Expr parse_app() {
    Expr e = parse_postfix();
    while (starts_atom()) {
      Expr arg = parse_postfix();
      e = Expr::app(e, arg, e.span());
    }
    return e;
  }

  Expr parse_postfix() {
    Expr e = parse_atom();
    while (at(Tok::Dot) &&
           (peek().kind == Tok::Int &&
            (peek().int_value == 1 || peek().int_value == 2))) {
      advance();
      Token idx = advance();
      e = Expr::proj(static_cast<int>(idx.int_value), e, e.span());
    }
    return e;
  }

  Expr parse_atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::LIdent: {
        advance();
        return Expr::var(Symbol(t.text), t.span);
      }
      case Tok::Int: {
        advance();
        return make_nat_literal(t.int_value, t.span);
      }
      case Tok::UIdent:
        return parse_ctor_app();
      case Tok::LParen: {
        advance();
        Expr e = parse_expr();
        if (accept(Tok::Comma)) {
          Expr snd = parse_expr();
          expect(Tok::RParen);
          return Expr::pair(e, snd, t.span);
        }
        expect(Tok::RParen);
        return e;
      }
      case Tok::KwMatch:
        return parse_match();
      default:
        throw ParseError(std::string("unexpected ") + tok_name(t.kind) +
                             " in expression",
                         t.span);
    }
  }

  Expr parse_ctor_app() {
    Token name = expect(Tok::UIdent);
    const CtorInfo* ctor = decls_->ctor(Symbol(name.text));
    if (!ctor)
      throw ParseError("unknown constructor: " + name.text, name.span);
    std::vector<Expr> args;
    if (ctor->fields.size() > 0 && at(Tok::LParen)) {
      advance();
      args.push_back(parse_expr());
      while (accept(Tok::Comma)) args.push_back(parse_expr());
      expect(Tok::RParen);
      if (args.size() != ctor->fields.size()) {
        // One product field written as (a, b): fold args into pairs.
        if (ctor->fields.size() == 1) {
          Expr folded = args.back();
          for (auto it = args.rbegin() + 1; it != args.rend(); ++it)
            folded = Expr::pair(*it, folded, name.span);
          args = {folded};
        } else {
          throw ParseError("constructor " + name.text + " expects " +
                               std::to_string(ctor->fields.size()) +
                               " arguments",
                           name.span);
        }
      }
    }
    return Expr::ctor_app(ctor, std::move(args), name.span);
  }

  Expr parse_match() {
    Span sp = expect(Tok::KwMatch).span;
    Expr scrutinee = parse_expr();
    expect(Tok::KwWith);
    accept(Tok::Bar);
    std::vector<MatchBranch> branches;
    do {
      MatchBranch br;
      Token cname = expect(Tok::UIdent);
      br.span = cname.span;
      const CtorInfo* ctor = decls_->ctor(Symbol(cname.text));
      if (!ctor)
        throw ParseError("unknown constructor in pattern: " + cname.text,
                         cname.span);
      br.ctor = ctor;
      if (at(Tok::LParen)) {
        advance();
        br.binders.push_back(Symbol(expect(Tok::LIdent).text));
        while (accept(Tok::Comma))
          br.binders.push_back(Symbol(expect(Tok::LIdent).text));
        expect(Tok::RParen);
      }
      expect(Tok::Arrow);
      br.body = parse_expr().node();
      branches.push_back(std::move(br));
    } while (accept(Tok::Bar));
    expect(Tok::KwEnd);
    return Expr::match(scrutinee, std::move(branches), sp);
  }

  // --- desugarings -------------------------------------------------------

  Expr make_true(Span sp) { return Expr::ctor_app(decls_->bool_true(), {}, sp); }
  Expr make_false(Span sp) {
    return Expr::ctor_app(decls_->bool_false(), {}, sp);
  }

  Expr make_bool_match(Expr cond, Expr on_true, Expr on_false, Span sp) {
    std::vector<MatchBranch> branches(2);
    branches[0].ctor = decls_->bool_true();
    branches[0].body = on_true.node();
    branches[0].span = sp;
    branches[1].ctor = decls_->bool_false();
    branches[1].body = on_false.node();
    branches[1].span = sp;
    return Expr::match(cond, std::move(branches), sp);
  }

  Expr make_if(Expr cond, Expr then_e, Expr else_e, Span sp) {
    return make_bool_match(cond, then_e, else_e, sp);
  }

  Expr make_not(Expr e, Span sp) {
    return make_bool_match(e, make_false(sp), make_true(sp), sp);
  }

  Expr make_nat_literal(long n, Span sp) {
    Expr e = Expr::ctor_app(decls_->nat_z(), {}, sp);
    for (long i = 0; i < n; ++i)
      e = Expr::ctor_app(decls_->nat_s(), {e}, sp);
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string path_;
  std::shared_ptr<DeclTable> decls_mut_;
  DeclTablePtr decls_;
  bool allow_abstract_ = false;
};

inline std::shared_ptr<Program> parse_program(const SourceFile& src) {
  return Parser(src).parse_program();
}

inline Def parse_def(const SourceFile& src, DeclTablePtr decls,
                     bool allow_abstract = true) {
  return Parser(src, std::move(decls), allow_abstract).parse_single_def();
}

}  // namespace repinv
