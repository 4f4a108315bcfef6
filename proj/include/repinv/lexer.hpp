#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "repinv/basic.hpp"

namespace repinv {

enum class Tok {
  LIdent,
  UIdent,
  Int,
  KwType,
  KwOf,
  KwLet,
  KwRec,
  KwModule,
  KwStruct,
  KwEnd,
  KwSpec,
  KwForall,
  KwMatch,
  KwWith,
  KwIf,
  KwThen,
  KwElse,
  KwFun,
  KwNot,
  Eq,        // =
  Neq,       // <>
  AndAnd,    // &&
  OrOr,      // ||
  LParen,
  RParen,
  Comma,
  Dot,
  Arrow,     // ->
  Bar,       // |
  Colon,
  Star,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  long int_value = 0;
  Span span;
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::LIdent: return "identifier";
    case Tok::UIdent: return "constructor name";
    case Tok::Int: return "integer literal";
    case Tok::KwType: return "'type'";
    case Tok::KwOf: return "'of'";
    case Tok::KwLet: return "'let'";
    case Tok::KwRec: return "'rec'";
    case Tok::KwModule: return "'module'";
    case Tok::KwStruct: return "'struct'";
    case Tok::KwEnd: return "'end'";
    case Tok::KwSpec: return "'spec'";
    case Tok::KwForall: return "'forall'";
    case Tok::KwMatch: return "'match'";
    case Tok::KwWith: return "'with'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwFun: return "'fun'";
    case Tok::KwNot: return "'not'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'<>'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'->'";
    case Tok::Bar: return "'|'";
    case Tok::Colon: return "':'";
    case Tok::Star: return "'*'";
    case Tok::Eof: return "end of file";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string text) : text_(std::move(text)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      bool eof = t.kind == Tok::Eof;
      out.push_back(std::move(t));
      if (eof) break;
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '(' && peek(1) == '*') {
        Span start = Span::at(line_, col_);
        advance();
        advance();
        int depth = 1;
        while (depth > 0) {
          if (pos_ >= text_.size())
            throw ParseError("unterminated comment", start);
          if (peek() == '(' && peek(1) == '*') {
            advance();
            advance();
            ++depth;
          } else if (peek() == '*' && peek(1) == ')') {
            advance();
            advance();
            --depth;
          } else {
            advance();
          }
        }
      } else {
        return;
      }
    }
  }

  Token next() {
    skip_trivia();
    Token t;
    t.span = Span::at(line_, col_);
    if (pos_ >= text_.size()) {
      t.kind = Tok::Eof;
      return t;
    }
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek())) ||
             peek() == '_' || peek() == '\'')
        word += advance();
      t.text = word;
      t.span.end_line = line_;
      t.span.end_col = col_;
      if (word == "type") t.kind = Tok::KwType;
      else if (word == "of") t.kind = Tok::KwOf;
      else if (word == "let") t.kind = Tok::KwLet;
      else if (word == "rec") t.kind = Tok::KwRec;
      else if (word == "module") t.kind = Tok::KwModule;
      else if (word == "struct") t.kind = Tok::KwStruct;
      else if (word == "end") t.kind = Tok::KwEnd;
      else if (word == "spec") t.kind = Tok::KwSpec;
      else if (word == "forall") t.kind = Tok::KwForall;
      else if (word == "match") t.kind = Tok::KwMatch;
      else if (word == "with") t.kind = Tok::KwWith;
      else if (word == "if") t.kind = Tok::KwIf;
      else if (word == "then") t.kind = Tok::KwThen;
      else if (word == "else") t.kind = Tok::KwElse;
      else if (word == "fun") t.kind = Tok::KwFun;
      else if (word == "not") t.kind = Tok::KwNot;
      else if (std::isupper(static_cast<unsigned char>(word[0])))
        t.kind = Tok::UIdent;
      else
        t.kind = Tok::LIdent;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (std::isdigit(static_cast<unsigned char>(peek())))
        num += advance();
      t.kind = Tok::Int;
      t.text = num;
      t.int_value = std::stol(num);
      t.span.end_line = line_;
      t.span.end_col = col_;
      return t;
    }
    advance();
    switch (c) {
      case '=': t.kind = Tok::Eq; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case ',': t.kind = Tok::Comma; break;
      case '.': t.kind = Tok::Dot; break;
      case '|':
        if (peek() == '|') {
          advance();
          t.kind = Tok::OrOr;
        } else {
          t.kind = Tok::Bar;
        }
        break;
      case ':': t.kind = Tok::Colon; break;
      case '*': t.kind = Tok::Star; break;
      case '&':
        if (peek() == '&') {
          advance();
          t.kind = Tok::AndAnd;
        } else {
          throw ParseError("unexpected character '&'", t.span);
        }
        break;
      case '<':
        if (peek() == '>') {
          advance();
          t.kind = Tok::Neq;
        } else {
          throw ParseError("unexpected character '<'", t.span);
        }
        break;
      case '-':
        if (peek() == '>') {
          advance();
          t.kind = Tok::Arrow;
        } else {
          throw ParseError("unexpected character '-'", t.span);
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         t.span);
    }
    t.span.end_line = line_;
    t.span.end_col = col_;
    return t;
  }

  std::string text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace repinv
