#pragma once

#include <cstdint>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace repinv {

// Interned identifier. Comparison and hashing are pointer-based; the
// backing table lives for the whole process.
class Symbol {
 public:
  Symbol() : str_(nullptr) {}
  explicit Symbol(const std::string& s) : str_(intern(s)) {}
  explicit Symbol(const char* s) : str_(intern(s)) {}

  const std::string& str() const {
    static const std::string empty;
    return str_ ? *str_ : empty;
  }
  const char* c_str() const { return str().c_str(); }
  bool empty() const { return str_ == nullptr; }

  bool operator==(const Symbol& o) const { return str_ == o.str_; }
  bool operator!=(const Symbol& o) const { return str_ != o.str_; }
  bool operator<(const Symbol& o) const { return str() < o.str(); }

  std::size_t hash() const {
    return std::hash<const std::string*>()(str_);
  }

 private:
  static const std::string* intern(const std::string& s) {
    static std::mutex mu;
    static std::set<std::string> table;
    std::lock_guard<std::mutex> lock(mu);
    return &*table.insert(s).first;
  }
  const std::string* str_;
};

struct SymbolHash {
  std::size_t operator()(const Symbol& s) const { return s.hash(); }
};

// Half-open source region, 1-based lines and columns.
struct Span {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;

  static Span at(int line, int col) { return Span{line, col, line, col}; }
  Span merge(const Span& o) const {
    Span s = *this;
    if (o.end_line > s.end_line ||
        (o.end_line == s.end_line && o.end_col > s.end_col)) {
      s.end_line = o.end_line;
      s.end_col = o.end_col;
    }
    return s;
  }
  std::string to_string() const {
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  Span span;
  std::string message;
  std::string hint;
};

// --- error hierarchy ---------------------------------------------------

class LangError : public std::runtime_error {
 public:
  LangError(std::string msg, Span span)
      : std::runtime_error(std::move(msg)), span(span) {}
  Span span;
};

enum class TypeErrorKind {
  UnboundVariable,
  ConstructorArityMismatch,
  NonExhaustiveMatch,
  TypeMismatch,
  InterfaceMismatch,
};

class TypeError : public LangError {
 public:
  TypeError(TypeErrorKind kind, std::string msg, Span span)
      : LangError(std::move(msg), span), kind(kind) {}
  TypeErrorKind kind;
};

class ParseError : public LangError {
 public:
  using LangError::LangError;
};

class EvalError : public LangError {
 public:
  using LangError::LangError;
};

// Step budget ran out; possible divergence. Never swallowed silently.
class FuelExhausted : public EvalError {
 public:
  explicit FuelExhausted(Span span = {})
      : EvalError("evaluation step budget exhausted (possible divergence)",
                  span) {}
};

class MatchFailure : public EvalError {
 public:
  explicit MatchFailure(std::string msg, Span span = {})
      : EvalError(std::move(msg), span) {}
};

class SizeOfClosure : public EvalError {
 public:
  SizeOfClosure() : EvalError("value_size of a closure is undefined", {}) {}
};

class ClosureCompare : public EvalError {
 public:
  ClosureCompare()
      : EvalError("closures cannot be compared for equality", {}) {}
};

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("run timed out") {}
};

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  // 64-bit mix from boost::hash_combine, widened.
  a ^= b + 0x9e3779b97f4a7c15ull + (a << 12) + (a >> 4);
  return a;
}

}  // namespace repinv
