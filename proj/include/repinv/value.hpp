#pragma once

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "repinv/adt.hpp"
#include "repinv/basic.hpp"
#include "repinv/expr.hpp"

namespace repinv {

class Value;
struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

struct ClosureData {
  Symbol param;
  Type param_type;
  Expr body;
  Env env;
  Symbol rec_name;  // empty unless this closure may call itself
  Expr source;      // closed term this closure came from, when known
};

struct EvalContext;

// Host-implemented function value; used for contract instrumentation and
// pluggable predicates. Never enumerated, sized, or compared.
struct NativeFn {
  std::function<Value(const Value&, EvalContext&)> fn;
  std::string label;
};

enum class ValueKind { Ctor, Pair, Closure, Native };

struct ValueNode {
  ValueKind kind;
  const CtorInfo* ctor = nullptr;
  std::vector<Value> kids;  // ctor args, or the two pair components
  std::shared_ptr<const ClosureData> closure;
  std::shared_ptr<const NativeFn> native;
  std::uint64_t hash = 0;
  std::int32_t node_count = 1;
  bool closure_free = true;
};

class Value {
 public:
  Value() = default;

  static Value ctor(const CtorInfo* info, std::vector<Value> args);
  static Value pair(Value a, Value b);
  static Value closure(std::shared_ptr<const ClosureData> data) {
    auto n = std::make_shared<ValueNode>();
    n->kind = ValueKind::Closure;
    n->closure = std::move(data);
    n->closure_free = false;
    return Value(std::move(n));
  }
  static Value native(std::shared_ptr<const NativeFn> fn) {
    auto n = std::make_shared<ValueNode>();
    n->kind = ValueKind::Native;
    n->native = std::move(fn);
    n->closure_free = false;
    return Value(std::move(n));
  }

  bool defined() const { return node_ != nullptr; }
  ValueKind kind() const { return node_->kind; }
  const CtorInfo* ctor_info() const { return node_->ctor; }
  const std::vector<Value>& kids() const { return node_->kids; }
  const Value& kid(std::size_t i) const { return node_->kids[i]; }
  const ClosureData& closure_data() const { return *node_->closure; }
  const NativeFn& native_fn() const { return *node_->native; }
  bool closure_free() const { return node_->closure_free; }
  std::uint64_t hash() const { return node_ ? node_->hash : 0; }
  const std::shared_ptr<const ValueNode>& node() const { return node_; }

  bool is_fn() const {
    return node_ &&
           (node_->kind == ValueKind::Closure ||
            node_->kind == ValueKind::Native);
  }

 private:
  explicit Value(std::shared_ptr<const ValueNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ValueNode> node_;
};

inline Value Value::ctor(const CtorInfo* info, std::vector<Value> args) {
  auto n = std::make_shared<ValueNode>();
  n->kind = ValueKind::Ctor;
  n->ctor = info;
  std::uint64_t h = hash_combine(11, info->name.hash());
  for (const auto& a : args) {
    h = hash_combine(h, a.hash());
    n->node_count += a.node()->node_count;
    n->closure_free = n->closure_free && a.closure_free();
  }
  n->hash = h;
  n->kids = std::move(args);
  return Value(std::move(n));
}

inline Value Value::pair(Value a, Value b) {
  auto n = std::make_shared<ValueNode>();
  n->kind = ValueKind::Pair;
  n->hash = hash_combine(hash_combine(13, a.hash()), b.hash());
  n->node_count = 1 + a.node()->node_count + b.node()->node_count;
  n->closure_free = a.closure_free() && b.closure_free();
  n->kids.push_back(std::move(a));
  n->kids.push_back(std::move(b));
  return Value(std::move(n));
}

// Node count: 1 per constructor or pair node, children added recursively.
inline int value_size(const Value& v) {
  if (!v.closure_free()) throw SizeOfClosure();
  return v.node()->node_count;
}

inline bool structural_equal(const Value& a, const Value& b) {
  if (!a.closure_free() || !b.closure_free()) throw ClosureCompare();
  if (a.node() == b.node()) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  if (a.kind() == ValueKind::Ctor && a.ctor_info() != b.ctor_info())
    return false;
  if (a.kids().size() != b.kids().size()) return false;
  for (std::size_t i = 0; i < a.kids().size(); ++i)
    if (!structural_equal(a.kid(i), b.kid(i))) return false;
  return true;
}

// Total order used by enumeration and deterministic set output:
// size first, then constructor declaration index, then children
// lexicographically. Only meaningful between values of one type.
inline int canonical_compare(const Value& a, const Value& b) {
  int sa = value_size(a), sb = value_size(b);
  if (sa != sb) return sa < sb ? -1 : 1;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  if (a.kind() == ValueKind::Ctor && a.ctor_info() != b.ctor_info()) {
    int ia = a.ctor_info()->index, ib = b.ctor_info()->index;
    if (ia != ib) return ia < ib ? -1 : 1;
    // distinct ctors, same index: different ADTs; order by name
    return a.ctor_info()->name < b.ctor_info()->name ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.kids().size() && i < b.kids().size(); ++i) {
    int c = canonical_compare(a.kid(i), b.kid(i));
    if (c != 0) return c;
  }
  if (a.kids().size() != b.kids().size())
    return a.kids().size() < b.kids().size() ? -1 : 1;
  return 0;
}

inline bool canonical_less(const Value& a, const Value& b) {
  return canonical_compare(a, b) < 0;
}

// Prints nat chains as decimal and everything else in surface syntax.
inline std::string value_to_string(const Value& v) {
  if (!v.defined()) return "<undef>";
  switch (v.kind()) {
    case ValueKind::Ctor: {
      const CtorInfo* c = v.ctor_info();
      if (c->adt->name == Symbol("nat")) {
        long n = 0;
        Value cur = v;
        while (cur.ctor_info()->name == Symbol("S")) {
          ++n;
          cur = cur.kid(0);
        }
        return std::to_string(n);
      }
      if (v.kids().empty()) return c->name.str();
      std::string s = c->name.str() + " (";
      for (std::size_t i = 0; i < v.kids().size(); ++i) {
        if (i) s += ", ";
        s += value_to_string(v.kid(i));
      }
      return s + ")";
    }
    case ValueKind::Pair:
      return "(" + value_to_string(v.kid(0)) + ", " +
             value_to_string(v.kid(1)) + ")";
    case ValueKind::Closure:
      return "<fun>";
    case ValueKind::Native:
      return "<native:" + v.native_fn().label + ">";
  }
  return "<invalid>";
}

struct ValueHash {
  std::size_t operator()(const Value& v) const {
    return static_cast<std::size_t>(v.hash());
  }
};
struct ValueEq {
  bool operator()(const Value& a, const Value& b) const {
    return structural_equal(a, b);
  }
};

// Insertion-ordered set of closure-free values with O(1) membership.
class ValueSet {
 public:
  bool insert(const Value& v) {
    if (index_.count(v)) return false;
    index_.emplace(v, items_.size());
    items_.push_back(v);
    return true;
  }
  bool contains(const Value& v) const { return index_.count(v) > 0; }
  const std::vector<Value>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  void clear() {
    items_.clear();
    index_.clear();
  }
  bool erase(const Value& v) {
    if (!index_.count(v)) return false;
    std::vector<Value> rest;
    rest.reserve(items_.size() - 1);
    for (const Value& x : items_)
      if (!structural_equal(x, v)) rest.push_back(x);
    items_.swap(rest);
    index_.clear();
    for (std::size_t i = 0; i < items_.size(); ++i)
      index_.emplace(items_[i], i);
    return true;
  }

 private:
  std::vector<Value> items_;
  std::unordered_map<Value, std::size_t, ValueHash, ValueEq> index_;
};

// --- environments -------------------------------------------------------

struct EnvNode {
  Symbol name;
  Value value;
  Env next;
};

inline Env env_bind(Env env, Symbol name, Value v) {
  auto n = std::make_shared<EnvNode>();
  n->name = name;
  n->value = std::move(v);
  n->next = std::move(env);
  return n;
}

inline const Value* env_lookup(const Env& env, Symbol name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return &n->value;
  return nullptr;
}

}  // namespace repinv
