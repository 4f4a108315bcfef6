#pragma once

#include <cassert>
#include <memory>
#include <string>

#include "repinv/basic.hpp"

namespace repinv {

enum class TypeKind { Named, Abstract, Product, Arrow };

class Type;
struct TypeNode {
  TypeKind kind;
  Symbol name;  // Named only
  std::shared_ptr<const TypeNode> a, b;
  std::uint64_t hash = 0;
};

// Immutable structural type tree. `Abstract` is the module's single
// abstract type; it only appears in interface signatures and specs.
class Type {
 public:
  Type() = default;

  static Type named(Symbol n) {
    auto node = std::make_shared<TypeNode>();
    node->kind = TypeKind::Named;
    node->name = n;
    node->hash = hash_combine(1, n.hash());
    return Type(std::move(node));
  }
  static Type abstract() {
    static const Type t = [] {
      auto node = std::make_shared<TypeNode>();
      node->kind = TypeKind::Abstract;
      node->hash = 2;
      return Type(std::move(node));
    }();
    return t;
  }
  static Type product(Type l, Type r) {
    auto node = std::make_shared<TypeNode>();
    node->kind = TypeKind::Product;
    node->hash = hash_combine(hash_combine(3, l.hash()), r.hash());
    node->a = l.node_;
    node->b = r.node_;
    return Type(std::move(node));
  }
  static Type arrow(Type dom, Type cod) {
    auto node = std::make_shared<TypeNode>();
    node->kind = TypeKind::Arrow;
    node->hash = hash_combine(hash_combine(4, dom.hash()), cod.hash());
    node->a = dom.node_;
    node->b = cod.node_;
    return Type(std::move(node));
  }

  bool defined() const { return node_ != nullptr; }
  TypeKind kind() const { return node_->kind; }
  Symbol name() const { return node_->name; }
  Type left() const { return Type(node_->a); }
  Type right() const { return Type(node_->b); }
  Type dom() const { return Type(node_->a); }
  Type cod() const { return Type(node_->b); }
  std::uint64_t hash() const { return node_ ? node_->hash : 0; }

  bool operator==(const Type& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (node_->hash != o.node_->hash || node_->kind != o.node_->kind)
      return false;
    switch (node_->kind) {
      case TypeKind::Named:
        return node_->name == o.node_->name;
      case TypeKind::Abstract:
        return true;
      case TypeKind::Product:
      case TypeKind::Arrow:
        return left() == o.left() && right() == o.right();
    }
    return false;
  }
  bool operator!=(const Type& o) const { return !(*this == o); }

  std::string to_string() const {
    if (!node_) return "<undef>";
    switch (node_->kind) {
      case TypeKind::Named:
        return node_->name.str();
      case TypeKind::Abstract:
        return "t";
      case TypeKind::Product: {
        std::string l = left().to_string();
        std::string r = right().to_string();
        if (left().defined() &&
            (left().kind() == TypeKind::Product ||
             left().kind() == TypeKind::Arrow))
          l = "(" + l + ")";
        if (right().defined() && right().kind() == TypeKind::Arrow)
          r = "(" + r + ")";
        return l + " * " + r;
      }
      case TypeKind::Arrow: {
        std::string d = dom().to_string();
        if (dom().kind() == TypeKind::Arrow) d = "(" + d + ")";
        return d + " -> " + cod().to_string();
      }
    }
    return "<invalid>";
  }

 private:
  explicit Type(std::shared_ptr<const TypeNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TypeNode> node_;
};

struct TypeHash {
  std::size_t operator()(const Type& t) const {
    return static_cast<std::size_t>(t.hash());
  }
};

inline bool contains_abstract(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Named:
      return false;
    case TypeKind::Abstract:
      return true;
    case TypeKind::Product:
    case TypeKind::Arrow:
      return contains_abstract(t.left()) || contains_abstract(t.right());
  }
  return false;
}

inline bool contains_arrow(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Arrow:
      return true;
    case TypeKind::Product:
      return contains_arrow(t.left()) || contains_arrow(t.right());
    default:
      return false;
  }
}

// 0-types: base ADTs, the abstract type, and products thereof.
inline bool is_zero_order(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Named:
    case TypeKind::Abstract:
      return true;
    case TypeKind::Product:
      return is_zero_order(t.left()) && is_zero_order(t.right());
    case TypeKind::Arrow:
      return false;
  }
  return false;
}

// 1-types: sigma | sigma -> tau | tau * tau. Interface signatures must
// stay inside this grammar in first-order mode.
inline bool is_first_order(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Named:
    case TypeKind::Abstract:
      return true;
    case TypeKind::Product:
      return is_first_order(t.left()) && is_first_order(t.right());
    case TypeKind::Arrow:
      return is_zero_order(t.dom()) && is_first_order(t.cod());
  }
  return false;
}

inline Type substitute_abstract(const Type& t, const Type& concrete) {
  assert(!contains_abstract(concrete));
  switch (t.kind()) {
    case TypeKind::Named:
      return t;
    case TypeKind::Abstract:
      return concrete;
    case TypeKind::Product:
      return Type::product(substitute_abstract(t.left(), concrete),
                           substitute_abstract(t.right(), concrete));
    case TypeKind::Arrow:
      return Type::arrow(substitute_abstract(t.dom(), concrete),
                         substitute_abstract(t.cod(), concrete));
  }
  return t;
}

// True if the abstract type occurs somewhere the module must uphold the
// result-side relation (positive position when `positive` is true).
inline bool has_positive_abstract(const Type& t, bool positive = true) {
  switch (t.kind()) {
    case TypeKind::Named:
      return false;
    case TypeKind::Abstract:
      return positive;
    case TypeKind::Product:
      return has_positive_abstract(t.left(), positive) ||
             has_positive_abstract(t.right(), positive);
    case TypeKind::Arrow:
      return has_positive_abstract(t.dom(), !positive) ||
             has_positive_abstract(t.cod(), positive);
  }
  return false;
}

}  // namespace repinv
