#pragma once

#include <deque>
#include <memory>
#include <unordered_map>
#include <vector>

#include "repinv/basic.hpp"
#include "repinv/type.hpp"

namespace repinv {

struct AdtInfo;

struct CtorInfo {
  Symbol name;
  std::vector<Type> fields;
  const AdtInfo* adt = nullptr;
  int index = 0;  // declaration order within the ADT
};

struct AdtInfo {
  Symbol name;
  std::vector<CtorInfo> ctors;
  const CtorInfo* ctor(Symbol n) const {
    for (const auto& c : ctors)
      if (c.name == n) return &c;
    return nullptr;
  }
};

// All ADT declarations in scope for one program. `bool` and `nat` are
// always present; decimal literals desugar to Z/S chains.
class DeclTable {
 public:
  DeclTable() {
    // False before True so the value stream yields [False, True].
    declare(Symbol("bool"), {{Symbol("False"), {}}, {Symbol("True"), {}}});
    declare(Symbol("nat"),
            {{Symbol("Z"), {}}, {Symbol("S"), {Type::named(Symbol("nat"))}}});
  }

  DeclTable(const DeclTable&) = delete;
  DeclTable& operator=(const DeclTable&) = delete;

  struct CtorSpec {
    Symbol name;
    std::vector<Type> fields;
  };

  const AdtInfo* declare(Symbol name, std::vector<CtorSpec> ctors,
                         Span span = {}) {
    if (adts_by_name_.count(name))
      throw TypeError(TypeErrorKind::TypeMismatch,
                      "duplicate type declaration: " + name.str(), span);
    adts_.emplace_back();
    AdtInfo& adt = adts_.back();
    adt.name = name;
    adt.ctors.reserve(ctors.size());
    int idx = 0;
    for (auto& c : ctors) {
      if (ctors_by_name_.count(c.name))
        throw TypeError(TypeErrorKind::TypeMismatch,
                        "duplicate constructor: " + c.name.str(), span);
      adt.ctors.push_back(CtorInfo{c.name, std::move(c.fields), &adt, idx++});
    }
    for (const auto& c : adt.ctors) ctors_by_name_[c.name] = &c;
    adts_by_name_[name] = &adt;
    return &adt;
  }

  const AdtInfo* adt(Symbol name) const {
    auto it = adts_by_name_.find(name);
    return it == adts_by_name_.end() ? nullptr : it->second;
  }
  const AdtInfo* adt(const Type& t) const {
    return t.kind() == TypeKind::Named ? adt(t.name()) : nullptr;
  }
  const CtorInfo* ctor(Symbol name) const {
    auto it = ctors_by_name_.find(name);
    return it == ctors_by_name_.end() ? nullptr : it->second;
  }

  Type bool_type() const { return Type::named(Symbol("bool")); }
  Type nat_type() const { return Type::named(Symbol("nat")); }
  const CtorInfo* bool_true() const { return ctor(Symbol("True")); }
  const CtorInfo* bool_false() const { return ctor(Symbol("False")); }
  const CtorInfo* nat_z() const { return ctor(Symbol("Z")); }
  const CtorInfo* nat_s() const { return ctor(Symbol("S")); }

  const std::deque<AdtInfo>& adts() const { return adts_; }

 private:
  std::deque<AdtInfo> adts_;  // deque: stable addresses
  std::unordered_map<Symbol, const AdtInfo*, SymbolHash> adts_by_name_;
  std::unordered_map<Symbol, const CtorInfo*, SymbolHash> ctors_by_name_;
};

using DeclTablePtr = std::shared_ptr<const DeclTable>;

}  // namespace repinv
