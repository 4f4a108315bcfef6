#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "repinv/adt.hpp"
#include "repinv/value.hpp"

namespace repinv {

// Size-indexed buckets of closed values, shared across streams. Buckets
// are built lazily per (type, exact size) and sorted canonically, so all
// streams over one cache agree on order.
class EnumCache {
 public:
  explicit EnumCache(const DeclTable* decls) : decls_(decls) {}

  // Smallest value size of the type, or nullopt for empty types.
  std::optional<int> min_size(const Type& t) {
    auto it = min_size_.find(t);
    if (it != min_size_.end())
      return it->second < kInf ? std::optional<int>(it->second) : std::nullopt;
    // Fixpoint over the ADT graph reachable from t.
    compute_min_sizes(t);
    it = min_size_.find(t);
    return it->second < kInf ? std::optional<int>(it->second) : std::nullopt;
  }

  const std::vector<Value>& bucket(const Type& t, int size) {
    auto key = std::make_pair(t, size);
    auto it = buckets_.find(key);
    if (it != buckets_.end()) return it->second;
    std::vector<Value> out;
    if (size >= 1) {
      switch (t.kind()) {
        case TypeKind::Named: {
          const AdtInfo* adt = decls_->adt(t.name());
          if (!adt) break;
          for (const auto& ctor : adt->ctors) {
            std::vector<Type> fields = ctor.fields;
            std::vector<Value> partial;
            fill_fields(&ctor, fields, 0, size - 1, partial, out);
          }
          break;
        }
        case TypeKind::Product: {
          std::vector<Type> fields{t.left(), t.right()};
          std::vector<Value> partial;
          fill_fields(nullptr, fields, 0, size - 1, partial, out);
          break;
        }
        case TypeKind::Abstract:
        case TypeKind::Arrow:
          break;  // not enumerable here
      }
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return buckets_.emplace(key, std::move(out)).first->second;
  }

  const DeclTable& decls() const { return *decls_; }

 private:
  static constexpr int kInf = 1 << 20;

  void compute_min_sizes(const Type& root) {
    // Seed every named type reachable plus the root structure, then relax.
    std::vector<Type> worklist{root};
    std::vector<Type> all;
    while (!worklist.empty()) {
      Type t = worklist.back();
      worklist.pop_back();
      if (min_size_.count(t)) continue;
      min_size_[t] = kInf;
      all.push_back(t);
      switch (t.kind()) {
        case TypeKind::Named:
          if (const AdtInfo* adt = decls_->adt(t.name()))
            for (const auto& c : adt->ctors)
              for (const auto& f : c.fields) worklist.push_back(f);
          break;
        case TypeKind::Product:
          worklist.push_back(t.left());
          worklist.push_back(t.right());
          break;
        default:
          break;
      }
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& t : all) {
        int cur = kInf;
        switch (t.kind()) {
          case TypeKind::Named: {
            const AdtInfo* adt = decls_->adt(t.name());
            if (!adt) break;
            for (const auto& c : adt->ctors) {
              long s = 1;
              bool ok = true;
              for (const auto& f : c.fields) {
                auto it = min_size_.find(f);
                int fs = it == min_size_.end() ? kInf : it->second;
                if (fs >= kInf) {
                  ok = false;
                  break;
                }
                s += fs;
              }
              if (ok) cur = std::min<long>(cur, s);
            }
            break;
          }
          case TypeKind::Product: {
            int a = min_size_.at(t.left());
            int b = min_size_.at(t.right());
            if (a < kInf && b < kInf) cur = 1 + a + b;
            break;
          }
          default:
            break;
        }
        if (cur < min_size_[t]) {
          min_size_[t] = cur;
          changed = true;
        }
      }
    }
  }

  // Enumerates all field tuples with total size `budget`, appending the
  // finished constructor (or pair) values to `out`.
  void fill_fields(const CtorInfo* ctor, const std::vector<Type>& fields,
                   std::size_t idx, int budget, std::vector<Value>& partial,
                   std::vector<Value>& out) {
    if (idx == fields.size()) {
      if (budget != 0) return;
      if (ctor)
        out.push_back(Value::ctor(ctor, partial));
      else
        out.push_back(Value::pair(partial[0], partial[1]));
      return;
    }
    // Remaining fields need at least their min sizes.
    int rest_min = 0;
    for (std::size_t j = idx + 1; j < fields.size(); ++j) {
      auto m = min_size(fields[j]);
      if (!m) return;
      rest_min += *m;
    }
    auto my_min = min_size(fields[idx]);
    if (!my_min) return;
    for (int s = *my_min; s <= budget - rest_min; ++s) {
      for (const Value& v : bucket(fields[idx], s)) {
        partial.push_back(v);
        fill_fields(ctor, fields, idx + 1, budget - s, partial, out);
        partial.pop_back();
      }
    }
  }

  struct KeyHash {
    std::size_t operator()(const std::pair<Type, int>& k) const {
      return static_cast<std::size_t>(
          hash_combine(k.first.hash(), static_cast<std::uint64_t>(k.second)));
    }
  };
  struct KeyEq {
    bool operator()(const std::pair<Type, int>& a,
                    const std::pair<Type, int>& b) const {
      return a.second == b.second && a.first == b.first;
    }
  };

  const DeclTable* decls_;
  std::unordered_map<std::pair<Type, int>, std::vector<Value>, KeyHash, KeyEq>
      buckets_;
  std::unordered_map<Type, int, TypeHash> min_size_;
};

// Deterministic stream of closed values of one arrow-free type, in
// nondecreasing size order. Ties break by constructor declaration index,
// then recursively by children.
class ValueStream {
 public:
  ValueStream(EnumCache& cache, Type t, int max_nodes, long max_count)
      : cache_(&cache),
        type_(t),
        max_nodes_(max_nodes),
        max_count_(max_count) {}

  std::optional<Value> next() {
    if (yielded_ >= max_count_) return std::nullopt;
    while (size_ <= max_nodes_) {
      const auto& bucket = cache_->bucket(type_, size_);
      if (index_ < bucket.size()) {
        ++yielded_;
        return bucket[index_++];
      }
      ++size_;
      index_ = 0;
    }
    return std::nullopt;
  }

  // Materializes the remaining stream.
  std::vector<Value> take_all() {
    std::vector<Value> out;
    while (auto v = next()) out.push_back(*v);
    return out;
  }

 private:
  EnumCache* cache_;
  Type type_;
  int max_nodes_;
  long max_count_;
  int size_ = 1;
  std::size_t index_ = 0;
  long yielded_ = 0;
};

inline ValueStream enum_values(EnumCache& cache, const Type& t, int max_nodes,
                               long max_count) {
  return ValueStream(cache, t, max_nodes, max_count);
}

}  // namespace repinv
