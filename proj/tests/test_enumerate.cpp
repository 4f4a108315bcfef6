#include <catch2/catch_amalgamated.hpp>

#include "repinv/enumerate.hpp"
#include "repinv/eval.hpp"
#include "repinv/fn_enumerate.hpp"

using namespace repinv;

namespace {

std::shared_ptr<DeclTable> table_with_structures() {
  auto decls = std::make_shared<DeclTable>();
  decls->declare(Symbol("list"),
                 {{Symbol("Nil"), {}},
                  {Symbol("Cons"),
                   {decls->nat_type(), Type::named(Symbol("list"))}}});
  decls->declare(Symbol("tree"),
                 {{Symbol("Leaf"), {}},
                  {Symbol("Node"),
                   {Type::named(Symbol("tree")), decls->nat_type(),
                    Type::named(Symbol("tree"))}}});
  decls->declare(Symbol("void"), {});
  return decls;
}

// Independent combinatorial oracle: counts values of exactly `size`
// nodes by direct recursion, no sharing with the stream implementation.
long count_exact(const DeclTable& decls, const Type& t, int size);

long count_tuples(const DeclTable& decls, const std::vector<Type>& fields,
                  std::size_t idx, int budget) {
  if (idx == fields.size()) return budget == 0 ? 1 : 0;
  long total = 0;
  for (int s = 1; s <= budget; ++s) {
    long head = count_exact(decls, fields[idx], s);
    if (head == 0) continue;
    total += head * count_tuples(decls, fields, idx + 1, budget - s);
  }
  return total;
}

long count_exact(const DeclTable& decls, const Type& t, int size) {
  if (size < 1) return 0;
  if (t.kind() == TypeKind::Named) {
    const AdtInfo* adt = decls.adt(t.name());
    long total = 0;
    for (const auto& c : adt->ctors)
      total += count_tuples(decls, c.fields, 0, size - 1);
    return total;
  }
  if (t.kind() == TypeKind::Product) {
    std::vector<Type> fields{t.left(), t.right()};
    return count_tuples(decls, fields, 0, size - 1);
  }
  return 0;
}

long count_upto(const DeclTable& decls, const Type& t, int max) {
  long total = 0;
  for (int s = 1; s <= max; ++s) total += count_exact(decls, t, s);
  return total;
}

}  // namespace

TEST_CASE("bool stream yields False then True") {
  DeclTable decls;
  EnumCache cache(&decls);
  auto vs = enum_values(cache, decls.bool_type(), 30, 3000).take_all();
  REQUIRE(vs.size() == 2);
  REQUIRE(vs[0].ctor_info()->name == Symbol("False"));
  REQUIRE(vs[1].ctor_info()->name == Symbol("True"));
}

TEST_CASE("nat stream is Z, S Z, S (S Z) under a 3-node cap") {
  DeclTable decls;
  EnumCache cache(&decls);
  auto vs = enum_values(cache, decls.nat_type(), 3, 3000).take_all();
  REQUIRE(vs.size() == 3);
  for (int i = 0; i < 3; ++i)
    REQUIRE(structural_equal(vs[i], make_nat(decls, i)));
}

TEST_CASE("nat-list count up to 7 nodes matches the counting oracle") {
  auto decls = table_with_structures();
  EnumCache cache(decls.get());
  Type list = Type::named(Symbol("list"));
  auto vs = enum_values(cache, list, 7, 100000).take_all();
  long expected = count_upto(*decls, list, 7);
  REQUIRE(expected == 13);  // frozen from the oracle
  REQUIRE(static_cast<long>(vs.size()) == expected);
}

TEST_CASE("stream exhaustiveness matches oracle counts for k <= 9") {
  auto decls = table_with_structures();
  EnumCache cache(decls.get());
  std::vector<Type> types{
      Type::named(Symbol("list")),
      Type::named(Symbol("tree")),
      Type::product(decls->nat_type(), Type::named(Symbol("list"))),
      decls->nat_type(),
  };
  for (const Type& t : types) {
    for (int k = 1; k <= 9; ++k) {
      auto vs = enum_values(cache, t, k, 1000000).take_all();
      REQUIRE(static_cast<long>(vs.size()) == count_upto(*decls, t, k));
      // every value of size <= k appears before any of size > k: the cap
      // k stream must be a prefix of the cap k+1 stream.
      auto bigger = enum_values(cache, t, k + 1, 1000000).take_all();
      REQUIRE(bigger.size() >= vs.size());
      for (std::size_t i = 0; i < vs.size(); ++i)
        REQUIRE(structural_equal(vs[i], bigger[i]));
    }
  }
}

TEST_CASE("streams are deterministic, deduplicated, and size-ordered") {
  auto decls = table_with_structures();
  EnumCache cache(decls.get());
  Type tree = Type::named(Symbol("tree"));
  auto a = enum_values(cache, tree, 9, 500).take_all();
  auto b = enum_values(cache, tree, 9, 500).take_all();
  REQUIRE(a.size() == b.size());
  std::unordered_map<Value, int, ValueHash, ValueEq> seen;
  int last = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(structural_equal(a[i], b[i]));
    REQUIRE(value_size(a[i]) >= last);
    last = value_size(a[i]);
    REQUIRE(seen.emplace(a[i], 1).second);  // no duplicates
  }
}

TEST_CASE("count cap truncates the stream lazily") {
  auto decls = table_with_structures();
  EnumCache cache(decls.get());
  auto vs = enum_values(cache, Type::named(Symbol("list")), 30, 10).take_all();
  REQUIRE(vs.size() == 10);
}

TEST_CASE("empty types yield empty streams") {
  auto decls = table_with_structures();
  EnumCache cache(decls.get());
  auto vs = enum_values(cache, Type::named(Symbol("void")), 30, 100).take_all();
  REQUIRE(vs.empty());
  REQUIRE(!cache.min_size(Type::named(Symbol("void"))).has_value());
}

TEST_CASE("function enumeration includes the constant functions") {
  DeclTable decls;
  EnumCache cache(&decls);
  EvalContext ctx(&decls);
  auto fns = enum_functions(cache, ctx, decls.nat_type(), decls.bool_type(),
                            FnGrammar{1, 64});
  bool saw_true = false, saw_false = false;
  for (const Value& f : fns) {
    Value r = apply(ctx, f, make_nat(decls, 2));
    if (value_to_bool(r) &&
        value_to_bool(apply(ctx, f, make_nat(decls, 5))))
      saw_true = true;
    if (!value_to_bool(r) &&
        !value_to_bool(apply(ctx, f, make_nat(decls, 5))))
      saw_false = true;
  }
  REQUIRE(saw_true);
  REQUIRE(saw_false);
}

TEST_CASE("function enumeration finds identity and successor at depth 2") {
  DeclTable decls;
  EnumCache cache(&decls);
  EvalContext ctx(&decls);
  auto fns = enum_functions(cache, ctx, decls.nat_type(), decls.nat_type(),
                            FnGrammar{2, 128});
  auto behaves = [&](const Value& f, long delta) {
    for (long n = 0; n <= 4; ++n) {
      ctx.reset_fuel();
      Value r = apply(ctx, f, make_nat(decls, n));
      if (!structural_equal(r, make_nat(decls, n + delta))) return false;
    }
    return true;
  };
  bool saw_id = false, saw_succ = false;
  for (const Value& f : fns) {
    if (behaves(f, 0)) saw_id = true;
    if (behaves(f, 1)) saw_succ = true;
  }
  REQUIRE(saw_id);
  REQUIRE(saw_succ);
}

TEST_CASE("functions from an empty domain are constants") {
  auto decls = table_with_structures();
  EnumCache cache(decls.get());
  EvalContext ctx(decls.get());
  auto fns = enum_functions(cache, ctx, Type::named(Symbol("void")),
                            decls->nat_type(), FnGrammar{2, 64});
  REQUIRE(!fns.empty());
  for (const Value& f : fns) {
    std::string body = expr_to_string(f.closure_data().body);
    REQUIRE(body.find("a0") == std::string::npos);
  }
}

TEST_CASE("function enumeration is deterministic and total") {
  auto decls = table_with_structures();
  EnumCache cache(decls.get());
  EvalContext ctx(decls.get());
  std::vector<Type> doms{decls->nat_type(), Type::named(Symbol("list"))};
  auto a = enum_functions(cache, ctx, doms, Type::named(Symbol("list")),
                          FnGrammar{3, 128});
  auto b = enum_functions(cache, ctx, doms, Type::named(Symbol("list")),
                          FnGrammar{3, 128});
  REQUIRE(a.size() == b.size());
  REQUIRE(!a.empty());
  EnumCache inputs(decls.get());
  auto lists =
      enum_values(inputs, Type::named(Symbol("list")), 7, 50).take_all();
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(expr_to_string(a[i].kind() == ValueKind::Closure
                               ? a[i].closure_data().source
                               : Expr()) ==
            expr_to_string(b[i].closure_data().source));
    // total on enumerated inputs within fuel
    for (const Value& l : lists) {
      ctx.reset_fuel();
      Value r = apply(ctx, apply(ctx, a[i], make_nat(*decls, 1)), l);
      REQUIRE(r.defined());
    }
  }
}
