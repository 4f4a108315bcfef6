#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "repinv/parser.hpp"
#include "repinv/pretty.hpp"

using namespace repinv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string bench_path(const char* name) {
  return std::string(REPINV_SOURCE_DIR) + "/benchmarks/" + name;
}

std::shared_ptr<Program> parse_bench(const char* name) {
  return parse_program({slurp(bench_path(name)), name});
}

Value run_op(EvalContext& ctx, const ElaboratedProgram& prog, const char* op,
             const std::vector<Value>& args) {
  const OpInfo* info = prog.op(Symbol(op));
  REQUIRE(info != nullptr);
  ctx.reset_fuel();
  return apply_all(ctx, info->value, args);
}

Value nat_list(const DeclTable& d, std::initializer_list<long> xs) {
  std::vector<long> v(xs);
  Value out = Value::ctor(d.ctor(Symbol("Nil")), {});
  for (auto it = v.rbegin(); it != v.rend(); ++it)
    out = Value::ctor(d.ctor(Symbol("Cons")), {make_nat(d, *it), out});
  return out;
}

}  // namespace

TEST_CASE("ListSet benchmark parses and elaborates") {
  auto prog = parse_bench("listset_set.inv");
  REQUIRE(prog->module.name == Symbol("ListSet"));
  auto elab = elaborate(prog);
  REQUIRE(elab.ops.size() == 4);
  REQUIRE(elab.op(Symbol("empty")) != nullptr);
  REQUIRE(elab.op(Symbol("lookup")) != nullptr);
  REQUIRE(elab.op(Symbol("insert")) != nullptr);
  REQUIRE(elab.op(Symbol("delete")) != nullptr);

  // Abstract positions read off the implicit interface.
  const OpInfo* insert = elab.op(Symbol("insert"));
  REQUIRE(insert->slots.size() == 2);
  REQUIRE(insert->slots[0] == Type::abstract());
  REQUIRE(insert->slots[1] == elab.decls->nat_type());
  REQUIRE(insert->result == Type::abstract());
  const OpInfo* lookup = elab.op(Symbol("lookup"));
  REQUIRE(lookup->slots[0] == Type::abstract());
  REQUIRE(lookup->result == elab.decls->bool_type());
  const OpInfo* empty = elab.op(Symbol("empty"));
  REQUIRE(empty->slots.empty());
  REQUIRE(empty->result == Type::abstract());

  // Two quantifiers, the first abstract.
  REQUIRE(elab.spec.quantifiers.size() == 2);
  REQUIRE(elab.abstract_quantifiers == std::vector<std::size_t>{0});
}

TEST_CASE("ListSet operations evaluate per the worked example") {
  auto prog = parse_bench("listset_set.inv");
  auto elab = elaborate(prog);
  EvalContext ctx(elab.decls.get());
  const DeclTable& d = *elab.decls;

  // lookup (delete [1;1] 1) 1 = True
  Value deleted =
      run_op(ctx, elab, "delete", {nat_list(d, {1, 1}), make_nat(d, 1)});
  REQUIRE(structural_equal(deleted, nat_list(d, {1})));
  Value looked = run_op(ctx, elab, "lookup", {deleted, make_nat(d, 1)});
  REQUIRE(value_to_bool(looked));

  // insert [0] 1 = [1;0]
  Value inserted =
      run_op(ctx, elab, "insert", {nat_list(d, {0}), make_nat(d, 1)});
  REQUIRE(structural_equal(inserted, nat_list(d, {1, 0})));

  // spec fails on [1;1] with i = 1
  REQUIRE(!elab.spec_holds(ctx, {nat_list(d, {1, 1}), make_nat(d, 1)}));
  REQUIRE(elab.spec_holds(ctx, {nat_list(d, {1, 0}), make_nat(d, 1)}));
}

TEST_CASE("empty file is a missing-module diagnostic") {
  REQUIRE_THROWS_WITH(parse_program({"", "empty.inv"}),
                      Catch::Matchers::ContainsSubstring("missing module"));
}

TEST_CASE("spec referencing an undefined op is rejected") {
  std::string text = R"(
type list = Nil | Cons of nat * list
module M = struct
  type t = list
  let empty : t = Nil
end
spec forall (s : t) . union s s = s
)";
  auto prog = parse_program({text, "bad.inv"});
  try {
    elaborate(prog);
    FAIL("expected UnboundVariable");
  } catch (const TypeError& e) {
    REQUIRE(e.kind == TypeErrorKind::UnboundVariable);
  }
}

TEST_CASE("higher-order interface is rejected in first-order mode") {
  std::string text = R"(
type list = Nil | Cons of nat * list
module M = struct
  type t = list
  let empty : t = Nil
  let rec fold (f : nat -> t -> t) (a : t) (s : t) : t =
    match s with
    | Nil -> a
    | Cons (hd, tl) -> f hd (fold f a tl)
    end
end
spec forall (s : t) . True
)";
  auto prog = parse_program({text, "fset.inv"});
  try {
    elaborate(prog, /*higher_order_mode=*/false);
    FAIL("expected InterfaceMismatch");
  } catch (const TypeError& e) {
    REQUIRE(e.kind == TypeErrorKind::InterfaceMismatch);
  }
  REQUIRE_NOTHROW(elaborate(prog, /*higher_order_mode=*/true));
}

TEST_CASE("pretty-print round trip reparses to an equivalent program") {
  auto prog = parse_bench("listset_set.inv");
  std::string printed = program_to_string(*prog);
  auto reparsed = parse_program({printed, "printed"});
  std::string printed2 = program_to_string(*reparsed);
  REQUIRE(printed == printed2);
  REQUIRE(expr_equal(prog->spec.body, reparsed->spec.body));
  REQUIRE(prog->module.ops.size() == reparsed->module.ops.size());
  for (std::size_t i = 0; i < prog->module.ops.size(); ++i)
    REQUIRE(expr_equal(prog->module.ops[i].body,
                       reparsed->module.ops[i].body));
}

TEST_CASE("parser and elaborator never crash on mangled input") {
  std::string base = slurp(bench_path("listset_set.inv"));
  std::mt19937 rng(7);
  const std::string junk = "()|=*,:.<>&";
  for (int trial = 0; trial < 300; ++trial) {
    std::string text = base;
    int edits = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < edits; ++i) {
      std::size_t pos = rng() % text.size();
      switch (rng() % 3) {
        case 0:
          text[pos] = junk[rng() % junk.size()];
          break;
        case 1:
          text.erase(pos, 1 + rng() % 5);
          break;
        default:
          text.insert(pos, 1, junk[rng() % junk.size()]);
          break;
      }
      if (text.empty()) text = "x";
    }
    try {
      auto prog = parse_program({text, "fuzz"});
      elaborate(prog);
    } catch (const LangError&) {
      // diagnostics are the expected outcome
    }
  }
  SUCCEED();
}
