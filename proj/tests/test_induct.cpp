#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "repinv/induct.hpp"
#include "repinv/predicate_io.hpp"

using namespace repinv;

namespace {

struct Fixture {
  std::shared_ptr<Program> prog;
  ElaboratedProgram elab;
  std::unique_ptr<EnumCache> cache;
  std::unique_ptr<EvalContext> ctx;

  explicit Fixture(const char* file = "listset_set.inv") {
    std::ifstream in(std::string(REPINV_SOURCE_DIR) + "/benchmarks/" + file);
    std::ostringstream ss;
    ss << in.rdbuf();
    prog = parse_program({ss.str(), file});
    elab = elaborate(prog);
    cache = std::make_unique<EnumCache>(elab.decls.get());
    ctx = std::make_unique<EvalContext>(elab.decls.get());
  }

  Value nl(std::initializer_list<long> xs) {
    const DeclTable& d = *elab.decls;
    std::vector<long> v(xs);
    Value out = Value::ctor(d.ctor(Symbol("Nil")), {});
    for (auto it = v.rbegin(); it != v.rend(); ++it)
      out = Value::ctor(d.ctor(Symbol("Cons")), {make_nat(d, *it), out});
    return out;
  }

  Predicate pred(const std::string& text) {
    return parse_predicate(elab, *ctx, text);
  }

  Relation head_not_one() {
    return Relation::predicate(pred(
        "let cand (s : t) : bool = match s with | Nil -> True | Cons (hd, "
        "tl) -> hd <> 1 end"));
  }

  Relation nodup() {
    return Relation::predicate(pred(
        "let rec nodup (s : t) : bool = match s with | Nil -> True | Cons "
        "(hd, tl) -> not (lookup tl hd) && nodup tl end"));
  }

  InductChecker checker(bool contracts = false) {
    return InductChecker(elab, *cache, *ctx, InductBudget{}, nullptr,
                         contracts);
  }
};

}  // namespace

TEST_CASE("collect_v gathers exactly the abstract-positioned subvalues") {
  Fixture f;
  const DeclTable& d = *f.elab.decls;
  // base type: nothing
  REQUIRE(collect_v(d.nat_type(), make_nat(d, 4)).empty());
  // abstract: the value itself
  auto vs = collect_v(Type::abstract(), f.nl({1, 2}));
  REQUIRE(vs.size() == 1);
  REQUIRE(structural_equal(vs[0], f.nl({1, 2})));
  // product of abstract and base: left side only
  auto ps = collect_v(Type::product(Type::abstract(), d.nat_type()),
                      Value::pair(f.nl({1, 2}), make_nat(d, 3)));
  REQUIRE(ps.size() == 1);
  REQUIRE(structural_equal(ps[0], f.nl({1, 2})));
}

TEST_CASE("rule I-B: base-typed values are always valid") {
  Fixture f;
  auto checker = f.checker();
  Relation never = Relation::membership(std::vector<Value>{});
  CexReport r = checker.check_value(never, never, make_nat(*f.elab.decls, 5),
                                    f.elab.decls->nat_type());
  REQUIRE(r.valid);
}

TEST_CASE("rules I-A and I-A-CEx at the abstract type") {
  Fixture f;
  auto checker = f.checker();
  Relation q = f.head_not_one();
  Relation p = Relation::membership(std::vector<Value>{});
  CexReport ok = checker.check_value(p, q, f.nl({0}), Type::abstract());
  REQUIRE(ok.valid);
  CexReport bad = checker.check_value(p, q, f.nl({1}), Type::abstract());
  REQUIRE(!bad.valid);
  REQUIRE(bad.S.empty());
  REQUIRE(bad.V.size() == 1);
  REQUIRE(structural_equal(bad.V[0], f.nl({1})));
}

TEST_CASE("rules I-Prod and its counterexample forms") {
  Fixture f;
  auto checker = f.checker();
  Relation q = f.head_not_one();
  Relation p = Relation::membership(std::vector<Value>{});
  Type prod = Type::product(Type::abstract(), Type::abstract());

  CexReport ok =
      checker.check_value(p, q, Value::pair(f.nl({}), f.nl({0})), prod);
  REQUIRE(ok.valid);

  // first component fails: I-Prod-CEx1
  CexReport c1 =
      checker.check_value(p, q, Value::pair(f.nl({1}), f.nl({0})), prod);
  REQUIRE(!c1.valid);
  REQUIRE(structural_equal(c1.V.at(0), f.nl({1})));

  // second component fails: I-Prod-CEx2
  CexReport c2 =
      checker.check_value(p, q, Value::pair(f.nl({0}), f.nl({1, 0})), prod);
  REQUIRE(!c2.valid);
  REQUIRE(structural_equal(c2.V.at(0), f.nl({1, 0})));
}

TEST_CASE("visible inductiveness counterexample from the worked example") {
  // P = {[], [3]}, Q = "head <> 1": insert produces [1] from [].
  Fixture f;
  auto checker = f.checker();
  Relation p = Relation::membership({f.nl({}), f.nl({3})});
  Relation q = f.head_not_one();
  CexReport r = checker.cond_inductive(p, q);
  REQUIRE(!r.valid);
  REQUIRE(r.witness->op == Symbol("insert"));
  REQUIRE(r.S.size() == 1);
  REQUIRE(structural_equal(r.S[0], f.nl({})));
  REQUIRE(r.V.size() == 1);
  REQUIRE(structural_equal(r.V[0], f.nl({1})));
  // replay: applying the witness op reproduces the V value
  const OpInfo* op = f.elab.op(r.witness->op);
  f.ctx->reset_fuel();
  Value replayed = apply_all(*f.ctx, op->value, r.witness->args);
  REQUIRE(structural_equal(replayed, r.V[0]));
}

TEST_CASE("rule I-Fun-CEx reproduces the paper-style pair from a seeded set") {
  // With P restricted to {[0]} and Q = "head <> 1", the first failing
  // application is insert [0] 1 = [1;0].
  Fixture f;
  auto checker = f.checker();
  Relation p = Relation::membership({f.nl({0})});
  Relation q = f.head_not_one();
  const OpInfo* insert = f.elab.op(Symbol("insert"));
  CexReport r = checker.check_value(p, q, insert->value, insert->iface);
  REQUIRE(!r.valid);
  REQUIRE(r.S.size() == 1);
  REQUIRE(structural_equal(r.S[0], f.nl({0})));
  REQUIRE(structural_equal(r.V.at(0), f.nl({1, 0})));
}

TEST_CASE("full inductiveness of head <> 1 fails; of no-duplicates holds") {
  Fixture f;
  auto checker = f.checker();
  Relation h = f.head_not_one();
  CexReport r = checker.cond_inductive(h, h);
  REQUIRE(!r.valid);
  // the first counterexample under stream order: insert [] 1 = [1]
  REQUIRE(structural_equal(r.S.at(0), f.nl({})));
  REQUIRE(structural_equal(r.V.at(0), f.nl({1})));

  Relation ok = f.nodup();
  CexReport valid = checker.cond_inductive(ok, ok);
  REQUIRE(valid.valid);
}

TEST_CASE("contract-based and direct checking agree on first-order ops") {
  Fixture f;
  auto direct = f.checker(false);
  auto contracts = f.checker(true);

  std::vector<std::pair<Relation, Relation>> cases;
  cases.emplace_back(Relation::membership({f.nl({}), f.nl({3})}),
                     f.head_not_one());
  cases.emplace_back(f.head_not_one(), f.head_not_one());
  cases.emplace_back(f.nodup(), f.nodup());
  cases.emplace_back(Relation::membership({f.nl({0})}), f.head_not_one());

  for (auto& [p, q] : cases) {
    CexReport a = direct.cond_inductive(p, q);
    CexReport b = contracts.cond_inductive(p, q);
    REQUIRE(a.valid == b.valid);
    if (!a.valid) {
      REQUIRE(a.witness->op == b.witness->op);
      REQUIRE(a.S.size() == b.S.size());
      for (std::size_t i = 0; i < a.S.size(); ++i)
        REQUIRE(structural_equal(a.S[i], b.S[i]));
      REQUIRE(a.V.size() == b.V.size());
      REQUIRE(structural_equal(a.V[0], b.V[0]));
      REQUIRE(a.witness->args.size() == b.witness->args.size());
      for (std::size_t i = 0; i < a.witness->args.size(); ++i)
        REQUIRE(structural_equal(a.witness->args[i], b.witness->args[i]));
    }
  }
}

TEST_CASE("constant ops fail directly at the abstract type when Q rejects") {
  Fixture f;
  auto checker = f.checker();
  Relation p = Relation::membership(std::vector<Value>{});
  Relation q = Relation::predicate(f.pred(
      "let nonempty (s : t) : bool = match s with | Nil -> False | Cons (hd, "
      "tl) -> True end"));
  CexReport r = checker.cond_inductive(p, q);
  REQUIRE(!r.valid);
  REQUIRE(r.witness->op == Symbol("empty"));
  REQUIRE(r.S.empty());
  REQUIRE(structural_equal(r.V.at(0), f.nl({})));
  REQUIRE(r.witness->args.empty());
}
