#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "repinv/parser.hpp"
#include "repinv/relation.hpp"
#include "repinv/verify.hpp"

using namespace repinv;

namespace {

std::shared_ptr<Program> load_listset() {
  std::ifstream in(std::string(REPINV_SOURCE_DIR) +
                   "/benchmarks/listset_set.inv");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_program({ss.str(), "listset_set.inv"});
}

Value nat_list(const DeclTable& d, std::initializer_list<long> xs) {
  std::vector<long> v(xs);
  Value out = Value::ctor(d.ctor(Symbol("Nil")), {});
  for (auto it = v.rbegin(); it != v.rend(); ++it)
    out = Value::ctor(d.ctor(Symbol("Cons")), {make_nat(d, *it), out});
  return out;
}

}  // namespace

TEST_CASE("default budgets match the verifier constants") {
  VerifBudget one = default_budget(1);
  REQUIRE(one.max_nodes == 30);
  REQUIRE(one.per_quantifier == 3000);
  REQUIRE(one.total == 3000);
  for (int n : {2, 3, 5}) {
    VerifBudget multi = default_budget(n);
    REQUIRE(multi.max_nodes == 15);
    REQUIRE(multi.per_quantifier == 3000);
    REQUIRE(multi.total == 30000);
  }
}

TEST_CASE("reflexivity is bounded-valid and counts its tuples") {
  DeclTable decls;
  EnumCache cache(&decls);
  EvalContext ctx(&decls);
  Query q;
  q.vars = {{Symbol("x"), decls.nat_type()}};
  q.budget = default_budget(1);
  q.body = [](EvalContext& c, const std::vector<Value>& t) {
    return structural_equal(t[0], t[0]);
  };
  StatsSink stats;
  VerifOutcome out = verify(cache, ctx, q, &stats);
  REQUIRE(out.valid);
  REQUIRE(out.bounded);  // the flag is always set
  REQUIRE(out.tuples_checked == 30);  // nats of size <= 30
  REQUIRE(stats.stats().tvc == 1);
}

TEST_CASE("two-quantifier tautology stays within the 30000-tuple cap") {
  auto prog = load_listset();
  auto elab = elaborate(prog);
  EnumCache cache(elab.decls.get());
  EvalContext ctx(elab.decls.get());
  Query q;
  q.vars = {{Symbol("s1"), elab.concrete}, {Symbol("s2"), elab.concrete}};
  q.budget = default_budget(2);
  q.body = [](EvalContext&, const std::vector<Value>&) { return true; };
  VerifOutcome out = verify(cache, ctx, q);
  REQUIRE(out.valid);
  REQUIRE(out.tuples_checked == 30000);
}

TEST_CASE("sufficiency query with the trivial invariant finds a duplicate list") {
  auto prog = load_listset();
  auto elab = elaborate(prog);
  EnumCache cache(elab.decls.get());
  EvalContext ctx(elab.decls.get());
  const DeclTable& d = *elab.decls;

  Query q;
  q.vars = {{Symbol("s"), elab.concrete}, {Symbol("i"), d.nat_type()}};
  q.budget = default_budget(2);
  q.body = [&](EvalContext& c, const std::vector<Value>& t) {
    return elab.spec_holds(c, t);  // trivial invariant folded in: always true
  };
  VerifOutcome out = verify(cache, ctx, q);
  REQUIRE(!out.valid);
  // First counterexample under the diagonal order: ([0;0], 0).
  REQUIRE(structural_equal(out.counterexample[0], nat_list(d, {0, 0})));
  REQUIRE(structural_equal(out.counterexample[1], make_nat(d, 0)));
  // membership property: it truly falsifies the body
  REQUIRE(!elab.spec_holds(ctx, out.counterexample));
}

TEST_CASE("monotone refutation and order stability") {
  auto prog = load_listset();
  auto elab = elaborate(prog);
  EnumCache cache(elab.decls.get());
  EvalContext ctx(elab.decls.get());

  auto run = [&](VerifBudget b) {
    Query q;
    q.vars = {{Symbol("s"), elab.concrete},
              {Symbol("i"), elab.decls->nat_type()}};
    q.budget = b;
    q.body = [&](EvalContext& c, const std::vector<Value>& t) {
      return elab.spec_holds(c, t);
    };
    return verify(cache, ctx, q);
  };

  VerifOutcome small = run(VerifBudget{9, 200, 2000});
  REQUIRE(!small.valid);
  for (VerifBudget b :
       {VerifBudget{12, 400, 4000}, VerifBudget{15, 3000, 30000}}) {
    VerifOutcome bigger = run(b);
    REQUIRE(!bigger.valid);
  }
  // identical budgets give identical counterexamples
  VerifOutcome again = run(VerifBudget{9, 200, 2000});
  REQUIRE(structural_equal(small.counterexample[0], again.counterexample[0]));
  REQUIRE(structural_equal(small.counterexample[1], again.counterexample[1]));
}

TEST_CASE("tuple order is diagonal by total size, leftmost first") {
  DeclTable decls;
  EnumCache cache(&decls);
  EvalContext ctx(&decls);
  std::vector<std::vector<long>> seen;
  Query q;
  q.vars = {{Symbol("a"), decls.nat_type()}, {Symbol("b"), decls.nat_type()}};
  q.budget = VerifBudget{3, 100, 100};
  q.body = [&](EvalContext&, const std::vector<Value>& t) {
    std::vector<long> row;
    for (const Value& v : t) {
      long n = 0;
      Value cur = v;
      while (cur.ctor_info()->name == Symbol("S")) {
        ++n;
        cur = cur.kid(0);
      }
      row.push_back(n);
    }
    seen.push_back(row);
    return true;
  };
  verify(cache, ctx, q);
  std::vector<std::vector<long>> expected = {
      {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}, {1, 2}, {2, 1}, {2, 2}};
  REQUIRE(seen == expected);
}
