#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "repinv/cegis.hpp"

using namespace repinv;

namespace {

std::string slurp_bench(const char* name) {
  std::ifstream in(std::string(REPINV_SOURCE_DIR) + "/benchmarks/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  std::shared_ptr<Program> prog;
  ElaboratedProgram elab;

  explicit Fixture(const char* name = "listset_set.inv") {
    prog = parse_program({slurp_bench(name), name});
    elab = elaborate(prog);
  }

  Value nl(std::initializer_list<long> xs) {
    const DeclTable& d = *elab.decls;
    std::vector<long> v(xs);
    Value out = Value::ctor(d.ctor(Symbol("Nil")), {});
    for (auto it = v.rbegin(); it != v.rend(); ++it)
      out = Value::ctor(d.ctor(Symbol("Cons")), {make_nat(d, *it), out});
    return out;
  }

  // modest budgets keep unit runs quick; acceptance uses the defaults
  static EngineOptions quick(Mode mode = Mode::Hanoi) {
    EngineOptions o;
    o.mode = mode;
    o.timeout_s = 120;
    o.budget_single = VerifBudget{12, 600, 600};
    o.budget_multi = VerifBudget{12, 600, 6000};
    o.induct.alpha_nodes = 12;
    o.induct.alpha_count = 600;
    o.induct.base_nodes = 12;
    o.induct.base_count = 600;
    o.induct.multi_slot_total = 6000;
    return o;
  }
};

bool is_duplicate_free(const Value& list) {
  std::vector<Value> seen;
  Value cur = list;
  while (cur.ctor_info()->name == Symbol("Cons")) {
    for (const Value& s : seen)
      if (structural_equal(s, cur.kid(0))) return false;
    seen.push_back(cur.kid(0));
    cur = cur.kid(1);
  }
  return true;
}

}  // namespace

TEST_CASE("cex_list_filter keeps the accepted prefix and its negatives") {
  Fixture f;
  InferenceEngine eng(f.elab, Fixture::quick());
  EvalContext& ctx = eng.ctx();

  auto pred = [&](const std::string& text) {
    return parse_predicate(f.elab, ctx, text);
  };
  Predicate always = pred("let p (s : t) : bool = True");
  Predicate not5 = pred("let p (s : t) : bool = s <> Cons (5, Nil)");
  Predicate not7 = pred("let p (s : t) : bool = s <> Cons (7, Nil)");

  std::vector<TraceEntry> trace{
      {always, {f.nl({2, 2})}},
      {not5, {f.nl({3, 3})}},
      {not7, {f.nl({4, 4})}},
  };
  Value v5 = f.nl({7});  // satisfies the first two, falsifies the third

  auto [resume, trimmed] = cex_list_filter(ctx, trace, v5);
  REQUIRE(trimmed.size() == 2);
  REQUIRE(resume.size() == 2);
  REQUIRE(structural_equal(resume[0], f.nl({2, 2})));
  REQUIRE(structural_equal(resume[1], f.nl({3, 3})));

  // a positive satisfying no trace predicate resumes nothing
  auto [none, empty_trace] =
      cex_list_filter(ctx, {{not5, {f.nl({9})}}}, f.nl({5}));
  REQUIRE(none.empty());
  REQUIRE(empty_trace.empty());

  // the empty trace is a fixed point
  auto [r0, t0] = cex_list_filter(ctx, {}, v5);
  REQUIRE(r0.empty());
  REQUIRE(t0.empty());
}

TEST_CASE("closed_positives finds the constructible weakening") {
  Fixture f;
  InferenceEngine eng(f.elab, Fixture::quick());
  Predicate head_ne_1 = parse_predicate(
      f.elab, eng.ctx(),
      "let cand (s : t) : bool = match s with | Nil -> True | Cons (hd, tl) "
      "-> hd <> 1 end");

  ValueSet vplus;
  vplus.insert(f.nl({}));
  vplus.insert(f.nl({3}));
  auto cex = eng.closed_positives(vplus, head_ne_1);
  REQUIRE(cex.has_value());
  REQUIRE(!cex->values.empty());
  bool has_singleton = false;
  for (const Value& v : cex->values) {
    REQUIRE(!vplus.contains(v));
    REQUIRE(!head_ne_1.holds(eng.ctx(), v));
    if (v.ctor_info()->name == Symbol("Cons") &&
        v.kid(1).ctor_info()->name == Symbol("Nil"))
      has_singleton = true;
    // replays to construction
    const OpInfo* op = f.elab.op(cex->witness.op);
    eng.ctx().reset_fuel();
    Value replayed = apply_all(eng.ctx(), op->value, cex->witness.args);
    REQUIRE(structural_equal(replayed, v));
  }
  REQUIRE(has_singleton);
}

TEST_CASE("closed_positives is vacuously valid on the empty positive set") {
  Fixture f;
  InferenceEngine eng(f.elab, Fixture::quick());
  Predicate truthy =
      parse_predicate(f.elab, eng.ctx(), "let p (s : t) : bool = True");
  REQUIRE(!eng.closed_positives(ValueSet{}, truthy).has_value());
}

TEST_CASE("closed_positives agrees with a brute-force one-step oracle") {
  Fixture f;
  InferenceEngine eng(f.elab, Fixture::quick());
  Predicate nodup = parse_predicate(
      f.elab, eng.ctx(),
      "let rec nodup (s : t) : bool = match s with | Nil -> True | Cons "
      "(hd, tl) -> not (lookup tl hd) && nodup tl end");
  ValueSet vplus;
  vplus.insert(f.nl({}));
  REQUIRE(!eng.closed_positives(vplus, nodup).has_value());

  // oracle: apply every op to [] with nat arguments up to 3
  EvalContext& ctx = eng.ctx();
  for (const OpInfo& op : f.elab.ops) {
    if (op.slots.empty()) {
      if (op.result == Type::abstract())
        REQUIRE(nodup.holds(ctx, op.value));
      continue;
    }
    if (op.slots.size() == 2 && op.result == Type::abstract()) {
      for (long x = 0; x <= 3; ++x) {
        ctx.reset_fuel();
        Value out = apply_all(
            ctx, op.value, {f.nl({}), make_nat(*f.elab.decls, x)});
        REQUIRE(nodup.holds(ctx, out));
      }
    }
  }
}

TEST_CASE("no_negatives reports sufficiency counterexamples first") {
  Fixture f;
  InferenceEngine eng(f.elab, Fixture::quick());
  Predicate truthy =
      parse_predicate(f.elab, eng.ctx(), "let p (s : t) : bool = True");
  auto cex = eng.no_negatives(truthy);
  REQUIRE(cex.has_value());
  REQUIRE(cex->from_sufficiency);
  REQUIRE(cex->values.size() == 1);
  REQUIRE(structural_equal(cex->values[0], f.nl({0, 0})));

  Predicate nodup = parse_predicate(
      f.elab, eng.ctx(),
      "let rec nodup (s : t) : bool = match s with | Nil -> True | Cons "
      "(hd, tl) -> not (lookup tl hd) && nodup tl end");
  REQUIRE(!eng.no_negatives(nodup).has_value());
}

TEST_CASE("the full loop infers a duplicate-free invariant for ListSet") {
  Fixture f;
  EngineOptions opts = Fixture::quick();
  opts.debug_rank = true;
  InferenceEngine eng(f.elab, opts);
  Outcome out = eng.run();
  REQUIRE(out.kind == Outcome::Kind::Invariant);
  REQUIRE(out.bounded);

  // the returned invariant re-passes both checks immediately
  InferenceEngine recheck(f.elab, Fixture::quick());
  REQUIRE(!recheck.no_negatives(*out.invariant).has_value());
  REQUIRE(
      !recheck.closed_positives(ValueSet{}, *out.invariant).has_value());

  // and agrees with the duplicate-scan oracle on small lists
  EnumCache cache(f.elab.decls.get());
  EvalContext ctx(f.elab.decls.get());
  auto lists =
      enum_values(cache, f.elab.concrete, 8, 100000).take_all();
  REQUIRE(lists.size() > 20);
  for (const Value& l : lists)
    REQUIRE(out.invariant->holds(ctx, l) == is_duplicate_free(l));
}

TEST_CASE("a vacuous spec is solved by the constant-true invariant") {
  std::string text = R"(
type list = Nil | Cons of nat * list
module Anything = struct
  type t = list
  let empty : t = Nil
  let push (l : t) (x : nat) : t = Cons (x, l)
end
spec forall (s : t) . True
)";
  auto prog = parse_program({text, "vacuous.inv"});
  auto elab = elaborate(prog);
  InferenceEngine eng(elab, Fixture::quick());
  Outcome out = eng.run();
  REQUIRE(out.kind == Outcome::Kind::Invariant);
  REQUIRE(eng.stats().tsc == 1);
  EvalContext ctx(elab.decls.get());
  EnumCache cache(elab.decls.get());
  auto lists = enum_values(cache, elab.concrete, 7, 1000).take_all();
  for (const Value& l : lists) REQUIRE(out.invariant->holds(ctx, l));
}

TEST_CASE("a buggy module yields a constructible spec violation") {
  Fixture f("buggyset.inv");
  InferenceEngine eng(f.elab, Fixture::quick());
  Outcome out = eng.run();
  REQUIRE(out.kind == Outcome::Kind::SpecViolation);
  REQUIRE(!out.violation.empty());
  REQUIRE(!out.replay.empty());
  // the witness value truly violates the spec together with some index
  EvalContext& ctx = eng.ctx();
  const Value& bad = out.violation.front();
  bool violates = false;
  for (long i = 0; i <= 4 && !violates; ++i)
    if (!f.elab.spec_holds(ctx, {bad, make_nat(*f.elab.decls, i)}))
      violates = true;
  REQUIRE(violates);
}

TEST_CASE("oneshot refuses multi-abstract-quantifier specs") {
  std::string text = R"(
type list = Nil | Cons of nat * list
module Pairy = struct
  type t = list
  let empty : t = Nil
  let join (a : t) (b : t) : t = a
end
spec forall (s1 : t) (s2 : t) . join s1 s2 = s1
)";
  auto prog = parse_program({text, "two.inv"});
  auto elab = elaborate(prog);
  EngineOptions opts = Fixture::quick(Mode::OneShot);
  InferenceEngine eng(elab, opts);
  Outcome out = eng.run();
  REQUIRE(out.kind == Outcome::Kind::Unsupported);
}

TEST_CASE("comparison modes terminate on ListSet with sound invariants") {
  Fixture f;
  for (Mode mode : {Mode::ConjStr, Mode::LA}) {
    InferenceEngine eng(f.elab, Fixture::quick(mode));
    Outcome out = eng.run();
    INFO("mode " << mode_name(mode));
    REQUIRE(out.kind == Outcome::Kind::Invariant);
    InferenceEngine recheck(f.elab, Fixture::quick());
    REQUIRE(!recheck.no_negatives(*out.invariant).has_value());
  }
}

TEST_CASE("disabling the counterexample-list cache costs extra calls") {
  Fixture f;
  EngineOptions with = Fixture::quick();
  EngineOptions without = Fixture::quick();
  without.cexlist_cache = false;

  InferenceEngine a(f.elab, with);
  Outcome oa = a.run();
  InferenceEngine b(f.elab, without);
  Outcome ob = b.run();
  REQUIRE(oa.kind == Outcome::Kind::Invariant);
  REQUIRE(ob.kind == Outcome::Kind::Invariant);
  long calls_with = a.stats().tsc + a.stats().tvc;
  long calls_without = b.stats().tsc + b.stats().tvc;
  REQUIRE(calls_with <= calls_without);
}
