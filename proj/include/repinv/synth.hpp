#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "repinv/enumerate.hpp"
#include "repinv/fn_enumerate.hpp"
#include "repinv/program.hpp"
#include "repinv/relation.hpp"

namespace repinv {

struct ExampleSet {
  ValueSet positives;
  ValueSet negatives;

  bool disjoint() const {
    for (const Value& v : positives.items())
      if (negatives.contains(v)) return false;
    return true;
  }
};

namespace synth_detail {

// Search cost of an atom: structural atoms cost one node; embedded
// constant literals add their full size, so value-specific tests rank
// behind structural ones of the same shape.
inline int constant_weight(const Expr& e) {
  if (e.kind() == ExprKind::CtorApp) return e.size();
  int w = 0;
  for (std::size_t i = 0; i < e.num_kids(); ++i)
    w += constant_weight(Expr(e.node()->kids[i]));
  return w;
}

inline int atom_cost(const Expr& e) { return 1 + constant_weight(e); }

// Strict subvalues of `v` sitting at type `target`, found by a joint walk
// of value and declared type.
inline void typed_subvalues(const DeclTable& decls, const Type& ty,
                            const Value& v, const Type& target, bool is_root,
                            ValueSet& out) {
  if (!is_root && ty == target) out.insert(v);
  switch (ty.kind()) {
    case TypeKind::Named: {
      if (v.kind() != ValueKind::Ctor) return;
      const CtorInfo* c = v.ctor_info();
      for (std::size_t i = 0; i < c->fields.size(); ++i)
        typed_subvalues(decls, c->fields[i], v.kid(i), target, false, out);
      return;
    }
    case TypeKind::Product:
      typed_subvalues(decls, ty.left(), v.kid(0), target, false, out);
      typed_subvalues(decls, ty.right(), v.kid(1), target, false, out);
      return;
    default:
      return;
  }
}

}  // namespace synth_detail

// Adds every strict concrete-typed subvalue of an example that is not
// already an example to the negatives. Positives are never touched;
// idempotent.
inline ExampleSet trace_complete(const ElaboratedProgram& prog,
                                 const ExampleSet& ex) {
  ExampleSet out = ex;
  ValueSet subs;
  for (const Value& v : ex.positives.items())
    synth_detail::typed_subvalues(*prog.decls, prog.concrete, v,
                                  prog.concrete, true, subs);
  for (const Value& v : ex.negatives.items())
    synth_detail::typed_subvalues(*prog.decls, prog.concrete, v,
                                  prog.concrete, true, subs);
  for (const Value& u : subs.items())
    if (!out.positives.contains(u) && !out.negatives.contains(u))
      out.negatives.insert(u);
  return out;
}

struct SynthResult {
  bool success = false;
  std::vector<Predicate> candidates;  // ordered, smallest first
};

class Synthesizer {
 public:
  virtual ~Synthesizer() = default;
  virtual SynthResult synth(const ExampleSet& ex) = 0;
};

struct SynthOptions {
  int size_cap = 40;        // term-size budget
  int size_floor = 5;       // deepening start; search stays size-ordered
  int size_step = 5;
  int max_candidates = 12;
  int candidate_slack = 4;  // keep collecting within this of the first hit
  int const_nodes = 4;      // constant pool bounds
  long const_count = 5;
  long pool_cap = 4000;     // deduped formulas kept per scope
  long max_tuples_per_size = 200000;  // branch-combination guard
};

// Enumerative predicate search: boolean combinations of helper-function
// calls, equality tests on 0-typed subterms, and one structural match on
// the argument with structurally recursive self-calls. Candidates are
// explored smallest-first over atom feature vectors and rebuilt as
// object-language terms when they separate the examples.
class GrammarSynthesizer : public Synthesizer {
 public:
  GrammarSynthesizer(const ElaboratedProgram& prog, EnumCache& cache,
                     EvalContext& ctx, SynthOptions opts = {})
      : prog_(prog), cache_(cache), ctx_(ctx), opts_(opts) {
    arg_ = Symbol("s");
    self_ = Symbol("inv");
    top_ = make_scope(nullptr);
    const AdtInfo* adt = prog_.decls->adt(prog_.concrete);
    if (adt)
      for (const auto& ctor : adt->ctors)
        branches_.push_back(make_scope(&ctor));
  }

  SynthResult synth(const ExampleSet& ex) override {
    if (!ex.disjoint()) return {};
    SynthResult result;
    Search(*this, ex).run(result);
    for (const Predicate& p : result.candidates) {
      for (const Value& v : ex.positives.items())
        if (!p.holds(ctx_, v))
          throw std::logic_error("synthesized predicate rejects a positive");
      for (const Value& v : ex.negatives.items())
        if (p.holds(ctx_, v))
          throw std::logic_error("synthesized predicate accepts a negative");
    }
    return result;
  }

 private:
  struct Atom {
    Expr expr;
    int size = 1;
    bool is_rec = false;
    int rec_slot = -1;
  };

  struct ScopeVar {
    Symbol name;
    Type type;
  };

  // One synthesis scope: the top-level argument, or one match branch.
  struct Scope {
    const CtorInfo* ctor = nullptr;  // null for the top-level scope
    std::vector<ScopeVar> vars;
    std::vector<Atom> atoms;
    std::vector<Expr> rec_targets;  // concrete-typed strict-subterm terms
  };

  Scope make_scope(const CtorInfo* ctor) {
    Scope scope;
    scope.ctor = ctor;
    if (!ctor) {
      scope.vars.push_back({arg_, prog_.concrete});
    } else {
      for (std::size_t i = 0; i < ctor->fields.size(); ++i)
        scope.vars.push_back(
            {Symbol("x" + std::to_string(i)), ctor->fields[i]});
    }

    // typed term pool: variables, one-level projections, small constants
    std::vector<std::pair<Expr, Type>> terms;
    for (const ScopeVar& v : scope.vars) {
      terms.emplace_back(Expr::var(v.name), v.type);
      if (v.type.kind() == TypeKind::Product) {
        terms.emplace_back(Expr::proj(1, Expr::var(v.name)), v.type.left());
        terms.emplace_back(Expr::proj(2, Expr::var(v.name)), v.type.right());
      }
    }
    std::set<std::string> const_done;
    std::size_t var_terms = terms.size();
    for (std::size_t i = 0; i < var_terms; ++i) {
      Type ty = terms[i].second;
      if (contains_arrow(ty)) continue;
      if (!const_done.insert(ty.to_string()).second) continue;
      ValueStream vs =
          enum_values(cache_, ty, opts_.const_nodes, opts_.const_count);
      while (auto v = vs.next()) terms.emplace_back(value_to_expr(*v), ty);
    }

    auto terms_of = [&](const Type& ty) {
      std::vector<Expr> out;
      for (const auto& [e, t] : terms)
        if (t == ty) out.push_back(e);
      return out;
    };

    // helper-call atoms: prelude functions and module ops returning bool
    for (const auto& [hname, hty] : prog_.env_types) {
      Type result;
      std::vector<Type> slots = curried_slots(hty, &result);
      if (slots.empty() || slots.size() > 3) continue;
      if (result != prog_.decls->bool_type()) continue;
      bool ok = true;
      for (const Type& s : slots)
        if (contains_arrow(s)) ok = false;
      if (!ok) continue;
      std::vector<std::vector<Expr>> choices;
      for (const Type& s : slots) choices.push_back(terms_of(s));
      for (const auto& c : choices)
        if (c.empty()) ok = false;
      if (!ok) continue;
      std::vector<Expr> args(slots.size());
      auto emit = [&](auto&& self_fn, std::size_t i) -> void {
        if (i == slots.size()) {
          Expr call = Expr::var(hname);
          for (const Expr& a : args) call = Expr::app(call, a);
          scope.atoms.push_back(
              {call, synth_detail::atom_cost(call), false, -1});
          return;
        }
        for (const Expr& choice : choices[i]) {
          args[i] = choice;
          self_fn(self_fn, i + 1);
        }
      };
      emit(emit, 0);
    }

    // equality atoms on 0-typed subterms
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        if (terms[i].second != terms[j].second) continue;
        if (contains_arrow(terms[i].second)) continue;
        bool both_const = terms[i].first.kind() == ExprKind::CtorApp &&
                          terms[j].first.kind() == ExprKind::CtorApp;
        if (both_const) continue;  // constant-constant tests are decided
        Expr eq = Expr::eq(terms[i].first, terms[j].first);
        scope.atoms.push_back({eq, synth_detail::atom_cost(eq), false, -1});
      }
    }

    // bool-typed scope terms stand alone
    for (const auto& [e, ty] : terms)
      if (ty == prog_.decls->bool_type() && e.kind() != ExprKind::CtorApp)
        scope.atoms.push_back({e, synth_detail::atom_cost(e), false, -1});

    // recursive self-calls on strict concrete-typed subterms
    if (ctor) {
      for (const auto& [e, ty] : terms) {
        if (!(ty == prog_.concrete)) continue;
        if (e.kind() == ExprKind::CtorApp) continue;
        int slot = static_cast<int>(scope.rec_targets.size());
        scope.rec_targets.push_back(e);
        Expr call = Expr::app(Expr::var(self_), e);
        scope.atoms.push_back(
            {call, synth_detail::atom_cost(call), true, slot});
      }
    }
    return scope;
  }

  // --- feature vectors and formula pools ---------------------------------

  using Bits = std::vector<std::uint64_t>;
  static void set_bit(Bits& b, std::size_t i, bool v) {
    if (v) b[i >> 6] |= (1ull << (i & 63));
  }
  static bool get_bit(const Bits& b, std::size_t i) {
    return (b[i >> 6] >> (i & 63)) & 1;
  }

  enum class FKind { True, False, Atom, Not, And, Or };
  struct Formula {
    FKind kind;
    int a = -1, b = -1;
    int size = 1;
    bool uses_rec = false;
    Bits val;
  };

  struct Pool {
    std::size_t rows = 0;
    std::vector<Formula> entries;
    std::map<Bits, int> seen;
    std::map<int, std::vector<int>> by_size;
    int generated_size = 0;
    std::vector<Bits> atom_bits;   // per atom over rows
    std::vector<int> atom_sizes;
    std::vector<bool> atom_rec;

    void add(Formula f, long cap) {
      if (static_cast<long>(entries.size()) >= cap) return;
      if (seen.count(f.val)) return;
      int idx = static_cast<int>(entries.size());
      seen.emplace(f.val, idx);
      by_size[f.size].push_back(idx);
      entries.push_back(std::move(f));
    }

    // Generates all formulas of term size up to `size` (semantically
    // deduplicated, smallest representative kept).
    void grow(int size, long cap) {
      if (rows == 0) rows = 1;
      std::size_t words = (rows + 63) / 64;
      while (generated_size < size) {
        int n = ++generated_size;
        if (n == 1) {
          Formula t{FKind::True, -1, -1, 1, false, Bits(words, 0)};
          for (std::size_t r = 0; r < rows; ++r) set_bit(t.val, r, true);
          add(std::move(t), cap);
          add(Formula{FKind::False, -1, -1, 1, false, Bits(words, 0)}, cap);
        }
        for (std::size_t ai = 0; ai < atom_bits.size(); ++ai)
          if (atom_sizes[ai] == n)
            add(Formula{FKind::Atom, static_cast<int>(ai), -1, n,
                        atom_rec[ai], atom_bits[ai]},
                cap);
        std::size_t count = entries.size();
        for (std::size_t i = 0; i < count; ++i) {
          if (entries[i].size != n - 1) continue;
          Formula f{FKind::Not, static_cast<int>(i), -1, n,
                    entries[i].uses_rec, entries[i].val};
          for (auto& w : f.val) w = ~w;
          if (rows & 63) f.val.back() &= (1ull << (rows & 63)) - 1;
          add(std::move(f), cap);
        }
        for (std::size_t i = 0; i < count; ++i) {
          for (std::size_t j = i; j < count; ++j) {
            if (entries[i].size + entries[j].size != n - 1) continue;
            bool rec = entries[i].uses_rec || entries[j].uses_rec;
            Formula fa{FKind::And, static_cast<int>(i), static_cast<int>(j),
                       n, rec, entries[i].val};
            for (std::size_t w = 0; w < fa.val.size(); ++w)
              fa.val[w] &= entries[j].val[w];
            add(std::move(fa), cap);
            Formula fo{FKind::Or, static_cast<int>(i), static_cast<int>(j),
                       n, rec, entries[i].val};
            for (std::size_t w = 0; w < fo.val.size(); ++w)
              fo.val[w] |= entries[j].val[w];
            add(std::move(fo), cap);
          }
        }
      }
    }
  };

  // --- one search --------------------------------------------------------

  struct Search {
    GrammarSynthesizer& g;
    const ExampleSet& ex;
    std::vector<Value> examples;  // positives then negatives
    std::size_t num_pos = 0;
    Pool top;
    Bits pos_mask, row_mask;

    // shape B state
    std::vector<Value> closure;  // concrete-typed subvalues, ascending size
    std::vector<int> value_branch;
    std::vector<int> value_atom_row;
    std::vector<std::vector<int>> value_rec_idx;  // closure idx of targets
    std::vector<int> example_closure_idx;
    std::vector<Pool> branch_pools;
    std::vector<std::size_t> branch_combos;

    Search(GrammarSynthesizer& g, const ExampleSet& ex) : g(g), ex(ex) {
      for (const Value& v : ex.positives.items()) examples.push_back(v);
      num_pos = examples.size();
      for (const Value& v : ex.negatives.items()) examples.push_back(v);

      top.rows = std::max<std::size_t>(examples.size(), 1);
      std::size_t words = (top.rows + 63) / 64;
      pos_mask.assign(words, 0);
      row_mask.assign(words, 0);
      for (std::size_t r = 0; r < num_pos; ++r) set_bit(pos_mask, r, true);
      for (std::size_t r = 0; r < examples.size(); ++r)
        set_bit(row_mask, r, true);
      for (const Atom& atom : g.top_.atoms) {
        Bits bits(words, 0);
        for (std::size_t r = 0; r < examples.size(); ++r)
          set_bit(bits, r, g.eval_atom(atom, g.top_, examples[r]));
        top.atom_bits.push_back(std::move(bits));
        top.atom_sizes.push_back(atom.size);
        top.atom_rec.push_back(false);
      }

      if (g.branches_.empty() || examples.empty()) return;

      ValueSet closure_set;
      for (const Value& v : examples) {
        closure_set.insert(v);
        synth_detail::typed_subvalues(*g.prog_.decls, g.prog_.concrete, v,
                                      g.prog_.concrete, true, closure_set);
      }
      closure = closure_set.items();
      std::stable_sort(closure.begin(), closure.end(), canonical_less);
      std::unordered_map<Value, int, ValueHash, ValueEq> closure_index;
      for (std::size_t i = 0; i < closure.size(); ++i)
        closure_index.emplace(closure[i], static_cast<int>(i));
      for (const Value& v : examples)
        example_closure_idx.push_back(closure_index.at(v));

      value_branch.resize(closure.size());
      value_atom_row.resize(closure.size());
      value_rec_idx.resize(closure.size());
      branch_pools.resize(g.branches_.size());
      branch_combos.assign(g.branches_.size(), 1);

      std::vector<std::map<std::vector<bool>, int>> row_ids(
          g.branches_.size());
      std::vector<std::vector<std::vector<bool>>> raw_rows(
          g.branches_.size());
      for (std::size_t ci = 0; ci < closure.size(); ++ci) {
        const Value& w = closure[ci];
        int bi = w.ctor_info()->index;
        const Scope& scope = g.branches_[bi];
        value_branch[ci] = bi;
        std::vector<bool> bits;
        for (const Atom& atom : scope.atoms)
          if (!atom.is_rec) bits.push_back(g.eval_atom(atom, scope, w));
        auto [it, fresh] =
            row_ids[bi].emplace(bits, static_cast<int>(raw_rows[bi].size()));
        if (fresh) raw_rows[bi].push_back(bits);
        value_atom_row[ci] = it->second;
        for (const Expr& target : scope.rec_targets) {
          Value tv = g.eval_term(target, scope, w);
          value_rec_idx[ci].push_back(closure_index.at(tv));
        }
      }

      for (std::size_t bi = 0; bi < g.branches_.size(); ++bi) {
        const Scope& scope = g.branches_[bi];
        int rec = static_cast<int>(scope.rec_targets.size());
        std::size_t combos = 1ull << rec;
        branch_combos[bi] = combos;
        Pool& pool = branch_pools[bi];
        pool.rows = std::max<std::size_t>(raw_rows[bi].size() * combos, 1);
        std::size_t bwords = (pool.rows + 63) / 64;
        std::size_t non_rec = 0;
        for (const Atom& atom : scope.atoms) {
          Bits bits(bwords, 0);
          for (std::size_t ar = 0; ar < raw_rows[bi].size(); ++ar)
            for (std::size_t combo = 0; combo < combos; ++combo) {
              bool bit = atom.is_rec ? ((combo >> atom.rec_slot) & 1)
                                     : raw_rows[bi][ar][non_rec];
              set_bit(bits, ar * combos + combo, bit);
            }
          if (!atom.is_rec) ++non_rec;
          pool.atom_bits.push_back(std::move(bits));
          pool.atom_sizes.push_back(atom.size);
          pool.atom_rec.push_back(atom.is_rec);
        }
      }
    }

    // Semantics of a shape-B candidate on every example, via one
    // bottom-up pass over the subvalue closure.
    bool test_branch_candidate(const std::vector<int>& pick) {
      std::vector<char> memo(closure.size(), 0);
      for (std::size_t ci = 0; ci < closure.size(); ++ci) {
        int bi = value_branch[ci];
        std::size_t combo = 0;
        for (std::size_t slot = 0; slot < value_rec_idx[ci].size(); ++slot)
          if (memo[value_rec_idx[ci][slot]]) combo |= (1ull << slot);
        std::size_t row = value_atom_row[ci] * branch_combos[bi] + combo;
        memo[ci] =
            get_bit(branch_pools[bi].entries[pick[bi]].val, row) ? 1 : 0;
      }
      for (std::size_t r = 0; r < examples.size(); ++r) {
        bool want = r < num_pos;
        if (static_cast<bool>(memo[example_closure_idx[r]]) != want)
          return false;
      }
      return true;
    }

    Expr formula_expr(const Pool& pool, const Scope& scope, int idx) {
      const Formula& f = pool.entries[idx];
      switch (f.kind) {
        case FKind::True:
          return g.make_bool_ctor(true);
        case FKind::False:
          return g.make_bool_ctor(false);
        case FKind::Atom:
          return scope.atoms[f.a].expr;
        case FKind::Not:
          return g.make_not(formula_expr(pool, scope, f.a));
        case FKind::And:
          return g.make_and(formula_expr(pool, scope, f.a),
                            formula_expr(pool, scope, f.b));
        case FKind::Or:
          return g.make_or(formula_expr(pool, scope, f.a),
                           formula_expr(pool, scope, f.b));
      }
      return g.make_bool_ctor(true);
    }

    Predicate build_top(int idx) {
      Expr body = formula_expr(top, g.top_, idx);
      Expr closed = Expr::lambda(g.arg_, g.prog_.concrete, body);
      return g.finish(closed);
    }

    Predicate build_match(const std::vector<int>& pick) {
      std::vector<MatchBranch> branches;
      bool rec = false;
      for (std::size_t bi = 0; bi < g.branches_.size(); ++bi) {
        const Scope& scope = g.branches_[bi];
        MatchBranch br;
        br.ctor = scope.ctor;
        for (const ScopeVar& v : scope.vars) br.binders.push_back(v.name);
        br.body = formula_expr(branch_pools[bi], scope, pick[bi]).node();
        rec = rec || branch_pools[bi].entries[pick[bi]].uses_rec;
        branches.push_back(std::move(br));
      }
      Expr body = Expr::match(Expr::var(g.arg_), std::move(branches));
      Expr fn = Expr::lambda(g.arg_, g.prog_.concrete, body);
      Expr closed = fn;
      if (rec)
        closed = Expr::let_rec(
            g.self_, Type::arrow(g.prog_.concrete, g.prog_.decls->bool_type()),
            fn, Expr::var(g.self_));
      return g.finish(closed);
    }

    void run(SynthResult& out) {
      int first_hit = -1;
      std::size_t k = g.branches_.size();
      for (int n = 1; n <= g.opts_.size_cap; ++n) {
        g.ctx_.check_deadline();
        if (first_hit >= 0 && n > first_hit + g.opts_.candidate_slack) break;
        if (static_cast<int>(out.candidates.size()) >= g.opts_.max_candidates)
          break;

        // shape A: top-level formulas of exactly size n
        top.grow(n, g.opts_.pool_cap);
        for (int idx : top.by_size[n]) {
          const Formula& f = top.entries[idx];
          bool ok = true;
          for (std::size_t w = 0; w < f.val.size() && ok; ++w) {
            if ((f.val[w] & pos_mask[w]) != pos_mask[w]) ok = false;
            std::uint64_t negs = row_mask[w] & ~pos_mask[w];
            if ((f.val[w] & negs) != 0) ok = false;
          }
          if (!ok) continue;
          out.candidates.push_back(build_top(idx));
          if (first_hit < 0) first_hit = n;
          if (static_cast<int>(out.candidates.size()) >=
              g.opts_.max_candidates)
            return;
        }

        // shape B: match with per-branch bodies, total size n
        if (k == 0 || closure.empty()) continue;
        int body_total = n - 2 - static_cast<int>(k);
        if (body_total < static_cast<int>(k)) continue;
        for (auto& pool : branch_pools)
          pool.grow(body_total - static_cast<int>(k) + 1, g.opts_.pool_cap);

        long tuples = 0;
        std::vector<int> pick(k, 0);
        auto enumerate = [&](auto&& self_fn, std::size_t bi,
                             int remaining) -> void {
          if (tuples > g.opts_.max_tuples_per_size) return;
          if (static_cast<int>(out.candidates.size()) >=
              g.opts_.max_candidates)
            return;
          if (bi == k) {
            if (remaining != 0) return;
            ++tuples;
            if (test_branch_candidate(pick)) {
              out.candidates.push_back(build_match(pick));
              if (first_hit < 0) first_hit = n;
            }
            return;
          }
          int rest_min = static_cast<int>(k - bi - 1);
          for (int sz = 1; sz <= remaining - rest_min; ++sz) {
            auto it = branch_pools[bi].by_size.find(sz);
            if (it == branch_pools[bi].by_size.end()) continue;
            for (int idx : it->second) {
              pick[bi] = idx;
              self_fn(self_fn, bi + 1, remaining - sz);
              if (tuples > g.opts_.max_tuples_per_size) return;
            }
          }
        };
        enumerate(enumerate, 0, body_total);
      }
      out.success = !out.candidates.empty();
    }
  };

  Predicate finish(Expr closed) {
    Predicate p;
    ctx_.reset_fuel();
    p.fn = eval(ctx_, prog_.full_env, closed);
    p.source = closed;
    p.ast_size = closed.size();
    return p;
  }

  Expr make_bool_ctor(bool b) {
    return Expr::ctor_app(
        b ? prog_.decls->bool_true() : prog_.decls->bool_false(), {});
  }
  Expr make_not(Expr e) {
    std::vector<MatchBranch> br(2);
    br[0].ctor = prog_.decls->bool_true();
    br[0].body = make_bool_ctor(false).node();
    br[1].ctor = prog_.decls->bool_false();
    br[1].body = make_bool_ctor(true).node();
    return Expr::match(e, std::move(br));
  }
  Expr make_and(Expr a, Expr b) {
    std::vector<MatchBranch> br(2);
    br[0].ctor = prog_.decls->bool_true();
    br[0].body = b.node();
    br[1].ctor = prog_.decls->bool_false();
    br[1].body = make_bool_ctor(false).node();
    return Expr::match(a, std::move(br));
  }
  Expr make_or(Expr a, Expr b) {
    std::vector<MatchBranch> br(2);
    br[0].ctor = prog_.decls->bool_true();
    br[0].body = make_bool_ctor(true).node();
    br[1].ctor = prog_.decls->bool_false();
    br[1].body = b.node();
    return Expr::match(a, std::move(br));
  }

  bool eval_atom(const Atom& atom, const Scope& scope, const Value& v) {
    return value_to_bool(eval_in_scope(atom.expr, scope, v));
  }
  Value eval_term(const Expr& term, const Scope& scope, const Value& v) {
    return eval_in_scope(term, scope, v);
  }
  Value eval_in_scope(const Expr& e, const Scope& scope, const Value& v) {
    Env env = prog_.full_env;
    if (!scope.ctor) {
      env = env_bind(env, arg_, v);
    } else {
      for (std::size_t i = 0; i < scope.vars.size(); ++i)
        env = env_bind(env, scope.vars[i].name, v.kid(i));
    }
    ctx_.reset_fuel();
    return eval(ctx_, env, e);
  }

  const ElaboratedProgram& prog_;
  EnumCache& cache_;
  EvalContext& ctx_;
  SynthOptions opts_;
  Symbol arg_, self_;
  Scope top_;
  std::vector<Scope> branches_;
};

// Pluggable synthesizer for finite-domain suites: returns the membership
// predicate of exactly the positive set. Sound by construction and
// complete whenever the example sets are disjoint.
class MembershipSynthesizer : public Synthesizer {
 public:
  SynthResult synth(const ExampleSet& ex) override {
    if (!ex.disjoint()) return {};
    ValueSet set = ex.positives;
    Predicate p = make_native_predicate(
        [set](EvalContext&, const Value& v) { return set.contains(v); },
        "member-of-positives", 1 + static_cast<int>(set.size()));
    SynthResult r;
    r.success = true;
    r.candidates.push_back(std::move(p));
    return r;
  }
};

// Ordered store of previously synthesized candidates; a cache hit stands
// in for a fresh synthesis call.
class CandidateCache {
 public:
  void add(const Predicate& p) {
    std::string key = p.source.defined() ? expr_to_string(p.source) : p.label;
    if (!keys_.insert(key).second) return;
    preds_.push_back(p);
  }
  void add_all(const std::vector<Predicate>& ps) {
    for (const auto& p : ps) add(p);
  }

  const Predicate* lookup(EvalContext& ctx, const ExampleSet& ex) const {
    for (const Predicate& p : preds_) {
      bool ok = true;
      for (const Value& v : ex.positives.items())
        if (!p.holds(ctx, v)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      for (const Value& v : ex.negatives.items())
        if (p.holds(ctx, v)) {
          ok = false;
          break;
        }
      if (ok) return &p;
    }
    return nullptr;
  }

  void clear() {
    preds_.clear();
    keys_.clear();
  }
  std::size_t size() const { return preds_.size(); }

 private:
  std::vector<Predicate> preds_;
  std::set<std::string> keys_;
};

}  // namespace repinv
