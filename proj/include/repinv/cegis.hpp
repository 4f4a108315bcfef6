#pragma once

#include <memory>
#include <unordered_map>

#include "repinv/induct.hpp"
#include "repinv/predicate_io.hpp"
#include "repinv/stats.hpp"
#include "repinv/synth.hpp"
#include "repinv/verify.hpp"

namespace repinv {

enum class Mode { Hanoi, ConjStr, LA, OneShot };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Hanoi: return "hanoi";
    case Mode::ConjStr: return "conjstr";
    case Mode::LA: return "la";
    case Mode::OneShot: return "oneshot";
  }
  return "?";
}

inline std::optional<Mode> mode_from_string(const std::string& s) {
  if (s == "hanoi") return Mode::Hanoi;
  if (s == "conjstr") return Mode::ConjStr;
  if (s == "la") return Mode::LA;
  if (s == "oneshot") return Mode::OneShot;
  return std::nullopt;
}

struct EngineOptions {
  Mode mode = Mode::Hanoi;
  bool synth_cache = true;
  bool cexlist_cache = true;
  bool debug_rank = false;
  double timeout_s = 1800;
  std::int64_t fuel = 100000;
  VerifBudget budget_single = default_budget(1);
  VerifBudget budget_multi = default_budget(2);
  InductBudget induct;
  SynthOptions synth;

  std::string flag_string() const {
    std::string s;
    if (!synth_cache) s += " -synthcache";
    if (!cexlist_cache) s += " -cexlistcache";
    if (debug_rank) s += " +rank";
    return s.empty() ? "" : s.substr(1);
  }
};

struct Outcome {
  enum class Kind {
    Invariant,
    SpecViolation,
    SynthFailure,
    Timeout,
    Unsupported,
  };
  Kind kind = Kind::SynthFailure;
  std::optional<Predicate> invariant;
  bool bounded = true;  // validity is testing-backed, never proof-backed
  std::vector<Value> violation;        // constructible witnesses
  std::vector<Value> violation_tuple;  // full spec instantiation
  std::vector<std::string> replay;
  std::string message;
};

inline const char* outcome_name(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::Invariant: return "invariant";
    case Outcome::Kind::SpecViolation: return "violation";
    case Outcome::Kind::SynthFailure: return "synthfailure";
    case Outcome::Kind::Timeout: return "timeout";
    case Outcome::Kind::Unsupported: return "unsupported";
  }
  return "?";
}

// One epoch step of the counterexample-list cache: a synthesized
// candidate with the negatives added in response to it.
struct TraceEntry {
  Predicate pred;
  std::vector<Value> negatives;
};

// Longest trace prefix whose candidates all accept the new positive;
// returns the union of that prefix's negatives and the trimmed trace.
inline std::pair<std::vector<Value>, std::vector<TraceEntry>> cex_list_filter(
    EvalContext& ctx, const std::vector<TraceEntry>& trace,
    const Value& new_positive) {
  std::vector<TraceEntry> kept;
  std::vector<Value> resume;
  for (const TraceEntry& e : trace) {
    if (!e.pred.holds(ctx, new_positive)) break;
    kept.push_back(e);
    for (const Value& v : e.negatives) resume.push_back(v);
  }
  return {std::move(resume), std::move(kept)};
}

// The counterexample-guided loop and its comparison modes.
class InferenceEngine {
 public:
  InferenceEngine(const ElaboratedProgram& prog, EngineOptions opts = {},
                  Synthesizer* custom_synth = nullptr)
      : prog_(prog),
        opts_(opts),
        cache_(prog.decls.get()),
        ctx_(prog.decls.get(), opts.fuel) {
    ctx_.set_timeout(opts.timeout_s);
    if (custom_synth) {
      synth_ = custom_synth;
    } else {
      own_synth_ = std::make_unique<GrammarSynthesizer>(prog_, cache_, ctx_,
                                                        opts.synth);
      synth_ = own_synth_.get();
    }
    stats_.stats().mode = mode_name(opts.mode);
  }

  Outcome run() {
    ScopedTimer timer(&stats_.stats().time_s);
    Outcome out;
    try {
      switch (opts_.mode) {
        case Mode::Hanoi: out = run_hanoi(); break;
        case Mode::ConjStr: out = run_conj_str(); break;
        case Mode::LA: out = run_la(); break;
        case Mode::OneShot: out = run_oneshot(); break;
      }
    } catch (const TimeoutError&) {
      out.kind = Outcome::Kind::Timeout;
      out.message = "timed out after " + std::to_string(opts_.timeout_s) +
                    " s";
    }
    stats_.stats().outcome = outcome_name(out.kind);
    if (out.invariant) stats_.stats().invariant_size = out.invariant->ast_size;
    return out;
  }

  RunStats& stats() { return stats_.stats(); }
  EvalContext& ctx() { return ctx_; }
  EnumCache& enum_cache() { return cache_; }

  struct PositiveCex {
    std::vector<Value> values;  // constructible, outside the candidate
    OpApplication witness;
  };
  struct NegativeCex {
    std::vector<Value> values;  // satisfy the candidate
    bool from_sufficiency = false;
    std::vector<Value> tuple;  // spec instantiation when from sufficiency
  };

  // Visible inductiveness: one-step closure of the known positives.
  std::optional<PositiveCex> closed_positives(const ValueSet& vplus,
                                              const Predicate& candidate) {
    InductChecker checker(prog_, cache_, ctx_, opts_.induct, &stats_);
    CexReport r = checker.cond_inductive(Relation::membership(vplus),
                                         Relation::predicate(candidate));
    if (r.valid) return std::nullopt;
    PositiveCex out{r.V, *r.witness};
    for (const Value& v : out.values)
      if (vplus.contains(v))
        throw std::logic_error("closed-positives value already positive");
    return out;
  }

  // Sufficiency then full inductiveness; returns values satisfying the
  // candidate that must become negatives (or witness a violation).
  std::optional<NegativeCex> no_negatives(const Predicate& candidate) {
    if (auto s = check_sufficiency(candidate)) return s;
    InductChecker checker(prog_, cache_, ctx_, opts_.induct, &stats_);
    CexReport r = checker.cond_inductive(Relation::predicate(candidate),
                                         Relation::predicate(candidate));
    if (!r.valid) {
      if (r.S.empty())
        throw std::logic_error(
            "full-inductiveness counterexample with empty S after a "
            "visible-inductiveness pass");
      return NegativeCex{r.S, false, {}};
    }
    return std::nullopt;
  }

  std::optional<NegativeCex> check_sufficiency(const Predicate& candidate) {
    Query q;
    for (const auto& [name, ty] : prog_.spec.quantifiers)
      q.vars.push_back(
          {name, contains_abstract(ty) ? prog_.concrete : ty});
    q.budget = q.vars.size() == 1 ? opts_.budget_single : opts_.budget_multi;
    q.label = "sufficiency";
    q.body = [&](EvalContext& c, const std::vector<Value>& tuple) {
      for (std::size_t idx : prog_.abstract_quantifiers)
        if (!candidate.holds(c, tuple[idx])) return true;
      return prog_.spec_holds(c, tuple);
    };
    VerifOutcome out = verify(cache_, ctx_, q, &stats_);
    if (out.valid) return std::nullopt;
    NegativeCex n;
    n.from_sufficiency = true;
    n.tuple = out.counterexample;
    ValueSet set;
    for (std::size_t idx : prog_.abstract_quantifiers)
      set.insert(out.counterexample[idx]);
    n.values = set.items();
    return n;
  }

 private:
  using ReplayMap =
      std::unordered_map<Value, OpApplication, ValueHash, ValueEq>;

  Outcome synth_failure(std::string msg) {
    Outcome o;
    o.kind = Outcome::Kind::SynthFailure;
    o.message = std::move(msg);
    return o;
  }

  Outcome invariant_outcome(Predicate p) {
    Outcome o;
    o.kind = Outcome::Kind::Invariant;
    o.invariant = std::move(p);
    o.bounded = true;
    return o;
  }

  Outcome spec_violation(const NegativeCex& n, const ReplayMap& replays) {
    Outcome o;
    o.kind = Outcome::Kind::SpecViolation;
    o.violation = n.values;
    o.violation_tuple = n.tuple;
    o.replay = replay_lines(replays, n.values);
    o.message = "constructible specification violation";
    return o;
  }

  // Emits a straight-line client program that reconstructs each value.
  std::vector<std::string> replay_lines(const ReplayMap& replays,
                                        const std::vector<Value>& values) {
    std::vector<std::string> lines;
    std::unordered_map<Value, std::string, ValueHash, ValueEq> names;
    int counter = 0;
    auto emit = [&](auto&& self, const Value& v) -> std::string {
      auto it = names.find(v);
      if (it != names.end()) return it->second;
      auto rit = replays.find(v);
      if (rit == replays.end()) {
        // not op-built: print literally (base-typed arguments)
        return value_to_string(v);
      }
      std::vector<std::string> arg_names;
      for (const Value& a : rit->second.args) {
        if (a.closure_free() && replays.count(a))
          arg_names.push_back(self(self, a));
        else if (a.is_fn())
          arg_names.push_back(
              "(" + expr_to_string(a.closure_data().source) + ")");
        else
          arg_names.push_back(value_to_string(a));
      }
      std::string name = "v" + std::to_string(counter++);
      std::string line = name + " = " + rit->second.op.str();
      for (const std::string& an : arg_names) line += " " + an;
      line += "   (* = " + value_to_string(v) + " *)";
      names.emplace(v, name);
      lines.push_back(line);
      return name;
    };
    for (const Value& v : values) emit(emit, v);
    return lines;
  }

  Predicate synth_step(const ExampleSet& ex, bool* failed) {
    ExampleSet tc = trace_complete(prog_, ex);
    *failed = false;
    if (opts_.synth_cache)
      if (const Predicate* hit = cache_store_.lookup(ctx_, tc)) return *hit;
    ScopedTimer t(nullptr);
    SynthResult r = synth_->synth(tc);
    stats_.record_synth(t.elapsed());
    if (!r.success) {
      *failed = true;
      return Predicate{};
    }
    if (opts_.synth_cache) cache_store_.add_all(r.candidates);
    return r.candidates.front();
  }

  void rank_step(bool grew_plus, std::size_t vplus, std::size_t vminus) {
    if (!opts_.debug_rank) return;
    if (grew_plus) {
      if (vplus <= last_vplus_)
        throw std::logic_error("rank did not decrease: positives stagnant");
    } else {
      if (vplus != last_vplus_ || vminus <= last_vminus_)
        throw std::logic_error("rank did not decrease: negatives stagnant");
    }
    last_vplus_ = vplus;
    last_vminus_ = vminus;
  }

  // --- the main loop -------------------------------------------------------

  Outcome run_hanoi() {
    ValueSet vplus, vminus;
    ReplayMap replays;
    std::vector<TraceEntry> trace;
    last_vplus_ = 0;
    last_vminus_ = 0;

    for (;;) {
      ctx_.check_deadline();
      ExampleSet ex;
      ex.positives = vplus;
      ex.negatives = vminus;
      bool failed = false;
      Predicate cand = synth_step(ex, &failed);
      if (failed) return synth_failure("No predicate found");

      if (auto pos = closed_positives(vplus, cand)) {
        for (const Value& v : pos->values) {
          vplus.insert(v);
          replays.emplace(v, pos->witness);
        }
        if (opts_.cexlist_cache) {
          for (const Value& v : pos->values)
            trace = cex_list_filter(ctx_, trace, v).second;
          // a resumed negative may meanwhile have been proven
          // constructible; drop it and let the checks re-derive it
          for (TraceEntry& e : trace) {
            std::vector<Value> kept;
            for (const Value& v : e.negatives)
              if (!vplus.contains(v)) kept.push_back(v);
            e.negatives = std::move(kept);
          }
          vminus.clear();
          for (const TraceEntry& e : trace)
            for (const Value& v : e.negatives) vminus.insert(v);
        } else {
          vminus.clear();
          trace.clear();
        }
        rank_step(true, vplus.size(), vminus.size());
        continue;
      }

      if (auto neg = no_negatives(cand)) {
        std::vector<Value> fresh;
        for (const Value& v : neg->values)
          if (!vplus.contains(v)) fresh.push_back(v);
        if (fresh.empty()) {
          if (!neg->from_sufficiency)
            throw std::logic_error(
                "inductiveness counterexample entirely inside the positive "
                "set");
          return spec_violation(*neg, replays);
        }
        for (const Value& v : fresh) vminus.insert(v);
        trace.push_back(TraceEntry{cand, fresh});
        rank_step(false, vplus.size(), vminus.size());
        continue;
      }

      return invariant_outcome(cand);
    }
  }

  // --- conjunctive strengthening ------------------------------------------

  Predicate conj_predicate(const std::vector<Predicate>& ps) {
    if (ps.size() == 1) return ps.front();
    bool all_sourced = true;
    for (const Predicate& p : ps)
      if (!p.source.defined()) all_sourced = false;
    if (all_sourced) {
      Symbol s("s");
      Expr body;
      for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
        Expr call = Expr::app(it->source, Expr::var(s));
        if (!body.defined()) {
          body = call;
        } else {
          std::vector<MatchBranch> br(2);
          br[0].ctor = prog_.decls->bool_true();
          br[0].body = body.node();
          br[1].ctor = prog_.decls->bool_false();
          br[1].body =
              Expr::ctor_app(prog_.decls->bool_false(), {}).node();
          body = Expr::match(call, std::move(br));
        }
      }
      Expr closed = Expr::lambda(s, prog_.concrete, body);
      Predicate out;
      ctx_.reset_fuel();
      out.fn = eval(ctx_, prog_.full_env, closed);
      out.source = closed;
      out.ast_size = closed.size();
      return out;
    }
    std::vector<Predicate> copy = ps;
    int size = 1;
    for (const Predicate& p : copy) size += p.ast_size;
    return make_native_predicate(
        [copy](EvalContext& c, const Value& v) {
          for (const Predicate& p : copy)
            if (!p.holds(c, v)) return false;
          return true;
        },
        "conjunction", size);
  }

  Outcome run_conj_str() {
    ValueSet vplus;
    ReplayMap replays;
    for (int restart = 0; restart < 10000; ++restart) {
      ctx_.check_deadline();
      cache_store_.clear();  // both caches reset on every restart
      ValueSet vminus;
      bool restart_needed = false;

      // Phase 1: a candidate sufficient for the spec.
      Predicate first;
      for (;;) {
        ctx_.check_deadline();
        ExampleSet ex;
        ex.positives = vplus;
        ex.negatives = vminus;
        bool failed = false;
        first = synth_step(ex, &failed);
        if (failed) return synth_failure("No predicate found");
        auto suff = check_sufficiency(first);
        if (!suff) break;
        std::vector<Value> fresh;
        for (const Value& v : suff->values)
          if (!vplus.contains(v)) fresh.push_back(v);
        if (fresh.empty()) return spec_violation(*suff, replays);
        for (const Value& v : fresh) vminus.insert(v);
      }

      // Phase 2: conjoin predicates until the conjunction is inductive.
      std::vector<Predicate> conj{first};
      Predicate cur = first;
      while (!restart_needed) {
        ctx_.check_deadline();
        if (auto pos = closed_positives(vplus, cur)) {
          for (const Value& v : pos->values) {
            vplus.insert(v);
            replays.emplace(v, pos->witness);
          }
          restart_needed = true;  // over-strengthened
          break;
        }
        InductChecker checker(prog_, cache_, ctx_, opts_.induct, &stats_);
        CexReport full = checker.cond_inductive(Relation::predicate(cur),
                                                Relation::predicate(cur));
        if (full.valid) return invariant_outcome(cur);

        // Strengthen: find next with (cur and next) conditionally
        // inductive with respect to cur.
        ValueSet negs;
        bool all_known = true;
        for (const Value& v : full.S) {
          if (!vplus.contains(v)) {
            negs.insert(v);
            all_known = false;
          }
        }
        if (all_known) {
          for (const Value& v : full.V) {
            vplus.insert(v);
            replays.emplace(v, *full.witness);
          }
          restart_needed = true;
          break;
        }
        bool strengthened = false;
        for (int inner = 0; inner < 200 && !strengthened; ++inner) {
          ctx_.check_deadline();
          ExampleSet ex;
          ex.positives = vplus;
          ex.negatives = negs;
          bool failed = false;
          Predicate next = synth_step(ex, &failed);
          if (failed) return synth_failure("No predicate found");
          std::vector<Predicate> attempt = conj;
          attempt.push_back(next);
          Predicate combined = conj_predicate(attempt);
          CexReport cond = checker.cond_inductive(
              Relation::predicate(combined), Relation::predicate(cur));
          if (cond.valid) {
            conj = attempt;
            cur = combined;
            strengthened = true;
            break;
          }
          bool progress = false;
          bool cond_known = true;
          for (const Value& v : cond.S)
            if (!vplus.contains(v)) {
              cond_known = false;
              if (negs.insert(v)) progress = true;
            }
          if (cond_known) {
            for (const Value& v : cond.V) {
              vplus.insert(v);
              replays.emplace(v, *cond.witness);
            }
            restart_needed = true;
            break;
          }
          if (!progress)
            return synth_failure(
                "conjunctive strengthening made no progress");
        }
        if (!strengthened && !restart_needed)
          return synth_failure("conjunctive strengthening exhausted");
      }
    }
    return synth_failure("restart limit reached");
  }

  // --- one-constraint-at-a-time mode ---------------------------------------

  Outcome run_la() {
    ValueSet vplus, vminus;
    ReplayMap replays;
    for (;;) {
      ctx_.check_deadline();
      ExampleSet ex;
      ex.positives = vplus;
      ex.negatives = vminus;
      bool failed = false;
      Predicate cand = synth_step(ex, &failed);
      if (failed) return synth_failure("No predicate found");

      if (auto suff = check_sufficiency(cand)) {
        std::vector<Value> fresh;
        for (const Value& v : suff->values)
          if (!vplus.contains(v)) fresh.push_back(v);
        if (fresh.empty()) return spec_violation(*suff, replays);
        for (const Value& v : fresh) vminus.insert(v);
        continue;
      }

      // Only full-inductiveness counterexamples, one operation at a time.
      InductChecker checker(prog_, cache_, ctx_, opts_.induct, &stats_);
      bool found = false;
      for (const OpInfo& op : prog_.ops) {
        CexReport r = checker.check_op(Relation::predicate(cand),
                                       Relation::predicate(cand), op);
        if (r.valid) continue;
        found = true;
        bool visible = true;
        for (const Value& v : r.S)
          if (!vplus.contains(v)) visible = false;
        if (visible) {
          // the counterexample happens to start in known territory
          for (const Value& v : r.V) {
            vplus.insert(v);
            replays.emplace(v, *r.witness);
            vminus.erase(v);
          }
        } else {
          for (const Value& v : r.S)
            if (!vplus.contains(v)) vminus.insert(v);
        }
        break;
      }
      if (!found) return invariant_outcome(cand);
    }
  }

  // --- one-shot learning ----------------------------------------------------

  Outcome run_oneshot() {
    if (prog_.abstract_quantifiers.size() != 1) {
      Outcome o;
      o.kind = Outcome::Kind::Unsupported;
      o.message =
          "oneshot mode requires a specification quantifying over exactly "
          "one abstract value";
      return o;
    }
    std::size_t abstract_idx = prog_.abstract_quantifiers.front();
    std::vector<Value> smallest =
        enum_values(cache_, prog_.concrete, 30, 30).take_all();

    ExampleSet ex;
    for (const Value& v : smallest) {
      if (spec_holds_for_all_base(v, abstract_idx))
        ex.positives.insert(v);
      else
        ex.negatives.insert(v);
    }
    bool failed = false;
    Predicate cand = synth_step(ex, &failed);
    if (failed) return synth_failure("No predicate found");
    return invariant_outcome(cand);  // returned without any re-checking
  }

  bool spec_holds_for_all_base(const Value& v, std::size_t abstract_idx) {
    Query q;
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < prog_.spec.quantifiers.size(); ++i) {
      if (i == abstract_idx) continue;
      positions.push_back(i);
      q.vars.push_back(
          {prog_.spec.quantifiers[i].first, prog_.spec.quantifiers[i].second});
    }
    if (q.vars.empty()) return prog_.spec_holds(ctx_, {v});
    q.budget = default_budget(static_cast<int>(q.vars.size()));
    q.label = "oneshot-tag";
    q.body = [&](EvalContext& c, const std::vector<Value>& base) {
      std::vector<Value> tuple(prog_.spec.quantifiers.size());
      tuple[abstract_idx] = v;
      for (std::size_t i = 0; i < positions.size(); ++i)
        tuple[positions[i]] = base[i];
      return prog_.spec_holds(c, tuple);
    };
    return verify(cache_, ctx_, q, &stats_).valid;
  }

  const ElaboratedProgram& prog_;
  EngineOptions opts_;
  EnumCache cache_;
  EvalContext ctx_;
  StatsSink stats_;
  Synthesizer* synth_ = nullptr;
  std::unique_ptr<GrammarSynthesizer> own_synth_;
  CandidateCache cache_store_;
  std::size_t last_vplus_ = 0, last_vminus_ = 0;
};

}  // namespace repinv
