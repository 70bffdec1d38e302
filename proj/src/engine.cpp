#include "rdinst/engine.hpp"

#include "rdinst/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace rdinst {

namespace {

using Clock = std::chrono::steady_clock;

std::string_view source_name(Source s) { return s == Source::RelevantDomain ? "rd" : "theory"; }

/// Distinct model values of `terms`, as numerals of `sort`, in list order.
/// Terms that cannot be evaluated are skipped.
std::vector<Term> value_list(TermManager& tm, std::span<const Term> terms, const Model& m, Sort sort) {
  std::vector<Term> out;
  for (Term t : terms) {
    try {
      Value v = eval_ground(t, m);
      Term n = tm.numeral(v.number, sort);
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    } catch (const EvalError&) {
    }
  }
  return out;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "sat";
    case Verdict::Unsat: return "unsat";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view tier_name(Tier t) {
  switch (t) {
    case Tier::Preferred: return "preferred";
    case Tier::Full: return "full";
    case Tier::Dropped: return "dropped";
  }
  return "dropped";
}

std::string EngineStats::to_json(bool include_wall) const {
  nlohmann::ordered_json j;
  j["iterations"] = iterations;
  j["instances_added"] = instances_added;
  j["duplicate_instances"] = duplicate_instances;
  j["main_checks"] = main_checks;
  j["scratch_checks"] = scratch_checks;
  j["widenings_to_full"] = widen_to_full;
  j["widenings_to_dropped"] = widen_to_dropped;
  j["relevant_domain_picks"] = relevant_domain_picks;
  j["theory_constant_picks"] = theory_constant_picks;
  j["max_scratch_checks_per_unit"] = max_scratch_checks_per_unit;
  j["scratch_bound_violations"] = scratch_bound_violations;
  j["invalid_counterexamples"] = invalid_counterexamples;
  if (include_wall) j["wall_ms"] = wall_ms;
  return j.dump();
}

Term select_term(const Rational& value, std::span<const Term> domain, const Model& m) {
  for (Term t : domain) {
    try {
      if (eval_ground(t, m).number == value) return t;
    } catch (const EvalError&) {
    }
  }
  return {};
}

Engine::Engine(TermManager& tm, Problem problem, EngineConfig config)
    : tm_(tm), problem_(std::move(problem)), config_(std::move(config)) {
  if (config_.preferred_fraction == 0) throw std::invalid_argument("preferred fraction must be at least 1");
  std::vector<Term> input = std::move(problem_.ground);
  problem_.ground.clear();
  for (Term g : input) add_ground(g, 0);
  problem_.ground = ground_;
  for (const QuantifiedUnit& u : problem_.units) {
    for_each_subterm(u.body, [&](Term s) {
      if (s.is_ground()) birth_.emplace(s, 0);
    });
  }
  symbols_ = problem_symbols(problem_);
}

Engine::~Engine() = default;

bool Engine::add_ground(Term t, unsigned birth) {
  if (!ground_set_.insert(t).second) return false;
  ground_.push_back(t);
  for_each_subterm(t, [&](Term s) { birth_.emplace(s, birth); });
  return true;
}

StatsTable Engine::current_stats() const { return compute_stats(ground_, problem_.units, birth_); }

RelevantDomains Engine::current_domains(const StatsTable& stats) const {
  return RelevantDomains::build(tm_, ground_, problem_.units, stats);
}

void Engine::emit(const std::string& line) {
  if (!config_.trace) return;
  trace_.push_back(line);
  if (config_.trace_sink) *config_.trace_sink << line << '\n' << std::flush;
}

SolverSession& Engine::scratch() {
  if (!scratch_ || !scratch_->alive()) scratch_ = std::make_unique<SolverSession>(config_.backend);
  return *scratch_;
}

CexOutcome Engine::find_counterexample(SolverSession& s, const QuantifiedUnit& unit, const Model& m, Term negated,
                                       const RelevantDomains& rd) {
  CexOutcome out;
  const std::size_t n = unit.vars.size();
  const std::string prefix = "[iter " + std::to_string(iteration_) + "] unit " + std::to_string(unit.index) + ": ";

  std::vector<Term> var_terms;
  for (const Symbol* x : unit.vars) var_terms.push_back(tm_.var(x));

  const std::size_t base_depth = s.stack_depth();
  struct Restore {
    SolverSession& s;
    std::size_t depth;
    ~Restore() {
      try {
        while (s.alive() && s.stack_depth() > depth) s.pop();
      } catch (const Error&) {
      }
    }
  } restore{s, base_depth};

  s.push();
  s.assert_formula(negated);
  const std::vector<const Symbol*> mentioned = free_vars(negated);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(mentioned.begin(), mentioned.end(), unit.vars[i]) == mentioned.end()) {
      s.assert_formula(tm_.mk_eq(var_terms[i], var_terms[i]));
    }
  }

  CheckResult r = s.check();
  ++out.checks;
  if (r.unsat()) return out;
  if (!r.sat()) {
    out.kind = CexOutcome::Kind::Unknown;
    out.reason = r.reason.empty() ? "unknown" : r.reason;
    return out;
  }
  const std::vector<Value> fallback = s.get_values(tm_, var_terms);

  std::vector<const VarDomain*> domains;
  std::vector<std::vector<Term>> full_values, pref_values;
  for (const Symbol* x : unit.vars) {
    const VarDomain& d = rd.domain(x);
    domains.push_back(&d);
    full_values.push_back(value_list(tm_, d.terms, m, x->result_sort));
    pref_values.push_back(value_list(tm_, preferred(d.terms, config_.preferred_fraction), m, x->result_sort));
  }

  std::vector<Tier> tiers(n, Tier::Preferred);
  auto values_of = [&](std::size_t i) -> const std::vector<Term>* {
    switch (tiers[i]) {
      case Tier::Preferred: return &pref_values[i];
      case Tier::Full: return &full_values[i];
      case Tier::Dropped: return nullptr;
    }
    return nullptr;
  };

  std::vector<Value> chosen;
  std::optional<std::vector<std::optional<std::vector<Term>>>> last_unsat;
  std::set<std::size_t> last_core;

  while (true) {
    if (std::all_of(tiers.begin(), tiers.end(), [](Tier t) { return t == Tier::Dropped; })) {
      chosen = fallback;
      break;
    }

    std::vector<std::optional<std::vector<Term>>> signature;
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<Term>* v = values_of(i);
      signature.push_back(v ? std::optional(*v) : std::nullopt);
    }

    std::set<std::size_t> core;
    if (last_unsat && *last_unsat == signature) {
      core = last_core;
    } else {
      s.push();
      std::map<std::string, std::size_t> names;
      for (std::size_t i = 0; i < n; ++i) {
        const std::vector<Term>* v = values_of(i);
        if (!v) continue;
        std::vector<Term> eqs;
        for (Term val : *v) eqs.push_back(tm_.mk_eq(var_terms[i], val));
        const std::string name = "rd-" + std::to_string(++clause_seq_) + "-" + unit.vars[i]->smt_name;
        s.assert_formula(tm_.mk_or(std::move(eqs)), name);
        names.emplace(name, i);
      }
      CheckResult rr = s.check();
      ++out.checks;
      if (rr.sat()) {
        chosen = s.get_values(tm_, var_terms);
        s.pop();
        break;
      }
      if (!rr.unsat()) {
        out.kind = CexOutcome::Kind::Unknown;
        out.reason = rr.reason.empty() ? "unknown" : rr.reason;
        return out;
      }
      for (const std::string& name : s.get_unsat_core()) {
        auto it = names.find(name);
        if (it != names.end()) core.insert(it->second);
      }
      s.pop();
      last_unsat = signature;
      last_core = core;
    }

    // Widen the least-indexed restricted variable in the core, or the
    // least-indexed restricted variable at all when the core names none.
    std::size_t pick = n;
    for (std::size_t i : core) {
      if (tiers[i] != Tier::Dropped) {
        pick = i;
        break;
      }
    }
    if (pick == n) {
      for (std::size_t i = 0; i < n; ++i) {
        if (tiers[i] != Tier::Dropped) {
          pick = i;
          break;
        }
      }
    }
    if (tiers[pick] == Tier::Preferred) {
      tiers[pick] = Tier::Full;
      ++out.widen_to_full;
    } else {
      tiers[pick] = Tier::Dropped;
      ++out.widen_to_dropped;
    }
    emit(prefix + "widen " + unit.vars[pick]->name + " to " + std::string(tier_name(tiers[pick])));
  }

  out.kind = CexOutcome::Kind::Found;
  for (std::size_t i = 0; i < n; ++i) {
    AssignedVar a;
    a.var = unit.vars[i];
    a.value = chosen[i].number;
    a.tier = tiers[i];
    if (tiers[i] != Tier::Dropped) a.term = select_term(a.value, domains[i]->terms, m);
    if (a.term) {
      a.source = Source::RelevantDomain;
    } else {
      a.term = tm_.numeral(a.value, a.var->result_sort);
      a.source = Source::TheoryConstant;
    }
    out.assignment.push_back(std::move(a));
  }
  return out;
}

SolveResult Engine::solve() {
  const auto start = Clock::now();
  SolveResult res;
  EngineStats& st = res.stats;
  auto elapsed = [&] { return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start); };
  auto finish = [&](Verdict v, std::string reason) {
    res.verdict = v;
    res.reason = std::move(reason);
    st.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    emit("result " + std::string(verdict_name(v)) + (res.reason.empty() ? "" : " (" + res.reason + ")"));
    res.trace = std::move(trace_);
    trace_.clear();
    return std::move(res);
  };

  SolverSession main(config_.backend);
  std::size_t asserted = 0;
  try {
    for (iteration_ = 1;; ++iteration_) {
      if (iteration_ > config_.max_iterations) return finish(Verdict::Unknown, "budget");
      if (elapsed() > config_.wall_clock) return finish(Verdict::Unknown, "budget");
      st.iterations = iteration_;
      const std::string prefix = "[iter " + std::to_string(iteration_) + "] ";

      const StatsTable stats = current_stats();
      const RelevantDomains rd = current_domains(stats);

      for (; asserted < ground_.size(); ++asserted) main.assert_formula(ground_[asserted]);
      const CheckResult g = main.check();
      ++st.main_checks;
      if (g.unsat()) {
        emit(prefix + "ground: unsat");
        return finish(Verdict::Unsat, {});
      }
      if (!g.sat()) {
        emit(prefix + "ground: unknown");
        return finish(Verdict::Unknown, g.reason.empty() ? "unknown" : g.reason);
      }
      emit(prefix + "ground: sat");
      Model m = main.get_model(tm_, symbols_);

      bool unresolved = false;
      unsigned added = 0;
      for (const QuantifiedUnit& unit : problem_.units) {
        if (elapsed() > config_.wall_clock) return finish(Verdict::Unknown, "budget");
        const std::string uprefix = prefix + "unit " + std::to_string(unit.index) + ": ";
        const Term negated = simplify(tm_, tm_.mk_not(apply_model(tm_, unit.body, m)));
        if (negated.is_false()) {
          emit(uprefix + "no counterexample");
          continue;
        }

        const CexOutcome out = find_counterexample(scratch(), unit, m, negated, rd);
        st.scratch_checks += out.checks;
        st.widen_to_full += out.widen_to_full;
        st.widen_to_dropped += out.widen_to_dropped;
        st.max_scratch_checks_per_unit = std::max(st.max_scratch_checks_per_unit, out.checks);
        if (out.checks > 2 * unit.vars.size() + 1) ++st.scratch_bound_violations;

        if (out.kind == CexOutcome::Kind::None) {
          emit(uprefix + "no counterexample");
          continue;
        }
        if (out.kind == CexOutcome::Kind::Unknown) {
          unresolved = true;
          emit(uprefix + "unknown (" + out.reason + ")");
          continue;
        }

        Environment env;
        Binding binding;
        std::string line = uprefix + "cex ";
        for (std::size_t i = 0; i < out.assignment.size(); ++i) {
          const AssignedVar& a = out.assignment[i];
          env[a.var] = Value::arith(a.value, a.var->result_sort);
          binding[a.var] = a.term;
          if (a.source == Source::RelevantDomain) {
            ++st.relevant_domain_picks;
          } else {
            ++st.theory_constant_picks;
          }
          if (i) line += ", ";
          line += a.var->name + " := " + print_smtlib(a.term) + " (source " + std::string(source_name(a.source)) +
                  ", tier " + std::string(tier_name(a.tier)) + ")";
        }
        emit(line);

        bool valid = false;
        try {
          const Value v = evaluate(negated, m, env);
          valid = v.sort == Sort::Bool && v.truth;
        } catch (const EvalError&) {
        }
        if (!valid) ++st.invalid_counterexamples;

        const Term instance = substitute(tm_, unit.body, binding);
        if (!add_ground(instance, iteration_)) {
          ++st.duplicate_instances;
          unresolved = true;
          emit(uprefix + "duplicate instance " + print_smtlib(instance));
          continue;
        }
        ++added;
        ++st.instances_added;
        res.instances.push_back(instance);
        emit(prefix + "add " + print_smtlib(instance));
      }

      if (added == 0) {
        if (unresolved) return finish(Verdict::Unknown, "incomplete");
        res.model = std::move(m);
        return finish(Verdict::Sat, {});
      }
    }
  } catch (const BackendError& e) {
    return finish(Verdict::Unknown, std::string("backend error: ") + e.what());
  } catch (const EvalError& e) {
    return finish(Verdict::Unknown, std::string("evaluation error: ") + e.what());
  }
}

}  // namespace rdinst
