#include "rdinst/frontend.hpp"

#include "rdinst/errors.hpp"
#include "rdinst/sexpr.hpp"
#include "rdinst/term_parser.hpp"

#include <algorithm>
#include <unordered_set>

namespace rdinst {

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& msg) { throw ParseError(msg, at.line, at.column); }

void check_logic(const SExpr& at, const std::string& logic) {
  if (logic == "ALL") return;
  std::string_view core = logic;
  if (core.starts_with("QF_")) core.remove_prefix(3);
  const bool arrays = core.starts_with("A") || core.starts_with("AX");
  const bool bv = core.find("BV") != std::string_view::npos;
  const bool other = core.find("FP") != std::string_view::npos || core.find("DT") != std::string_view::npos ||
                     core.starts_with("S");
  if (arrays || bv || other) fail(at, "unsupported logic '" + logic + "' (only arithmetic with uninterpreted functions)");
}

bool real_only_logic(std::string_view logic) {
  const bool has_real = logic.find("RA") != std::string_view::npos;
  const bool has_int = logic.find("IA") != std::string_view::npos || logic.find("IRA") != std::string_view::npos ||
                       logic.find("IDL") != std::string_view::npos;
  return has_real && !has_int;
}

struct Macro {
  std::vector<const Symbol*> params;
  Term body;
};

}  // namespace

Script parse_script(TermManager& tm, std::string_view text) {
  Script script;
  TermParser parser(tm);
  std::unordered_map<std::string, Macro> macros;

  parser.set_hook([&](const std::string& name, std::vector<Term>& args, const SExpr& at) -> std::optional<Term> {
    auto it = macros.find(name);
    if (it == macros.end()) return std::nullopt;
    const Macro& m = it->second;
    if (args.size() != m.params.size()) fail(at, "wrong number of arguments to '" + name + "'");
    Binding b;
    for (std::size_t i = 0; i < args.size(); ++i) {
      Term a = args[i];
      if (a.sort() == Sort::Int && m.params[i]->result_sort == Sort::Real && a.is_numeral()) {
        a = tm.numeral(a.value(), Sort::Real);
      }
      if (a.sort() != m.params[i]->result_sort) fail(at, "argument " + std::to_string(i + 1) + " of '" + name + "' has the wrong sort");
      b[m.params[i]] = a;
    }
    return substitute(tm, m.body, b);
  });

  auto symbol_at = [](const SExpr& cmd, std::size_t i) -> const std::string& {
    if (cmd.items.size() <= i || !cmd.items[i].is_symbol()) fail(cmd, "expected a symbol");
    return cmd.items[i].text;
  };
  auto check_fresh = [&](const SExpr& at, const std::string& name) {
    if (tm.lookup_fun(name) || macros.count(name)) fail(at, "symbol '" + name + "' already declared");
  };

  SExprReader reader(text);
  bool exited = false;
  while (!exited) {
    std::optional<SExpr> next;
    try {
      next = reader.next();
    } catch (const IncompleteInput& e) {
      throw ParseError(std::string("unexpected end of input: ") + e.what());
    }
    if (!next) break;
    const SExpr& cmd = *next;
    if (!cmd.is_list() || cmd.items.empty() || !cmd.items[0].is_symbol()) fail(cmd, "expected a command");
    const std::string& c = cmd.items[0].text;

    if (script.saw_check_sat && c != "exit" && c != "set-info" && c != "get-info") {
      fail(cmd, "command '" + c + "' after check-sat (incremental scripts are not supported)");
    }

    if (c == "set-logic") {
      script.logic = symbol_at(cmd, 1);
      check_logic(cmd, script.logic);
      parser.set_real_numerals(real_only_logic(script.logic));
    } else if (c == "set-info" || c == "get-info") {
      // ignored
    } else if (c == "set-option") {
      if (cmd.items.size() != 3 || cmd.items[1].kind != SExpr::Kind::Keyword) fail(cmd, "malformed set-option");
      script.options[cmd.items[1].text] = cmd.items[2].to_string();
    } else if (c == "declare-fun") {
      if (cmd.items.size() != 4 || !cmd.items[2].is_list()) fail(cmd, "malformed declare-fun");
      const std::string& name = symbol_at(cmd, 1);
      check_fresh(cmd, name);
      std::vector<Sort> args;
      for (const SExpr& s : cmd.items[2].items) args.push_back(parser.parse_sort(s));
      script.declarations.push_back(tm.declare_fun(name, std::move(args), parser.parse_sort(cmd.items[3])));
    } else if (c == "declare-const") {
      if (cmd.items.size() != 3) fail(cmd, "malformed declare-const");
      const std::string& name = symbol_at(cmd, 1);
      check_fresh(cmd, name);
      script.declarations.push_back(tm.declare_fun(name, {}, parser.parse_sort(cmd.items[2])));
    } else if (c == "define-fun") {
      if (cmd.items.size() != 5 || !cmd.items[2].is_list()) fail(cmd, "malformed define-fun");
      const std::string& name = symbol_at(cmd, 1);
      check_fresh(cmd, name);
      Macro m;
      std::unordered_map<std::string, Term> scope;
      for (const SExpr& p : cmd.items[2].items) {
        if (!p.is_list() || p.items.size() != 2 || !p.items[0].is_symbol()) fail(p, "malformed parameter");
        const Symbol* v = tm.make_var(p.items[0].text, parser.parse_sort(p.items[1]));
        m.params.push_back(v);
        scope[p.items[0].text] = tm.var(v);
      }
      const Sort result = parser.parse_sort(cmd.items[3]);
      parser.push_scope(std::move(scope));
      m.body = parser.parse(cmd.items[4]);
      parser.pop_scope();
      if (m.body.sort() == Sort::Int && result == Sort::Real && m.body.is_numeral()) {
        m.body = tm.numeral(m.body.value(), Sort::Real);
      }
      if (m.body.sort() != result) fail(cmd, "body of '" + name + "' does not have the declared sort");
      macros.emplace(name, std::move(m));
    } else if (c == "assert") {
      if (cmd.items.size() != 2) fail(cmd, "malformed assert");
      Term t = parser.parse(cmd.items[1]);
      if (t.sort() != Sort::Bool) fail(cmd, "asserted term is not Bool");
      if (!free_vars(t).empty()) fail(cmd, "asserted term has free variables");
      script.assertions.push_back(t);
    } else if (c == "check-sat") {
      script.saw_check_sat = true;
    } else if (c == "exit") {
      exited = true;
    } else {
      fail(cmd, "unsupported command '" + c + "'");
    }
  }
  return script;
}

namespace {

class Normalizer {
 public:
  Normalizer(TermManager& tm, Problem& out) : tm_(tm), out_(out) {}

  Term nnf(Term t, bool pos) {
    if (!contains_quantifier(t)) return pos ? t : tm_.mk_not(t);
    const Symbol& h = t.head();
    switch (h.op) {
      case Op::Not: return nnf(t.child(0), !pos);
      case Op::And:
      case Op::Or: {
        std::vector<Term> ch;
        for (const Term& c : t.children()) ch.push_back(nnf(c, pos));
        const bool conj = h.op == Op::And ? pos : !pos;
        return conj ? tm_.mk_and(std::move(ch)) : tm_.mk_or(std::move(ch));
      }
      case Op::Implies:
        return pos ? tm_.mk_or({nnf(t.child(0), false), nnf(t.child(1), true)})
                   : tm_.mk_and({nnf(t.child(0), true), nnf(t.child(1), false)});
      case Op::Eq:
      case Op::Xor: {
        Term a = t.child(0), b = t.child(1);
        Term iff = tm_.mk_and({tm_.mk_or({tm_.mk_not(a), b}), tm_.mk_or({a, tm_.mk_not(b)})});
        return nnf(iff, h.op == Op::Eq ? pos : !pos);
      }
      case Op::Ite: {
        if (t.sort() != Sort::Bool) break;
        Term c = t.child(0);
        return nnf(tm_.mk_and({tm_.mk_or({tm_.mk_not(c), t.child(1)}), tm_.mk_or({c, t.child(2)})}), pos);
      }
      case Op::Forall:
      case Op::Exists: {
        const bool universal = (h.op == Op::Forall) == pos;
        std::vector<Term> vars(t.children().begin(), t.children().end() - 1);
        Term body = t.children().back();
        Binding b;
        if (universal) {
          std::vector<Term> fresh;
          for (const Term& v : vars) {
            Term nv = tm_.var(tm_.make_var(v.head().name, v.sort()));
            b[&v.head()] = nv;
            fresh.push_back(nv);
          }
          for (const Term& v : fresh) universals_.push_back(&v.head());
          Term inner = nnf(substitute(tm_, body, b), pos);
          universals_.resize(universals_.size() - fresh.size());
          fresh.push_back(inner);
          return tm_.app(Op::Forall, std::move(fresh));
        }
        // Skolemize over the enclosing universals the formula depends on.
        auto fv = free_vars(t);
        std::vector<Term> deps;
        std::vector<Sort> dep_sorts;
        for (const Symbol* u : universals_) {
          if (std::find(fv.begin(), fv.end(), u) != fv.end()) {
            deps.push_back(tm_.var(u));
            dep_sorts.push_back(u->result_sort);
          }
        }
        for (const Term& v : vars) {
          const Symbol* sk = tm_.fresh_fun("sk", dep_sorts, v.sort());
          out_.skolems.push_back(sk);
          b[&v.head()] = tm_.app(sk, deps);
        }
        return nnf(substitute(tm_, body, b), pos);
      }
      default: break;
    }
    throw UnsupportedError("unsupported nesting: quantifier below '" + h.name + "'");
  }

  /// Pulls universals out of an NNF formula built from and/or/forall.
  std::pair<std::vector<const Symbol*>, Term> prenex(Term t) {
    if (!contains_quantifier(t)) return {{}, t};
    if (t.is_op(Op::Forall)) {
      std::vector<const Symbol*> vars;
      for (std::size_t i = 0; i + 1 < t.arity(); ++i) vars.push_back(&t.child(i).head());
      auto [inner, m] = prenex(t.children().back());
      vars.insert(vars.end(), inner.begin(), inner.end());
      return {vars, m};
    }
    if (t.is_op(Op::And) || t.is_op(Op::Or)) {
      std::vector<const Symbol*> vars;
      std::vector<Term> ch;
      for (const Term& c : t.children()) {
        auto [v, m] = prenex(c);
        vars.insert(vars.end(), v.begin(), v.end());
        ch.push_back(m);
      }
      return {vars, t.is_op(Op::And) ? tm_.mk_and(std::move(ch)) : tm_.mk_or(std::move(ch))};
    }
    throw UnsupportedError("unsupported nesting: quantifier below '" + t.head().name + "'");
  }

  void add_conjunct(Term c) {
    if (c.is_true()) return;
    if (c.is_op(Op::And)) {
      for (const Term& k : c.children()) add_conjunct(k);
      return;
    }
    auto [vars, matrix] = prenex(c);
    if (contains_quantifier(matrix)) throw UnsupportedError("unsupported nesting: quantifier left in a unit body");
    if (matrix.is_true()) return;

    const auto used = free_vars(matrix);
    std::vector<const Symbol*> kept;
    for (const Symbol* v : vars) {
      if (std::find(used.begin(), used.end(), v) != used.end()) {
        kept.push_back(v);
      } else {
        out_.warnings.push_back("vacuous quantified variable '" + v->name + "' dropped");
      }
    }
    if (kept.empty()) {
      if (seen_ground_.insert(matrix).second) out_.ground.push_back(matrix);
      return;
    }

    QuantifiedUnit unit;
    unit.index = static_cast<unsigned>(out_.units.size() + 1);
    Binding b;
    std::unordered_set<std::string> display_names;
    for (const Symbol* v : kept) {
      std::string display = v->name;
      for (int k = 1; !display_names.insert(display).second; ++k) display = v->name + "_" + std::to_string(k);
      const std::string base = display + "!" + std::to_string(unit.index);
      std::string wire = base;
      for (int k = 1; tm_.name_in_use(wire); ++k) wire = base + "_" + std::to_string(k);
      const Symbol* nv = tm_.make_var(display, v->result_sort, unit.index, wire);
      b[v] = tm_.var(nv);
      unit.vars.push_back(nv);
    }
    unit.body = substitute(tm_, matrix, b);
    out_.units.push_back(std::move(unit));
  }

 private:
  TermManager& tm_;
  Problem& out_;
  std::vector<const Symbol*> universals_;
  std::unordered_set<Term> seen_ground_;
};

}  // namespace

Problem normalize(TermManager& tm, const Script& script) {
  Problem p;
  p.logic = script.logic;
  Normalizer n(tm, p);
  for (const Term& a : script.assertions) n.add_conjunct(n.nnf(a, true));
  return p;
}

Script to_script(TermManager& tm, const Problem& problem) {
  Script s;
  s.logic = problem.logic;
  s.saw_check_sat = true;
  s.assertions = problem.ground;
  for (const QuantifiedUnit& u : problem.units) {
    std::vector<Term> ch;
    for (const Symbol* v : u.vars) ch.push_back(tm.var(v));
    ch.push_back(u.body);
    s.assertions.push_back(tm.app(Op::Forall, std::move(ch)));
  }
  return s;
}

std::vector<const Symbol*> problem_symbols(const Problem& problem) {
  std::vector<const Symbol*> out;
  std::unordered_set<const Symbol*> seen;
  std::vector<Term> roots = problem.ground;
  for (const QuantifiedUnit& u : problem.units) roots.push_back(u.body);
  for_each_subterm(roots, [&](Term t) {
    if (t.head().is_uninterpreted() && seen.insert(&t.head()).second) out.push_back(&t.head());
  });
  return out;
}

}  // namespace rdinst
