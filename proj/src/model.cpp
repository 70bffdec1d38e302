#include "rdinst/model.hpp"

#include "rdinst/errors.hpp"

#include <functional>

namespace rdinst {

namespace {

Integer floor_of(const Rational& r) {
  Integer n = boost::multiprecision::numerator(r);
  Integer d = boost::multiprecision::denominator(r);
  Integer q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

/// SMT-LIB integer division: m = n*q + r with 0 <= r < |n|.
Integer euclid_div(const Integer& m, const Integer& n) {
  // Remainder is non-negative: floor for positive divisors, ceiling otherwise.
  return n > 0 ? floor_of(Rational(m, n)) : Integer(-floor_of(Rational(m, -n)));
}

bool is_zero(const Rational& r) { return r == 0; }

/// Folds an interpreted node whose children are values. Returns nullopt when
/// the node cannot be evaluated (division by zero, non-value children).
std::optional<Value> fold_values(Op op, Sort sort, std::span<const Value> a) {
  switch (op) {
    case Op::True: return Value::boolean(true);
    case Op::False: return Value::boolean(false);
    case Op::Not: return Value::boolean(!a[0].truth);
    case Op::And: {
      bool r = true;
      for (const Value& v : a) r = r && v.truth;
      return Value::boolean(r);
    }
    case Op::Or: {
      bool r = false;
      for (const Value& v : a) r = r || v.truth;
      return Value::boolean(r);
    }
    case Op::Implies: return Value::boolean(!a[0].truth || a[1].truth);
    case Op::Xor: return Value::boolean(a[0].truth != a[1].truth);
    case Op::Ite: return a[0].truth ? a[1] : a[2];
    case Op::Eq: return Value::boolean(a[0] == a[1]);
    case Op::Le: return Value::boolean(a[0].number <= a[1].number);
    case Op::Lt: return Value::boolean(a[0].number < a[1].number);
    case Op::Add: {
      Rational s = 0;
      for (const Value& v : a) s += v.number;
      return Value::arith(s, sort);
    }
    case Op::Mul: {
      Rational p = 1;
      for (const Value& v : a) p *= v.number;
      return Value::arith(p, sort);
    }
    case Op::Sub: return Value::arith(a[0].number - a[1].number, sort);
    case Op::Neg: return Value::arith(-a[0].number, sort);
    case Op::Abs: return Value::arith(a[0].number < 0 ? Rational(-a[0].number) : a[0].number, sort);
    case Op::Div:
      if (is_zero(a[1].number)) return std::nullopt;
      return Value::arith(a[0].number / a[1].number, sort);
    case Op::IntDiv:
    case Op::Mod: {
      if (is_zero(a[1].number)) return std::nullopt;
      Integer m = boost::multiprecision::numerator(a[0].number);
      Integer n = boost::multiprecision::numerator(a[1].number);
      Integer q = euclid_div(m, n);
      return Value::arith(Rational(op == Op::IntDiv ? q : Integer(m - n * q)), sort);
    }
    case Op::ToReal: return Value::arith(a[0].number, Sort::Real);
    case Op::ToInt: return Value::arith(Rational(floor_of(a[0].number)), Sort::Int);
    case Op::Forall:
    case Op::Exists: return std::nullopt;
  }
  return std::nullopt;
}

Value value_of(Term t) {
  if (t.is_numeral()) return Value::arith(t.value(), t.sort());
  return Value::boolean(t.is_true());
}

/// Local folding of an interpreted node given already simplified children.
Term fold_node(TermManager& tm, const Symbol& head, std::vector<Term> ch) {
  const Op op = head.op;
  bool all_values = true;
  for (const Term& c : ch) all_values = all_values && c.is_value();
  if (all_values && op != Op::Forall && op != Op::Exists) {
    std::vector<Value> vals;
    for (const Term& c : ch) vals.push_back(value_of(c));
    Sort sort = Sort::Bool;
    if (!ch.empty() && op != Op::Eq && op != Op::Le && op != Op::Lt && op != Op::Ite) sort = ch[0].sort();
    if (op == Op::Ite) sort = ch[1].sort();
    if (op == Op::ToReal) sort = Sort::Real;
    if (op == Op::ToInt) sort = Sort::Int;
    if (auto v = fold_values(op, sort, vals)) return value_term(tm, *v);
  }
  switch (op) {
    case Op::Not: return tm.mk_not(ch[0]);
    case Op::And:
    case Op::Or: {
      const bool is_and = op == Op::And;
      std::vector<Term> kept;
      for (const Term& c : ch) {
        if (c.is_bool_value()) {
          if (c.is_true() != is_and) return tm.boolean(!is_and);  // absorbing element
          continue;
        }
        kept.push_back(c);
      }
      return is_and ? tm.mk_and(std::move(kept)) : tm.mk_or(std::move(kept));
    }
    case Op::Implies:
      if (ch[0].is_false() || ch[1].is_true()) return tm.boolean(true);
      if (ch[0].is_true()) return ch[1];
      if (ch[1].is_false()) return tm.mk_not(ch[0]);
      break;
    case Op::Ite:
      if (ch[0].is_bool_value()) return ch[0].is_true() ? ch[1] : ch[2];
      if (ch[1] == ch[2]) return ch[1];
      break;
    case Op::Eq:
      if (ch[0] == ch[1]) return tm.boolean(true);
      break;
    default: break;
  }
  return tm.intern(&head, std::move(ch));
}

}  // namespace

std::string Value::to_string() const {
  if (sort == Sort::Bool) return truth ? "true" : "false";
  return print_value(number, sort);
}

Term value_term(TermManager& tm, const Value& v) {
  if (v.sort == Sort::Bool) return tm.boolean(v.truth);
  return tm.numeral(v.number, v.sort);
}

void Model::set(const Symbol* f, Interpretation interp) {
  if (interp.params.size() != f->arity()) {
    throw ModelError("interpretation of '" + f->name + "' has " + std::to_string(interp.params.size()) +
                     " parameters, expected " + std::to_string(f->arity()));
  }
  for (std::size_t i = 0; i < interp.params.size(); ++i) {
    if (interp.params[i]->result_sort != f->arg_sorts[i]) {
      throw ModelError("parameter " + std::to_string(i + 1) + " of '" + f->name + "' has the wrong sort");
    }
  }
  if (interp.body.sort() != f->result_sort) throw ModelError("interpretation of '" + f->name + "' has the wrong sort");
  for_each_subterm(interp.body, [&](Term t) {
    if (t.is_uninterpreted_app()) {
      throw ModelError("interpretation of '" + f->name + "' mentions uninterpreted '" + t.head().name + "'");
    }
  });
  if (!interp_.count(f)) order_.push_back(f);
  interp_[f] = std::move(interp);
}

const Interpretation* Model::find(const Symbol* f) const {
  auto it = interp_.find(f);
  return it == interp_.end() ? nullptr : &it->second;
}

const Interpretation& Model::at(const Symbol* f) const {
  if (const Interpretation* i = find(f)) return *i;
  throw ModelError("no interpretation for '" + f->name + "'");
}

void Model::complete(TermManager& tm, std::span<const Symbol* const> symbols) {
  for (const Symbol* f : symbols) {
    if (find(f)) continue;
    Interpretation interp;
    for (std::size_t i = 0; i < f->arity(); ++i) {
      interp.params.push_back(tm.make_var("p" + std::to_string(i), f->arg_sorts[i]));
    }
    interp.body = f->result_sort == Sort::Bool ? tm.boolean(false) : tm.numeral(0, f->result_sort);
    set(f, std::move(interp));
  }
}

std::string Model::to_string() const {
  std::string out;
  for (const Symbol* f : order_) {
    const Interpretation& i = interp_.at(f);
    out += "(define-fun " + quote_symbol(f->smt_name) + " (";
    for (std::size_t k = 0; k < i.params.size(); ++k) {
      if (k) out += ' ';
      out += "(" + quote_symbol(i.params[k]->smt_name) + " " + std::string(sort_name(i.params[k]->result_sort)) + ")";
    }
    out += ") " + std::string(sort_name(f->result_sort)) + " " + print_smtlib(i.body) + ")\n";
  }
  return out;
}

namespace {

class Evaluator {
 public:
  Evaluator(const Model& m, const Environment& env) : model_(m), env_(env) {}

  Value eval(Term t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    Value v = compute(t);
    memo_.emplace(t, v);
    return v;
  }

 private:
  Value compute(Term t) {
    const Symbol& h = t.head();
    switch (h.kind) {
      case SymbolKind::Numeral: return Value::arith(h.value, h.result_sort);
      case SymbolKind::BoundVariable: {
        auto it = env_.find(&h);
        if (it == env_.end()) throw EvalError("unbound variable '" + h.name + "'");
        return it->second;
      }
      case SymbolKind::Uninterpreted: {
        const Interpretation& interp = model_.at(&h);
        Environment inner;
        for (std::size_t i = 0; i < t.arity(); ++i) inner[interp.params[i]] = eval(t.child(i));
        return Evaluator(model_, inner).eval(interp.body);
      }
      case SymbolKind::Interpreted: break;
    }
    if (h.op == Op::Ite) {
      // Only the selected branch needs to be defined.
      return eval(t.child(0)).truth ? eval(t.child(1)) : eval(t.child(2));
    }
    if (h.op == Op::Forall || h.op == Op::Exists) throw EvalError("cannot evaluate a quantified formula");
    std::vector<Value> args;
    args.reserve(t.arity());
    for (const Term& c : t.children()) args.push_back(eval(c));
    auto v = fold_values(h.op, t.sort(), args);
    if (!v) throw EvalError("division by zero in " + print_smtlib(t));
    return *v;
  }

  const Model& model_;
  const Environment& env_;
  std::unordered_map<Term, Value> memo_;
};

}  // namespace

Value evaluate(Term t, const Model& m, const Environment& env) { return Evaluator(m, env).eval(t); }

Value eval_ground(Term t, const Model& m) {
  if (!t.is_ground()) throw EvalError("eval_ground on a non-ground term " + print_smtlib(t));
  return evaluate(t, m);
}

Term simplify(TermManager& tm, Term t) {
  std::unordered_map<Term, Term> memo;
  std::function<Term(Term)> go = [&](Term u) -> Term {
    if (u.arity() == 0) return u;
    if (auto it = memo.find(u); it != memo.end()) return it->second;
    std::vector<Term> ch;
    ch.reserve(u.arity());
    for (const Term& c : u.children()) ch.push_back(go(c));
    Term r = u.head().kind == SymbolKind::Interpreted ? fold_node(tm, u.head(), std::move(ch))
                                                      : tm.intern(&u.head(), std::move(ch));
    memo.emplace(u, r);
    return r;
  };
  return go(t);
}

Term apply_model(TermManager& tm, Term phi, const Model& m) {
  std::unordered_map<Term, Term> memo;
  std::function<Term(Term)> go = [&](Term u) -> Term {
    if (u.is_value() || u.is_var()) return u;
    if (auto it = memo.find(u); it != memo.end()) return it->second;
    std::vector<Term> ch;
    ch.reserve(u.arity());
    for (const Term& c : u.children()) ch.push_back(go(c));
    Term r;
    if (u.is_uninterpreted_app()) {
      const Interpretation& interp = m.at(&u.head());
      if (interp.params.size() != ch.size()) throw ModelError("arity mismatch for '" + u.head().name + "'");
      Binding b;
      for (std::size_t i = 0; i < ch.size(); ++i) b[interp.params[i]] = ch[i];
      r = simplify(tm, substitute(tm, interp.body, b));
    } else {
      r = fold_node(tm, u.head(), std::move(ch));
    }
    memo.emplace(u, r);
    return r;
  };
  return go(phi);
}

}  // namespace rdinst
