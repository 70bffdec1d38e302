#include "rdinst/term.hpp"

#include "rdinst/errors.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace rdinst {

namespace {

constexpr Op kAllOps[] = {Op::True, Op::False, Op::Not,   Op::And,    Op::Or,    Op::Implies,
                          Op::Xor,  Op::Ite,   Op::Eq,    Op::Le,     Op::Lt,    Op::Add,
                          Op::Sub,  Op::Neg,   Op::Mul,   Op::Div,    Op::IntDiv, Op::Mod,
                          Op::Abs,  Op::ToReal, Op::ToInt, Op::Forall, Op::Exists};

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::string position(std::size_t i) { return "argument " + std::to_string(i + 1); }

[[noreturn]] void sort_error(std::string_view op, const std::string& what) {
  throw SortError("'" + std::string(op) + "': " + what);
}

bool is_simple_symbol_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  return std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
}

}  // namespace

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
  }
  return "?";
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "=>";
    case Op::Xor: return "xor";
    case Op::Ite: return "ite";
    case Op::Eq: return "=";
    case Op::Le: return "<=";
    case Op::Lt: return "<";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Neg: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::IntDiv: return "div";
    case Op::Mod: return "mod";
    case Op::Abs: return "abs";
    case Op::ToReal: return "to_real";
    case Op::ToInt: return "to_int";
    case Op::Forall: return "forall";
    case Op::Exists: return "exists";
  }
  return "?";
}

TermManager::TermManager() {
  ops_.resize(std::size(kAllOps));
  for (Op op : kAllOps) {
    Symbol* s = new_symbol();
    s->kind = SymbolKind::Interpreted;
    s->op = op;
    s->name = s->smt_name = std::string(op_name(op));
    ops_[static_cast<std::size_t>(op)] = s;
  }
}

Symbol* TermManager::new_symbol() {
  Symbol& s = symbols_.emplace_back();
  s.id = symbols_.size() - 1;
  return &s;
}

const Symbol* TermManager::declare_fun(const std::string& name, std::vector<Sort> args, Sort result) {
  if (auto it = functions_.find(name); it != functions_.end()) {
    const Symbol* prev = it->second;
    if (prev->arg_sorts != args || prev->result_sort != result) {
      throw SortError("symbol '" + name + "' redeclared with a different signature");
    }
    return prev;
  }
  if (var_names_.count(name)) throw SortError("symbol '" + name + "' clashes with a bound variable");
  Symbol* s = new_symbol();
  s->kind = SymbolKind::Uninterpreted;
  s->name = s->smt_name = name;
  s->arg_sorts = std::move(args);
  s->result_sort = result;
  functions_.emplace(name, s);
  declared_order_.push_back(s);
  return s;
}

const Symbol* TermManager::lookup_fun(std::string_view name) const {
  auto it = functions_.find(std::string(name));
  return it == functions_.end() ? nullptr : it->second;
}

bool TermManager::name_in_use(std::string_view name) const {
  std::string key(name);
  return functions_.count(key) > 0 || var_names_.count(key) > 0;
}

const Symbol* TermManager::fresh_fun(const std::string& prefix, std::vector<Sort> args, Sort result) {
  std::string name;
  do {
    name = prefix + "!" + std::to_string(++fresh_counter_);
  } while (name_in_use(name));
  return declare_fun(name, std::move(args), result);
}

const Symbol* TermManager::make_var(const std::string& name, Sort sort, unsigned unit, std::string smt_name) {
  Symbol* s = new_symbol();
  s->kind = SymbolKind::BoundVariable;
  s->name = name;
  s->smt_name = smt_name.empty() ? name : std::move(smt_name);
  s->result_sort = sort;
  s->unit = unit;
  if (unit != 0) var_names_.emplace(s->smt_name, s);
  return s;
}

Sort TermManager::check_sorts(const Symbol* head, const std::vector<Term>& ch) const {
  const std::string_view nm = head->name;
  auto expect_count = [&](std::size_t lo, std::size_t hi) {
    if (ch.size() < lo || ch.size() > hi) {
      sort_error(nm, "expected " + (lo == hi ? std::to_string(lo) : "at least " + std::to_string(lo)) +
                         " arguments, got " + std::to_string(ch.size()));
    }
  };
  auto expect_sort = [&](std::size_t i, Sort s) {
    if (ch[i].sort() != s) {
      sort_error(nm, position(i) + " has sort " + std::string(sort_name(ch[i].sort())) + ", expected " +
                         std::string(sort_name(s)));
    }
  };
  auto all_same_arith = [&]() {
    if (!is_arith(ch[0].sort())) sort_error(nm, position(0) + " is not arithmetic");
    for (std::size_t i = 1; i < ch.size(); ++i) expect_sort(i, ch[0].sort());
    return ch[0].sort();
  };
  constexpr std::size_t kMany = static_cast<std::size_t>(-1);

  switch (head->kind) {
    case SymbolKind::Numeral:
    case SymbolKind::BoundVariable:
      expect_count(0, 0);
      return head->result_sort;
    case SymbolKind::Uninterpreted:
      expect_count(head->arity(), head->arity());
      for (std::size_t i = 0; i < ch.size(); ++i) expect_sort(i, head->arg_sorts[i]);
      return head->result_sort;
    case SymbolKind::Interpreted: break;
  }

  switch (head->op) {
    case Op::True:
    case Op::False: expect_count(0, 0); return Sort::Bool;
    case Op::Not: expect_count(1, 1); expect_sort(0, Sort::Bool); return Sort::Bool;
    case Op::And:
    case Op::Or:
      expect_count(2, kMany);
      for (std::size_t i = 0; i < ch.size(); ++i) expect_sort(i, Sort::Bool);
      return Sort::Bool;
    case Op::Implies:
    case Op::Xor:
      expect_count(2, 2);
      expect_sort(0, Sort::Bool);
      expect_sort(1, Sort::Bool);
      return Sort::Bool;
    case Op::Ite:
      expect_count(3, 3);
      expect_sort(0, Sort::Bool);
      expect_sort(2, ch[1].sort());
      return ch[1].sort();
    case Op::Eq: expect_count(2, 2); expect_sort(1, ch[0].sort()); return Sort::Bool;
    case Op::Le:
    case Op::Lt: expect_count(2, 2); all_same_arith(); return Sort::Bool;
    case Op::Add:
    case Op::Mul: expect_count(2, kMany); return all_same_arith();
    case Op::Sub: expect_count(2, 2); return all_same_arith();
    case Op::Neg:
    case Op::Abs: expect_count(1, 1); return all_same_arith();
    case Op::Div:
      expect_count(2, 2);
      expect_sort(0, Sort::Real);
      expect_sort(1, Sort::Real);
      return Sort::Real;
    case Op::IntDiv:
    case Op::Mod:
      expect_count(2, 2);
      expect_sort(0, Sort::Int);
      expect_sort(1, Sort::Int);
      return Sort::Int;
    case Op::ToReal: expect_count(1, 1); expect_sort(0, Sort::Int); return Sort::Real;
    case Op::ToInt: expect_count(1, 1); expect_sort(0, Sort::Real); return Sort::Int;
    case Op::Forall:
    case Op::Exists:
      expect_count(2, kMany);
      for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        if (!ch[i].is_var()) sort_error(nm, position(i) + " is not a bound variable");
      }
      expect_sort(ch.size() - 1, Sort::Bool);
      return Sort::Bool;
  }
  return Sort::Bool;
}

Term TermManager::intern(const Symbol* head, std::vector<Term> children) {
  std::size_t h = std::hash<const void*>{}(head);
  for (const Term& c : children) h = mix(h, c.node()->hash);

  auto [lo, hi] = table_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    const detail::TermNode* n = it->second;
    if (n->head == head && n->children == children) return Term(n);
  }

  const Sort sort = check_sorts(head, children);
  bool ground = !head->is_var();
  unsigned depth = 0;
  for (const Term& c : children) {
    ground = ground && c.is_ground();
    depth = std::max(depth, c.depth() + 1);
  }
  detail::TermNode& node = nodes_.emplace_back(
      detail::TermNode{head, std::move(children), sort, ground, depth, nodes_.size(), h});
  table_.emplace(h, &node);
  return Term(&node);
}

Term TermManager::app(Op op, std::vector<Term> children) { return intern(op_symbol(op), std::move(children)); }

Term TermManager::numeral(const Rational& value, Sort sort) {
  if (sort == Sort::Bool) throw SortError("numeral of sort Bool");
  if (sort == Sort::Int && boost::multiprecision::denominator(value) != 1) {
    throw SortError("non-integral Int numeral " + value.str());
  }
  std::string key = (sort == Sort::Int ? "i" : "r") + value.str();
  auto it = numerals_.find(key);
  const Symbol* sym;
  if (it != numerals_.end()) {
    sym = it->second;
  } else {
    Symbol* s = new_symbol();
    s->kind = SymbolKind::Numeral;
    s->value = value;
    s->result_sort = sort;
    s->name = s->smt_name = print_value(value, sort);
    numerals_.emplace(std::move(key), s);
    sym = s;
  }
  return intern(sym, {});
}

Term TermManager::mk_not(Term t) {
  if (t.is_op(Op::Not)) return t.child(0);
  if (t.is_true()) return boolean(false);
  if (t.is_false()) return boolean(true);
  return app(Op::Not, {t});
}

Term TermManager::mk_and(std::vector<Term> ts) {
  if (ts.empty()) return boolean(true);
  if (ts.size() == 1) return ts.front();
  return app(Op::And, std::move(ts));
}

Term TermManager::mk_or(std::vector<Term> ts) {
  if (ts.empty()) return boolean(false);
  if (ts.size() == 1) return ts.front();
  return app(Op::Or, std::move(ts));
}

Term substitute(TermManager& tm, Term t, const Binding& binding) {
  if (binding.empty() || t.is_ground()) return t;
  std::unordered_map<Term, Term> memo;
  std::function<Term(Term)> go = [&](Term u) -> Term {
    if (u.is_ground()) return u;
    if (auto it = memo.find(u); it != memo.end()) return it->second;
    Term result;
    if (u.is_var()) {
      auto b = binding.find(&u.head());
      if (b != binding.end()) {
        if (b->second.sort() != u.sort()) {
          throw SortError("substitution for '" + u.head().name + "' has sort " +
                          std::string(sort_name(b->second.sort())));
        }
        result = b->second;
      } else {
        result = u;
      }
    } else {
      std::vector<Term> ch;
      ch.reserve(u.arity());
      bool changed = false;
      for (const Term& c : u.children()) {
        ch.push_back(go(c));
        changed = changed || !(ch.back() == c);
      }
      result = changed ? tm.intern(&u.head(), std::move(ch)) : u;
    }
    memo.emplace(u, result);
    return result;
  };
  return go(t);
}

Term substitute_ground(TermManager& tm, Term t, const Binding& binding) {
  Term r = substitute(tm, t, binding);
  if (!r.is_ground()) {
    auto fv = free_vars(r);
    throw EvalError("unbound variable '" + (fv.empty() ? std::string("?") : fv.front()->name) +
                    "' after substitution");
  }
  return r;
}

void for_each_subterm(std::span<const Term> roots, const std::function<void(Term)>& visit) {
  std::unordered_set<Term> seen;
  std::vector<std::pair<Term, bool>> stack;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.emplace_back(*it, false);
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      visit(t);
      continue;
    }
    if (!seen.insert(t).second) continue;
    stack.emplace_back(t, true);
    auto ch = t.children();
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      if (!seen.count(*it)) stack.emplace_back(*it, false);
    }
  }
}

void for_each_subterm(Term t, const std::function<void(Term)>& visit) {
  for_each_subterm(std::span<const Term>(&t, 1), visit);
}

std::vector<const Symbol*> free_vars(Term t) {
  std::vector<const Symbol*> out;
  if (t.is_ground()) return out;
  std::unordered_set<const Symbol*> seen;
  std::function<void(Term, std::vector<const Symbol*>&)> go = [&](Term u, std::vector<const Symbol*>& bound) {
    if (u.is_ground()) return;
    if (u.is_var()) {
      const Symbol* v = &u.head();
      if (std::find(bound.begin(), bound.end(), v) == bound.end() && seen.insert(v).second) out.push_back(v);
      return;
    }
    if (u.is_op(Op::Forall) || u.is_op(Op::Exists)) {
      std::size_t mark = bound.size();
      for (std::size_t i = 0; i + 1 < u.arity(); ++i) bound.push_back(&u.child(i).head());
      go(u.children().back(), bound);
      bound.resize(mark);
      return;
    }
    for (const Term& c : u.children()) go(c, bound);
  };
  std::vector<const Symbol*> bound;
  go(t, bound);
  return out;
}

bool contains_quantifier(Term t) {
  bool found = false;
  for_each_subterm(t, [&](Term u) { found = found || u.is_op(Op::Forall) || u.is_op(Op::Exists); });
  return found;
}

TlsResult tls(Term t) {
  TlsResult r;
  while (true) {
    const Symbol& h = t.head();
    if (h.is_numeral() || (h.is_uninterpreted() && h.arity() == 0)) {
      r.kind = TlsResult::Kind::GroundAtom;
      r.atom = t;
      return r;
    }
    if (h.is_var()) {
      r.kind = TlsResult::Kind::Variable;
      r.symbol = &h;
      return r;
    }
    if (h.is_uninterpreted()) {
      r.kind = TlsResult::Kind::UninterpretedHead;
      r.symbol = &h;
      return r;
    }
    switch (h.op) {
      case Op::Add:
      case Op::Mul:
      case Op::Sub:
      case Op::Neg: t = t.child(0); continue;
      default: return r;  // Undefined
    }
  }
}

std::string quote_symbol(std::string_view name) {
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name.front()));
  for (char c : name) simple = simple && is_simple_symbol_char(c);
  if (simple) return std::string(name);
  return "|" + std::string(name) + "|";
}

std::string print_value(const Rational& v, Sort sort) {
  const bool neg = v < 0;
  const Rational a = neg ? Rational(-v) : v;
  std::string body;
  if (sort == Sort::Int) {
    body = boost::multiprecision::numerator(a).str();
  } else {
    body = "(/ " + boost::multiprecision::numerator(a).str() + " " + boost::multiprecision::denominator(a).str() + ")";
  }
  return neg ? "(- " + body + ")" : body;
}

namespace {
void print_into(std::string& out, Term t) {
  const Symbol& h = t.head();
  if (t.arity() == 0) {
    if (h.kind == SymbolKind::Interpreted) {
      out += op_name(h.op);
    } else if (h.is_numeral()) {
      out += h.smt_name;
    } else {
      out += quote_symbol(h.smt_name);
    }
    return;
  }
  out += '(';
  if (h.is_op(Op::Forall) || h.is_op(Op::Exists)) {
    out += op_name(h.op);
    out += " (";
    for (std::size_t i = 0; i + 1 < t.arity(); ++i) {
      if (i) out += ' ';
      out += '(';
      out += quote_symbol(t.child(i).head().smt_name);
      out += ' ';
      out += sort_name(t.child(i).sort());
      out += ')';
    }
    out += ") ";
    print_into(out, t.children().back());
    out += ')';
    return;
  }
  out += h.kind == SymbolKind::Interpreted ? std::string(op_name(h.op)) : quote_symbol(h.smt_name);
  for (const Term& c : t.children()) {
    out += ' ';
    print_into(out, c);
  }
  out += ')';
}
}  // namespace

std::string print_smtlib(Term t) {
  std::string out;
  print_into(out, t);
  return out;
}

std::ostream& operator<<(std::ostream& os, Term t) { return os << print_smtlib(t); }

}  // namespace rdinst
