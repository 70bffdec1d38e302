#include "rdinst/term_parser.hpp"

#include "rdinst/errors.hpp"

namespace rdinst {

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& msg) { throw ParseError(msg, at.line, at.column); }

Rational parse_decimal(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(Integer(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  Integer num(digits);
  Integer den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  return Rational(num, den);
}

}  // namespace

Sort TermParser::parse_sort(const SExpr& e) const {
  if (e.is_symbol("Int")) return Sort::Int;
  if (e.is_symbol("Real")) return Sort::Real;
  if (e.is_symbol("Bool")) return Sort::Bool;
  if (e.is_app_of("Array") || e.is_app_of("_")) {
    fail(e, "unsupported sort " + e.to_string() + " (arrays and bit-vectors are not supported)");
  }
  fail(e, "unsupported sort " + e.to_string() + " (uninterpreted sorts are not supported)");
}

std::optional<Term> TermParser::lookup_scoped(const std::string& name) const {
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
    if (auto f = it->find(name); f != it->end()) return f->second;
  }
  return std::nullopt;
}

Term TermParser::coerce(Term t, Sort target) const {
  if (t.sort() == Sort::Int && target == Sort::Real && t.is_numeral()) return tm_.numeral(t.value(), Sort::Real);
  return t;
}

void TermParser::unify_numerals(std::vector<Term>& args) const {
  bool any_real = false;
  for (const Term& a : args) any_real = any_real || a.sort() == Sort::Real;
  if (!any_real) return;
  for (Term& a : args) a = coerce(a, Sort::Real);
}

Term TermParser::parse(const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::Numeral: {
      Rational v{Integer(e.text)};
      return tm_.numeral(v, real_numerals_ ? Sort::Real : Sort::Int);
    }
    case SExpr::Kind::Decimal: return tm_.numeral(parse_decimal(e.text), Sort::Real);
    case SExpr::Kind::String: fail(e, "string literals are not supported");
    case SExpr::Kind::Keyword: fail(e, "unexpected keyword " + e.text);
    case SExpr::Kind::Symbol: {
      if (auto t = lookup_scoped(e.text)) return *t;
      std::vector<Term> none;
      return build(e.text, std::move(none), e);
    }
    case SExpr::Kind::List: return parse_app(e);
  }
  fail(e, "unreachable");
}

Term TermParser::parse_app(const SExpr& e) {
  if (e.items.empty()) fail(e, "empty application");
  const SExpr& head = e.items[0];
  if (!head.is_symbol()) fail(head, "unsupported application head " + head.to_string());
  const std::string& h = head.text;
  if (h == "let") return parse_let(e);
  if (h == "forall") return parse_quantifier(e, Op::Forall);
  if (h == "exists") return parse_quantifier(e, Op::Exists);
  if (h == "!") {
    if (e.items.size() < 2) fail(e, "malformed annotation");
    return parse(e.items[1]);
  }
  if (h == "_" || h == "as") fail(e, "indexed identifiers and qualified terms are not supported");

  std::vector<Term> args;
  args.reserve(e.items.size() - 1);
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(parse(e.items[i]));
  return build(h, std::move(args), e);
}

Term TermParser::parse_let(const SExpr& e) {
  if (e.items.size() != 3 || !e.items[1].is_list()) fail(e, "malformed let");
  std::unordered_map<std::string, Term> scope;
  for (const SExpr& b : e.items[1].items) {
    if (!b.is_list() || b.items.size() != 2 || !b.items[0].is_symbol()) fail(b, "malformed let binding");
    scope[b.items[0].text] = parse(b.items[1]);  // parallel: evaluated in the outer scope
  }
  push_scope(std::move(scope));
  Term body = parse(e.items[2]);
  pop_scope();
  return body;
}

Term TermParser::parse_quantifier(const SExpr& e, Op q) {
  if (e.items.size() != 3 || !e.items[1].is_list() || e.items[1].items.empty()) fail(e, "malformed quantifier");
  std::unordered_map<std::string, Term> scope;
  std::vector<Term> children;
  for (const SExpr& b : e.items[1].items) {
    if (!b.is_list() || b.items.size() != 2 || !b.items[0].is_symbol()) fail(b, "malformed sorted variable");
    Sort s = parse_sort(b.items[1]);
    if (s == Sort::Bool) fail(b, "Bool-sorted quantified variables are not supported");
    Term v = tm_.var(tm_.make_var(b.items[0].text, s));
    scope[b.items[0].text] = v;
    children.push_back(v);
  }
  push_scope(std::move(scope));
  Term body = parse(e.items[2]);
  pop_scope();
  if (body.sort() != Sort::Bool) fail(e, "quantifier body is not Bool");
  children.push_back(body);
  return tm_.app(q, std::move(children));
}

Term TermParser::build(const std::string& name, std::vector<Term> args, const SExpr& at) {
  if (hook_) {
    if (auto t = hook_(name, args, at)) return *t;
  }

  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) fail(at, "wrong number of arguments to '" + name + "'");
  };
  constexpr std::size_t kMany = static_cast<std::size_t>(-1);

  try {
    if (name == "true" || name == "false") {
      need(0, 0);
      return tm_.boolean(name == "true");
    }
    if (name == "not") {
      need(1, 1);
      return tm_.app(Op::Not, {args[0]});
    }
    if (name == "and" || name == "or") {
      if (args.empty()) return tm_.boolean(name == "and");
      if (args.size() == 1) return args[0];
      return tm_.app(name == "and" ? Op::And : Op::Or, std::move(args));
    }
    if (name == "=>") {
      need(2, kMany);
      Term acc = args.back();
      for (std::size_t i = args.size() - 1; i-- > 0;) acc = tm_.app(Op::Implies, {args[i], acc});
      return acc;
    }
    if (name == "xor") {
      need(2, kMany);
      Term acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = tm_.app(Op::Xor, {acc, args[i]});
      return acc;
    }
    if (name == "ite") {
      need(3, 3);
      std::vector<Term> branches{args[1], args[2]};
      unify_numerals(branches);
      return tm_.app(Op::Ite, {args[0], branches[0], branches[1]});
    }
    if (name == "=" || name == "distinct" || name == "<=" || name == "<" || name == ">=" || name == ">") {
      need(2, kMany);
      unify_numerals(args);
      std::vector<Term> parts;
      if (name == "distinct") {
        for (std::size_t i = 0; i < args.size(); ++i) {
          for (std::size_t j = i + 1; j < args.size(); ++j) parts.push_back(tm_.app(Op::Not, {tm_.mk_eq(args[i], args[j])}));
        }
      } else {
        for (std::size_t i = 0; i + 1 < args.size(); ++i) {
          Term a = args[i], b = args[i + 1];
          if (name == "=") parts.push_back(tm_.mk_eq(a, b));
          else if (name == "<=") parts.push_back(tm_.app(Op::Le, {a, b}));
          else if (name == "<") parts.push_back(tm_.app(Op::Lt, {a, b}));
          else if (name == ">=") parts.push_back(tm_.app(Op::Le, {b, a}));
          else parts.push_back(tm_.app(Op::Lt, {b, a}));
        }
      }
      return tm_.mk_and(std::move(parts));
    }
    if (name == "+" || name == "*") {
      need(1, kMany);
      if (args.size() == 1) return args[0];
      unify_numerals(args);
      return tm_.app(name == "+" ? Op::Add : Op::Mul, std::move(args));
    }
    if (name == "-") {
      need(1, kMany);
      if (args.size() == 1) {
        if (args[0].is_numeral()) return tm_.numeral(-args[0].value(), args[0].sort());
        return tm_.app(Op::Neg, {args[0]});
      }
      unify_numerals(args);
      Term acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = tm_.app(Op::Sub, {acc, args[i]});
      return acc;
    }
    if (name == "/") {
      need(2, kMany);
      Term acc = coerce(args[0], Sort::Real);
      for (std::size_t i = 1; i < args.size(); ++i) {
        Term d = coerce(args[i], Sort::Real);
        if (acc.is_numeral() && d.is_numeral() && d.value() != 0) {
          acc = tm_.numeral(acc.value() / d.value(), Sort::Real);
        } else {
          acc = tm_.app(Op::Div, {acc, d});
        }
      }
      return acc;
    }
    if (name == "div" || name == "mod") {
      need(2, 2);
      return tm_.app(name == "div" ? Op::IntDiv : Op::Mod, std::move(args));
    }
    if (name == "abs") {
      need(1, 1);
      return tm_.app(Op::Abs, std::move(args));
    }
    if (name == "to_real") {
      need(1, 1);
      if (args[0].is_numeral()) return coerce(args[0], Sort::Real);
      return tm_.app(Op::ToReal, std::move(args));
    }
    if (name == "to_int") {
      need(1, 1);
      return tm_.app(Op::ToInt, std::move(args));
    }
    if (const Symbol* f = tm_.lookup_fun(name)) {
      if (args.size() != f->arity()) fail(at, "wrong number of arguments to '" + name + "'");
      for (std::size_t i = 0; i < args.size(); ++i) args[i] = coerce(args[i], f->arg_sorts[i]);
      return tm_.app(f, std::move(args));
    }
  } catch (const SortError& err) {
    fail(at, err.what());
  }
  fail(at, "unknown symbol '" + name + "'");
}

Term parse_value(TermManager& tm, const SExpr& e, Sort sort) {
  TermParser p(tm);
  p.set_real_numerals(sort == Sort::Real);
  Term t = p.parse(e);
  if (sort == Sort::Real && t.sort() == Sort::Int && t.is_numeral()) t = tm.numeral(t.value(), Sort::Real);
  if (!t.is_value() || t.sort() != sort) {
    throw ParseError("expected a " + std::string(sort_name(sort)) + " value, got " + e.to_string(), e.line, e.column);
  }
  return t;
}

}  // namespace rdinst
