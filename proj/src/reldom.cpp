#include "rdinst/reldom.hpp"

#include <map>
#include <stdexcept>

namespace rdinst {

namespace {
bool division_headed(Term t) { return t.is_op(Op::Div) || t.is_op(Op::IntDiv) || t.is_op(Op::Mod); }
}  // namespace

std::string DomainKey::to_string() const {
  switch (kind) {
    case Kind::Var: return "T_{" + symbol->name + "," + std::to_string(symbol->unit) + "}";
    case Kind::Func: return "T_" + symbol->name;
    case Kind::FuncArg: return "T_{" + symbol->name + "," + std::to_string(arg) + "}";
    case Kind::Ground: return "T_" + print_smtlib(term);
  }
  return "?";
}

std::optional<DomainKey> term_key(Term t) {
  if (!is_arith(t.sort())) return std::nullopt;
  TlsResult r = tls(t);
  switch (r.kind) {
    case TlsResult::Kind::GroundAtom: return DomainKey::ground(r.atom);
    case TlsResult::Kind::Variable: return DomainKey::var(r.symbol);
    case TlsResult::Kind::UninterpretedHead: return DomainKey::func(r.symbol);
    case TlsResult::Kind::Undefined: return std::nullopt;
  }
  return std::nullopt;
}

std::size_t RelevantDomains::register_key(const DomainKey& k) {
  auto [it, inserted] = index_.emplace(k, keys_.size());
  if (inserted) {
    keys_.push_back(k);
    uf_.add();
  }
  return it->second;
}

std::size_t RelevantDomains::key_index(const DomainKey& k) const {
  auto it = index_.find(k);
  if (it == index_.end()) throw std::logic_error("unregistered domain key " + k.to_string());
  return it->second;
}

void RelevantDomains::merge(const DomainKey& a, const DomainKey& b) { uf_.merge(register_key(a), register_key(b)); }

const VarDomain& RelevantDomains::domain(const Symbol* var) const {
  auto it = by_var_.find(var);
  if (it == by_var_.end()) throw std::out_of_range("no relevant domain for '" + var->name + "'");
  return domains_[it->second];
}

std::vector<std::vector<DomainKey>> RelevantDomains::classes() {
  std::map<std::size_t, std::vector<DomainKey>> groups;
  for (std::size_t i = 0; i < keys_.size(); ++i) groups[uf_.find(i)].push_back(keys_[i]);
  std::vector<std::vector<DomainKey>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

RelevantDomains RelevantDomains::build(TermManager& tm, std::span<const Term> ground,
                                       std::span<const QuantifiedUnit> units, const StatsTable& stats) {
  RelevantDomains rd;
  for (const QuantifiedUnit& u : units) {
    for (const Symbol* x : u.vars) rd.register_key(DomainKey::var(x));
  }

  std::vector<Term> roots(ground.begin(), ground.end());
  for (const QuantifiedUnit& u : units) roots.push_back(u.body);

  auto merge_terms = [&](Term a, Term b) {
    auto ka = term_key(a), kb = term_key(b);
    if (ka && kb) rd.merge(*ka, *kb);
  };

  for_each_subterm(roots, [&](Term t) {
    if (t.is_ground() && is_arith(t.sort())) rd.register_key(DomainKey::ground(t));
    const Symbol& h = t.head();

    if (h.is_uninterpreted()) {
      if (h.arity() == 0) return;
      rd.register_key(DomainKey::func(&h));
      for (unsigned i = 0; i < h.arity(); ++i) {
        rd.register_key(DomainKey::func_arg(&h, i + 1));
        if (auto k = term_key(t.child(i))) rd.merge(DomainKey::func_arg(&h, i + 1), *k);
      }
    } else if (h.kind == SymbolKind::Interpreted) {
      switch (h.op) {
        case Op::Add:
        case Op::Mul:
        case Op::Sub:
          for (std::size_t i = 1; i < t.arity(); ++i) merge_terms(t.child(0), t.child(i));
          break;
        case Op::Eq:
        case Op::Le:
        case Op::Lt:
          if (is_arith(t.child(0).sort())) merge_terms(t.child(0), t.child(1));
          break;
        default: break;
      }
    }

    // A compound ground term joins the set its top-level symbol resolves to.
    if (t.is_ground() && t.arity() > 0 && is_arith(t.sort())) {
      if (auto k = term_key(t)) rd.merge(DomainKey::ground(t), *k);
    }
  });

  std::unordered_map<std::size_t, std::vector<Term>> members;
  for (std::size_t i = 0; i < rd.keys_.size(); ++i) {
    const DomainKey& k = rd.keys_[i];
    if (k.kind == DomainKey::Kind::Ground && !division_headed(k.term)) members[rd.uf_.find(i)].push_back(k.term);
  }

  for (const QuantifiedUnit& u : units) {
    for (const Symbol* x : u.vars) {
      VarDomain d;
      d.var = x;
      auto it = members.find(rd.uf_.find(rd.key_index(DomainKey::var(x))));
      if (it != members.end()) {
        for (const Term& t : it->second) {
          if (t.sort() == x->result_sort) d.terms.push_back(t);
        }
      }
      sort_by_preference(d.terms, stats);
      if (d.terms.empty()) {
        d.terms.push_back(tm.numeral(0, x->result_sort));
        d.default_injected = true;
      }
      rd.by_var_[x] = rd.domains_.size();
      rd.domains_.push_back(std::move(d));
    }
  }
  return rd;
}

std::string RelevantDomains::dump() const {
  std::string out;
  for (const VarDomain& d : domains_) {
    out += "RD(" + d.var->name + "," + std::to_string(d.var->unit) + ") = {";
    for (std::size_t i = 0; i < d.terms.size(); ++i) {
      if (i) out += ", ";
      out += print_smtlib(d.terms[i]);
    }
    out += "}\n";
  }
  return out;
}

}  // namespace rdinst
