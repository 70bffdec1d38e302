#include "rdinst/backend.hpp"

#include "rdinst/errors.hpp"
#include "rdinst/term_parser.hpp"

#include <functional>

namespace rdinst {

std::vector<std::string> split_command(std::string_view cmd) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (char c : cmd) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_token) out.push_back(std::move(cur));
      cur.clear();
      in_token = false;
    } else {
      cur += c;
      in_token = true;
    }
  }
  if (in_token) out.push_back(std::move(cur));
  return out;
}

SolverSession::SolverSession(BackendConfig config) : config_(std::move(config)) {
  declared_.emplace_back();
  proc_ = std::make_unique<ChildProcess>(config_.command);
  alive_ = true;
  try {
    send("(set-option :print-success false)");
    send("(set-option :produce-models true)");
    send("(set-option :produce-unsat-cores true)");
    send("(set-logic " + (config_.logic.empty() ? std::string("ALL") : config_.logic) + ")");
    send("(echo \"rdinst-ready\")");
    SExpr r = read_response();
    if (r.text != "rdinst-ready") throw BackendError("unexpected handshake response: " + r.to_string());
  } catch (const BackendError& e) {
    std::string err = proc_ ? proc_->drain_stderr() : std::string();
    mark_dead();
    throw BackendError(std::string("backend handshake failed: ") + e.what() + (err.empty() ? "" : "\n" + err));
  }
}

SolverSession::~SolverSession() {
  if (proc_ && alive_) {
    try {
      proc_->write("(exit)\n");
    } catch (const BackendError&) {
    }
  }
}

void SolverSession::mark_dead() {
  alive_ = false;
  if (proc_) proc_->kill();
}

void SolverSession::send(const std::string& cmd) {
  if (!alive_) throw BackendError("backend session is not alive");
  if (config_.transcript) *config_.transcript << cmd << '\n';
  try {
    proc_->write(cmd + "\n");
  } catch (const BackendError&) {
    mark_dead();
    throw;
  }
}

SExpr SolverSession::read_response(bool tolerate_error) {
  const auto deadline = ChildProcess::Clock::now() + config_.timeout;
  while (true) {
    SExprReader reader(buffer_);
    reader.set_streaming(true);
    std::optional<SExpr> e;
    try {
      e = reader.next();
    } catch (const IncompleteInput&) {
      e.reset();
    } catch (const ParseError& err) {
      mark_dead();
      throw BackendError(std::string("malformed backend output: ") + err.what() + "\n" + buffer_);
    }
    if (e) {
      buffer_.erase(0, reader.offset());
      if (config_.transcript) *config_.transcript << "; " << e->to_string() << '\n';
      if (e->is_symbol("success")) continue;
      if (e->is_symbol("unsupported")) {
        warnings_.push_back("backend reported 'unsupported'");
        continue;
      }
      if (e->is_app_of("error")) {
        if (tolerate_error) return *e;
        mark_dead();
        const std::string msg = e->items.size() > 1 ? e->items[1].text : e->to_string();
        throw BackendError("backend error: " + msg);
      }
      return *e;
    }
    switch (proc_->read_some(buffer_, deadline)) {
      case ChildProcess::ReadStatus::Data: break;
      case ChildProcess::ReadStatus::Timeout: throw BackendError("backend-timeout");
      case ChildProcess::ReadStatus::Eof: {
        // A final atom without a trailing newline is still complete.
        SExprReader tail(buffer_);
        std::optional<SExpr> last;
        try {
          last = tail.next();
        } catch (const ParseError&) {
        }
        const std::string err = proc_->drain_stderr();
        mark_dead();
        if (last && last->is_atom()) {
          buffer_.clear();
          return *last;
        }
        throw BackendError("backend exited unexpectedly" + (buffer_.empty() ? std::string() : ": " + buffer_) +
                           (err.empty() ? std::string() : "\n" + err));
      }
    }
  }
}

void SolverSession::declare_symbols(Term t) {
  for_each_subterm(t, [&](Term u) {
    const Symbol& h = u.head();
    if (!h.is_uninterpreted() && !h.is_var()) return;
    for (const auto& level : declared_) {
      if (level.count(&h)) return;
    }
    std::string decl = "(declare-fun " + quote_symbol(h.smt_name) + " (";
    for (std::size_t i = 0; i < h.arity(); ++i) {
      if (i) decl += ' ';
      decl += sort_name(h.arg_sorts[i]);
    }
    decl += ") " + std::string(sort_name(h.result_sort)) + ")";
    send(decl);
    declared_.back().insert(&h);
    declared_names_[h.smt_name] = &h;
  });
}

void SolverSession::assert_formula(Term phi, const std::optional<std::string>& name) {
  if (phi.sort() != Sort::Bool) throw SortError("asserted term is not Bool");
  if (name && !names_.insert(*name).second) throw BackendError("duplicate assertion name '" + *name + "'");
  declare_symbols(phi);
  last_sat_ = last_unsat_ = false;
  if (name) {
    send("(assert (! " + print_smtlib(phi) + " :named " + quote_symbol(*name) + "))");
  } else {
    send("(assert " + print_smtlib(phi) + ")");
  }
}

CheckResult SolverSession::check() {
  ++checks_;
  last_sat_ = last_unsat_ = false;
  send("(check-sat)");
  SExpr r;
  try {
    r = read_response();
  } catch (const BackendError& e) {
    if (std::string_view(e.what()) == "backend-timeout") {
      mark_dead();
      return {CheckStatus::Unknown, "backend-timeout"};
    }
    throw;
  }
  if (r.is_symbol("sat")) {
    last_sat_ = true;
    return {CheckStatus::Sat, {}};
  }
  if (r.is_symbol("unsat")) {
    last_unsat_ = true;
    return {CheckStatus::Unsat, {}};
  }
  if (r.is_symbol("unknown")) {
    CheckResult res{CheckStatus::Unknown, "unknown"};
    send("(get-info :reason-unknown)");
    SExpr info = read_response(/*tolerate_error=*/true);
    if (!info.is_app_of("error") && info.is_list() && info.items.size() >= 2) res.reason = info.items[1].text;
    return res;
  }
  mark_dead();
  throw BackendError("unexpected check-sat response: " + r.to_string());
}

std::set<std::string> SolverSession::get_unsat_core() {
  if (!last_unsat_) throw BackendError("get-unsat-core requires a preceding unsat check");
  send("(get-unsat-core)");
  SExpr r = read_response();
  if (!r.is_list()) throw BackendError("malformed unsat core: " + r.to_string());
  std::set<std::string> core;
  for (const SExpr& e : r.items) {
    if (!e.is_symbol()) throw BackendError("malformed unsat core: " + r.to_string());
    core.insert(e.text);
  }
  return core;
}

Model SolverSession::get_model(TermManager& tm, std::span<const Symbol* const> complete_with) {
  if (!last_sat_) throw BackendError("get-model requires a preceding sat check");
  send("(get-model)");
  SExpr r = read_response();
  Model m;
  try {
    m = parse_model(tm, r, declared_names_);
  } catch (const ParseError& e) {
    throw BackendError(std::string("malformed model: ") + e.what());
  }
  m.complete(tm, complete_with);
  return m;
}

std::vector<Value> SolverSession::get_values(TermManager& tm, std::span<const Term> terms) {
  if (!last_sat_) throw BackendError("get-value requires a preceding sat check");
  if (terms.empty()) return {};
  std::string cmd = "(get-value (";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) cmd += ' ';
    cmd += print_smtlib(terms[i]);
  }
  send(cmd + "))");
  SExpr r = read_response();
  if (!r.is_list() || r.items.size() != terms.size()) throw BackendError("malformed get-value response: " + r.to_string());
  std::vector<Value> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const SExpr& pair = r.items[i];
    if (!pair.is_list() || pair.items.size() != 2) throw BackendError("malformed get-value entry: " + pair.to_string());
    try {
      Term v = parse_value(tm, pair.items[1], terms[i].sort());
      out.push_back(v.is_numeral() ? Value::arith(v.value(), v.sort()) : Value::boolean(v.is_true()));
    } catch (const ParseError& e) {
      throw BackendError(std::string("unsupported value in get-value response: ") + e.what());
    }
  }
  return out;
}

void SolverSession::push() {
  send("(push 1)");
  declared_.emplace_back();
  last_sat_ = last_unsat_ = false;
}

void SolverSession::pop() {
  if (stack_depth() == 0) throw BackendError("pop on an empty assertion stack");
  send("(pop 1)");
  for (const Symbol* s : declared_.back()) declared_names_.erase(s->smt_name);
  declared_.pop_back();
  last_sat_ = last_unsat_ = false;
}

Model parse_model(TermManager& tm, const SExpr& response,
                  const std::unordered_map<std::string, const Symbol*>& declared) {
  if (!response.is_list()) throw ParseError("model is not a list", response.line, response.column);

  struct Definition {
    const SExpr* sexpr = nullptr;
    std::optional<Interpretation> parsed;
    bool in_progress = false;
  };
  std::unordered_map<std::string, Definition> defs;
  std::vector<std::string> order;
  for (const SExpr& item : response.items) {
    if (item.is_symbol("model")) continue;
    if (!item.is_app_of("define-fun")) continue;
    if (item.items.size() != 5 || !item.items[1].is_symbol() || !item.items[2].is_list()) {
      throw ParseError("malformed define-fun in model", item.line, item.column);
    }
    const std::string& name = item.items[1].text;
    if (defs.emplace(name, Definition{&item, std::nullopt, false}).second) order.push_back(name);
  }

  TermParser parser(tm);
  std::function<const Interpretation&(const std::string&)> resolve = [&](const std::string& name) -> const Interpretation& {
    Definition& d = defs.at(name);
    if (d.parsed) return *d.parsed;
    if (d.in_progress) throw ParseError("cyclic model definition of '" + name + "'");
    d.in_progress = true;
    const SExpr& e = *d.sexpr;
    Interpretation interp;
    std::unordered_map<std::string, Term> scope;
    for (const SExpr& p : e.items[2].items) {
      if (!p.is_list() || p.items.size() != 2 || !p.items[0].is_symbol()) throw ParseError("malformed model parameter");
      const Symbol* v = tm.make_var(p.items[0].text, parser.parse_sort(p.items[1]), 0, p.items[0].text);
      interp.params.push_back(v);
      scope[p.items[0].text] = tm.var(v);
    }
    const Sort result = parser.parse_sort(e.items[3]);
    parser.push_scope(std::move(scope));
    interp.body = parser.parse(e.items[4]);
    parser.pop_scope();
    if (result == Sort::Real && interp.body.sort() == Sort::Int && interp.body.is_numeral()) {
      interp.body = tm.numeral(interp.body.value(), Sort::Real);
    }
    if (interp.body.sort() != result) throw ParseError("model definition of '" + name + "' has the wrong sort");
    d.in_progress = false;
    d.parsed = std::move(interp);
    return *d.parsed;
  };

  parser.set_hook([&](const std::string& name, std::vector<Term>& args, const SExpr& at) -> std::optional<Term> {
    if (!defs.count(name)) return std::nullopt;
    const Interpretation& interp = resolve(name);
    if (interp.params.size() != args.size()) {
      throw ParseError("wrong number of arguments to model function '" + name + "'", at.line, at.column);
    }
    Binding b;
    for (std::size_t i = 0; i < args.size(); ++i) {
      Term a = args[i];
      if (a.sort() == Sort::Int && interp.params[i]->result_sort == Sort::Real && a.is_numeral()) {
        a = tm.numeral(a.value(), Sort::Real);
      }
      b[interp.params[i]] = a;
    }
    return substitute(tm, interp.body, b);
  });

  Model m;
  for (const std::string& name : order) {
    auto it = declared.find(name);
    if (it == declared.end() || !it->second->is_uninterpreted()) continue;
    m.set(it->second, resolve(name));
  }
  return m;
}

}  // namespace rdinst
