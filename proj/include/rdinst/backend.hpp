#pragma once

#include "rdinst/model.hpp"
#include "rdinst/process.hpp"
#include "rdinst/sexpr.hpp"
#include "rdinst/term.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rdinst {

struct BackendConfig {
  std::vector<std::string> command{"z3", "-in"};
  std::chrono::milliseconds timeout{60'000};
  std::string logic = "ALL";
  /// When set, every command sent and every response read is echoed here.
  std::ostream* transcript = nullptr;
};

/// Splits a command line on whitespace, honouring single and double quotes.
std::vector<std::string> split_command(std::string_view cmd);

enum class CheckStatus { Sat, Unsat, Unknown };

struct CheckResult {
  CheckStatus status = CheckStatus::Unknown;
  std::string reason;  // backend's reason for unknown, when it gave one

  bool sat() const { return status == CheckStatus::Sat; }
  bool unsat() const { return status == CheckStatus::Unsat; }
};

/// One external solver process driven over SMT-LIB 2.6 text. Symbols are
/// declared on first use; declarations made inside a push scope are dropped
/// with it. A timed-out check kills the process and the session becomes dead.
class SolverSession {
 public:
  /// Spawns the backend and performs the option/logic handshake.
  explicit SolverSession(BackendConfig config);
  ~SolverSession();
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  /// Sends `(assert phi)` or `(assert (! phi :named name))`. Names must be
  /// unique for the lifetime of the session.
  void assert_formula(Term phi, const std::optional<std::string>& name = std::nullopt);
  CheckResult check();
  /// Model of the last satisfiable check, completed over `complete_with`.
  Model get_model(TermManager& tm, std::span<const Symbol* const> complete_with = {});
  std::set<std::string> get_unsat_core();
  /// Values of arithmetic or Bool terms in the last satisfiable check.
  std::vector<Value> get_values(TermManager& tm, std::span<const Term> terms);
  void push();
  void pop();

  std::size_t stack_depth() const { return declared_.size() - 1; }
  bool alive() const { return alive_; }
  std::size_t check_count() const { return checks_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  void send(const std::string& cmd);
  /// Next response, skipping `success`/`unsupported`. A backend `(error ...)`
  /// kills the session and throws unless `tolerate_error` is set.
  SExpr read_response(bool tolerate_error = false);
  void declare_symbols(Term t);
  void mark_dead();

  BackendConfig config_;
  std::unique_ptr<ChildProcess> proc_;
  std::string buffer_;
  std::vector<std::unordered_set<const Symbol*>> declared_;
  std::unordered_map<std::string, const Symbol*> declared_names_;
  std::unordered_set<std::string> names_;
  std::vector<std::string> warnings_;
  std::size_t checks_ = 0;
  bool alive_ = false;
  bool last_sat_ = false;
  bool last_unsat_ = false;
};

/// Parses a `(get-model)` response. Definitions of names that are not in
/// `declared` (backend auxiliaries) are inlined where they are used.
Model parse_model(TermManager& tm, const SExpr& response,
                  const std::unordered_map<std::string, const Symbol*>& declared);

}  // namespace rdinst
